"""Structured outcome of one named verification check."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

SCHEMA = 1
STATUSES = ("PASS", "FAIL", "UNDECIDED")
# checks allowed to end undecided: bounded searches only
UNDECIDED_OK_PREFIXES = ("daha.",)


@dataclass
class VerificationReport:
    check_id: str
    anchor: str
    status: str
    witness: Optional[str] = None
    ms: Optional[float] = None
    params: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status}")
        if self.status == "FAIL" and not self.witness:
            raise ValueError("a FAIL report needs a witness")
        if self.status == "UNDECIDED" and not self.check_id.startswith(UNDECIDED_OK_PREFIXES):
            raise ValueError(f"{self.check_id} may not be UNDECIDED")

    @property
    def ok(self) -> bool:
        return self.status != "FAIL"

    @property
    def passed(self) -> bool:
        return self.status == "PASS"

    def to_dict(self, timing: bool = True) -> Dict[str, Any]:
        d = {
            "schema": SCHEMA,
            "check": self.check_id,
            "anchor": self.anchor,
            "status": self.status,
            "witness": self.witness,
            "params": self.params,
        }
        if timing:
            d["ms"] = None if self.ms is None else round(self.ms, 1)
        return d

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), sort_keys=True, default=str)


class _Timer:
    ms = 0.0


@contextmanager
def timed():
    t = _Timer()
    start = time.perf_counter()
    try:
        yield t
    finally:
        t.ms = (time.perf_counter() - start) * 1000.0
