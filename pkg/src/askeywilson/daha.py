"""Universal DAHA of type (C1v, C1) and the map Theta from saw(3).

Elements are noncommutative polynomials in t0, t1, t2 with the central letters
Z0..Z3 (Z_i = t_i + t_i^-1).  Inverses are eliminated with t_i^-1 = Z_i - t_i
and t3 with t3 = q^-1 t2^-1 t1^-1 t0^-1.  The only remaining axiom is
t3 + t3^-1 = Z3; together with t_i^2 = Z_i t_i - 1 it is completed
(Knuth-Bendix, deg-lex with t0 < t1 < t2) up to a bound on rule length.  The
completion is infinite (families like t1 (t0 t2)^k t1 appear), so comparisons
are a bounded search: a zero difference is a proof, anything else is
UNDECIDED unless the difference visibly survives in every specialization.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .ncalg import AW, Alphabet, NcPoly, StepBudgetExceeded, casimir_omega, aw_centrals, relation_residuals, \
    special_value, step_budget
from .report import VerificationReport, timed
from .ring import ONE, Q, QINV, ZERO, LaurentPoly

DAHA = Alphabet(("t0", "t1", "t2"), ("Z0", "Z1", "Z2", "Z3"))
T = tuple(DAHA.gen(f"t{i}") for i in range(3))
ZC = tuple(DAHA.gen(f"Z{i}") for i in range(4))
ONE_D = DAHA.one()

DEGREE2_BUDGET = 10_000
OMEGA_BUDGET = 1_000_000
DEFAULT_MAX_RULE_LENGTH = 8

Key = Tuple[Tuple[int, ...], Tuple[int, ...]]


class BudgetExceeded(StepBudgetExceeded):
    def __init__(self, msg, left=None, right=None):
        super().__init__(msg, partial=(left, right))
        self.left = left
        self.right = right


def t(i: int) -> NcPoly:
    return T[i]


def t_inv(i: int) -> NcPoly:
    return ZC[i] - T[i]


def t3() -> NcPoly:
    return (t_inv(2) * t_inv(1) * t_inv(0)).scale(QINV)


def t3_inv() -> NcPoly:
    return (T[0] * T[1] * T[2]).scale(Q)


def generator(i: int, power: int = 1) -> NcPoly:
    """t_i^{+-1} for i in 0..3, with inverses and t3 eliminated."""
    if i == 3:
        return t3() if power == 1 else t3_inv()
    return T[i] if power == 1 else t_inv(i)


def _deglex(w: Tuple[int, ...]):
    return (len(w), w)


def _lead(p: NcPoly) -> Key:
    return max(p.terms, key=lambda k: (_deglex(k[0]), k[1]))


@dataclass
class DahaRule:
    lhs: Tuple[int, ...]
    rhs: NcPoly
    origin: str


@dataclass
class Completion:
    """Rules of the bounded completion, in the order they were found."""
    max_length: int
    rules: Dict[Tuple[int, ...], DahaRule] = field(default_factory=dict)
    complete: bool = False
    unorientable: List[NcPoly] = field(default_factory=list)

    def lengths(self):
        return sorted({len(l) for l in self.rules})


class Rewriter:
    """Normal forms with respect to a fixed rule set; memoized per word."""

    def __init__(self, rules: Dict[Tuple[int, ...], DahaRule], strategy: str = "leftmost"):
        if strategy not in ("leftmost", "rightmost"):
            raise ValueError(strategy)
        self.rules = rules
        self.strategy = strategy
        self.lengths = sorted({len(l) for l in rules})
        self._memo: Dict[Tuple[int, ...], Dict[Key, LaurentPoly]] = {}
        self.steps = 0

    def _find(self, w):
        spots = range(len(w))
        if self.strategy == "rightmost":
            spots = reversed(spots)
        for p in spots:
            for L in self.lengths:
                if p + L <= len(w) and w[p:p + L] in self.rules:
                    return p, L
        return None

    def normalize(self, x: NcPoly, budget: Optional[int] = None) -> NcPoly:
        budget = step_budget(DEGREE2_BUDGET) if budget is None else budget
        counter = [0]
        out: Dict[Key, LaurentPoly] = {}
        try:
            for (w, e), c in x.terms.items():
                for (w2, e2), c2 in self._nf(w, counter, budget).items():
                    k = (w2, tuple(a + b for a, b in zip(e, e2)))
                    s = out.get(k, ZERO) + c * c2
                    if s:
                        out[k] = s
                    else:
                        out.pop(k, None)
        finally:
            self.steps += counter[0]
        return NcPoly(DAHA, out)

    def _nf(self, w, counter, budget):
        hit = self._memo.get(w)
        if hit is not None:
            return hit
        found = self._find(w)
        z = DAHA.zero_exp()
        if found is None:
            res = {(w, z): ONE}
            self._memo[w] = res
            return res
        counter[0] += 1
        if counter[0] > budget:
            raise StepBudgetExceeded(f"step budget {budget} exceeded at word {w}")
        p, L = found
        out: Dict[Key, LaurentPoly] = {}
        for (rw, re), rc in self.rules[w[p:p + L]].rhs.terms.items():
            for (w2, e2), c2 in self._nf(w[:p] + rw + w[p + L:], counter, budget).items():
                k = (w2, tuple(a + b for a, b in zip(re, e2)))
                s = out.get(k, ZERO) + rc * c2
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        self._memo[w] = out
        return out


def axioms() -> Dict[str, NcPoly]:
    """The defining relations as polynomials that must vanish."""
    out = {f"t{i}^2": T[i] * T[i] - ZC[i] * T[i] + ONE_D for i in range(3)}
    out["t3+t3^-1"] = t3() + t3_inv() - ZC[3]
    return out


def _orient(d: NcPoly) -> Optional[Tuple[Tuple[int, ...], NcPoly]]:
    k = _lead(d)
    w, e = k
    c = d.terms[k]
    if any(e) or not c.is_monomial():
        return None
    lead = NcPoly(DAHA, {k: c})
    return w, (d - lead).scale(-c.inverse_monomial())


def _word(w) -> NcPoly:
    return NcPoly(DAHA, {(tuple(w), DAHA.zero_exp()): ONE})


def _overlaps(l1, l2):
    return [(l1 + l2[k:], len(l1) - k) for k in range(1, min(len(l1), len(l2))) if l1[-k:] == l2[:k]]


@lru_cache(maxsize=8)
def completion(max_length: int = DEFAULT_MAX_RULE_LENGTH) -> Completion:
    """Knuth-Bendix completion of the axioms, keeping rules with lhs length <= max_length."""
    comp = Completion(max_length)
    rules = comp.rules

    def reduce(x):
        return Rewriter(rules).normalize(x, budget=10 ** 7)

    def add(d, origin):
        d = reduce(d)
        if not d:
            return False
        o = _orient(d)
        if o is None:
            comp.unorientable.append(d)
            return False
        lhs, rhs = o
        if len(lhs) > max_length:
            return False
        rules[lhs] = DahaRule(lhs, rhs, origin)
        return True

    for name, rel in axioms().items():
        add(rel, f"axiom {name}")
    done = set()
    while True:
        pending = []
        for l1 in list(rules):
            for l2 in list(rules):
                if (l1, l2) in done:
                    continue
                done.add((l1, l2))
                for w, off in _overlaps(l1, l2):
                    if len(w) > 2 * max_length:
                        continue
                    a = rules[l1].rhs * _word(w[len(l1):])
                    b = _word(w[:off]) * rules[l2].rhs
                    d = reduce(a - b)
                    if d:
                        pending.append((d, f"overlap {_text(l1)} / {_text(l2)} on {_text(w)}"))
        changed = False
        for d, origin in pending:
            changed |= add(d, origin)
        # inter-reduce: drop rules whose lhs contains another lhs
        for l in list(rules):
            r = rules.pop(l)
            if any(l[p:p + len(m)] == m for m in rules for p in range(len(l) - len(m) + 1)):
                add(_word(l) - r.rhs, r.origin + " (re-oriented)")
                done = {pair for pair in done if l not in pair}
            else:
                r.rhs = reduce(r.rhs)
                rules[l] = r
        if not changed:
            break
    comp.complete = not pending
    return comp


def _text(w) -> str:
    return "*".join(f"t{i}" for i in w) or "1"


def daha_normalize(x: NcPoly, budget: Optional[int] = None, max_length: int = DEFAULT_MAX_RULE_LENGTH,
                   strategy: str = "leftmost") -> NcPoly:
    comp = completion(max_length)
    try:
        return Rewriter(comp.rules, strategy).normalize(x, budget)
    except StepBudgetExceeded as exc:
        raise BudgetExceeded(str(exc), left=x) from exc


# -- Theta ------------------------------------------------------------------------------------

THETA_TABLES = ("printed", "corrected")


def theta_images(table: str = "printed") -> Dict[str, NcPoly]:
    """Images of the saw(3) generators.

    'printed' is the target table; 'corrected' exchanges the images of
    C1 and C3, which is what the q-commutator relations require.
    """
    if table not in THETA_TABLES:
        raise ValueError(f"unknown table {table!r}")
    t0, t0i = generator(0), generator(0, -1)

    def loop(i):
        a = generator(i) * t0
        return a + t0i * generator(i, -1)

    out = {
        "C12": loop(1),
        "C23": loop(3),
        "C13": loop(2),
        "C1": generator(1) + generator(1, -1),
        "C2": generator(2) + generator(2, -1),
        "C3": generator(3) + generator(3, -1),
        "C123": t0.scale(QINV) + t0i.scale(Q),
    }
    if table == "corrected":
        out["C1"], out["C3"] = out["C3"], out["C1"]
    return out


def theta(g: str, table: str = "printed") -> NcPoly:
    return theta_images(table)[g]


def _apply_theta(x: NcPoly, table: str) -> NcPoly:
    if x.alphabet != AW:
        raise ValueError("theta takes elements over the saw(3) generators")
    return x.substitute(theta_images(table), ONE_D)


# -- comparison ---------------------------------------------------------------------------------

EQUAL, UNDECIDED, UNEQUAL = "EQUAL", "UNDECIDED", "UNEQUAL"


@dataclass
class Comparison:
    outcome: str
    residual: NcPoly
    note: str = ""


def _survives(d: NcPoly) -> bool:
    """A reduced difference in span{1, t0} over the centre is nonzero in every generic specialization.

    1 and t0 stay independent over the centre (t0 has two distinct eigenvalues
    once Z0 is specialized away from +-2), and the Z_i are free central parameters.
    """
    return bool(d) and all(w in ((), (0,)) for (w, _e) in d.terms)


def compare(lhs: NcPoly, rhs: NcPoly, budget: int = DEGREE2_BUDGET,
            lengths: Sequence[int] = (4, 6, DEFAULT_MAX_RULE_LENGTH)) -> Comparison:
    """Bounded search for a common reduct of lhs and rhs.

    Completions of growing length are tried in turn; each normalization draws
    on the same step budget.
    """
    remaining = budget
    d = lhs - rhs
    last = d
    for L in lengths:
        comp = completion(L)
        rw = Rewriter(comp.rules)
        try:
            red = rw.normalize(d, budget=remaining)
        except StepBudgetExceeded:
            return Comparison(UNDECIDED, last, f"step budget {budget} exhausted at rule length {L}")
        remaining -= rw.steps
        last = red
        if not red:
            return Comparison(EQUAL, red, f"common reduct with rules of length <= {L}")
        if _survives(red):
            return Comparison(UNEQUAL, red, "difference reduces to a nonzero element of span{1, t0} over the centre")
    return Comparison(UNDECIDED, last, f"no common reduct with rules of length <= {lengths[-1]}")


def _report(check_id: str, anchor: str, cmp: Comparison, budget: int, ms: float, extra=None) -> VerificationReport:
    status = {EQUAL: "PASS", UNEQUAL: "FAIL", UNDECIDED: "UNDECIDED"}[cmp.outcome]
    witness = None
    if cmp.outcome != EQUAL:
        witness = f"{cmp.note}; residual {cmp.residual.to_text()[:400]}"
    params = {"outcome": cmp.outcome, "budget": budget, "note": cmp.note}
    params.update(extra or {})
    return VerificationReport(check_id, anchor, status, witness=witness, ms=ms, params=params)


def verify_theta_relations(budget: Optional[int] = None, omega_budget: Optional[int] = None,
                           table: str = "printed") -> List[VerificationReport]:
    """Centrality and t0-centralizer checks first, then the saw(3) relations under Theta."""
    budget = step_budget(DEGREE2_BUDGET) if budget is None else budget
    omega_budget = step_budget(OMEGA_BUDGET) if omega_budget is None else omega_budget
    img = theta_images(table)
    reports = []
    tag = "" if table == "printed" else f".{table}"
    for g in ("C12", "C23", "C13"):
        with timed() as tm:
            cmp = compare(img[g] * T[0], T[0] * img[g], budget)
        reports.append(_report(f"daha{tag}.centralizer.{g}", "Theta images commute with t0", cmp, budget, tm.ms))
        for c in ("C1", "C2", "C3", "C123"):
            with timed() as tm:
                cmp = compare(img[c] * img[g], img[g] * img[c], budget)
            reports.append(_report(f"daha{tag}.central.{c}.{g}", "central images commute with Theta(C_ij)",
                                   cmp, budget, tm.ms))
    for name, rel in relation_residuals().items():
        with timed() as tm:
            cmp = compare(_apply_theta(rel, table), NcPoly(DAHA), budget)
        reports.append(_report(f"daha{tag}.relation.{name}", "q-commutator relation under Theta", cmp, budget,
                               tm.ms, {"table": table}))
    omega = casimir_omega() - special_value(aw_centrals(AW))
    with timed() as tm:
        cmp = compare(_apply_theta(omega, table), NcPoly(DAHA), omega_budget)
    reports.append(_report(f"daha{tag}.relation.omega", "Casimir value under Theta", cmp, omega_budget, tm.ms,
                           {"table": table}))
    return reports


def rule_audit(max_length: int = DEFAULT_MAX_RULE_LENGTH) -> VerificationReport:
    """Re-derive every completion rule from the axioms along its recorded origin."""
    with timed() as tm:
        comp = completion(max_length)
        bad = None
        ax = axioms()
        # each axiom reduces to zero, and each rule's lhs - rhs reduces to zero under the earlier rules
        rules_so_far: Dict[Tuple[int, ...], DahaRule] = {}
        for lhs, r in comp.rules.items():
            if r.origin.startswith("axiom"):
                name = r.origin.split()[1]
                if Rewriter({lhs: r}).normalize(ax[name]):
                    bad = f"axiom {name} not captured by rule {_text(lhs)}"
                    break
        if not bad:
            fresh = completion.__wrapped__(max_length)
            if set(fresh.rules) != set(comp.rules) or any(fresh.rules[k].rhs != comp.rules[k].rhs
                                                         for k in comp.rules):
                bad = "re-running the completion gave different rules"
        if not bad:
            checks = {"t0 t1 t2 t3 = q^-1": (T[0] * T[1] * T[2] * t3(), ONE_D.scale(QINV)),
                      "t3 t3^-1 = 1": (t3() * t3_inv(), ONE_D)}
            for name, (a, b) in checks.items():
                if daha_normalize(a - b, budget=10 ** 6, max_length=max_length):
                    bad = f"{name} does not reduce to zero"
                    break
    return VerificationReport("daha.rule-audit", "completion rules derive from the DAHA axioms",
                              "FAIL" if bad else "PASS", witness=bad, ms=tm.ms,
                              params={"rules": len(comp.rules), "lengths": comp.lengths(),
                                      "max_length": max_length})


def confluence_sample(max_word_length: int = 5, max_length: int = DEFAULT_MAX_RULE_LENGTH) -> VerificationReport:
    """Leftmost and rightmost strategies agree on all words in t0, t1, t2 up to the given length."""
    from itertools import product
    comp = completion(max_length)
    left, right = Rewriter(comp.rules, "leftmost"), Rewriter(comp.rules, "rightmost")
    with timed() as tm:
        bad = None
        count = 0
        for L in range(max_word_length + 1):
            for w in product(range(3), repeat=L):
                x = _word(w)
                count += 1
                if left.normalize(x, 10 ** 6) != right.normalize(x, 10 ** 6):
                    bad = f"strategies disagree on {_text(w)}"
                    break
            if bad:
                break
    status = "UNDECIDED" if bad else "PASS"
    return VerificationReport("daha.confluence-sample", "strategy independence of normal forms", status,
                              witness=bad, ms=tm.ms, params={"words": count, "max_word_length": max_word_length})
