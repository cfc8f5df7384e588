"""`aww` command line: verification suites, expansions and skein/weyl queries.

Reports go to stdout (or --json FILE) as JSON lines sorted by check id; a
summary table goes to stderr.  Exit 0 when nothing FAILs, 1 on FAIL (or on
UNDECIDED with --strict), 2 on configuration errors.
"""

from __future__ import annotations

import argparse
import functools
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Sequence

from .report import VerificationReport

SUITES = ("all", "aw3", "reflection", "weyl", "skein", "tensor", "daha", "classical")
# finer-grained suites reachable by name
SUB_SUITES = ("yang-baxter", "rkrk", "sdet", "classical-limit")


class ConfigError(ValueError):
    pass


def _dims(text: str | None) -> tuple | None:
    if text is None:
        return None
    try:
        dims = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise ConfigError(f"bad --dims {text!r}") from None
    if not dims or min(dims) < 1:
        raise ConfigError(f"bad --dims {text!r}")
    return dims


# -- task builders ---------------------------------------------------------------
# Each task is a picklable zero-argument callable returning a report or a list.

def _aw3_tasks(args) -> List[Callable]:
    from . import ncalg

    budget = args.budget
    return [functools.partial(_omega_central, budget),
            functools.partial(ncalg.confluence_sample_check, "aw3"),
            functools.partial(ncalg.confluence_sample_check, "saw3"),
            functools.partial(ncalg.confluence_sample_check, "zh"),
            functools.partial(ncalg.confluence_sample_check, "szh"),
            ncalg.potential_relations_check]


def _omega_central(budget):
    from .ncalg import casimir_omega, check_central

    return check_central(casimir_omega(), "aw3", budget)


def _reflection_tasks(args, which=("yang-baxter", "rkrk", "sdet")) -> List[Callable]:
    from . import reflection as r

    out: List[Callable] = []
    if "yang-baxter" in which:
        out.append(r.yang_baxter_check)
    if "rkrk" in which:
        modes = [args.mode] if args.mode else ["symbolic", "tensor"]
        for m in modes:
            out.append(functools.partial(r.reflection_equation_check, m, args.dims or (2, 2, 2)))
        out.append(r.free_algebra_control)
    if "sdet" in which:
        out += [functools.partial(r.sdet_factorization_check, "printed"),
                functools.partial(r.sdet_factorization_check, "computed"),
                r.sdet_roots_check,
                functools.partial(r.sdet_coefficients_central, "zh")]
    return out


def _weyl_tasks(args) -> List[Callable]:
    from . import weyl

    out: List[Callable] = [weyl.group_report, weyl.orbit_consistency, weyl.classical_limit_check]
    out += [functools.partial(_weyl_invariant, f.name) for f in weyl.all_invariants()]
    return out


def _weyl_invariant(name):
    from . import weyl

    f = next(f for f in weyl.all_invariants() if f.name == name)
    return weyl.invariance_check(f)


def _skein_tasks(args) -> List[Callable]:
    from . import skein

    dims = args.dims or (2, 2, 2)
    out = [skein.displayed_products_check, skein.twist_examples_check, skein.twist_paths_check,
           skein.puncture_split_check, skein.crossing_soundness_check,
           functools.partial(skein.crossing_soundness_check, (2, 2, 2))]
    if len(dims) == 3:
        out.append(functools.partial(skein.braid_compatibility_check, dims=dims))
    return out


def _tensor_tasks(args) -> List[Callable]:
    from . import quantum

    dims_list = [args.dims] if args.dims else [(2, 2, 2), (2, 3, 4), (3, 3, 3)]
    out: List[Callable] = []
    for d in dims_list:
        if len(d) == 3:
            out.append(functools.partial(quantum.verify_saw_in_tensor, d))
            out.append(functools.partial(quantum.pbw_oracle_check, dims=d))
        elif len(d) == 4:
            out.append(functools.partial(quantum.n4_commutation_check, d))
        else:
            raise ConfigError("tensor suite takes 3 or 4 factors")
    if not args.dims:
        out += [functools.partial(quantum.n4_commutation_check, (2, 2, 2, 2)),
                functools.partial(quantum.n4_commutation_check, (2, 2, 2, 3)),
                quantum.n4_products_check]
        out += [functools.partial(quantum.multiplicity_relations_check, *m)
                for m in ((2, 2, 2, 2), (2, 2, 2, 4), (2, 3, 4, 3), (3, 3, 3, 3))]
    return out


def _daha_tasks(args) -> List[Callable]:
    from . import daha

    return [functools.partial(daha.verify_theta_relations, args.budget, args.budget, "printed"),
            functools.partial(daha.verify_theta_relations, args.budget, args.budget, "corrected"),
            daha.rule_audit, daha.confluence_sample]


def _classical_tasks(args, limit_only=False) -> List[Callable]:
    from . import racah

    if limit_only:
        return [functools.partial(racah.classical_limit_check, args.dims or (2, 2, 2), args.order)]
    dims_list = [args.dims] if args.dims else [(2, 2, 2), (2, 2, 3)]
    out: List[Callable] = []
    for d in dims_list:
        if len(d) != 3:
            raise ConfigError("classical suite takes 3 factors")
        out += [functools.partial(racah.verify_racah_relations, d),
                functools.partial(racah.centralizer_check, d)]
    out.append(functools.partial(racah.classical_limit_check, dims_list[0], args.order))
    out.append(functools.partial(racah.independence_check, args.degree,
                                 args.dims if args.dims else (4, 4, 4)))
    return out


def build_tasks(suite: str, args) -> List[Callable]:
    table = {
        "aw3": _aw3_tasks,
        "reflection": _reflection_tasks,
        "weyl": _weyl_tasks,
        "skein": _skein_tasks,
        "tensor": _tensor_tasks,
        "daha": _daha_tasks,
        "classical": _classical_tasks,
        "yang-baxter": lambda a: _reflection_tasks(a, ("yang-baxter",)),
        "rkrk": lambda a: _reflection_tasks(a, ("rkrk",)),
        "sdet": lambda a: _reflection_tasks(a, ("sdet",)),
        "classical-limit": lambda a: _classical_tasks(a, limit_only=True),
    }
    if suite == "all":
        if args.dims:
            raise ConfigError("--dims is suite-specific; not allowed with 'all'")
        return [t for name in SUITES[1:] for t in table[name](args)]
    if suite not in table:
        raise ConfigError(f"unknown suite {suite!r}")
    return table[suite](args)


def _call(task):
    out = task()
    return out if isinstance(out, list) else [out]


def run_tasks(tasks: Sequence[Callable], jobs: int) -> List[VerificationReport]:
    if jobs <= 1 or len(tasks) <= 1:
        results = [_call(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_call, tasks))
    reports = [r for rs in results for r in rs]
    return sorted(reports, key=lambda r: r.check_id)


def summary_table(reports: Sequence[VerificationReport], timing: bool = True) -> str:
    width = max([len(r.check_id) for r in reports] + [5])
    lines = [f"{'check'.ljust(width)}  status     " + ("ms" if timing else "")]
    for r in reports:
        ms = f"{r.ms:10.1f}" if timing and r.ms is not None else ""
        lines.append(f"{r.check_id.ljust(width)}  {r.status.ljust(9)}{ms}")
    counts = {s: sum(r.status == s for r in reports) for s in ("PASS", "FAIL", "UNDECIDED")}
    lines.append(" ".join(f"{k}={v}" for k, v in counts.items()))
    return "\n".join(lines)


def exit_code(reports: Sequence[VerificationReport], strict: bool) -> int:
    if any(r.status == "FAIL" for r in reports):
        return 1
    if strict and any(r.status == "UNDECIDED" for r in reports):
        return 1
    return 0


def cmd_verify(args) -> int:
    if args.budget is not None and args.budget <= 0:
        raise ConfigError("--budget must be positive")
    tasks = build_tasks(args.suite, args)
    reports = run_tasks(tasks, args.jobs)
    timing = not args.no_timing
    text = "\n".join(r.to_json(timing) for r in reports) + "\n"
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(summary_table(reports, timing), file=sys.stderr)
    if any(r.status == "UNDECIDED" for r in reports) and not args.strict:
        print("warning: some checks are UNDECIDED (use --strict to fail on them)", file=sys.stderr)
    return exit_code(reports, args.strict)


# -- queries -----------------------------------------------------------------------

def cmd_expand(args) -> int:
    from . import quantum

    if args.basis != "pbw4":
        raise ConfigError(f"unknown basis {args.basis!r}")
    dims = args.dims or (2, 2, 2, 2)
    if len(dims) != 4:
        raise ConfigError("pbw4 needs four factors")
    labels = [x.strip().lstrip("Q") for x in args.product.split("*")]

    def target(d, qh):
        out = quantum.identity(d, qh)
        for lab in labels:
            out = out * quantum.intermediate_casimir(lab, d, qh)
        return out

    try:
        e = quantum.expand_in_pbw_basis(target, quantum.N4_PRODUCT_BASIS, [dims])
    except (quantum.NotInSpan, quantum.AmbiguousExpansion, quantum.UnknownDecoration) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(e.to_text())
    return 0


def cmd_skein(args) -> int:
    from . import skein

    try:
        if args.action == "product":
            x = skein.SkeinElement.loop(args.x, args.n)
            y = skein.SkeinElement.loop(args.y, args.n)
            print((x * y).to_text())
        elif args.action == "twist":
            print(skein.half_dehn_twist(args.word, skein.SkeinElement.loop(args.loop, args.n),
                                        path=args.path).to_text())
        elif args.action == "crossing":
            print(skein.crossing_index(args.x, args.y, args.n))
    except (skein.NotInImage, skein.UnsupportedPair, skein.PathMismatch, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def cmd_weyl(args) -> int:
    from fractions import Fraction

    from . import weyl

    try:
        m = [Fraction(x) for x in args.m.split(",")]
    except ValueError:
        raise ConfigError(f"bad --m {args.m!r}") from None
    if len(m) != 4:
        raise ConfigError("--m takes four values")
    orb = weyl.orbit(m)
    print(len(orb))
    for p in orb:
        print(",".join(str(x) for x in p))
    return 0


def cmd_dump_rules(args) -> int:
    import json

    if args.algebra == "daha":
        from . import daha

        comp = daha.completion(args.max_length)
        names = daha.DAHA.noncentral
        for r in comp.rules.values():
            print(json.dumps({"lhs": "*".join(names[i] for i in r.lhs), "rhs": r.rhs.to_text(),
                              "origin": r.origin}, sort_keys=True))
        return 0
    from .ncalg import system

    for entry in system(args.algebra).dump():
        print(json.dumps(entry, sort_keys=True))
    return 0


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="aww", description="Askey-Wilson algebra verification toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", help="|".join(SUITES + SUB_SUITES))
    v.add_argument("--dims", type=_dims)
    v.add_argument("--degree", type=int, default=2)
    v.add_argument("--order", type=int, default=3)
    v.add_argument("--budget", type=int)
    v.add_argument("--mode", choices=("symbolic", "tensor"))
    v.add_argument("--strict", action="store_true")
    v.add_argument("--no-timing", action="store_true")
    v.add_argument("--json", metavar="FILE")
    v.add_argument("--jobs", type=int, default=min(4, os.cpu_count() or 1))
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("expand", help="expand a product of Casimirs in a PBW-type basis")
    e.add_argument("--product", required=True)
    e.add_argument("--dims", type=_dims)
    e.add_argument("--basis", default="pbw4")
    e.set_defaults(func=cmd_expand)

    s = sub.add_parser("skein", help="skein algebra queries")
    s.add_argument("action", choices=("product", "twist", "crossing"))
    s.add_argument("--x")
    s.add_argument("--y")
    s.add_argument("--word")
    s.add_argument("--loop")
    s.add_argument("-n", type=int, default=3)
    s.add_argument("--path", choices=("fast", "diagram", "both"), default="fast")
    s.set_defaults(func=cmd_skein)

    w = sub.add_parser("weyl", help="W(D4) queries")
    w.add_argument("action", choices=("orbit",))
    w.add_argument("--m", required=True)
    w.set_defaults(func=cmd_weyl)

    d = sub.add_parser("dump-rules", help="print rewrite rules as JSON lines")
    d.add_argument("algebra", nargs="?", default="aw3", choices=("aw3", "saw3", "zh", "szh", "daha"))
    d.add_argument("--max-length", type=int, default=8)
    d.set_defaults(func=cmd_dump_rules)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        if args.command == "verify" and args.suite not in SUITES + SUB_SUITES:
            raise ConfigError(f"unknown suite {args.suite!r}")
        if args.command == "skein":
            need = {"product": ("x", "y"), "twist": ("word", "loop"), "crossing": ("x", "y")}[args.action]
            missing = [f"--{k}" for k in need if getattr(args, k) is None]
            if missing:
                raise ConfigError(f"missing {' '.join(missing)}")
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
