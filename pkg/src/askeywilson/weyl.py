"""W(D4) acting on (m1, m2, m3, m4) and the two families of invariant functions."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .report import VerificationReport, timed
from .ring import ONE, Q, QH, QINV, ZH, LaurentPoly, TruncatedSeries, series_expand_q1

Matrix = Tuple[Tuple[Fraction, ...], ...]

# node 3 is the centre of the Dynkin diagram
ADJACENT = {(1, 3), (2, 3), (3, 4)}


class ClosureBudgetExceeded(RuntimeError):
    pass


def _mat(rows) -> Matrix:
    return tuple(tuple(Fraction(x) for x in r) for r in rows)


def _mul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n))


IDENTITY = _mat([[1 if i == j else 0 for j in range(4)] for i in range(4)])


@dataclass(frozen=True)
class WeylElement:
    matrix: Matrix
    word: Tuple[int, ...] = ()

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        return WeylElement(_mul(self.matrix, other.matrix), self.word + other.word)

    def __eq__(self, other):
        return isinstance(other, WeylElement) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def act(self, m: Sequence) -> Tuple[Fraction, ...]:
        return tuple(sum(self.matrix[i][j] * Fraction(m[j]) for j in range(4)) for i in range(4))

    def is_identity(self) -> bool:
        return self.matrix == IDENTITY


def generators() -> Dict[int, WeylElement]:
    h = Fraction(1, 2)
    s1 = _mat([[-1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    s2 = _mat([[1, 0, 0, 0], [0, -1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    s4 = _mat([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, 1]])
    # m_i -> m_i + a3 (i <= 3), m4 -> m4 - a3 with a3 = (m4 - m1 - m2 - m3)/2
    s3 = _mat([[h, -h, -h, h], [-h, h, -h, h], [-h, -h, h, h], [h, h, h, h]])
    return {1: WeylElement(s1, (1,)), 2: WeylElement(s2, (2,)),
            3: WeylElement(s3, (3,)), 4: WeylElement(s4, (4,))}


def act(g: WeylElement, m: Sequence) -> Tuple[Fraction, ...]:
    return g.act(m)


def enumerate_group(cap: int = 10_000) -> List[WeylElement]:
    gens = list(generators().values())
    seen = {IDENTITY: WeylElement(IDENTITY)}
    frontier = [WeylElement(IDENTITY)]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = g * s
                if h.matrix not in seen:
                    seen[h.matrix] = h
                    nxt.append(h)
                    if len(seen) > cap:
                        raise ClosureBudgetExceeded(f"more than {cap} elements")
        frontier = nxt
    return list(seen.values())


def coxeter_relations_hold() -> Dict[str, bool]:
    gens = generators()
    out = {}
    for i in range(1, 5):
        out[f"s{i}^2"] = (gens[i] * gens[i]).is_identity()
        for j in range(i + 1, 5):
            gi, gj = gens[i], gens[j]
            if (i, j) in ADJACENT:
                out[f"s{i}s{j}s{i}=s{j}s{i}s{j}"] = gi * gj * gi == gj * gi * gj
            else:
                out[f"s{i}s{j}=s{j}s{i}"] = gi * gj == gj * gi
    return out


def group_report() -> VerificationReport:
    with timed() as t:
        G = enumerate_group()
        rels = coxeter_relations_hold()
    bad = [k for k, v in rels.items() if not v]
    status = "PASS" if len(G) == 192 and not bad else "FAIL"
    witness = None if status == "PASS" else f"order {len(G)}, failing relations {bad}"
    return VerificationReport("weyl.group", "W(D4) closure and Coxeter relations", status,
                              witness=witness, ms=t.ms, params={"order": len(G), "relations": sorted(rels)})


# -- invariant functions --------------------------------------------------------

W = ZH  # w_i = q^{m_i/2}


def chi_w(i: int) -> LaurentPoly:
    """chi_{m_i} = q^{m_i} + q^{-m_i} = w_i^2 + w_i^-2."""
    return W[i] ** 2 + W[i] ** -2


@dataclass(frozen=True)
class InvariantFunction:
    """numerator(w, qh) / denominator(qh); invariance is a statement about the numerator."""
    name: str
    numerator: LaurentPoly
    denominator: LaurentPoly = ONE

    def evaluate(self, m: Sequence, r: Fraction) -> Fraction:
        """Exact value at q = r^4 (so q^{m/2} = r^{2m} for half-integer m)."""
        vals = {"qh": Fraction(r) ** 2}
        for i, mi in enumerate(m):
            e = Fraction(mi) * 2
            if e.denominator != 1:
                raise ValueError("parameters must be half-integers")
            vals[f"z{i + 1}h"] = Fraction(r) ** int(e)
        return Fraction(self.numerator.evaluate(vals)) / Fraction(self.denominator.evaluate(vals))


def p_functions() -> List[InvariantFunction]:
    c1, c2, c3, c4 = (chi_w(i) for i in range(4))
    return [
        InvariantFunction("p4", c1 * c2 + c3 * c4),
        InvariantFunction("p4'", c2 * c3 + c1 * c4),
        InvariantFunction("p4''", c1 * c3 + c2 * c4),
        InvariantFunction("p6", c1 * c1 + c2 * c2 + c3 * c3 + c4 * c4 + c1 * c2 * c3 * c4),
    ]


def xi_functions() -> List[InvariantFunction]:
    """xi's in S_i = (w_i - w_i^-1)^2 = (q - q^-1)^2 M_i^2 with denominators cleared."""
    d = Q - QINV
    d2 = d * d
    S1, S2, S3, S4 = ((W[i] - W[i] ** -1) ** 2 for i in range(4))
    A = S1 * S3 - S2 * S4
    return [
        InvariantFunction("xi2", 2 * d2 * (S1 + S2 + S3 + S4) - 2 * d2 * d2 + d2 * (S1 * S3 + S2 * S4),
                          (Q + QINV) * d2 * d2),
        InvariantFunction("xi4", (S1 - S4) * (S3 - S2), d2 * d2),
        InvariantFunction("xi4'", (S1 - S2) * (S3 - S4), d2 * d2),
        InvariantFunction("xi6", A * (S1 - S2 + S3 - S4) + A * A / 4, d2 * d2 * d2),
    ]


def all_invariants() -> List[InvariantFunction]:
    return p_functions() + xi_functions()


def transform(f: LaurentPoly, g: WeylElement) -> LaurentPoly:
    """f o g on w-monomials: exponent vector e of (w1..w4) goes to g^T e."""
    M = g.matrix

    def fn(exps):
        e = exps[4:8]
        new = []
        for j in range(4):
            v = sum(M[i][j] * e[i] for i in range(4))
            if v.denominator != 1:
                raise ValueError("non-integral w exponent after transformation")
            new.append(int(v))
        return exps[:4] + tuple(new)

    return f.map_exponents(fn)


def invariance_check(f: InvariantFunction) -> VerificationReport:
    with timed() as t:
        bad = None
        for i, g in generators().items():
            h = transform(f.numerator, g)
            if h != f.numerator:
                bad = f"s{i}: difference {(h - f.numerator).to_text()[:300]}"
                break
    return VerificationReport(f"weyl.invariant.{f.name}", "W(D4) invariance", "FAIL" if bad else "PASS",
                              witness=bad, ms=t.ms)


def orbit(m: Sequence) -> List[Tuple[Fraction, ...]]:
    return sorted({g.act(m) for g in enumerate_group()})


def xi_values(m: Sequence, r: Fraction) -> List[Fraction]:
    """Closed-form (xi2, xi4, xi4', xi6) at q = r^4; agrees with xi_functions()."""
    r = Fraction(r)
    q = r ** 4
    d = q - 1 / q
    M2 = []
    for mi in m:
        e = Fraction(mi) * 2
        w = r ** int(e)
        M2.append(((w - 1 / w) / d) ** 2)
    M1, M2_, M3, M4 = M2
    A = M1 * M3 - M2_ * M4
    return [
        (2 * (M1 + M2_ + M3 + M4 - 1) + d * d * (M1 * M3 + M2_ * M4)) / (q + 1 / q),
        (M1 - M4) * (M3 - M2_),
        (M1 - M2_) * (M3 - M4),
        A * (M1 - M2_ + M3 - M4) + d * d * A * A / 4,
    ]


def orbit_consistency(samples: int = 20, seed: int = 7, r: Fraction = Fraction(3, 2)) -> VerificationReport:
    """xi data at m and at sigma(m) coincide for random integer m and every sigma."""
    rng = random.Random(seed)
    G = enumerate_group()
    with timed() as t:
        bad = None
        for _ in range(samples):
            m = [rng.randint(-6, 6) for _ in range(4)]
            base = xi_values(m, r)
            for g in G:
                if xi_values(g.act(m), r) != base:
                    bad = f"m={m}, sigma word={g.word}"
                    break
            if bad:
                break
    return VerificationReport("weyl.orbit-consistency", "xi data constant on W(D4) orbits",
                              "FAIL" if bad else "PASS", witness=bad, ms=t.ms,
                              params={"samples": samples, "seed": seed, "q": str(Fraction(r) ** 4)})


def classical_xi(m: Sequence[int]) -> Dict[str, Fraction]:
    """Polynomial invariants expected as the q -> 1 limits of the xi's."""
    m1, m2, m3, m4 = (Fraction(x) for x in m)
    return {
        "xi2": (m1 ** 2 + m2 ** 2 + m3 ** 2 + m4 ** 2) / 4 - 1,
        "xi4": -(m3 ** 2 - m2 ** 2) * (m4 ** 2 - m1 ** 2) / 16,
        "xi4'": -(m1 ** 2 - m2 ** 2) * (m4 ** 2 - m3 ** 2) / 16,
        "xi6": (m1 ** 2 * m3 ** 2 - m2 ** 2 * m4 ** 2) * (m1 ** 2 - m2 ** 2 + m3 ** 2 - m4 ** 2) / 64,
    }


def xi_series(f: InvariantFunction, m: Sequence[int], order: int = 3) -> TruncatedSeries:
    subs = {f"z{i + 1}h": QH ** int(mi) for i, mi in enumerate(m)}
    num = series_expand_q1(f.numerator.subs(subs), order + 12)
    den = series_expand_q1(f.denominator, order + 12)
    return num.divide(den)


def classical_limit_check(samples: int = 10, seed: int = 3) -> VerificationReport:
    rng = random.Random(seed)
    with timed() as t:
        bad = None
        for _ in range(samples):
            m = [rng.randint(-7, 7) for _ in range(4)]
            want = classical_xi(m)
            for f in xi_functions():
                got = xi_series(f, m)[0]
                if got != want[f.name]:
                    bad = f"{f.name} at m={m}: {got} vs {want[f.name]}"
                    break
            if bad:
                break
    return VerificationReport("weyl.classical-limit", "q -> 1 limits of the xi functions",
                              "FAIL" if bad else "PASS", witness=bad, ms=t.ms, params={"samples": samples})
