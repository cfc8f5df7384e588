"""U(sl2)^{(x)3} on finite representations: polarized traces and the classical Racah algebra.

Representations are exact over Q.  M(m) has basis v_0..v_{m-1} with
H v_k = ((m-1)/2 - k) v_k, F v_k = v_{k+1}, E v_k = k(m-k) v_{k-1}, which is the
q -> 1 limit of the quantum irreps in ``quantum.irrep``.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

from .linalg import SparseMatrix, _distinct_rows, nullspace, rank
from .quantum import casimir_family
from .report import VerificationReport, timed
from .ring import QH, DivisionObstruction, TruncatedSeries, series_expand_q1

GENERATORS = ("k1", "k2", "k3", "k4", "X", "Y", "Z")
MAX_TRUNCATION = 6


class RankDeficient(ArithmeticError):
    def __init__(self, msg, kernel=None):
        super().__init__(msg)
        self.kernel = kernel


@dataclass(frozen=True)
class ClassicalRep:
    m: int
    e: Tuple[Tuple[SparseMatrix, SparseMatrix], Tuple[SparseMatrix, SparseMatrix]]

    @property
    def E(self):
        return self.e[0][1]

    @property
    def F(self):
        return self.e[1][0]

    @property
    def H(self):
        return self.e[0][0]


@lru_cache(maxsize=None)
def classical_rep(m: int) -> ClassicalRep:
    if m < 1:
        raise ValueError("dimension must be positive")
    H = SparseMatrix.from_entries(m, m, ((k, k, Fraction(m - 1, 2) - k) for k in range(m)))
    E = SparseMatrix.from_entries(m, m, ((k - 1, k, Fraction(k * (m - k))) for k in range(1, m)))
    F = SparseMatrix.from_entries(m, m, ((k + 1, k, Fraction(1)) for k in range(m - 1)))
    return ClassicalRep(m, ((H, E), (F, -H)))


def _embedded(a: int, i: int, j: int, dims: Tuple[int, ...]) -> SparseMatrix:
    """e_{ij} acting on tensor factor a (1-based); i, j are 0-based matrix-unit indices."""
    return _embedded_cached(a, i, j, tuple(dims))


@lru_cache(maxsize=None)
def _embedded_cached(a, i, j, dims):
    out = None
    for s, m in enumerate(dims, start=1):
        f = classical_rep(m).e[i][j] if s == a else SparseMatrix.identity(m, Fraction(1))
        out = f if out is None else out.kron(f)
    return out


def _size(dims) -> int:
    n = 1
    for m in dims:
        n *= m
    return n


def polarized_trace(slots: Sequence[int], dims: Sequence[int]) -> SparseMatrix:
    """T^{(a_1..a_d)} = sum e^{(a_1)}_{i2 i1} e^{(a_2)}_{i3 i2} ... e^{(a_d)}_{i1 id}."""
    dims = tuple(dims)
    slots = tuple(slots)
    if not slots:
        raise ValueError("at least one slot")
    if any(not 1 <= a <= len(dims) for a in slots):
        raise ValueError(f"slots {slots} out of range for {len(dims)} factors")
    d = len(slots)
    total = SparseMatrix(_size(dims), _size(dims))
    for idx in itertools.product((0, 1), repeat=d):
        term = None
        for p, a in enumerate(slots):
            f = _embedded(a, idx[(p + 1) % d], idx[p], dims)
            term = f if term is None else term @ f
        total = total + term
    return total


def racah_generators(dims: Sequence[int]) -> Dict[str, SparseMatrix]:
    """k1..k4, X, Y, Z = [X, Y] and Gamma on M(m1) (x) M(m2) (x) M(m3)."""
    dims = tuple(dims)
    if len(dims) != 3:
        raise ValueError("three factors expected")
    T = lambda *s: polarized_trace(s, dims)
    k1, k2, k3 = T(1, 1), T(2, 2), T(3, 3)
    t12, t23, t13 = T(1, 2), T(2, 3), T(1, 3)
    k4 = k1 + k2 + k3 + (t12 + t23 + t13).scale(2)
    X = k1 + k2 + t12.scale(2)
    Y = k2 + k3 + t23.scale(2)
    Z = X @ Y - Y @ X
    s = k1 + k2 + k3 + k4
    Gamma = (Z @ Z - (X @ Y @ X + Y @ X @ Y).scale(8) + (s - 4) @ (X @ Y + Y @ X).scale(4)
             - ((k1 - k2) @ (k4 - k3) @ Y).scale(8) - ((k3 - k2) @ (k4 - k1) @ X).scale(8))
    return {"k1": k1, "k2": k2, "k3": k3, "k4": k4, "X": X, "Y": Y, "Z": Z, "Gamma": Gamma}


def racah_identities(dims: Sequence[int]) -> List[Tuple[str, SparseMatrix]]:
    """(name, lhs - rhs) for every identity of the classical Racah presentation."""
    g = racah_generators(dims)
    k1, k2, k3, k4, X, Y, Z = (g[n] for n in GENERATORS)
    s = k1 + k2 + k3 + k4
    br = lambda a, b: a @ b - b @ a
    anti = X @ Y + Y @ X
    out = [("Z=-8T123", Z + polarized_trace((1, 2, 3), dims).scale(8))]
    for name in ("k1", "k2", "k3", "k4"):
        for other in ("X", "Y"):
            out.append((f"[{name},{other}]", br(g[name], g[other])))
    out.append(("[X,Z]", br(X, Z) - (anti.scale(4) + (X @ X).scale(4) - (s @ X).scale(4)
                                     + ((k1 - k2) @ (k4 - k3)).scale(4))))
    out.append(("[Z,Y]", br(Z, Y) - (anti.scale(4) + (Y @ Y).scale(4) - (s @ Y).scale(4)
                                     + ((k3 - k2) @ (k4 - k1)).scale(4))))
    out.append(("Gamma", g["Gamma"] - (((k1 - k2 + k3 - k4) @ (k1 @ k3 - k2 @ k4)).scale(8)
                                       - (k1 @ k3 + k2 @ k4).scale(32))))
    return out


def verify_racah_relations(dims: Sequence[int]) -> VerificationReport:
    dims = tuple(dims)
    with timed() as t:
        failing = [(n, r) for n, r in racah_identities(dims) if not r.is_zero()]
    cid = f"classical.racah[{','.join(map(str, dims))}]"
    params = {"dims": list(dims)}
    if failing:
        name, r = failing[0]
        i, j, v = next(r.entries())
        return VerificationReport(cid, "classical Racah relations and Gamma", "FAIL",
                                  witness=f"{name}: entry ({i},{j}) = {v}", ms=t.ms, params=params)
    return VerificationReport(cid, "classical Racah relations and Gamma", "PASS", ms=t.ms, params=params)


def diagonal_generators(dims: Sequence[int]) -> Dict[str, SparseMatrix]:
    """E, F, H of the diagonal copy of sl2."""
    dims = tuple(dims)
    size = _size(dims)
    out = {}
    for name, (i, j) in (("H", (0, 0)), ("E", (0, 1)), ("F", (1, 0))):
        acc = SparseMatrix(size, size)
        for a in range(1, len(dims) + 1):
            acc = acc + _embedded(a, i, j, dims)
        out[name] = acc
    return out


def centralizer_check(dims: Sequence[int]) -> VerificationReport:
    dims = tuple(dims)
    with timed() as t:
        g = racah_generators(dims)
        diag = diagonal_generators(dims)
        bad = [f"[{a},{b}]" for a in GENERATORS for b, d in diag.items()
               if not (g[a] @ d - d @ g[a]).is_zero()]
    return VerificationReport(f"classical.centralizer[{','.join(map(str, dims))}]",
                              "Racah generators commute with the diagonal sl2",
                              "FAIL" if bad else "PASS", witness=", ".join(bad) or None, ms=t.ms,
                              params={"dims": list(dims)})


# -- classical limit of the quantum Casimirs ---------------------------------------

SeriesMatrix = Dict[Tuple[int, int], TruncatedSeries]


def _series_matrix(M: SparseMatrix, order: int) -> SeriesMatrix:
    return {(i, j): series_expand_q1(v, order) for i, j, v in M.entries()}


def _smul(a: SeriesMatrix, b: SeriesMatrix) -> SeriesMatrix:
    rows: Dict[int, List[Tuple[int, TruncatedSeries]]] = {}
    for (k, j), v in b.items():
        rows.setdefault(k, []).append((j, v))
    out: SeriesMatrix = {}
    for (i, k), x in a.items():
        for j, y in rows.get(k, ()):
            out[(i, j)] = out[(i, j)] + x * y if (i, j) in out else x * y
    return out


def _sadd(a: SeriesMatrix, b: SeriesMatrix, cb=1) -> SeriesMatrix:
    out = dict(a)
    for key, v in b.items():
        out[key] = out[key] + v * cb if key in out else v * cb
    return out


def modified_casimirs(dims: Sequence[int], order: int = 3) -> Dict[str, SeriesMatrix]:
    """K_I = (Q_I - q - q^-1)/(q - q^-1)^2 as eps-series (q = e^eps); K13 = [K12, K23]_q."""
    if order < 2:
        raise ValueError("order must be at least 2")
    fam = casimir_family(tuple(dims), QH)
    q = TruncatedSeries.exp(1, order)
    qi = TruncatedSeries.exp(-1, order)
    shift = q + qi
    den = (q - qi) * (q - qi)
    out: Dict[str, SeriesMatrix] = {}
    for name in ("1", "2", "3", "123", "12", "23"):
        num = _series_matrix(fam[name].mat, order)
        for i in range(fam[name].mat.nrows):
            num[(i, i)] = num[(i, i)] - shift if (i, i) in num else -shift
        out[name] = {key: v / den for key, v in num.items()}
    k12, k23 = out["12"], out["23"]
    out["13"] = _sadd({k: v * q for k, v in _smul(k12, k23).items()},
                      {k: v * qi for k, v in _smul(k23, k12).items()}, -1)
    return out


def leading_coefficients(K: SeriesMatrix, power: int = 0) -> SparseMatrix:
    n = 1 + max((max(i, j) for i, j in K), default=0)
    return SparseMatrix.from_entries(n, n, ((i, j, s[power]) for (i, j), s in K.items()))


CLASSICAL_TARGETS = (("1", "k1", Fraction(1, 2)), ("2", "k2", Fraction(1, 2)), ("3", "k3", Fraction(1, 2)),
                     ("123", "k4", Fraction(1, 2)), ("12", "X", Fraction(1, 2)), ("23", "Y", Fraction(1, 2)),
                     ("13", "Z", Fraction(1, 4)))


def classical_limit_check(dims: Sequence[int] = (2, 2, 2), order: int = 3) -> VerificationReport:
    dims = tuple(dims)
    cid = f"classical.limit[{','.join(map(str, dims))}]"
    params = {"dims": list(dims), "order": order}
    with timed() as t:
        try:
            K = modified_casimirs(dims, order)
        except DivisionObstruction as exc:
            return VerificationReport(cid, "eps^0 coefficients of K_I", "FAIL", witness=str(exc),
                                      ms=t.ms, params=params)
        g = racah_generators(dims)
        size = _size(dims)
        bad = []
        for qname, cname, c in CLASSICAL_TARGETS:
            lead = SparseMatrix.from_entries(size, size, ((i, j, s[0]) for (i, j), s in K[qname].items()))
            if not (lead - g[cname].scale(c)).is_zero():
                bad.append(f"K{qname} != {c}*{cname}")
    return VerificationReport(cid, "eps^0 coefficients of K_I", "FAIL" if bad else "PASS",
                              witness="; ".join(bad) or None, ms=t.ms, params=params)


# -- bounded-degree independence ---------------------------------------------------

def setT_monomials(max_degree: int) -> List[Tuple[int, ...]]:
    """Exponent vectors (k1, k2, k3, k4, X, Y, Z) with Z-exponent <= 1, ordered by degree."""
    out = []
    for e in itertools.product(range(max_degree + 1), repeat=6):
        for s in (0, 1):
            if sum(e) + s <= max_degree:
                out.append(e + (s,))
    out.sort(key=lambda e: (sum(e), e))
    return out


def monomial_name(e: Sequence[int]) -> str:
    parts = [g if p == 1 else f"{g}^{p}" for g, p in zip(GENERATORS, e) if p]
    return "*".join(parts) or "1"


def _block_vectors(dims, monomials) -> List[List[Fraction]]:
    g = racah_generators(dims)
    size = _size(dims)
    pw: Dict[Tuple[str, int], SparseMatrix] = {}

    def power(name, p):
        if (name, p) not in pw:
            pw[(name, p)] = SparseMatrix.identity(size, Fraction(1)) if p == 0 else power(name, p - 1) @ g[name]
        return pw[(name, p)]

    vecs = []
    for e in monomials:
        M = SparseMatrix.identity(size, Fraction(1))
        for name, p in zip(GENERATORS, e):
            if p:
                M = M @ power(name, p)
        vecs.append(M.flatten())
    return vecs


def truncation_blocks(dims: Sequence[int]):
    """Irrep triples inside (M(1)+..+M(d1)) (x) (M(1)+..+M(d2)) (x) (M(1)+..+M(d3))."""
    return list(itertools.product(*(range(1, d + 1) for d in dims)))


def setT_rank(max_degree: int, dims: Sequence[int]):
    """(rank, monomial count, kernel or None) of the setT monomials on the truncation ``dims``."""
    monomials = setT_monomials(max_degree)
    blocks = truncation_blocks(dims)
    with ThreadPoolExecutor() as pool:
        parts = list(pool.map(lambda b: _block_vectors(b, monomials), blocks))
    vectors = [sum((p[k] for p in parts), []) for k in range(len(monomials))]
    r = rank(vectors)
    kernel = None
    if r < len(monomials):
        coords = _distinct_rows(zip(*vectors))
        ns = nullspace([list(c) for c in coords])
        kernel = ns[0] if ns else None
    return r, len(monomials), kernel, monomials


def independence_check(max_degree: int = 2, dims: Sequence[int] = (4, 4, 4)) -> VerificationReport:
    """Rank-check setT monomials, enlarging a uniform truncation up to d = 6 while deficient."""
    dims = tuple(dims)
    history = []
    with timed() as t:
        cur = dims
        while True:
            r, n, kernel, monomials = setT_rank(max_degree, cur)
            history.append({"dims": list(cur), "rank": r})
            if r == n or max(cur) >= MAX_TRUNCATION or len(set(cur)) != 1:
                break
            cur = (cur[0] + 1,) * 3
    params = {"dims": list(dims), "degree": max_degree, "monomials": n, "history": history}
    cid = f"classical.independence[deg<={max_degree}]"
    if r < n:
        rel = " + ".join(f"({c})*{monomial_name(m)}" for c, m in zip(kernel or [], monomials) if c)
        return VerificationReport(cid, "linear independence of setT monomials", "FAIL",
                                  witness=f"rank {r} < {n} at dims {list(cur)}; kernel: {rel}",
                                  ms=t.ms, params=params)
    return VerificationReport(cid, "linear independence of setT monomials", "PASS", ms=t.ms, params=params)
