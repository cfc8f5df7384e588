"""Sparse exact matrices with generic ring entries, plus rank/solve over Q.

Entries may be LaurentPoly or Fraction/int; anything with + and * works.
Rank, nullspace and solve delegate to sympy's DomainMatrix over QQ.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple

from sympy import QQ
from sympy.polys.matrices import DomainMatrix


class ShapeMismatch(ValueError):
    pass


def _is_zero(x) -> bool:
    return not x


class SparseMatrix:
    """Row-major dict-of-dicts matrix; zero entries are never stored."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows: Dict[int, Dict[int, object]] | None = None):
        self.nrows = nrows
        self.ncols = ncols
        self.rows: Dict[int, Dict[int, object]] = {}
        if rows:
            for i, r in rows.items():
                r = {j: v for j, v in r.items() if not _is_zero(v)}
                if r:
                    self.rows[i] = r

    @classmethod
    def identity(cls, n: int, one=1) -> "SparseMatrix":
        return cls(n, n, {i: {i: one} for i in range(n)})

    @classmethod
    def zeros(cls, nrows: int, ncols: int | None = None) -> "SparseMatrix":
        return cls(nrows, nrows if ncols is None else ncols)

    @classmethod
    def from_entries(cls, nrows, ncols, entries: Iterable[Tuple[int, int, object]]) -> "SparseMatrix":
        rows: Dict[int, Dict[int, object]] = {}
        for i, j, v in entries:
            r = rows.setdefault(i, {})
            r[j] = r[j] + v if j in r else v
        return cls(nrows, ncols, rows)

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[object]]) -> "SparseMatrix":
        n = len(data)
        m = len(data[0]) if n else 0
        return cls(n, m, {i: {j: v for j, v in enumerate(row)} for i, row in enumerate(data)})

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows.get(i, {}).get(j, 0)

    def entries(self):
        for i in sorted(self.rows):
            r = self.rows[i]
            for j in sorted(r):
                yield i, j, r[j]

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows.values())

    def is_zero(self) -> bool:
        return not self.rows

    def __bool__(self):
        return bool(self.rows)

    # -- arithmetic ---------------------------------------------------
    def _check(self, other):
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} vs {other.shape}")

    def __add__(self, other):
        if not isinstance(other, SparseMatrix):
            if _is_zero(other):
                return self
            return self + SparseMatrix.identity(self.nrows, other)
        self._check(other)
        rows = {i: dict(r) for i, r in self.rows.items()}
        for i, r in other.rows.items():
            tgt = rows.setdefault(i, {})
            for j, v in r.items():
                tgt[j] = tgt[j] + v if j in tgt else v
        return SparseMatrix(self.nrows, self.ncols, rows)

    __radd__ = __add__

    def __neg__(self):
        return SparseMatrix(self.nrows, self.ncols, {i: {j: -v for j, v in r.items()} for i, r in self.rows.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "SparseMatrix":
        if _is_zero(c):
            return SparseMatrix(self.nrows, self.ncols)
        return SparseMatrix(self.nrows, self.ncols, {i: {j: c * v for j, v in r.items()} for i, r in self.rows.items()})

    def __mul__(self, other):
        if not isinstance(other, SparseMatrix):
            return self.scale(other)
        return self.matmul(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __matmul__(self, other):
        return self.matmul(other)

    def matmul(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise ShapeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        orows = other.rows
        out: Dict[int, Dict[int, object]] = {}
        for i, r in self.rows.items():
            acc: Dict[int, object] = {}
            for k, a in r.items():
                ok = orows.get(k)
                if not ok:
                    continue
                for j, b in ok.items():
                    p = a * b
                    acc[j] = acc[j] + p if j in acc else p
            if acc:
                out[i] = acc
        return SparseMatrix(self.nrows, other.ncols, out)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("use an explicit inverse")
        out = SparseMatrix.identity(self.nrows)
        for _ in range(n):
            out = out @ self
        return out

    def kron(self, other: "SparseMatrix") -> "SparseMatrix":
        rows: Dict[int, Dict[int, object]] = {}
        for i, r in self.rows.items():
            for k, r2 in other.rows.items():
                row = rows.setdefault(i * other.nrows + k, {})
                for j, a in r.items():
                    for l, b in r2.items():
                        row[j * other.ncols + l] = a * b
        return SparseMatrix(self.nrows * other.nrows, self.ncols * other.ncols, rows)

    def transpose(self) -> "SparseMatrix":
        out: Dict[int, Dict[int, object]] = {}
        for i, r in self.rows.items():
            for j, v in r.items():
                out.setdefault(j, {})[i] = v
        return SparseMatrix(self.ncols, self.nrows, out)

    def map(self, fn) -> "SparseMatrix":
        return SparseMatrix(self.nrows, self.ncols, {i: {j: fn(v) for j, v in r.items()} for i, r in self.rows.items()})

    def __eq__(self, other):
        if isinstance(other, SparseMatrix):
            if self.shape != other.shape:
                return False
            return (self - other).is_zero()
        if _is_zero(other):
            return self.is_zero()
        return NotImplemented

    __hash__ = None

    def commutator(self, other):
        return self @ other - other @ self

    def q_commutator(self, other, q):
        """[X, Y]_q = q X Y - q^{-1} Y X."""
        return (self @ other).scale(q) - (other @ self).scale(q ** -1)

    def is_scalar(self):
        """Return the scalar c if self == c * identity, else None."""
        if self.nrows != self.ncols:
            return None
        c = self.rows.get(0, {}).get(0, 0)
        for i in range(self.nrows):
            r = self.rows.get(i, {})
            if len(r) > 1 or r.get(i, 0) != c:
                return None
        return c

    def first_difference(self, other):
        """(i, j, mine, theirs) for the first differing entry, or None."""
        diff = self - other
        for i, j, v in diff.entries():
            return (i, j, self[i, j], other[i, j])
        return None

    def columns(self, cols: Sequence[int]) -> "SparseMatrix":
        pos = {c: n for n, c in enumerate(cols)}
        rows = {i: {pos[j]: v for j, v in r.items() if j in pos} for i, r in self.rows.items()}
        return SparseMatrix(self.nrows, len(cols), rows)

    def flatten(self) -> List[object]:
        out = [0] * (self.nrows * self.ncols)
        for i, r in self.rows.items():
            for j, v in r.items():
                out[i * self.ncols + j] = v
        return out

    def to_dense(self) -> List[List[object]]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for i, r in self.rows.items():
            for j, v in r.items():
                out[i][j] = v
        return out

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"


def direct_sum_blocks(mats: Sequence[SparseMatrix]) -> SparseMatrix:
    rows: Dict[int, Dict[int, object]] = {}
    ro = co = 0
    for m in mats:
        for i, r in m.rows.items():
            rows[ro + i] = {co + j: v for j, v in r.items()}
        ro += m.nrows
        co += m.ncols
    return SparseMatrix(ro, co, rows)


# -- linear algebra over Q ---------------------------------------------------

def _qq(x):
    x = Fraction(x)
    return QQ(x.numerator, x.denominator)


def to_domain(rows: Sequence[Sequence[object]]) -> DomainMatrix:
    return DomainMatrix([[_qq(x) for x in row] for row in rows], (len(rows), len(rows[0]) if rows else 0), QQ)


def _frac(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def _distinct_rows(rows):
    """Drop zero and repeated rows; neither changes rank or solution sets."""
    seen = {}
    for r in rows:
        r = tuple(r)
        if any(r) and r not in seen:
            seen[r] = None
    return list(seen)


def rank(rows: Sequence[Sequence[object]]) -> int:
    """Rank over Q of a list of rows."""
    if not rows:
        return 0
    cols = _distinct_rows(zip(*rows))
    if not cols:
        return 0
    return to_domain(cols).rank()


def nullspace(rows: Sequence[Sequence[object]]) -> List[List[Fraction]]:
    """Basis of {x : M x = 0} for M given by rows; vectors as Fraction lists."""
    if not rows:
        return []
    ns = to_domain(rows).nullspace().to_Matrix()
    out = []
    for i in range(ns.rows):
        out.append([Fraction(int(v.p), int(v.q)) for v in ns.row(i)])
    return out


def solve_columns(columns: Sequence[Sequence[object]], target: Sequence[object]):
    """Solve sum_k x_k * columns[k] = target over Q.

    Returns (solution, unique) or None when inconsistent.
    """
    n = len(columns)
    aug = [list(r) for r in _distinct_rows(zip(*columns, target))]
    if not aug:
        return [Fraction(0)] * n, n == 0
    dm = to_domain(aug)
    rref, pivots = dm.rref()
    if n in pivots:
        return None
    dense = rref.to_Matrix()
    sol = [Fraction(0)] * n
    for r, p in enumerate(pivots):
        v = dense[r, n]
        sol[p] = Fraction(int(v.p), int(v.q))
    return sol, len(pivots) == n


def rational_rank_of_vectors(vectors: Sequence[Sequence[object]]) -> int:
    return rank(vectors)


class ColumnSolver:
    """Solve sum_k x_k * columns[k] = target for many targets against fixed columns.

    A maximal set of independent rows is chosen once; each solution is then
    checked exactly against every row, so an inconsistent target returns None.
    """

    def __init__(self, columns: Sequence[Sequence[object]]):
        self.columns = [list(c) for c in columns]
        n = len(self.columns)
        if n == 0:
            raise ValueError("no columns")
        _rref, pivots = to_domain(self.columns).rref()
        self.rows = list(pivots)
        self.rank = len(self.rows)
        self.unique = self.rank == n
        if self.unique:
            square = to_domain([[c[r] for c in self.columns] for r in self.rows])
            inv = square.inv().to_Matrix()
            self._inverse = [[Fraction(int(inv[i, j].p), int(inv[i, j].q)) for j in range(n)] for i in range(n)]

    def solve(self, target: Sequence[object]):
        if not self.unique:
            raise ValueError("columns are dependent; use solve_columns")
        n = len(self.columns)
        rhs = [Fraction(target[r]) for r in self.rows]
        x = [sum((v * b for v, b in zip(row, rhs) if v and b), Fraction(0)) for row in self._inverse]
        for r in range(len(target)):
            s = sum(x[k] * self.columns[k][r] for k in range(n) if x[k] and self.columns[k][r])
            if s != target[r]:
                return None
        return x
