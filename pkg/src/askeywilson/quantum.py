"""Finite-dimensional U_q(sl2) representations, coproducts, R-matrices, braid action.

All constructions are generic in the value of q^{1/2}: pass the symbol ``QH``
for exact Laurent-polynomial matrices or a Fraction for an exact numeric
specialization (used for fast linear solving).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .linalg import SparseMatrix, nullspace, solve_columns, rank
from .ring import QH, LaurentPoly, poly, qfact_at, qnum_at


class SlotOutOfRange(IndexError):
    pass


class UnknownDecoration(ValueError):
    pass


class NotInSpan(ValueError):
    def __init__(self, msg, residual=None):
        super().__init__(msg)
        self.residual = residual


class AmbiguousExpansion(ValueError):
    pass


class EmptyMultiplicity(ValueError):
    pass


def _one(qh):
    return qh ** 0


# -- braid words ---------------------------------------------------------------

class BraidWord:
    """Freely reduced word in s_i^{+-1}; letters are (i, +1) or (i, -1)."""

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[Tuple[int, int]] = ()):
        out: List[Tuple[int, int]] = []
        for i, e in letters:
            if e not in (1, -1) or i < 1:
                raise ValueError(f"bad braid letter {(i, e)}")
            if out and out[-1] == (i, -e):
                out.pop()
            else:
                out.append((i, e))
        self.letters = tuple(out)

    @classmethod
    def parse(cls, text: str) -> "BraidWord":
        """Parse e.g. "s2^-1 s1" or "s1s2s1"; "1" or "" is the empty word."""
        text = text.replace("*", " ").replace("s", " s").strip()
        letters = []
        for tok in text.split():
            if tok in ("1", "id"):
                continue
            if not tok.startswith("s"):
                raise ValueError(f"cannot parse braid letter {tok!r}")
            body = tok[1:]
            if "^" in body:
                i, e = body.split("^")
                letters.append((int(i), int(e)))
            else:
                letters.append((int(body), 1))
        return cls(letters)

    def inverse(self) -> "BraidWord":
        return BraidWord((i, -e) for i, e in reversed(self.letters))

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        return BraidWord(self.letters + other.letters)

    def __pow__(self, n: int) -> "BraidWord":
        out = BraidWord()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, BraidWord) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        if not self.letters:
            return "1"
        return " ".join(f"s{i}" if e == 1 else f"s{i}^-1" for i, e in self.letters)

    __repr__ = __str__


def swap_dims(dims: Tuple[int, ...], i: int) -> Tuple[int, ...]:
    d = list(dims)
    d[i - 1], d[i] = d[i], d[i - 1]
    return tuple(d)


# -- irreducible representations ------------------------------------------------

@dataclass(frozen=True)
class Irrep:
    m: int
    E: SparseMatrix
    F: SparseMatrix
    Kp: SparseMatrix
    Km: SparseMatrix


@lru_cache(maxsize=None)
def irrep(m: int, qh=QH) -> Irrep:
    """M(m): basis v_0..v_{m-1}, q^H v_k = q^{(m-1)/2-k} v_k, F v_k = v_{k+1}."""
    if m < 1:
        raise ValueError("dimension must be positive")
    q = qh * qh
    E = SparseMatrix.from_entries(m, m, ((k - 1, k, qnum_at(k, q) * qnum_at(m - k, q)) for k in range(1, m)))
    F = SparseMatrix.from_entries(m, m, ((k + 1, k, _one(qh)) for k in range(m - 1)))
    Kp = SparseMatrix.from_entries(m, m, ((k, k, qh ** (m - 1 - 2 * k)) for k in range(m)))
    Km = SparseMatrix.from_entries(m, m, ((k, k, qh ** (2 * k + 1 - m)) for k in range(m)))
    return Irrep(m, E, F, Kp, Km)


def irrep_casimir(m: int, qh=QH) -> SparseMatrix:
    r = irrep(m, qh)
    q = qh * qh
    return (r.F @ r.E).scale((q - q ** -1) ** 2) + (r.Kp @ r.Kp).scale(q) + (r.Km @ r.Km).scale(q ** -1)


# -- symbolic elements of U_q(sl2)^{(x)n} ----------------------------------------

LETTERS = ("E", "F", "K", "k")  # K = q^H, k = q^-H


class UqTensor:
    """Linear combination of tensor words; one letter string per slot."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Dict[Tuple[str, ...], object] | None = None):
        self.n = n
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def letter(cls, n: int, slot: int, letter: str, coeff=1) -> "UqTensor":
        w = [""] * n
        w[slot - 1] = letter
        return cls(n, {tuple(w): coeff})

    @classmethod
    def unit(cls, n: int) -> "UqTensor":
        return cls(n, {("",) * n: 1})

    def __add__(self, other):
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t[k] + v if k in t else v
        return UqTensor(self.n, t)

    def scale(self, c) -> "UqTensor":
        return UqTensor(self.n, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, UqTensor):
            return self.scale(other)
        t: Dict[Tuple[str, ...], object] = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                t[k] = t[k] + v1 * v2 if k in t else v1 * v2
        return UqTensor(self.n, t)

    def __eq__(self, other):
        return isinstance(other, UqTensor) and self.n == other.n and \
            {k: v for k, v in (self + other.scale(-1)).terms.items() if v} == {}


def _delta_letter(letter: str) -> List[Tuple[Tuple[str, str], int]]:
    # coproduct of one generator as a list of (left, right) words
    if letter == "E":
        return [(("E", "k"), 1), (("K", "E"), 1)]
    if letter == "F":
        return [(("F", "k"), 1), (("K", "F"), 1)]
    if letter == "K":
        return [(("K", "K"), 1)]
    if letter == "k":
        return [(("k", "k"), 1)]
    raise ValueError(letter)


def _delta_word(word: str) -> Dict[Tuple[str, str], int]:
    out: Dict[Tuple[str, str], int] = {("", ""): 1}
    for ch in word:
        nxt: Dict[Tuple[str, str], int] = {}
        for (a, b), c in out.items():
            for (x, y), c2 in _delta_letter(ch):
                k = (a + x, b + y)
                nxt[k] = nxt.get(k, 0) + c * c2
        out = nxt
    return out


def coproduct_insert(x: UqTensor, i: int) -> UqTensor:
    """Apply the coproduct in slot i (1-based): n factors become n+1."""
    if not 1 <= i <= x.n:
        raise SlotOutOfRange(f"slot {i} outside 1..{x.n}")
    t: Dict[Tuple[str, ...], object] = {}
    for w, c in x.terms.items():
        for (a, b), c2 in _delta_word(w[i - 1]).items():
            k = w[: i - 1] + (a, b) + w[i:]
            t[k] = t[k] + c * c2 if k in t else c * c2
    return UqTensor(x.n + 1, t)


def casimir_element(qh=QH) -> UqTensor:
    q = qh * qh
    return (UqTensor.letter(1, 1, "FE", (q - q ** -1) ** 2)
            + UqTensor.letter(1, 1, "KK", q) + UqTensor.letter(1, 1, "kk", q ** -1))


def _word_matrix(word: str, rep: Irrep) -> SparseMatrix:
    out = SparseMatrix.identity(rep.m, _one(rep.Kp[0, 0]))
    for ch in word:
        out = out @ {"E": rep.E, "F": rep.F, "K": rep.Kp, "k": rep.Km}[ch]
    return out


def represent(x: UqTensor, dims: Sequence[int], qh=QH) -> "TensorOperator":
    if len(dims) != x.n:
        raise ValueError("dims length does not match tensor arity")
    reps = [irrep(m, qh) for m in dims]
    size = 1
    for m in dims:
        size *= m
    total = SparseMatrix(size, size)
    cache: Dict[Tuple[int, str], SparseMatrix] = {}
    for w, c in x.terms.items():
        mat = None
        for s, (letters, rep) in enumerate(zip(w, reps)):
            key = (s, letters)
            if key not in cache:
                cache[key] = _word_matrix(letters, rep)
            mat = cache[key] if mat is None else mat.kron(cache[key])
        total = total + mat.scale(c)
    return TensorOperator(tuple(dims), total)


# -- operators on tensor products -----------------------------------------------

class TensorOperator:
    """Exact operator on M(m_1) (x) ... (x) M(m_n) (source and target dims may differ by a permutation)."""

    __slots__ = ("dims", "mat")

    def __init__(self, dims: Tuple[int, ...], mat: SparseMatrix):
        self.dims = tuple(dims)
        self.mat = mat

    def _check(self, other):
        if self.dims != other.dims:
            raise ValueError(f"dims mismatch {self.dims} vs {other.dims}")

    def __add__(self, other):
        if not isinstance(other, TensorOperator):
            return TensorOperator(self.dims, self.mat + other)
        self._check(other)
        return TensorOperator(self.dims, self.mat + other.mat)

    __radd__ = __add__

    def __neg__(self):
        return TensorOperator(self.dims, -self.mat)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        return TensorOperator(self.dims, self.mat.scale(c))

    def __mul__(self, other):
        if isinstance(other, TensorOperator):
            self._check(other)
            return TensorOperator(self.dims, self.mat @ other.mat)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    __matmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, TensorOperator):
            return self.dims == other.dims and self.mat == other.mat
        return self.mat == other

    __hash__ = None

    def is_zero(self):
        return self.mat.is_zero()

    def commutator(self, other):
        return self * other - other * self

    def q_commutator(self, other, q):
        return (self * other).scale(q) - (other * self).scale(q ** -1)

    def __repr__(self):
        return f"TensorOperator(dims={self.dims}, {self.mat!r})"


def identity(dims, qh=QH) -> TensorOperator:
    size = 1
    for m in dims:
        size *= m
    return TensorOperator(tuple(dims), SparseMatrix.identity(size, _one(qh)))


def _embed(x: UqTensor, slots: Sequence[int], n: int) -> UqTensor:
    t = {}
    for w, c in x.terms.items():
        full = [""] * n
        for s, letters in zip(slots, w):
            full[s - 1] = letters
        t[tuple(full)] = c
    return UqTensor(n, t)


def generator_image(letter: str, dims: Sequence[int], qh=QH) -> TensorOperator:
    """Iterated coproduct of E, F, K (= q^H) or k (= q^-H) on all factors."""
    x = UqTensor.letter(1, 1, letter)
    for _ in range(len(dims) - 1):
        x = coproduct_insert(x, x.n)
    return represent(x, dims, qh)


_CASIMIR_CACHE: Dict[tuple, TensorOperator] = {}


def consecutive_casimir(I: Sequence[int], dims: Sequence[int], qh=QH) -> TensorOperator:
    I = tuple(sorted(I))
    if list(I) != list(range(I[0], I[-1] + 1)):
        raise UnknownDecoration(f"{I} is not consecutive")
    key = (I, tuple(dims), qh)
    if key in _CASIMIR_CACHE:
        return _CASIMIR_CACHE[key]
    x = casimir_element(qh)
    for _ in range(len(I) - 1):
        x = coproduct_insert(x, x.n)
    op = represent(_embed(x, I, len(dims)), dims, qh)
    _CASIMIR_CACHE[key] = op
    return op


# -- R-matrices -----------------------------------------------------------------

_R_CACHE: Dict[tuple, Tuple[SparseMatrix, SparseMatrix]] = {}


def universal_R(m1: int, m2: int, qh=QH) -> Tuple[SparseMatrix, SparseMatrix]:
    """(R, R^-1) on M(m1) (x) M(m2), truncated exactly at n <= min(m1, m2) - 1."""
    key = (m1, m2, qh)
    if key in _R_CACHE:
        return _R_CACHE[key]
    q = qh * qh
    r1, r2 = irrep(m1, qh), irrep(m2, qh)
    one = _one(qh)
    size = m1 * m2
    # q^{2 H (x) H}: weight 2h = m-1-2k on each factor
    D = SparseMatrix.from_entries(size, size, (
        (a * m2 + b, a * m2 + b, qh ** ((m1 - 1 - 2 * a) * (m2 - 1 - 2 * b)))
        for a in range(m1) for b in range(m2)))
    Dinv = SparseMatrix.from_entries(size, size, (
        (a * m2 + b, a * m2 + b, qh ** (-(m1 - 1 - 2 * a) * (m2 - 1 - 2 * b)))
        for a in range(m1) for b in range(m2)))
    EK = r1.E @ r1.Kp
    kF = r2.Km @ r2.F
    N = SparseMatrix(size, size)
    left = SparseMatrix.identity(m1, one)
    right = SparseMatrix.identity(m2, one)
    for n in range(1, min(m1, m2)):
        left = left @ EK
        right = right @ kF
        coeff = (q - q ** -1) ** n * qh ** (n * (n - 1))
        # entries of (E q^H)^n are divisible by [n]!
        fact = qfact_at(n, q)
        term = left.map(lambda v: v / fact).kron(right).scale(coeff)
        N = N + term
    R = D @ (SparseMatrix.identity(size, one) + N)
    # (I + N)^-1 = sum (-N)^k, N nilpotent
    inv = SparseMatrix.identity(size, one)
    power = SparseMatrix.identity(size, one)
    while True:
        power = power @ (-N)
        if power.is_zero():
            break
        inv = inv + power
    Rinv = inv @ Dinv
    _R_CACHE[key] = (R, Rinv)
    return R, Rinv


def flip(m1: int, m2: int, one=1) -> SparseMatrix:
    """P: M(m1) (x) M(m2) -> M(m2) (x) M(m1)."""
    return SparseMatrix.from_entries(m1 * m2, m1 * m2, ((b * m1 + a, a * m2 + b, one) for a in range(m1) for b in range(m2)))


_BRAID_CACHE: Dict[tuple, Tuple[SparseMatrix, SparseMatrix]] = {}


def braided_R(i: int, dims: Sequence[int], qh=QH) -> Tuple[SparseMatrix, SparseMatrix]:
    """(Rb_i, Rb_i^-1) with Rb_i = R_{i,i+1} P_{i,i+1} : V(dims) -> V(swap_i dims).

    The inverse maps V(swap_i dims) back to V(dims).
    """
    dims = tuple(dims)
    if not 1 <= i < len(dims):
        raise SlotOutOfRange(f"braid generator s{i} on {len(dims)} factors")
    key = (i, dims, qh)
    if key in _BRAID_CACHE:
        return _BRAID_CACHE[key]
    one = _one(qh)
    a, b = dims[i - 1], dims[i]
    R, Rinv = universal_R(b, a, qh)
    P = flip(a, b, one)
    Pinv = flip(b, a, one)
    local = R @ P
    local_inv = Pinv @ Rinv
    left = 1
    for m in dims[: i - 1]:
        left *= m
    right = 1
    for m in dims[i + 1:]:
        right *= m
    IL = SparseMatrix.identity(left, one)
    IR = SparseMatrix.identity(right, one)
    full = IL.kron(local).kron(IR)
    full_inv = IL.kron(local_inv).kron(IR)
    _BRAID_CACHE[key] = (full, full_inv)
    return full, full_inv


def braid_generator_act(i: int, sign: int, x: TensorOperator, qh=QH) -> TensorOperator:
    """Psi_{s_i^{sign}}: conjugation by the braided R-matrix, landing on swapped dims."""
    if sign == 1:
        Rb, Rbinv = braided_R(i, x.dims, qh)
        return TensorOperator(swap_dims(x.dims, i), Rb @ x.mat @ Rbinv)
    Rb, Rbinv = braided_R(i, swap_dims(x.dims, i), qh)
    return TensorOperator(swap_dims(x.dims, i), Rbinv @ x.mat @ Rb)


def braid_act(S: BraidWord, x: TensorOperator, qh=QH) -> TensorOperator:
    """Psi_S = Psi_{g_1} o ... o Psi_{g_l}: the last letter acts first."""
    for i, e in reversed(S.letters):
        x = braid_generator_act(i, e, x, qh)
    return x


def source_dims(S: BraidWord, target: Sequence[int]) -> Tuple[int, ...]:
    """dims d such that Psi_S maps operators on d to operators on ``target``."""
    d = tuple(target)
    for i, _e in S.letters:
        d = swap_dims(d, i)
    return d


# -- labelled intermediate Casimirs -----------------------------------------------

def parse_label(label: str) -> Tuple[Tuple[int, ...], str]:
    """"13d" -> ((1, 3), "d"); "123" -> ((1, 2, 3), "")."""
    label = label.strip()
    if label.startswith("Q") or label.startswith("C") or label.startswith("A"):
        label = label[1:]
    deco = ""
    if label and label[-1] in "ud":
        deco = label[-1]
        label = label[:-1]
    if not label.isdigit():
        raise UnknownDecoration(f"cannot parse label {label!r}")
    return tuple(int(c) for c in label), deco


def is_consecutive(I: Sequence[int]) -> bool:
    return list(I) == list(range(I[0], I[0] + len(I)))


# Decorated Casimirs as (braid word, consecutive source index set).
# "d" follows Q13d = Rb2^-1 Q12 Rb2 = Rb1 Q23 Rb1^-1; "u" is the mirror.
DECORATED = {
    ((1, 3), "d"): ("s2^-1", (1, 2)),
    ((1, 3), "u"): ("s2", (1, 2)),
    ((2, 4), "d"): ("s3^-1", (2, 3)),
    ((2, 4), "u"): ("s3", (2, 3)),
    ((1, 4), "d"): ("s3^-1 s2^-1", (1, 2)),
    ((1, 4), "u"): ("s3 s2", (1, 2)),
    ((1, 2, 4), "d"): ("s3^-1", (1, 2, 3)),
    ((1, 2, 4), "u"): ("s3", (1, 2, 3)),
    ((1, 3, 4), "d"): ("s1", (2, 3, 4)),
    ((1, 3, 4), "u"): ("s1^-1", (2, 3, 4)),
}

# Equivalent alternative definitions used to audit the table above.
DECORATED_ALT = {
    ((1, 3), "d"): ("s1", (2, 3)),
    ((1, 3), "u"): ("s1^-1", (2, 3)),
    ((2, 4), "d"): ("s2", (3, 4)),
    ((2, 4), "u"): ("s2^-1", (3, 4)),
    ((1, 4), "d"): ("s1 s2", (3, 4)),
    ((1, 4), "u"): ("s1^-1 s2^-1", (3, 4)),
}


def intermediate_casimir(label: str, dims: Sequence[int], qh=QH, table=None) -> TensorOperator:
    """Q_I on V(dims); decorated labels follow the braid-conjugation convention."""
    I, deco = parse_label(label)
    n = len(dims)
    if any(not 1 <= i <= n for i in I) or len(set(I)) != len(I):
        raise UnknownDecoration(f"index set {I} invalid for {n} factors")
    I = tuple(sorted(I))
    if is_consecutive(I):
        if deco:
            raise UnknownDecoration(f"consecutive set {I} takes no decoration")
        return consecutive_casimir(I, dims, qh)
    table = DECORATED if table is None else table
    if (I, deco) not in table:
        raise UnknownDecoration(f"no convention for {label!r}")
    word, src = table[(I, deco)]
    S = BraidWord.parse(word)
    x = consecutive_casimir(src, source_dims(S, dims), qh)
    return braid_act(S, x, qh)


def casimir_family(dims: Sequence[int], qh=QH) -> Dict[str, TensorOperator]:
    """All Q_I needed for three factors: Q1, Q2, Q3, Q123, Q12, Q23, Q13 (= Q13d), Q13u."""
    if len(dims) != 3:
        raise ValueError("three factors expected")
    out = {str(i): intermediate_casimir(str(i), dims, qh) for i in (1, 2, 3)}
    out["123"] = intermediate_casimir("123", dims, qh)
    out["12"] = intermediate_casimir("12", dims, qh)
    out["23"] = intermediate_casimir("23", dims, qh)
    out["13d"] = intermediate_casimir("13d", dims, qh)
    out["13u"] = intermediate_casimir("13u", dims, qh)
    return out


def aw_images(dims: Sequence[int], qh=QH) -> Dict[str, TensorOperator]:
    """Generator images of saw(3): C_I -> Q_I with C13 -> Q13d."""
    fam = casimir_family(dims, qh)
    return {"C12": fam["12"], "C23": fam["23"], "C13": fam["13d"],
            "C1": fam["1"], "C2": fam["2"], "C3": fam["3"], "C123": fam["123"]}


def realize(x, dims: Sequence[int], qh=QH) -> TensorOperator:
    """Tensor image of an NcPoly over the aw(3) alphabet."""
    images = aw_images(dims, qh)
    one = identity(dims, qh)
    if isinstance(qh, LaurentPoly):
        return x.substitute(images, one)
    return x.substitute(images, one, scalar=lambda c: c.eval_qh(qh))


def verify_saw_in_tensor(dims: Sequence[int], qh=QH):
    from .ncalg import AW, casimir_omega, relation_residuals, special_value, aw_centrals
    from .report import VerificationReport, timed

    with timed() as t:
        residuals = dict(relation_residuals())
        residuals["casimir-value"] = casimir_omega() - special_value(aw_centrals(AW))
        failure = None
        checked = []
        for name, r in residuals.items():
            val = realize(r, dims, qh)
            checked.append(name)
            if not val.is_zero():
                i, j, v = next(val.mat.entries())
                failure = f"relation {name} fails at entry ({i},{j}): {v}"
                break
    status = "FAIL" if failure else "PASS"
    return VerificationReport(f"tensor.saw-relations[{','.join(map(str, dims))}]",
                              "q-commutator relations and Casimir value on Q_I", status,
                              witness=failure, ms=t.ms, params={"dims": list(dims), "checked": checked})


# -- expansion by exact linear solving -------------------------------------------

SAMPLE_POINTS = [Fraction(2), Fraction(3), Fraction(5, 2), Fraction(-2), Fraction(7, 3), Fraction(4),
                 Fraction(-3), Fraction(5), Fraction(3, 2), Fraction(-5, 2), Fraction(7), Fraction(11, 3),
                 Fraction(6), Fraction(-7, 3), Fraction(13, 4), Fraction(8), Fraction(-4), Fraction(9, 2),
                 Fraction(-5), Fraction(10), Fraction(17, 5), Fraction(-11, 3), Fraction(12), Fraction(-6),
                 Fraction(19, 7), Fraction(14), Fraction(-13, 4), Fraction(23, 5), Fraction(-7), Fraction(16),
                 Fraction(29, 6), Fraction(-8), Fraction(31, 7), Fraction(18), Fraction(-9, 2), Fraction(20),
                 Fraction(37, 8), Fraction(-10), Fraction(41, 9), Fraction(22), Fraction(-17, 5)]


def _interpolate_laurent(points, values, shift) -> LaurentPoly:
    """Laurent poly c(qh) with sum_{e=-shift}^{shift} a_e qh^e matching values (exact Lagrange)."""
    n = len(points)
    # solve Vandermonde for p(x) = x^shift c(x), degree < n
    rows = [[p ** k for k in range(n)] + [v * p ** shift] for p, v in zip(points, values)]
    sol = solve_columns([[r[k] for r in rows] for k in range(n)], [r[n] for r in rows])
    if sol is None:
        raise AmbiguousExpansion("interpolation system inconsistent")
    coeffs, _ = sol
    return LaurentPoly.from_terms(((k - shift,) + (0,) * 7, c) for k, c in enumerate(coeffs) if c)


def _hw_projector(dims, qh):
    """Columns spanning the kernel of the represented E (highest-weight vectors)."""
    E = generator_image("E", dims, qh)
    ns = nullspace(E.mat.to_dense())
    return SparseMatrix.from_dense([list(col) for col in zip(*ns)]) if ns else None


def _numeric_vector(op: TensorOperator, hw: SparseMatrix) -> List[Fraction]:
    return (op.mat @ hw).flatten() if hw is not None else op.mat.flatten()


@dataclass
class Expansion:
    monomials: List[Tuple[str, ...]]
    coefficients: List[LaurentPoly]
    dims_list: List[Tuple[int, ...]]
    witnesses: List[Fraction]
    verified_symbolically: bool

    def as_dict(self) -> Dict[Tuple[str, ...], LaurentPoly]:
        return {m: c for m, c in zip(self.monomials, self.coefficients) if c}

    def to_text(self) -> str:
        parts = [f"({c.to_text()})*{'*'.join('Q' + x for x in m) or '1'}"
                 for m, c in zip(self.monomials, self.coefficients) if c]
        return " + ".join(parts) or "0"


def _monomial_operator(mono: Sequence[str], dims, qh, cache, table=None) -> TensorOperator:
    out = identity(dims, qh)
    for lab in mono:
        key = (lab, tuple(dims), qh)
        if key not in cache:
            cache[key] = intermediate_casimir(lab, dims, qh, table)
        out = out * cache[key]
    return out


def expand_in_pbw_basis(target, basis: Sequence[Sequence[str]], dims_list: Sequence[Sequence[int]],
                        max_shift: int = 12, witnesses: int = 2, symbolic_check: bool = True,
                        table=None) -> Expansion:
    """Write ``target`` as sum_k c_k(qh) * basis_k with Laurent coefficients.

    ``target`` is a callable (dims, qh) -> TensorOperator; basis entries are
    tuples of Casimir labels multiplied left to right.  Coefficients are solved
    at exact rational q^{1/2}, interpolated, checked at extra witness points and
    finally (optionally) verified as an exact symbolic identity on every dims.
    """
    basis = [tuple(m) for m in basis]
    dims_list = [tuple(d) for d in dims_list]
    cache: Dict[tuple, TensorOperator] = {}
    hw_cache: Dict[tuple, SparseMatrix] = {}

    def sample(qh):
        cols = [[] for _ in basis]
        rhs: List[Fraction] = []
        for dims in dims_list:
            if (dims, qh) not in hw_cache:
                hw_cache[(dims, qh)] = _hw_projector(dims, qh)
            hw = hw_cache[(dims, qh)]
            rhs += _numeric_vector(target(dims, qh), hw)
            for k, mono in enumerate(basis):
                cols[k] += _numeric_vector(_monomial_operator(mono, dims, qh, cache, table), hw)
        return cols, rhs

    shift = 2
    values: List[List[Fraction]] = []
    pts: List[Fraction] = []
    while True:
        need = 2 * shift + 1 + witnesses
        while len(pts) < need:
            if len(pts) >= len(SAMPLE_POINTS):
                raise AmbiguousExpansion("ran out of sample points")
            p = SAMPLE_POINTS[len(pts)]
            cols, rhs = sample(p)
            sol = solve_columns(cols, rhs)
            if sol is None:
                raise NotInSpan(f"target not in span of basis at q^(1/2) = {p}",
                                residual={"qh": str(p)})
            x, unique = sol
            if not unique:
                raise AmbiguousExpansion(f"basis images dependent at q^(1/2) = {p} for dims {dims_list}")
            pts.append(p)
            values.append(x)
        fit_pts = pts[: 2 * shift + 1]
        coeffs = [_interpolate_laurent(fit_pts, [v[k] for v in values[: 2 * shift + 1]], shift)
                  for k in range(len(basis))]
        ok = all(c.eval_qh(p) == v[k] for p, v in zip(pts[2 * shift + 1:], values[2 * shift + 1:])
                 for k, c in enumerate(coeffs))
        if ok:
            break
        if shift >= max_shift:
            raise NotInSpan("coefficients are not Laurent polynomials of bounded degree")
        shift *= 2
        shift = min(shift, max_shift)
    verified = False
    if symbolic_check:
        for dims in dims_list:
            total = target(dims, QH)
            for mono, c in zip(basis, coeffs):
                if c:
                    total = total - _monomial_operator(mono, dims, QH, cache, table).scale(c)
            if not total.is_zero():
                raise NotInSpan(f"symbolic check failed on {dims}", residual=next(total.mat.entries()))
        verified = True
    return Expansion(list(basis), coeffs, dims_list, pts[2 * shift + 1:], verified)


def basis_rank(basis, dims_list, qh=Fraction(3), table=None) -> int:
    cache: Dict[tuple, TensorOperator] = {}
    cols = [[] for _ in basis]
    for dims in dims_list:
        hw = _hw_projector(tuple(dims), qh)
        for k, mono in enumerate(basis):
            cols[k] += _numeric_vector(_monomial_operator(mono, dims, qh, cache, table), hw)
    return rank(cols)


# -- multiplicity spaces ----------------------------------------------------------

def clebsch_gordan_multiplicity(m1, m2, m3, m4) -> int:
    """Multiplicity of M(m4) in M(m1) (x) M(m2) (x) M(m3)."""
    def tensor(a_mult: Dict[int, int], b: int):
        out: Dict[int, int] = {}
        for a, k in a_mult.items():
            for c in range(abs(a - b) + 1, a + b, 2):
                out[c] = out.get(c, 0) + k
        return out
    return tensor(tensor({m1: 1}, m2), m3).get(m4, 0)


def multiplicity_space_action(m1: int, m2: int, m3: int, m4: int, qh=QH):
    """Restriction of Q12, Q23 to the highest-weight vectors of weight (m4-1)/2.

    Returns (Q12, Q23, basis) where basis columns are exact vectors in V(m1,m2,m3),
    computed from the kernel of E at a generic rational point and then lifted
    symbolically by solving over the vectors' weight space.
    """
    dims = (m1, m2, m3)
    mult = clebsch_gordan_multiplicity(*dims, m4)
    if mult == 0:
        raise EmptyMultiplicity(f"M({m4}) does not occur in M({m1})xM({m2})xM({m3})")
    two_h = m4 - 1
    # weight-space coordinates: basis indices with sum of weights = two_h
    idx = [n for n, ks in enumerate(product(*(range(m) for m in dims)))
           if sum(m - 1 - 2 * k for m, k in zip(dims, ks)) == two_h]
    E = generator_image("E", dims, qh)
    sub = E.mat.columns(idx)
    vectors = _symbolic_kernel(sub, qh)
    if len(vectors) != mult:
        raise EmptyMultiplicity(f"kernel dimension {len(vectors)} differs from multiplicity {mult}")
    Bmat = SparseMatrix.from_entries(E.mat.nrows, mult,
                                     ((idx[r], c, v) for c, vec in enumerate(vectors) for r, v in enumerate(vec) if v))
    out = []
    for lab in ("12", "23"):
        op = intermediate_casimir(lab, dims, qh).mat @ Bmat
        out.append(_coordinates(op, Bmat, idx, qh))
    return out[0], out[1], Bmat


def _symbolic_kernel(M: SparseMatrix, qh):
    """Kernel basis of M over Q(qh) with Laurent entries, via fraction-free elimination."""
    rows = M.to_dense()
    ncols = M.ncols
    zero = qh * 0
    A = [[(x if x != 0 else zero) for x in r] for r in rows if any(x != 0 for x in r)]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f, g = A[i][c], A[r][c]
                A[i] = [g * a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    A = A[:r]
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for fc in free:
        # x_fc = prod of pivots; x_p = -A[p][fc] * prod / A[p][p]
        den = qh ** 0
        for k, pc in enumerate(pivots):
            den = den * A[k][pc]
        vec = [zero] * ncols
        vec[fc] = den
        for k, pc in enumerate(pivots):
            vec[pc] = -(A[k][fc] * den) / A[k][pc]
        out.append(_primitive(vec, qh))
    return out


def _primitive(vec, qh):
    # strip a common monomial factor to keep entries small
    if not isinstance(qh, LaurentPoly):
        return vec
    nz = [v for v in vec if v]
    g = None
    for v in nz:
        if v.is_monomial():
            g = v
            break
    if g is None:
        return vec
    try:
        return [v / g if v else v for v in vec]
    except ArithmeticError:
        return vec


def _coordinates(image: SparseMatrix, B: SparseMatrix, idx, qh) -> SparseMatrix:
    """Solve B X = image for X, columns in the multiplicity basis."""
    k = B.ncols
    # choose k rows where B is invertible; use row reduction on those coordinates
    Bd = B.to_dense()
    Id = image.to_dense()
    rows = [Bd[i] for i in idx]
    rhs = [Id[i] for i in idx]
    zero = qh * 0
    # Gaussian elimination over the fraction field by cross-multiplication, then exact division
    A = [list(r) + list(s) for r, s in zip(rows, rhs)]
    A = [[x if x != 0 else zero for x in r] for r in A]
    pivrows = []
    r = 0
    for c in range(k):
        p = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if p is None:
            raise AmbiguousExpansion("multiplicity basis degenerate")
        A[r], A[p] = A[p], A[r]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f, g = A[i][c], A[r][c]
                A[i] = [g * a - f * b for a, b in zip(A[i], A[r])]
        pivrows.append(r)
        r += 1
    for i in range(k, len(A)):
        if any(x != 0 for x in A[i]):
            raise NotInSpan("image leaves the multiplicity space")
    X = [[A[c][k + j] / A[c][c] for j in range(k)] for c in range(k)]
    return SparseMatrix.from_dense(X)


def k_relation_residuals(K12, K23, xi, qh):
    """Residuals of the K-presentation on matrices K12, K23 given xi values.

    xi = (xi2, xi4, xi4', xi6); K13 is defined as [K12, K23]_q.
    """
    q = qh * qh
    qs = q + q ** -1
    xi2, xi4, xi4p, xi6 = xi
    K13 = K12.q_commutator(K23, q)
    anti = K12 @ K23 + K23 @ K12
    n = K12.nrows
    I = SparseMatrix.identity(n, _one(qh))
    r2 = K23.q_commutator(K13, q) - (-anti - K23 @ K23 + K23.scale(xi2) + I.scale(xi4)).scale(qs)
    r3 = K13.q_commutator(K12, q) - (-anti - K12 @ K12 + K12.scale(xi2) + I.scale(xi4p)).scale(qs)
    cubic = ((K12 @ K23 @ K13).scale(-q * (q - q ** -1) / qs) - (K12 @ K23 @ K12).scale(q)
             - (K23 @ K12 @ K23).scale(q ** -1) + (K13 @ K13).scale(q * q / (qs * qs))
             + anti.scale(xi2 / qs - 1) + K12.scale(q * xi4) + K23.scale(q ** -1 * xi4p)
             - I.scale(xi6 - xi4 - xi4p - xi2 * xi2 / 4))
    return {"K23-bracket": r2, "K12-bracket": r3, "cubic": cubic}


def multiplicity_relations_check(m1, m2, m3, m4, points=(Fraction(2), Fraction(3, 2), Fraction(5, 3))):
    """The special Zhedanov relations on the multiplicity space of M(m4), at exact rational q^{1/2}."""
    from .report import VerificationReport, timed

    with timed() as t:
        bad = None
        dim = None
        for qh in points:
            Q12, Q23, _B = multiplicity_space_action(m1, m2, m3, m4, qh)
            dim = Q12.nrows
            q = qh * qh
            d2 = (q - 1 / q) ** 2
            I = SparseMatrix.identity(dim, Fraction(1))
            K12 = (Q12 - I.scale(q + 1 / q)).scale(1 / d2)
            K23 = (Q23 - I.scale(q + 1 / q)).scale(1 / d2)
            xi = _xi_at_qh(qh, (m1, m2, m3, m4))
            for name, res in k_relation_residuals(K12, K23, xi, qh).items():
                if not res.is_zero():
                    bad = f"{name} fails at q^(1/2)={qh}"
                    break
            if bad:
                break
    return VerificationReport(f"tensor.multiplicity[{m1},{m2},{m3},{m4}]",
                              "special Zhedanov relations on a multiplicity space",
                              "FAIL" if bad else "PASS", witness=bad, ms=t.ms,
                              params={"dimension": dim, "points": [str(p) for p in points]})


def _xi_at_qh(qh, m):
    q = Fraction(qh) ** 2
    d = q - 1 / q
    M = [((Fraction(qh) ** mi - Fraction(qh) ** -mi) / d) ** 2 for mi in m]
    M1, M2, M3, M4 = M
    A = M1 * M3 - M2 * M4
    return (
        (2 * (M1 + M2 + M3 + M4 - 1) + d * d * (M1 * M3 + M2 * M4)) / (q + 1 / q),
        (M1 - M4) * (M3 - M2),
        (M1 - M2) * (M3 - M4),
        A * (M1 - M2 + M3 - M4) + d * d * A * A / 4,
    )


# -- four factors ------------------------------------------------------------------

# "d" and "u" exchanged: the orientation the products must rule out
MIRRORED = {(I, "u" if d == "d" else "d"): v for (I, d), v in DECORATED.items()}

N4_PRODUCT_BASIS = (("14d", "23"), ("12", "34"), ("14d", "2", "3"), ("23", "1", "4"), ("12", "3", "4"),
                    ("34", "1", "2"), ("1234",), ("1", "2", "3", "4"), ("1", "234"), ("2", "134d"),
                    ("3", "124d"), ("4", "123"))


def n4_expected(order: str) -> Dict[Tuple[str, ...], LaurentPoly]:
    """Coefficients of Q13d*Q24d ("13d*24d") or Q24d*Q13d ("24d*13d") in N4_PRODUCT_BASIS."""
    q = QH * QH
    a, b = (q, q ** -1) if order == "13d*24d" else (q ** -1, q)
    coeffs = [a * a, b * b, -a, -a, -b, -b, -(q + q ** -1), 1, 1, 1, 1, 1]
    return {m: poly(c) for m, c in zip(N4_PRODUCT_BASIS, coeffs)}


def n4_commutation_check(dims: Sequence[int] = (2, 2, 2, 2)):
    from .report import VerificationReport, timed

    dims = tuple(dims)
    with timed() as t:
        bad = [f"[{a},{b}]" for a, b in (("13d", "24u"), ("13u", "24d"))
               if not intermediate_casimir(a, dims).commutator(intermediate_casimir(b, dims)).is_zero()]
    return VerificationReport(f"tensor.n4-commutation[{','.join(map(str, dims))}]",
                              "opposite-decoration Casimirs commute", "FAIL" if bad else "PASS",
                              witness=", ".join(bad) or None, ms=t.ms, params={"dims": list(dims)})


def n4_products_check(dims_list: Sequence[Sequence[int]] = ((2, 2, 2, 2),)):
    """Expand Q13d*Q24d and Q24d*Q13d under both orientations; exactly one must match."""
    from .report import VerificationReport, timed

    dims_list = [tuple(d) for d in dims_list]
    matched = {}
    with timed() as t:
        for orient, table in (("d=Rinv.Q.R", None), ("mirrored", MIRRORED)):
            ok = True
            for order in ("13d*24d", "24d*13d"):
                x, y = order.split("*")
                target = (lambda x, y, table: lambda dims, qh: intermediate_casimir(x, dims, qh, table)
                          * intermediate_casimir(y, dims, qh, table))(x, y, table)
                try:
                    e = expand_in_pbw_basis(target, N4_PRODUCT_BASIS, dims_list, table=table)
                except (NotInSpan, AmbiguousExpansion):
                    ok = False
                    break
                got = e.as_dict()
                want = n4_expected(order)
                if any(got.get(m, poly(0)) != c for m, c in want.items()) or set(got) - set(want):
                    ok = False
                    break
            matched[orient] = ok
    good = [k for k, v in matched.items() if v]
    status = "PASS" if good == ["d=Rinv.Q.R"] else "FAIL"
    return VerificationReport("tensor.n4-products", "Q13d*Q24d and Q24d*Q13d expansions", status,
                              witness=None if status == "PASS" else f"orientations matching: {good}",
                              ms=t.ms, params={"dims": [list(d) for d in dims_list],
                                               "orientation": good[0] if len(good) == 1 else good})


def pbw_oracle_check(words: int = 100, max_length: int = 4, dims: Sequence[int] = (2, 3, 4), seed: int = 11):
    """Random words over the aw(3) alphabet: tensor image of the word equals that of its saw normal form."""
    import random

    from .ncalg import AW, normalize
    from .report import VerificationReport, timed

    dims = tuple(dims)
    rng = random.Random(seed)
    letters = list(AW.noncentral + AW.central)
    with timed() as t:
        bad = None
        for _ in range(words):
            w = [rng.choice(letters) for _ in range(rng.randint(1, max_length))]
            x = AW.word(w)
            if realize(x, dims) != realize(normalize(x, "saw3"), dims):
                bad = " ".join(w)
                break
    return VerificationReport(f"tensor.pbw-oracle[{','.join(map(str, dims))}]",
                              "normal forms agree with tensor images", "FAIL" if bad else "PASS",
                              witness=bad, ms=t.ms, params={"words": words, "max_length": max_length,
                                                            "seed": seed})
