"""Kauffman bracket skein algebra of the punctured sphere, computed through saw(3).

Loops are named by the punctures they enclose.  For three inner punctures the
algebra is modelled exactly by saw(3) via A_I -> C_I, with the skein variable
A = theta^2 sent to -q.  Loops around non-consecutive punctures carry a
decoration: "d" passes below the skipped punctures, "u" above.  For four inner
punctures loops are only mapped into the tensor realization (evidence, since
the isomorphism is conjectural there).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Dict, List, Optional, Sequence, Tuple

from .linalg import ColumnSolver
from .ncalg import AW, AW_CENTRALS, NcPoly, normalize
from .quantum import (SAMPLE_POINTS, BraidWord, TensorOperator, _embed, _hw_projector, _interpolate_laurent,
                      _numeric_vector, braid_act, casimir_element, coproduct_insert, identity,
                      intermediate_casimir, is_consecutive, realize, represent, source_dims)
from .report import VerificationReport, timed
from .ring import ONE, Q, QH, QINV, ZERO, A as A_SYM, LaurentPoly, exact_divide

THETA_NOTE = "A = theta^2, and A -> -q on the algebra side"


class NotInImage(ValueError):
    pass


class PathMismatch(AssertionError):
    pass


class UnsupportedPair(ValueError):
    pass


# -- labels --------------------------------------------------------------------------

@dataclass(frozen=True)
class LoopLabel:
    n: int
    indices: Tuple[int, ...]
    decoration: str = ""
    prefix: BraidWord = BraidWord()

    def __post_init__(self):
        I = tuple(sorted(self.indices))
        object.__setattr__(self, "indices", I)
        if not I or len(set(I)) != len(I) or not all(1 <= i <= self.n for i in I):
            raise ValueError(f"index set {I} invalid for {self.n} punctures")
        if is_consecutive(I) and self.decoration:
            raise ValueError(f"loop {I} encloses consecutive punctures and takes no decoration")
        if not is_consecutive(I) and self.decoration not in ("u", "d"):
            raise ValueError(f"loop {I} needs decoration u or d")

    @classmethod
    def parse(cls, text: str, n: int = 3) -> "LoopLabel":
        """'A13d', '12', 's1^-1:A23' (a braid-twisted loop)."""
        prefix = BraidWord()
        if ":" in text:
            w, text = text.split(":", 1)
            prefix = BraidWord.parse(w)
        text = text.strip()
        if text[:1] in ("A", "C", "Q"):
            text = text[1:]
        deco = text[-1] if text and text[-1] in "ud" else ""
        digits = text[:-1] if deco else text
        if not digits.isdigit():
            raise ValueError(f"cannot parse loop label {text!r}")
        return cls(n, tuple(int(c) for c in digits), deco, prefix)

    @property
    def name(self) -> str:
        base = "A" + "".join(map(str, self.indices)) + self.decoration
        return f"{self.prefix}:{base}" if len(self.prefix) else base

    def is_central(self) -> bool:
        return len(self.indices) in (1, self.n)

    def __str__(self):
        return self.name


# -- coefficient bookkeeping ------------------------------------------------------------

def a_to_q(c: LaurentPoly) -> LaurentPoly:
    return c.subs({"A": -Q})


def q_to_a(c: LaurentPoly) -> LaurentPoly:
    """q^k -> (-A)^k; odd powers of q^{1/2} have no skein counterpart."""
    out = []
    for e, v in c.terms():
        if any(e[1:]):
            raise NotInImage(f"coefficient {c.to_text()} involves symbols besides q")
        if e[0] % 2:
            raise NotInImage(f"coefficient {c.to_text()} has an odd power of q^(1/2)")
        k = e[0] // 2
        out.append(((0, 0, 0, k, 0, 0, 0, 0), v if k % 2 == 0 else -v))
    return LaurentPoly.from_terms(out)


def a_text(c: LaurentPoly, theta: bool = True) -> str:
    """Coefficient in A, or in theta with A = theta^2."""
    if not theta:
        return c.to_text()
    parts = []
    for e, v in sorted(c.terms(), key=lambda t: -t[0][3]):
        k = 2 * e[3]
        mono = "" if k == 0 else ("theta" if k == 1 else f"theta^{k}")
        if mono:
            coef = "" if v == 1 else "-" if v == -1 else f"{v}*"
        else:
            coef = str(v)
        parts.append(coef + mono)
    return " + ".join(parts).replace("+ -", "- ") or "0"


# -- phi ----------------------------------------------------------------------------

C = {n: AW.gen(n) for n in ("C12", "C23", "C13") + AW_CENTRALS}
ALPHA = C["C1"] * C["C2"] + C["C3"] * C["C123"]
BETA = C["C2"] * C["C3"] + C["C1"] * C["C123"]
GAMMA = C["C3"] * C["C1"] + C["C2"] * C["C123"]

# A12 A23 = A A13d + A^-1 A13u + A1 A3 + A2 A123 solved for A13u, with A -> -q
C13U = (C["C12"] * C["C23"]).scale(-Q) - C["C13"].scale(Q * Q) + GAMMA.scale(Q)


def _generator_poly(label: LoopLabel) -> NcPoly:
    I, d = label.indices, label.decoration
    if len(I) == 1:
        return C[f"C{I[0]}"]
    if I == (1, 2, 3):
        return C["C123"]
    if I == (1, 2):
        return C["C12"]
    if I == (2, 3):
        return C["C23"]
    return C["C13"] if d == "d" else C13U


def phi(label, n: int = 3) -> NcPoly:
    """A_I -> C_I in saw(3) (A13d -> C13, A13u -> its expression in the generators)."""
    if isinstance(label, str):
        label = LoopLabel.parse(label, n)
    if label.n != 3:
        raise NotInImage("phi into saw(3) needs three inner punctures; use phi_tensor for four")
    base = _generator_poly(label)
    if len(label.prefix):
        return _twist_fast(label.prefix, base)
    return base


def phi_tensor(label, dims: Sequence[int], qh=QH) -> TensorOperator:
    """Tensor image Q_I of a loop (the conjectural map when there are four inner punctures)."""
    if isinstance(label, str):
        label = LoopLabel.parse(label, len(dims))
    if len(dims) != label.n:
        raise ValueError("dims must have one entry per inner puncture")
    if len(label.prefix):
        base = LoopLabel(label.n, label.indices, label.decoration)
        x = phi_tensor(base, source_dims(label.prefix, dims), qh)
        return braid_act(label.prefix, x, qh)
    name = "".join(map(str, label.indices)) + label.decoration
    return intermediate_casimir(name, dims, qh)


class SkeinElement:
    """Element of the skein algebra, stored as its saw(3) normal form."""

    __slots__ = ("poly",)

    def __init__(self, poly: NcPoly, normalized: bool = False):
        if poly.alphabet != AW:
            raise NotInImage("element is not over the saw(3) generators")
        self.poly = poly if normalized else normalize(poly, "saw3")

    @classmethod
    def loop(cls, label, n: int = 3) -> "SkeinElement":
        return cls(phi(label, n))

    @classmethod
    def scalar(cls, c) -> "SkeinElement":
        return cls(AW.scalar(a_to_q(LaurentPoly._coerce(c))), normalized=True)

    def __add__(self, other):
        return SkeinElement(self.poly + other.poly, normalized=True)

    def __sub__(self, other):
        return SkeinElement(self.poly - other.poly, normalized=True)

    def __neg__(self):
        return SkeinElement(-self.poly, normalized=True)

    def scale(self, c) -> "SkeinElement":
        """Multiply by a coefficient in A."""
        return SkeinElement(self.poly.scale(a_to_q(LaurentPoly._coerce(c))), normalized=True)

    def __mul__(self, other):
        if isinstance(other, SkeinElement):
            return loop_product(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        return isinstance(other, SkeinElement) and self.poly == other.poly

    __hash__ = None

    def __bool__(self):
        return bool(self.poly)

    def terms(self) -> List[Tuple[Tuple[str, ...], LaurentPoly]]:
        """(loop monomial, coefficient in A) pairs; C13 is read as the d-loop A13d."""
        names = {"C12": "A12", "C23": "A23", "C13": "A13d", "C1": "A1", "C2": "A2", "C3": "A3", "C123": "A123"}
        out = []
        for (w, e), c in self.poly.sorted_terms():
            mono = []
            for name, k in zip(AW.central, e):
                mono += [names[name]] * k
            mono += [names[AW.noncentral[x]] for x in w]
            out.append((tuple(mono), q_to_a(c)))
        return out

    def to_text(self, theta: bool = True) -> str:
        parts = []
        for mono, c in self.terms():
            m = "*".join(mono) or "1"
            parts.append(f"({a_text(c, theta)})*{m}")
        return " + ".join(parts) or "0"

    def __repr__(self):
        return f"SkeinElement({self.to_text()})"


def phi_inverse(x: NcPoly) -> SkeinElement:
    el = SkeinElement(x)
    el.terms()  # raises NotInImage for coefficients without a skein reading
    return el


def loop_product(x: SkeinElement, y: SkeinElement) -> SkeinElement:
    """x . y (y stacked on top of x)."""
    return SkeinElement(x.poly * y.poly)


def express(x: SkeinElement, basis: Sequence[Tuple[str, SkeinElement]]) -> Dict[str, LaurentPoly]:
    """Coefficients in A of x in terms of named elements with distinct leading PBW terms."""
    def lead(p: NcPoly):
        return max(p.terms, key=lambda k: (len(k[0]) + sum(k[1]), k))

    leads = {}
    for name, b in basis:
        if not b:
            raise ValueError(f"basis element {name} is zero")
        k = lead(b.poly)
        if k in leads:
            raise ValueError(f"basis elements {leads[k][0]} and {name} share a leading term")
        leads[k] = (name, b)
    rest = x.poly
    coeffs = {name: ZERO for name, _ in basis}
    while rest:
        k = lead(rest)
        if k not in leads:
            raise NotInImage(f"leading term {rest.monomial_text(k)} not covered by the basis")
        name, b = leads[k]
        c = exact_divide(rest.terms[k], b.poly.terms[k])
        coeffs[name] = coeffs[name] + c
        rest = rest - b.poly.scale(c)
    return {name: q_to_a(c) for name, c in coeffs.items()}


# -- half Dehn twists -------------------------------------------------------------------

def _images(letter: Tuple[int, int]) -> Dict[str, NcPoly]:
    """psi_{s_i^{+-1}} on the saw(3) generators (C13 is the d-loop)."""
    c = C
    i, e = letter
    if i == 1:
        base = {"C1": c["C2"], "C2": c["C1"], "C3": c["C3"], "C123": c["C123"], "C12": c["C12"]}
        if e == 1:
            base["C23"] = c["C13"]
            base["C13"] = (c["C12"] * c["C13"] + c["C23"].scale(QINV) - BETA).scale(-QINV)
        else:
            base["C23"] = C13U
            base["C13"] = c["C23"]
        return base
    if i == 2:
        base = {"C1": c["C1"], "C2": c["C3"], "C3": c["C2"], "C123": c["C123"], "C23": c["C23"]}
        if e == 1:
            base["C12"] = C13U
            base["C13"] = c["C12"]
        else:
            base["C12"] = c["C13"]
            base["C13"] = (c["C13"] * c["C23"] + c["C12"].scale(QINV) - ALPHA).scale(-QINV)
        return base
    raise ValueError(f"s{i} does not act on three inner punctures")


def _twist_fast(S: BraidWord, x: NcPoly) -> NcPoly:
    for letter in reversed(S.letters):
        x = normalize(x.substitute(_images(letter), AW.one()), "saw3")
    return x


# the saw(3) generators; A13u is a composite (degree 2) and its twists leave the degree-2 span
GENERATOR_LOOPS = ("A1", "A2", "A3", "A123", "A12", "A23", "A13d")
# smallest set found on which the degree-2 PBW monomials stay independent
TWIST_DIMS = [(2, 2, 2), (3, 2, 2), (2, 2, 3), (2, 3, 2), (3, 3, 3), (1, 2, 2), (2, 1, 2), (2, 2, 1),
              (2, 3, 3), (3, 2, 3)]
_LABEL_OF = {"C1": "1", "C2": "2", "C3": "3", "C123": "123", "C12": "12", "C23": "23", "C13": "13d"}
_PBW_ORDER = ("C1", "C2", "C3", "C123", "C12", "C23", "C13")


def _pbw_monomials(max_degree: int) -> List[Tuple[str, ...]]:
    out: List[Tuple[str, ...]] = [()]
    for d in range(1, max_degree + 1):
        for combo in combinations_with_replacement(range(len(_PBW_ORDER)), d):
            out.append(tuple(_PBW_ORDER[i] for i in combo))
    return out


class _DiagramBasis:
    """Numeric images of the degree-bounded PBW monomials, factored once per sample point."""

    def __init__(self, max_degree: int, dims_list):
        self.monomials = _pbw_monomials(max_degree)
        self.dims_list = [tuple(d) for d in dims_list]
        self._solvers: Dict[Fraction, ColumnSolver] = {}
        self._hw: Dict[tuple, object] = {}

    def hw(self, dims, qh):
        if (dims, qh) not in self._hw:
            self._hw[(dims, qh)] = _hw_projector(dims, qh)
        return self._hw[(dims, qh)]

    def solver(self, qh) -> ColumnSolver:
        if qh not in self._solvers:
            cols = [[] for _ in self.monomials]
            for dims in self.dims_list:
                ops = {}
                for name in _PBW_ORDER:
                    ops[name] = intermediate_casimir(_LABEL_OF[name], dims, qh)
                hw = self.hw(dims, qh)
                one = identity(dims, qh)
                for k, mono in enumerate(self.monomials):
                    op = one
                    for name in mono:
                        op = op * ops[name]
                    cols[k] += _numeric_vector(op, hw)
            s = ColumnSolver(cols)
            if not s.unique:
                raise NotInImage(f"PBW monomials are dependent on {self.dims_list}; add dims")
            self._solvers[qh] = s
        return self._solvers[qh]


@lru_cache(maxsize=4)
def _diagram_basis(max_degree: int) -> _DiagramBasis:
    return _DiagramBasis(max_degree, TWIST_DIMS)


def _twist_diagram(S: BraidWord, x: NcPoly, max_degree: int = 2, shift: int = 2, witnesses: int = 2) -> NcPoly:
    """phi^-1(Psi_S(phi(x))): conjugate the tensor image, then solve back into PBW monomials.

    Coefficients are Laurent in q, fitted from exact values at rational q^{1/2}
    and confirmed at extra witness points.
    """
    basis = _diagram_basis(max_degree)
    # distinct values of q are needed since coefficients are fitted in q
    pts = [p for p in SAMPLE_POINTS if p > 0][: 2 * shift + 1 + witnesses]
    values = []
    for qh in pts:
        vec = []
        for dims in basis.dims_list:
            op = braid_act(S, realize(x, source_dims(S, dims), qh), qh)
            vec += _numeric_vector(op, basis.hw(dims, qh))
        sol = basis.solver(qh).solve(vec)
        if sol is None:
            raise NotInImage(f"twisted element is not in the degree-{max_degree} PBW span at q^(1/2)={qh}")
        values.append(sol)
    out = NcPoly(AW)
    fit = 2 * shift + 1
    for k, mono in enumerate(basis.monomials):
        col = [v[k] for v in values]
        if not any(col):
            continue
        # fit in q = qh^2, then read back as a polynomial in qh
        cq = _interpolate_laurent([p * p for p in pts[:fit]], col[:fit], shift)
        c = cq.map_exponents(lambda e: (2 * e[0],) + e[1:])
        for p, v in zip(pts[fit:], col[fit:]):
            if c.eval_qh(p) != v:
                raise NotInImage(f"coefficient of {mono} is not a Laurent polynomial of q-degree <= {shift}")
        term = AW.one()
        for name in mono:
            term = term * C[name]
        out = out + term.scale(c)
    return normalize(out, "saw3")


def half_dehn_twist(S, x, path: str = "fast", **kw) -> SkeinElement:
    """psi_S(x).  path = 'fast' (generator tables), 'diagram' (through the tensor side) or 'both'."""
    if isinstance(S, str):
        S = BraidWord.parse(S)
    if isinstance(x, str):
        x = SkeinElement.loop(x)
    poly = x.poly if isinstance(x, SkeinElement) else x
    if path == "fast":
        return SkeinElement(_twist_fast(S, poly), normalized=True)
    if path == "diagram":
        return SkeinElement(_twist_diagram(S, poly, **kw), normalized=True)
    if path == "both":
        a = _twist_fast(S, poly)
        b = _twist_diagram(S, poly, **kw)
        if a != b:
            raise PathMismatch(f"psi_{S}: fast {a.to_text()} vs diagram {b.to_text()}")
        return SkeinElement(a, normalized=True)
    raise ValueError(f"unknown path {path!r}")


# -- puncture splitting -------------------------------------------------------------------

def puncture_split(i: int, label) -> LoopLabel:
    """delta_i: puncture i is doubled into i, i+1; later punctures shift up by one."""
    if isinstance(label, str):
        label = LoopLabel.parse(label)
    if not 1 <= i <= label.n:
        raise ValueError(f"position {i} outside 1..{label.n}")
    if len(label.prefix):
        raise UnsupportedPair("splitting twisted loops is not supported")
    out = []
    for j in label.indices:
        if j < i:
            out.append(j)
        elif j == i:
            out += [i, i + 1]
        else:
            out.append(j + 1)
    deco = "" if is_consecutive(out) else label.decoration
    return LoopLabel(label.n + 1, tuple(out), deco)


def coproduct_casimir(I: Sequence[int], n: int, i: int, dims: Sequence[int], qh=QH) -> TensorOperator:
    """Delta_i applied to the consecutive Casimir Q_I on n factors, represented on n+1 factors."""
    x = casimir_element(qh)
    for _ in range(len(I) - 1):
        x = coproduct_insert(x, x.n)
    return represent(coproduct_insert(_embed(x, I, n), i), dims, qh)


def puncture_split_check(dims=(2, 2, 2, 2)) -> VerificationReport:
    """delta_i on consecutive loops of three punctures agrees with Delta_i on the tensor side."""
    with timed() as t:
        bad = None
        count = 0
        for I in [(1,), (2,), (3,), (1, 2), (2, 3), (1, 2, 3)]:
            for i in (1, 2, 3):
                new = puncture_split(i, LoopLabel(3, I))
                lhs = coproduct_casimir(I, 3, i, dims)
                rhs = phi_tensor(new, dims)
                count += 1
                if lhs != rhs:
                    bad = f"delta_{i}(A{''.join(map(str, I))}) -> {new} disagrees with Delta_{i}"
                    break
            if bad:
                break
    return VerificationReport("skein.puncture-split", "puncture splitting against the coproduct",
                              "FAIL" if bad else "PASS", witness=bad, ms=t.ms,
                              params={"dims": list(dims), "pairs": count})


# -- crossing index ----------------------------------------------------------------------

def _span(I):
    return set(range(I[0], I[-1] + 1))


def _catalogued(l: LoopLabel) -> bool:
    if len(l.prefix) or l.n > 4:
        return False
    return not l.decoration or len(l.indices) in (2, 3)


def crossing_index(x, y, n: Optional[int] = None) -> int:
    """Minimal crossing number for the catalogued pairs of simple and u/d-decorated loops."""
    if isinstance(x, str):
        x = LoopLabel.parse(x, n or 4)
    if isinstance(y, str):
        y = LoopLabel.parse(y, n or x.n)
    if x.n != y.n:
        raise UnsupportedPair("loops live on different surfaces")
    if not (_catalogued(x) and _catalogued(y)):
        raise UnsupportedPair(f"({x}, {y}) is outside the catalog")
    if x.is_central() or y.is_central():
        return 0
    I, J = set(x.indices), set(y.indices)
    if not x.decoration and not y.decoration:
        if I <= J or J <= I or not (I & J):
            return 0
        return 2
    if x.decoration and y.decoration:
        if I == J:
            return 0 if x.decoration == y.decoration else 4
        if not (_span(x.indices) & _span(y.indices)):
            return 0
        if len(I) == len(J) == 2 and not (I & J):
            # interleaved pairs such as (13, 24)
            return 4 if x.decoration == y.decoration else 0
        raise UnsupportedPair(f"({x}, {y}) is outside the catalog")
    if y.decoration:
        x, y = y, x
        I, J = J, I
    # x decorated, y a consecutive loop
    gap = _span(x.indices) - I
    if J <= I or J <= gap or not (J & _span(x.indices)) or _span(x.indices) <= J:
        return 0
    return 2


def crossing_catalog(n: int) -> List[LoopLabel]:
    out = []
    for size in range(1, n + 1):
        for start in range(1, n - size + 2):
            out.append(LoopLabel(n, tuple(range(start, start + size))))
    decorated = [(1, 3)] if n == 3 else [(1, 3), (2, 4), (1, 4), (1, 2, 4), (1, 3, 4)]
    for I in decorated:
        for d in ("d", "u"):
            out.append(LoopLabel(n, I, d))
    return out


def crossing_soundness_check(dims=(2, 2, 2, 2)) -> VerificationReport:
    """Every catalogued pair with crossing index 0 commutes in the tensor realization."""
    n = len(dims)
    with timed() as t:
        bad = None
        checked = 0
        labels = crossing_catalog(n)
        ops = {l.name: phi_tensor(l, dims) for l in labels}
        for a in range(len(labels)):
            for b in range(a + 1, len(labels)):
                try:
                    k = crossing_index(labels[a], labels[b])
                except UnsupportedPair:
                    continue
                if k == 0:
                    checked += 1
                    if not ops[labels[a].name].commutator(ops[labels[b].name]).is_zero():
                        bad = f"({labels[a]}, {labels[b]}) has index 0 but does not commute"
                        break
            if bad:
                break
    return VerificationReport(f"skein.crossing-soundness[{','.join(map(str, dims))}]",
                              "crossing index 0 implies commuting operators", "FAIL" if bad else "PASS",
                              witness=bad, ms=t.ms, params={"pairs": checked})


# -- checks ---------------------------------------------------------------------------------

def _loops(*names):
    return [SkeinElement.loop(x) for x in names]


def displayed_products_check() -> VerificationReport:
    """The two loop-product expansions, coefficient by coefficient in theta."""
    with timed() as t:
        A12, A23, A13, A13u, A1, A2, A3, A123 = _loops("A12", "A23", "A13d", "A13u", "A1", "A2", "A3", "A123")
        basis = [("A13d", A13), ("A13u", A13u), ("A2*A123", A2 * A123), ("A1*A3", A1 * A3)]
        got = express(A12 * A23, basis)
        want = {"A13d": A_SYM, "A13u": A_SYM ** -1, "A2*A123": ONE, "A1*A3": ONE}
        bad = None
        for k in want:
            if got[k] != want[k]:
                bad = f"A12*A23: coefficient of {k} is {a_text(got[k])}, expected {a_text(want[k])}"
                break
        if not bad:
            lhs = (A12 * A23).scale(A_SYM) - (A23 * A12).scale(A_SYM ** -1)
            got2 = express(lhs, basis)
            want2 = {"A13d": A_SYM ** 2 - A_SYM ** -2, "A13u": ZERO,
                     "A2*A123": A_SYM - A_SYM ** -1, "A1*A3": A_SYM - A_SYM ** -1}
            for k in want2:
                if got2[k] != want2[k]:
                    bad = f"theta-combination: coefficient of {k} is {a_text(got2[k])}, expected {a_text(want2[k])}"
                    break
    return VerificationReport("skein.products", "loop products A12*A23 and the theta^2/theta^-2 combination",
                              "FAIL" if bad else "PASS", witness=bad, ms=t.ms,
                              params={"expansion": {k: a_text(v) for k, v in got.items()}})


TWIST_LETTERS = ("s1", "s1^-1", "s2", "s2^-1")


def twist_examples_check() -> VerificationReport:
    with timed() as t:
        bad = None
        if half_dehn_twist("s2^-1", "A12") != SkeinElement.loop("A13d"):
            bad = "psi_{s2^-1}(A12) != A13d"
        elif half_dehn_twist("s2", "A23") != SkeinElement.loop("A23"):
            bad = "psi_{s2}(A23) != A23"
    return VerificationReport("skein.twist-examples", "psi_{s2^-1}(A12) = A13d and psi_{s2}(A23) = A23",
                              "FAIL" if bad else "PASS", witness=bad, ms=t.ms)


def twist_paths_check(letters=TWIST_LETTERS, loops=GENERATOR_LOOPS) -> VerificationReport:
    """Fast path and diagram path agree for every generator loop and twist generator."""
    with timed() as t:
        bad = None
        count = 0
        for w in letters:
            S = BraidWord.parse(w)
            for l in loops:
                x = phi(l)
                a = _twist_fast(S, x)
                b = _twist_diagram(S, x)
                count += 1
                if a != b:
                    bad = f"psi_{w}({l}): fast {a.to_text()} vs diagram {b.to_text()}"
                    break
            if bad:
                break
    return VerificationReport("skein.twist-paths", "half Dehn twists: table path vs tensor path",
                              "FAIL" if bad else "PASS", witness=bad, ms=t.ms,
                              params={"letters": list(letters), "loops": list(loops), "pairs": count})


def braid_compatibility_check(words=("s1", "s2", "s1^-1", "s2^-1", "s1 s2 s1"), dims=(2, 2, 2),
                              qh=QH) -> VerificationReport:
    """phi o Psi_S = psi_S o phi on generators, and Psi_{(s1 s2)^3} = id."""
    gens = ("C1", "C2", "C3", "C123", "C12", "C23", "C13")
    with timed() as t:
        bad = None
        for w in list(words) + ["(s1 s2)^3"]:
            S = BraidWord.parse("s1 s2") ** 3 if w.startswith("(") else BraidWord.parse(w)
            for g in gens:
                x = C[g]
                tensor_side = braid_act(S, realize(x, source_dims(S, dims), qh), qh)
                if w.startswith("("):
                    skein_side = realize(x, dims, qh)
                else:
                    skein_side = realize(_twist_fast(S, x), dims, qh)
                if tensor_side != skein_side:
                    bad = f"S = {w}, generator {g}"
                    break
            if bad:
                break
    return VerificationReport(f"skein.braid-compatibility[{','.join(map(str, dims))}]",
                              "twists on loops match braided R-matrix conjugation",
                              "FAIL" if bad else "PASS", witness=bad, ms=t.ms,
                              params={"words": list(words) + ["(s1 s2)^3"]})
