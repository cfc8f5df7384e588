"""Exact Laurent polynomials over Q in a fixed symbol set, and truncated series.

The symbol set is fixed: ``qh`` (q^{1/2}), ``u``, ``v``, ``A`` (theta^2) and
``z1h..z4h`` (q^{m_i/2}).  Exponent vectors are packed into a single Python
int (balanced base 2**21) so that multiplying monomials is an int addition.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Callable, Dict, Iterable, Mapping, Tuple, Union

SYMBOLS: Tuple[str, ...] = ("qh", "u", "v", "A", "z1h", "z2h", "z3h", "z4h")
NSYM = len(SYMBOLS)
_INDEX = {s: i for i, s in enumerate(SYMBOLS)}

_BITS = 21
_BASE = 1 << _BITS
_HALF = _BASE >> 1

Scalar = Union[int, Fraction]


class NonUnitDivisor(ArithmeticError):
    """Raised when a division is not exact in the Laurent ring."""


class UnexpandedSymbol(ValueError):
    """Raised when a series expansion meets a symbol it cannot expand."""


class DivisionObstruction(ArithmeticError):
    """Raised when a series is divided by one of higher valuation."""


def pack(exps: Iterable[int]) -> int:
    key = 0
    for i, e in enumerate(exps):
        if not -_HALF < e < _HALF:
            raise OverflowError("exponent out of range")
        key += e << (_BITS * i)
    return key


def unpack(key: int) -> Tuple[int, ...]:
    out = []
    for _ in range(NSYM):
        e = ((key + _HALF) % _BASE) - _HALF
        out.append(e)
        key = (key - e) >> _BITS
    return tuple(out)


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c.numerator)
    return c


class LaurentPoly:
    """Immutable sparse Laurent polynomial with rational coefficients."""

    __slots__ = ("_t", "_hash")

    def __init__(self, terms: Mapping[int, Scalar] | None = None):
        # terms: packed exponent -> coefficient; zero coefficients dropped
        if terms:
            self._t = {k: _norm(c) for k, c in terms.items() if c}
        else:
            self._t = {}
        self._hash = None

    @classmethod
    def _raw(cls, d: Dict[int, Scalar]) -> "LaurentPoly":
        p = cls.__new__(cls)
        p._t = d
        p._hash = None
        return p

    # -- constructors -------------------------------------------------
    @classmethod
    def const(cls, c: Scalar) -> "LaurentPoly":
        return cls._raw({0: _norm(c)} if c else {})

    @classmethod
    def monomial(cls, exps: Mapping[str, int] | Iterable[int], coeff: Scalar = 1) -> "LaurentPoly":
        if isinstance(exps, Mapping):
            vec = [0] * NSYM
            for s, e in exps.items():
                vec[_INDEX[s]] += e
            exps = vec
        return cls._raw({pack(exps): _norm(coeff)} if coeff else {})

    @classmethod
    def symbol(cls, name: str) -> "LaurentPoly":
        return cls.monomial({name: 1})

    @classmethod
    def from_terms(cls, items: Iterable[Tuple[Tuple[int, ...], Scalar]]) -> "LaurentPoly":
        d: Dict[int, Scalar] = {}
        for exps, c in items:
            k = pack(exps)
            d[k] = d.get(k, 0) + c
        return cls(d)

    # -- inspection ---------------------------------------------------
    def terms(self) -> Iterable[Tuple[Tuple[int, ...], Scalar]]:
        return ((unpack(k), c) for k, c in self._t.items())

    def sorted_terms(self):
        return sorted(self.terms())

    def __len__(self):
        return len(self._t)

    def __bool__(self):
        return bool(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def is_monomial(self) -> bool:
        return len(self._t) == 1

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and 0 in self._t)

    def constant_term(self) -> Scalar:
        return self._t.get(0, 0)

    def symbols(self) -> set:
        used = set()
        for exps, _ in self.terms():
            used.update(SYMBOLS[i] for i, e in enumerate(exps) if e)
        return used

    def degree_range(self, name: str) -> Tuple[int, int]:
        i = _INDEX[name]
        es = [exps[i] for exps, _ in self.terms()]
        if not es:
            return (0, 0)
        return (min(es), max(es))

    # -- arithmetic ---------------------------------------------------
    @staticmethod
    def _coerce(x) -> "LaurentPoly":
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, (int, Fraction)):
            return LaurentPoly.const(x)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other._t:
            return self
        if not self._t:
            return other
        d = dict(self._t)
        for k, c in other._t.items():
            s = d.get(k, 0) + c
            if s:
                d[k] = _norm(s)
            else:
                d.pop(k, None)
        return LaurentPoly._raw(d)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({k: -c for k, c in self._t.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return ZERO
            return LaurentPoly._raw({k: _norm(c * other) for k, c in self._t.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        a, b = self._t, other._t
        if len(a) < len(b):
            a, b = b, a
        d: Dict[int, Scalar] = {}
        get = d.get
        for kb, cb in b.items():
            for ka, ca in a.items():
                k = ka + kb
                d[k] = get(k, 0) + ca * cb
        return LaurentPoly._raw({k: _norm(c) for k, c in d.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if not self.is_monomial():
                raise NonUnitDivisor("negative power of a non-monomial")
            (k, c), = self._t.items()
            return LaurentPoly._raw({-k * (-n): _norm(Fraction(1, 1) / c ** (-n))})
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse_monomial(self) -> "LaurentPoly":
        return self ** -1

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError
            inv = Fraction(1) / other
            return LaurentPoly._raw({k: _norm(c * inv) for k, c in self._t.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return exact_divide(self, other)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return exact_divide(other, self)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._t == other._t

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    # -- maps ---------------------------------------------------------
    def map_exponents(self, fn: Callable[[Tuple[int, ...]], Tuple[int, ...]]) -> "LaurentPoly":
        d: Dict[int, Scalar] = {}
        for exps, c in self.terms():
            k = pack(fn(exps))
            d[k] = d.get(k, 0) + c
        return LaurentPoly(d)

    def bar(self) -> "LaurentPoly":
        """The involution qh -> qh^{-1}."""
        return self.map_exponents(lambda e: (-e[0],) + e[1:])

    def subs(self, mapping: Mapping[str, object]) -> "LaurentPoly":
        """Substitute symbols by LaurentPoly values (units where powers are negative)."""
        idx = {_INDEX[s]: v for s, v in mapping.items()}
        cache: Dict[Tuple[int, int], object] = {}
        out = ZERO
        for exps, c in self.terms():
            rest = list(exps)
            term = LaurentPoly.const(c)
            for i, val in idx.items():
                e = rest[i]
                if e:
                    rest[i] = 0
                    key = (i, e)
                    if key not in cache:
                        cache[key] = val ** e
                    term = term * cache[key]
            out = out + term * LaurentPoly._raw({pack(rest): 1})
        return out

    def evaluate(self, values: Mapping[str, Scalar]):
        """Evaluate at rational values; symbols missing from ``values`` must not occur."""
        total = Fraction(0)
        vals = [values.get(s) for s in SYMBOLS]
        for exps, c in self.terms():
            t = Fraction(c)
            for i, e in enumerate(exps):
                if e:
                    if vals[i] is None:
                        raise KeyError(SYMBOLS[i])
                    t *= Fraction(vals[i]) ** e
            total += t
        return _norm(total)

    def eval_qh(self, qh):
        """Evaluate a polynomial in qh alone at a ring value (Fraction, series, ...)."""
        out = 0
        for exps, c in self.sorted_terms():
            if any(exps[1:]):
                raise UnexpandedSymbol("polynomial involves symbols other than qh")
            out = out + c * qh ** exps[0]
        return out

    def coefficients_in(self, name: str) -> Dict[int, "LaurentPoly"]:
        """Split as sum over powers of one symbol: exponent -> coefficient poly."""
        i = _INDEX[name]
        buckets: Dict[int, Dict[int, Scalar]] = {}
        for k, c in self._t.items():
            e = unpack(k)[i]
            buckets.setdefault(e, {})[k - (e << (_BITS * i))] = c
        return {e: LaurentPoly._raw(d) for e, d in buckets.items()}

    # -- text ---------------------------------------------------------
    def to_text(self) -> str:
        """Canonical serialization: sorted exponent vectors, explicit rationals."""
        if not self._t:
            return "0"
        parts = []
        for exps, c in self.sorted_terms():
            mono = "*".join(
                SYMBOLS[i] if e == 1 else f"{SYMBOLS[i]}^{e}" for i, e in enumerate(exps) if e
            )
            coeff = str(c)
            if not mono:
                parts.append(coeff)
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{coeff}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"LaurentPoly({self.to_text()})"

    __str__ = to_text


ZERO = LaurentPoly._raw({})
ONE = LaurentPoly._raw({0: 1})
QH = LaurentPoly.symbol("qh")
Q = QH * QH
QINV = Q ** -1
U = LaurentPoly.symbol("u")
V = LaurentPoly.symbol("v")
A = LaurentPoly.symbol("A")
ZH = tuple(LaurentPoly.symbol(f"z{i}h") for i in range(1, 5))
Z = tuple(w * w for w in ZH)


def poly(x) -> LaurentPoly:
    return LaurentPoly._coerce(x)


def _lex_lead(d: Dict[Tuple[int, ...], Scalar]):
    return max(d)


def exact_divide(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """a / b when b divides a in the Laurent ring; NonUnitDivisor otherwise."""
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    if b.is_monomial():
        (kb, cb), = b._t.items()
        inv = Fraction(1) / cb
        return LaurentPoly._raw({k - kb: _norm(c * inv) for k, c in a._t.items()})
    if not a:
        return ZERO
    # shift both into honest polynomials, then lex-order long division
    ta = dict(a.terms())
    tb = dict(b.terms())
    mina = [min(e[i] for e in ta) for i in range(NSYM)]
    minb = [min(e[i] for e in tb) for i in range(NSYM)]
    ra = {tuple(x - m for x, m in zip(e, mina)): c for e, c in ta.items()}
    pb = {tuple(x - m for x, m in zip(e, minb)): c for e, c in tb.items()}
    lb = _lex_lead(pb)
    cb = Fraction(pb[lb])
    quot: Dict[Tuple[int, ...], Scalar] = {}
    steps = 0
    limit = 10 * (len(ra) + 1) * (len(pb) + 1) + 10000
    while ra:
        steps += 1
        if steps > limit:
            raise NonUnitDivisor("division did not terminate")
        lr = _lex_lead(ra)
        shift = tuple(x - y for x, y in zip(lr, lb))
        if min(shift) < 0:
            raise NonUnitDivisor(f"{b.to_text()} does not divide {a.to_text()}")
        c = _norm(Fraction(ra[lr]) / cb)
        quot[shift] = c
        for e, cc in pb.items():
            k = tuple(x + y for x, y in zip(e, shift))
            s = ra.get(k, 0) - c * cc
            if s:
                ra[k] = _norm(s)
            else:
                ra.pop(k, None)
    offset = [x - y for x, y in zip(mina, minb)]
    return LaurentPoly.from_terms((tuple(x + o for x, o in zip(e, offset)), c) for e, c in quot.items())


# -- q-numbers -------------------------------------------------------------

def qnum_at(n: int, q):
    """[n]_q = (q^n - q^-n)/(q - q^-1), evaluated without division."""
    if n == 0:
        return q * 0
    if n < 0:
        return -qnum_at(-n, q)
    total = q * 0
    for k in range(n):
        total = total + q ** (n - 1 - 2 * k)
    return total


def qnum(n: int) -> LaurentPoly:
    return qnum_at(n, Q)


def qfact_at(n: int, q):
    if n < 0:
        raise ValueError("qfact needs n >= 0")
    out = q ** 0
    for k in range(2, n + 1):
        out = out * qnum_at(k, q)
    return out


def qfact(n: int) -> LaurentPoly:
    return qfact_at(n, Q)


def chi(m, q=Q):
    """chi_m = q^m + q^-m."""
    return q ** m + q ** (-m)


# -- truncated power series -------------------------------------------------

class TruncatedSeries:
    """Power series in eps with rational coefficients, truncated at eps^order."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Iterable[Scalar], order: int):
        cs = [Fraction(c) for c in coeffs][: order + 1]
        cs += [Fraction(0)] * (order + 1 - len(cs))
        self.coeffs = cs
        self.order = order

    @classmethod
    def exp(cls, a: Scalar, order: int) -> "TruncatedSeries":
        """exp(a * eps) truncated."""
        a = Fraction(a)
        return cls([a ** n / factorial(n) for n in range(order + 1)], order)

    def _coerce(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            if other.order != self.order:
                raise ValueError("mismatched truncation orders")
            return other
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries([other], self.order)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return TruncatedSeries([a + b for a, b in zip(self.coeffs, other.coeffs)], self.order)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries([-a for a in self.coeffs], self.order)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries([a * other for a in self.coeffs], self.order)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n = self.order
        a, b = self.coeffs, other.coeffs
        out = [Fraction(0)] * (n + 1)
        for i, x in enumerate(a):
            if x:
                for j in range(n + 1 - i):
                    if b[j]:
                        out[i + j] += x * b[j]
        return TruncatedSeries(out, n)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = TruncatedSeries([1], self.order)
        for _ in range(k):
            out = out * self
        return out

    def valuation(self) -> int | None:
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def inverse(self) -> "TruncatedSeries":
        if not self.coeffs[0]:
            raise DivisionObstruction("series with zero constant term is not invertible")
        n = self.order
        a = self.coeffs
        inv = [Fraction(0)] * (n + 1)
        inv[0] = 1 / a[0]
        for k in range(1, n + 1):
            s = sum(a[j] * inv[k - j] for j in range(1, k + 1))
            inv[k] = -s / a[0]
        return TruncatedSeries(inv, n)

    def divide(self, other: "TruncatedSeries") -> "TruncatedSeries":
        """Quotient when other has valuation v and self is O(eps^v).

        The result is known to order ``self.order - v`` and is padded with zeros
        (its ``known_order`` is reported by the caller, not stored).
        """
        v = other.valuation()
        if v is None:
            raise DivisionObstruction("division by zero series")
        for i in range(v):
            if self.coeffs[i]:
                raise DivisionObstruction(f"numerator has nonzero eps^{i} term")
        m = self.order - v
        num = TruncatedSeries(self.coeffs[v:], m)
        den = TruncatedSeries(other.coeffs[v:], m)
        return TruncatedSeries((num * den.inverse()).coeffs, self.order)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / other)
        return self.divide(other)

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash((tuple(self.coeffs), self.order))

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i]

    def __repr__(self):
        body = " + ".join(f"{c}*eps^{i}" for i, c in enumerate(self.coeffs) if c) or "0"
        return f"{body} + O(eps^{self.order + 1})"


def series_expand_q1(p: LaurentPoly, order: int = 3) -> TruncatedSeries:
    """Substitute qh -> exp(eps/2), i.e. q = e^eps, and truncate at eps^order."""
    bad = p.symbols() - {"qh"}
    if bad:
        raise UnexpandedSymbol(f"cannot expand symbols {sorted(bad)}")
    out = TruncatedSeries([], order)
    for exps, c in p.terms():
        out = out + TruncatedSeries.exp(Fraction(exps[0], 2), order) * c
    return out
