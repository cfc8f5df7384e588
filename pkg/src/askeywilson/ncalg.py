"""Noncommutative polynomials, PBW rewriting for aw(3)/saw(3)/Zhedanov, Casimir, potentials."""

from __future__ import annotations

import itertools
import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .ring import ONE, Q, QINV, ZERO, ZH, LaurentPoly, poly, qnum

DEFAULT_BUDGET = 100_000


class StepBudgetExceeded(RuntimeError):
    """Normalization used more rule applications than allowed (possible non-termination)."""

    def __init__(self, msg, partial=None):
        super().__init__(msg)
        self.partial = partial


def step_budget(default=DEFAULT_BUDGET) -> int:
    env = os.environ.get("AWW_STEP_BUDGET")
    return int(env) if env else default


class Alphabet:
    """Ordered non-central generators plus commuting central generators."""

    def __init__(self, noncentral: Sequence[str], central: Sequence[str] = ()):
        names = list(noncentral) + list(central)
        if len(set(names)) != len(names):
            raise ValueError("generator names must be unique")
        self.noncentral = tuple(noncentral)
        self.central = tuple(central)
        self._nc = {n: i for i, n in enumerate(self.noncentral)}
        self._c = {n: i for i, n in enumerate(self.central)}

    def __eq__(self, other):
        return isinstance(other, Alphabet) and (self.noncentral, self.central) == (other.noncentral, other.central)

    def __hash__(self):
        return hash((self.noncentral, self.central))

    def __repr__(self):
        return f"Alphabet({self.noncentral}, central={self.central})"

    def gen(self, name: str) -> "NcPoly":
        if name in self._nc:
            return NcPoly(self, {((self._nc[name],), self.zero_exp()): ONE})
        if name in self._c:
            e = [0] * len(self.central)
            e[self._c[name]] = 1
            return NcPoly(self, {((), tuple(e)): ONE})
        raise KeyError(name)

    def gens(self, *names):
        return [self.gen(n) for n in names]

    def zero_exp(self):
        return (0,) * len(self.central)

    def one(self) -> "NcPoly":
        return NcPoly(self, {((), self.zero_exp()): ONE})

    def scalar(self, c) -> "NcPoly":
        return NcPoly(self, {((), self.zero_exp()): poly(c)})

    def word(self, names: Sequence[str]) -> "NcPoly":
        out = self.one()
        for n in names:
            out = out * self.gen(n)
        return out

    def index(self, name):
        return self._nc[name]


Key = Tuple[Tuple[int, ...], Tuple[int, ...]]


class NcPoly:
    """Sum of (word, central exponents) with LaurentPoly coefficients."""

    __slots__ = ("alphabet", "terms")

    def __init__(self, alphabet: Alphabet, terms: Mapping[Key, LaurentPoly] | None = None):
        self.alphabet = alphabet
        self.terms: Dict[Key, LaurentPoly] = {k: v for k, v in (terms or {}).items() if v}

    def _coerce(self, other) -> "NcPoly":
        if isinstance(other, NcPoly):
            if other.alphabet != self.alphabet:
                raise ValueError("alphabet mismatch")
            return other
        return self.alphabet.scalar(other)

    def __add__(self, other):
        other = self._coerce(other)
        t = dict(self.terms)
        for k, v in other.terms.items():
            s = t.get(k, ZERO) + v
            if s:
                t[k] = s
            else:
                t.pop(k, None)
        return NcPoly(self.alphabet, t)

    __radd__ = __add__

    def __neg__(self):
        return NcPoly(self.alphabet, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "NcPoly":
        c = poly(c)
        if not c:
            return NcPoly(self.alphabet)
        return NcPoly(self.alphabet, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, NcPoly):
            return self.scale(other)
        other = self._coerce(other)
        t: Dict[Key, LaurentPoly] = {}
        for (w1, e1), c1 in self.terms.items():
            for (w2, e2), c2 in other.terms.items():
                k = (w1 + w2, tuple(a + b for a, b in zip(e1, e2)))
                s = t.get(k, ZERO) + c1 * c2
                if s:
                    t[k] = s
                else:
                    t.pop(k, None)
        return NcPoly(self.alphabet, t)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        out = self.alphabet.one()
        for _ in range(n):
            out = out * self
        return out

    def __truediv__(self, c):
        return NcPoly(self.alphabet, {k: v / c for k, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, NcPoly):
            other = self._coerce(other)
        return self.alphabet == other.alphabet and self.terms == other.terms

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> int:
        return max((len(w) for w, _ in self.terms), default=0)

    def total_degree(self) -> int:
        return max((len(w) + sum(e) for w, e in self.terms), default=0)

    def map_coefficients(self, fn) -> "NcPoly":
        return NcPoly(self.alphabet, {k: fn(v) for k, v in self.terms.items()})

    def bar(self) -> "NcPoly":
        return self.map_coefficients(lambda c: c.bar())

    def coefficient(self, word: Sequence[str], central: Mapping[str, int] | None = None) -> LaurentPoly:
        a = self.alphabet
        e = [0] * len(a.central)
        for n, k in (central or {}).items():
            e[a._c[n]] = k
        return self.terms.get((tuple(a.index(n) for n in word), tuple(e)), ZERO)

    def specialize_centrals(self, values: Mapping[str, LaurentPoly], target: Alphabet) -> "NcPoly":
        """Replace central generators by scalars, moving into ``target``'s alphabet."""
        a = self.alphabet
        remap = [target.index(n) for n in a.noncentral]
        out = NcPoly(target)
        t: Dict[Key, LaurentPoly] = {}
        cache: Dict[Tuple[int, int], LaurentPoly] = {}
        for (w, e), c in self.terms.items():
            coeff = c
            rest = [0] * len(target.central)
            for i, k in enumerate(e):
                if not k:
                    continue
                name = a.central[i]
                if name in values:
                    if (i, k) not in cache:
                        cache[(i, k)] = values[name] ** k
                    coeff = coeff * cache[(i, k)]
                else:
                    rest[target._c[name]] += k
            key = (tuple(remap[x] for x in w), tuple(rest))
            s = t.get(key, ZERO) + coeff
            if s:
                t[key] = s
            else:
                t.pop(key, None)
        out.terms = t
        return out

    def substitute(self, images: Mapping[str, object], one, scalar=lambda c: c):
        """Evaluate in another ring: ``images`` maps every generator name to a value.

        Values need ``*``, ``+`` and ``scale``; ``scalar`` converts coefficients.
        """
        a = self.alphabet
        cache = {}

        def power(name, k):
            if (name, k) not in cache:
                v = one
                for _ in range(k):
                    v = v * images[name]
                cache[(name, k)] = v
            return cache[(name, k)]

        total = one.scale(0)
        for (w, e), c in self.sorted_terms():
            term = one
            for i, k in enumerate(e):
                if k:
                    term = term * power(a.central[i], k)
            for x in w:
                term = term * images[a.noncentral[x]]
            total = total + term.scale(scalar(c))
        return total

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (len(kv[0][0]) + sum(kv[0][1]), kv[0]))

    def monomial_text(self, key: Key) -> str:
        a = self.alphabet
        w, e = key
        parts = [a.noncentral[x] for x in w]
        cparts = []
        for i, k in enumerate(e):
            if k == 1:
                cparts.append(a.central[i])
            elif k:
                cparts.append(f"{a.central[i]}^{k}")
        return "*".join(parts + cparts) or "1"

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({c.to_text()})*{self.monomial_text(k)}" for k, c in self.sorted_terms())

    def __repr__(self):
        return f"NcPoly({self.to_text()})"

    __str__ = to_text


def commutator(x: NcPoly, y: NcPoly) -> NcPoly:
    return x * y - y * x


def q_commutator(x: NcPoly, y: NcPoly, q=Q) -> NcPoly:
    return x.scale(q) * y - (y * x).scale(q ** -1)


# -- rewriting -----------------------------------------------------------------

@dataclass(frozen=True)
class Rule:
    lhs: Tuple[int, ...]
    rhs: NcPoly
    anchor: str = ""
    decreasing: bool = True


class RewriteSystem:
    """Fixed rule set on words; rules are pairs of letters.

    ``central_values`` turns the system into a Zhedanov-type specialization:
    inputs have their centrals replaced before rewriting.
    """

    def __init__(self, name: str, alphabet: Alphabet, rules: Sequence[Rule],
                 central_values: Mapping[str, LaurentPoly] | None = None,
                 source_alphabet: Alphabet | None = None,
                 strategy: str = "leftmost"):
        self.name = name
        self.alphabet = alphabet
        self.rules = {r.lhs: r for r in rules}
        self.central_values = dict(central_values or {})
        self.source_alphabet = source_alphabet
        if strategy not in ("leftmost", "rightmost"):
            raise ValueError(strategy)
        self.strategy = strategy
        self.measure = "(total degree, inversions) for swap rules; empirical for quotient rules"
        self._memo: Dict[Tuple[int, ...], Dict[Key, LaurentPoly]] = {}
        for r in rules:
            if r.decreasing and not self._decreases(r):
                raise ValueError(f"rule {r.lhs} does not decrease the measure")

    def with_strategy(self, strategy: str) -> "RewriteSystem":
        return RewriteSystem(self.name, self.alphabet, list(self.rules.values()),
                             self.central_values, self.source_alphabet, strategy)

    @staticmethod
    def _measure(word):
        inv = sum(1 for i in range(len(word)) for j in range(i + 1, len(word)) if word[i] > word[j])
        return (len(word), inv)

    def _decreases(self, rule: Rule) -> bool:
        top = self._measure(rule.lhs)
        return all(self._measure(w) < top for (w, _e) in rule.rhs.terms)

    def _find(self, word):
        positions = range(len(word) - 1)
        if self.strategy == "rightmost":
            positions = reversed(positions)
        for p in positions:
            if (word[p], word[p + 1]) in self.rules:
                return p
        return None

    def prepare(self, x: NcPoly) -> NcPoly:
        if self.central_values and x.alphabet != self.alphabet:
            return x.specialize_centrals(self.central_values, self.alphabet)
        if x.alphabet != self.alphabet:
            raise ValueError("input over a different alphabet")
        return x

    def normalize(self, x: NcPoly, budget: Optional[int] = None) -> NcPoly:
        if budget is None:
            budget = step_budget()
        x = self.prepare(x)
        if not x.terms:
            return x
        counter = [0]
        out: Dict[Key, LaurentPoly] = {}
        for (w, e), c in x.terms.items():
            for (w2, e2), c2 in self._nf_word(w, counter, budget, set()).items():
                k = (w2, tuple(a + b for a, b in zip(e, e2)))
                s = out.get(k, ZERO) + c * c2
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return NcPoly(self.alphabet, out)

    def _nf_word(self, w, counter, budget, active) -> Dict[Key, LaurentPoly]:
        memo = self._memo.get(w)
        if memo is not None:
            return memo
        p = self._find(w)
        z = self.alphabet.zero_exp()
        if p is None:
            res = {(w, z): ONE}
            self._memo[w] = res
            return res
        if w in active:
            raise StepBudgetExceeded(f"rewriting cycle through word {w}")
        counter[0] += 1
        if counter[0] > budget:
            raise StepBudgetExceeded(f"step budget {budget} exceeded at word {w}")
        active.add(w)
        rule = self.rules[(w[p], w[p + 1])]
        pre, post = w[:p], w[p + 2:]
        out: Dict[Key, LaurentPoly] = {}
        for (rw, re), rc in rule.rhs.terms.items():
            for (w2, e2), c2 in self._nf_word(pre + rw + post, counter, budget, active).items():
                k = (w2, tuple(a + b for a, b in zip(re, e2)))
                s = out.get(k, ZERO) + rc * c2
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        active.discard(w)
        self._memo[w] = out
        return out

    def is_normal(self, x: NcPoly) -> bool:
        return all(self._find(w) is None for (w, _e) in x.terms)

    def dump(self) -> List[dict]:
        a = self.alphabet
        out = []
        for lhs, r in sorted(self.rules.items()):
            out.append({
                "lhs": "*".join(a.noncentral[i] for i in lhs),
                "rhs": r.rhs.to_text(),
                "anchor": r.anchor,
                "measure_decreasing": r.decreasing,
            })
        return out


# -- the Askey-Wilson family ---------------------------------------------------

AW_GENS = ("C12", "C23", "C13")
AW_CENTRALS = ("C1", "C2", "C3", "C123")
AW = Alphabet(AW_GENS, AW_CENTRALS)
ZH_ALPHABET = Alphabet(AW_GENS)

QQ_ = Q + QINV            # q + q^-1
QM = Q - QINV             # q - q^-1
Q2M = Q * Q - QINV * QINV  # q^2 - q^-2


def _aw_combos(alph: Alphabet, centrals):
    c1, c2, c3, c123 = centrals
    alpha = c1 * c2 + c3 * c123
    beta = c2 * c3 + c1 * c123
    gamma = c3 * c1 + c2 * c123
    return alpha, beta, gamma


def aw_centrals(alph: Alphabet = AW, values=None):
    if values is None:
        return alph.gens(*AW_CENTRALS)
    return [alph.scalar(values[n]) for n in AW_CENTRALS]


def swap_rules(alph: Alphabet, centrals) -> List[Rule]:
    C12, C23, C13 = alph.gens(*AW_GENS)
    alpha, beta, gamma = _aw_combos(alph, centrals)
    i12, i23, i13 = (alph.index(n) for n in AW_GENS)
    return [
        Rule((i13, i23), (C23 * C13).scale(Q * Q) - alpha.scale(Q * QM) + C12.scale(Q * Q2M),
             "C13 C23 solved from the C12 relation"),
        Rule((i13, i12), (C12 * C13).scale(QINV * QINV) + beta.scale(QINV * QM) - C23.scale(QINV * Q2M),
             "C13 C12 solved from the C23 relation"),
        Rule((i23, i12), (C12 * C23).scale(Q * Q) - gamma.scale(Q * QM) + C13.scale(Q * Q2M),
             "C23 C12 solved from the C13 relation"),
    ]


def special_value(centrals):
    """(q+q^-1)^2 - C123^2 - C1^2 - C2^2 - C3^2 - C123 C1 C2 C3."""
    c1, c2, c3, c123 = centrals
    return c1.alphabet.scalar(QQ_ * QQ_) - c123 * c123 - c1 * c1 - c2 * c2 - c3 * c3 - c123 * c1 * c2 * c3


def quotient_rule(alph: Alphabet, centrals) -> Rule:
    C12, C23, C13 = alph.gens(*AW_GENS)
    alpha, beta, gamma = _aw_combos(alph, centrals)
    rest = (C12 * C23 * C13).scale(Q) + (C12 * C12).scale(Q * Q) + (C13 * C13).scale(Q * Q) \
        - (C12 * alpha).scale(Q) - (C23 * beta).scale(QINV) - (C13 * gamma).scale(Q)
    rhs = (special_value(centrals) - rest).scale(Q * Q)
    i23 = alph.index("C23")
    return Rule((i23, i23), rhs, "C23^2 eliminated with the Casimir value", decreasing=False)


def zhedanov_values() -> Dict[str, LaurentPoly]:
    """C_i -> z_i + z_i^-1 with z_i = q^{m_i}; C123 uses z4."""
    z = [w * w for w in ZH]
    return {"C1": z[0] + z[0] ** -1, "C2": z[1] + z[1] ** -1,
            "C3": z[2] + z[2] ** -1, "C123": z[3] + z[3] ** -1}


def build_system(kind: str, strategy: str = "leftmost") -> RewriteSystem:
    """kind in {aw3, saw3, zh, szh}."""
    if kind in ("aw3", "saw3"):
        alph = AW
        cents = aw_centrals(alph)
        values = None
    elif kind in ("zh", "szh"):
        alph = ZH_ALPHABET
        values = zhedanov_values()
        cents = aw_centrals(alph, values)
    else:
        raise ValueError(f"unknown algebra {kind}")
    rules = swap_rules(alph, cents)
    if kind in ("saw3", "szh"):
        rules.append(quotient_rule(alph, cents))
    return RewriteSystem(kind, alph, rules, central_values=values,
                         source_alphabet=AW if values else None, strategy=strategy)


_SYSTEMS: Dict[Tuple[str, str], RewriteSystem] = {}


def system(kind: str, strategy: str = "leftmost") -> RewriteSystem:
    key = (kind, strategy)
    if key not in _SYSTEMS:
        _SYSTEMS[key] = build_system(kind, strategy)
    return _SYSTEMS[key]


def normalize(x: NcPoly, kind="aw3", budget=None, strategy="leftmost") -> NcPoly:
    return system(kind, strategy).normalize(x, budget)


def relation_residuals(alph: Alphabet = AW, centrals=None):
    """The three defining relations as polynomials lhs - rhs (times q^2 - q^-2)."""
    C12, C23, C13 = alph.gens(*AW_GENS)
    cents = centrals if centrals is not None else aw_centrals(alph)
    alpha, beta, gamma = _aw_combos(alph, cents)

    def rel(x, y, z, comb):
        # (q^2-q^-2) x + [y, z]_q - (q - q^-1) comb
        return x.scale(Q2M) + q_commutator(y, z) - comb.scale(QM)

    return {
        "C12": rel(C12, C23, C13, alpha),
        "C23": rel(C23, C13, C12, beta),
        "C13": rel(C13, C12, C23, gamma),
    }


def casimir_omega(alph: Alphabet = AW, centrals=None) -> NcPoly:
    C12, C23, C13 = alph.gens(*AW_GENS)
    cents = centrals if centrals is not None else aw_centrals(alph)
    alpha, beta, gamma = _aw_combos(alph, cents)
    return (C12 * C23 * C13).scale(Q) + (C12 * C12).scale(Q * Q) + (C23 * C23).scale(QINV * QINV) \
        + (C13 * C13).scale(Q * Q) - (C12 * alpha).scale(Q) - (C23 * beta).scale(QINV) - (C13 * gamma).scale(Q)


def check_central(omega: NcPoly, kind: str = "aw3", budget=None):
    from .report import VerificationReport, timed

    with timed() as t:
        rs = system(kind)
        residues = {}
        for name in AW_GENS + AW_CENTRALS:
            g = omega.alphabet.gen(name)
            residues[name] = rs.normalize(omega * g - g * omega, budget)
    bad = {k: v for k, v in residues.items() if v}
    if bad:
        name, v = next(iter(sorted(bad.items())))
        return VerificationReport("aw3.omega-central", "Casimir centrality", "FAIL",
                                  witness=f"[Omega,{name}] = {v.to_text()}", ms=t.ms,
                                  params={"algebra": kind})
    return VerificationReport("aw3.omega-central", "Casimir centrality", "PASS", ms=t.ms,
                              params={"algebra": kind, "checked": list(residues)})


def pbw_basis(algebra: str, max_degree: int, with_centrals: bool = False) -> List[NcPoly]:
    """Ordered monomials C12^i C23^j C13^k of degree <= max_degree (j <= 1 for saw)."""
    alph = AW
    out = []
    for d in range(max_degree + 1):
        for i in range(d, -1, -1):
            for j in range(d - i, -1, -1):
                k = d - i - j
                if algebra in ("saw3", "szh") and j > 1:
                    continue
                word = ["C12"] * i + ["C23"] * j + ["C13"] * k
                if not with_centrals:
                    out.append(alph.word(word))
                    continue
                for cd in range(max_degree - d + 1):
                    for e in _compositions(cd, len(AW_CENTRALS)):
                        m = alph.word(word)
                        for n, k2 in zip(AW_CENTRALS, e):
                            m = m * alph.gen(n) ** k2
                        out.append(m)
    if algebra in ("zh", "szh"):
        out = [m.specialize_centrals(zhedanov_values(), ZH_ALPHABET) for m in out]
    return out


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def random_poly(rng: random.Random, max_len: int = 5, terms: int = 3, alph: Alphabet = AW) -> NcPoly:
    out = NcPoly(alph)
    for _ in range(terms):
        w = [rng.choice(AW_GENS) for _ in range(rng.randint(0, max_len))]
        c = LaurentPoly.monomial({"qh": 2 * rng.randint(-2, 2)}, rng.randint(-3, 3) or 1)
        m = alph.word(w).scale(c)
        if rng.random() < 0.3:
            m = m * alph.gen(rng.choice(AW_CENTRALS))
        out = out + m
    return out


OVERLAP_WORDS = (("C13", "C23", "C12"), ("C13", "C13", "C12"), ("C23", "C23", "C12"))


def confluence_sample_check(kind: str = "aw3", samples: int = 200, seed: int = 5, max_len: int = 5):
    """Leftmost and rightmost rewriting reach the same normal form on the overlap words and random inputs."""
    from .report import VerificationReport, timed

    rng = random.Random(seed)
    inputs = [AW.word(w) for w in OVERLAP_WORDS]
    inputs += [random_poly(rng, max_len=max_len) for _ in range(samples)]
    with timed() as t:
        bad = None
        for x in inputs:
            if normalize(x, kind) != normalize(x, kind, strategy="rightmost"):
                bad = x.to_text()
                break
    return VerificationReport(f"{kind}.confluence-sample", "PBW normal form independent of rewrite order",
                              "FAIL" if bad else "PASS", witness=bad, ms=t.ms,
                              params={"algebra": kind, "samples": samples, "seed": seed})


# -- cyclic words and the Calabi-Yau potential ----------------------------------

X_ALPHABET = Alphabet(("x1", "x2", "x3"), ("xi2", "xi4", "xi4p", "xi6"))


def _min_rotation(w: Tuple[int, ...]) -> Tuple[int, ...]:
    if not w:
        return w
    return min(w[i:] + w[:i] for i in range(len(w)))


@dataclass(frozen=True)
class CyclicWord:
    word: Tuple[int, ...]

    @classmethod
    def of(cls, names: Sequence[str], alph: Alphabet = X_ALPHABET) -> "CyclicWord":
        return cls(_min_rotation(tuple(alph.index(n) for n in names)))


class CyclicPoly:
    """Linear combination of cyclic words with NcPoly-central coefficients."""

    def __init__(self, alph: Alphabet = X_ALPHABET):
        self.alphabet = alph
        self.terms: Dict[CyclicWord, NcPoly] = {}

    def add(self, names: Sequence[str], coeff) -> "CyclicPoly":
        cw = CyclicWord.of(names, self.alphabet)
        if not isinstance(coeff, NcPoly):
            coeff = self.alphabet.scalar(coeff)
        cur = self.terms.get(cw)
        new = coeff if cur is None else cur + coeff
        if new:
            self.terms[cw] = new
        else:
            self.terms.pop(cw, None)
        return self


def cyclic_derivative(w: CyclicWord, j: str, alph: Alphabet = X_ALPHABET) -> NcPoly:
    """Sum over occurrences of x_j: the word after it followed by the word before it."""
    jj = alph.index(j)
    out = NcPoly(alph)
    for p, x in enumerate(w.word):
        if x == jj:
            rest = w.word[p + 1:] + w.word[:p]
            out = out + alph.word([alph.noncentral[i] for i in rest])
    return out


def derivative(phi: CyclicPoly, j: str) -> NcPoly:
    out = NcPoly(phi.alphabet)
    for cw, c in phi.terms.items():
        out = out + c * cyclic_derivative(cw, j, phi.alphabet)
    return out


def potential(alph: Alphabet = X_ALPHABET, xi_scale=ONE) -> CyclicPoly:
    """The cubic potential; ``xi_scale`` multiplies each xi symbol in it."""
    xi2, xi4, xi4p = (g.scale(xi_scale) for g in alph.gens("xi2", "xi4", "xi4p"))
    phi = CyclicPoly(alph)
    phi.add(["x1", "x2", "x3"], Q)
    phi.add(["x1", "x3", "x2"], -QINV)
    phi.add(["x1", "x2", "x2"], QQ_)
    phi.add(["x1", "x1", "x2"], QQ_)
    phi.add(["x1"], -xi4)
    phi.add(["x2"], -xi4p)
    phi.add(["x3", "x3"], Fraction(-1, 2))
    phi.add(["x1", "x2"], -xi2)
    return phi


def k_relations(alph: Alphabet = X_ALPHABET) -> Dict[str, NcPoly]:
    """The three K-relations as lhs - rhs, with x1=K12, x2=K23, x3=K13."""
    x1, x2, x3 = alph.gens("x1", "x2", "x3")
    xi2, xi4, xi4p = alph.gens("xi2", "xi4", "xi4p")
    anti = x1 * x2 + x2 * x1
    return {
        "K13": q_commutator(x1, x2) - x3,
        "K23sq": q_commutator(x2, x3) - (-anti - x2 * x2 + xi2 * x2 + xi4).scale(QQ_),
        "K12sq": q_commutator(x3, x1) - (-anti - x1 * x1 + xi2 * x1 + xi4p).scale(QQ_),
    }


def potential_relations_check(xi_scale=QQ_):
    """Match each cyclic derivative with a K-relation, up to a scalar.

    The potential's xi symbols stand for (q + q^-1) times the relation's.
    """
    from .report import VerificationReport, timed

    with timed() as t:
        phi = potential(xi_scale=xi_scale)
        rels = k_relations()
        pairing = {"x3": "K13", "x1": "K23sq", "x2": "K12sq"}
        details = {}
        failure = None
        for xj, rname in pairing.items():
            d = derivative(phi, xj)
            r = rels[rname]
            scale = _proportional(d, r)
            details[xj] = {"relation": rname, "factor": scale.to_text() if scale is not None else None}
            if scale is None and failure is None:
                failure = f"d/d{xj}: {d.to_text()} vs {r.to_text()}"
    status = "FAIL" if failure else "PASS"
    return VerificationReport("aw3.calabi-yau", "cyclic derivatives of the potential", status,
                              witness=failure, ms=t.ms,
                              params={"pairing": details, "xi_scale": xi_scale.to_text()})


def _proportional(a: NcPoly, b: NcPoly) -> Optional[LaurentPoly]:
    """c with a == c*b for a Laurent unit c in qh, or None."""
    if not b.terms or set(a.terms) != set(b.terms):
        return None
    key = next(iter(sorted(b.terms)))
    ca, cb = a.terms[key], b.terms[key]
    for c in (ca / cb if cb.is_monomial() else None, None):
        if c is not None and b.scale(c) == a:
            return c
    try:
        c = ca / cb
    except ArithmeticError:
        return None
    return c if b.scale(c) == a else None
