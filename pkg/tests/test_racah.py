from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from askeywilson.linalg import SparseMatrix
from askeywilson.racah import (centralizer_check, classical_limit_check, classical_rep, independence_check,
                               modified_casimirs, polarized_trace, racah_generators, racah_identities,
                               setT_monomials, setT_rank, truncation_blocks, verify_racah_relations)


def comm(a, b):
    return a @ b - b @ a


@given(st.integers(min_value=1, max_value=7))
def test_classical_rep_is_sl2(m):
    r = classical_rep(m)
    assert comm(r.E, r.F) == r.H.scale(2)
    assert comm(r.H, r.E) == r.E
    assert comm(r.H, r.F) == -r.F


def test_quadratic_trace_on_doublet():
    # e11^2 + e12 e21 + e21 e12 + e22^2 = 3/2 on the 2-dim irrep
    t = polarized_trace((1, 1), (2, 2, 2))
    assert t == SparseMatrix.identity(8, Fraction(1)).scale(Fraction(3, 2))


def test_trace_is_symmetric_in_two_slots():
    assert polarized_trace((1, 2), (2, 3, 2)) == polarized_trace((2, 1), (2, 3, 2))


def test_trace_rejects_bad_slots():
    with pytest.raises(ValueError):
        polarized_trace((4,), (2, 2, 2))
    with pytest.raises(ValueError):
        polarized_trace((), (2, 2, 2))


def test_k_generators_are_scalars():
    g = racah_generators((2, 3, 2))
    n = 12
    for k in ("k1", "k2", "k3"):
        M = g[k]
        assert M == SparseMatrix.identity(n, Fraction(1)).scale(M[0, 0])


@pytest.mark.parametrize("dims", [(2, 2, 2), (2, 2, 3), (3, 2, 2)])
def test_racah_relations(dims):
    assert verify_racah_relations(dims).status == "PASS"
    for name, resid in racah_identities(dims):
        assert resid.is_zero(), name


@pytest.mark.parametrize("dims", [(2, 2, 2), (2, 3, 2)])
def test_centralizer(dims):
    assert centralizer_check(dims).status == "PASS"


@pytest.mark.parametrize("dims", [(2, 2, 2), (2, 3, 2)])
def test_classical_limit(dims):
    assert classical_limit_check(dims, order=3).status == "PASS"


def test_modified_casimir_has_no_pole():
    K = modified_casimirs((2, 2, 2), 3)
    # division by (q - q^-1)^2 succeeded, so every entry is a genuine power series
    for name in ("12", "23", "13"):
        assert all(len(s.coeffs) >= 1 for s in K[name].values())


def test_setT_monomial_count():
    assert len(setT_monomials(1)) == 8
    assert len(setT_monomials(2)) == 35
    assert all(m[-1] <= 1 for m in setT_monomials(3))


def test_truncation_blocks():
    assert truncation_blocks((1, 1, 1)) == [(1, 1, 1)]
    assert len(truncation_blocks((2, 3, 4))) == 24


def test_trivial_truncation_collapses():
    r, n, kernel, _ = setT_rank(1, (1, 1, 1))
    assert r == 1 and kernel is not None


def test_rank_grows_with_truncation():
    ranks = [setT_rank(2, (d, d, d))[0] for d in (1, 2, 3)]
    assert ranks == sorted(ranks)
    assert ranks[-1] == 35


def test_independence_degree_one():
    assert independence_check(1, (3, 3, 3)).status == "PASS"


@pytest.mark.slow
def test_independence_degree_two():
    r = independence_check(2, (4, 4, 4))
    assert r.status == "PASS"
    assert r.params["monomials"] == 35
