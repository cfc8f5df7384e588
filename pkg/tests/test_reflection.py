import pytest

from askeywilson.reflection import (free_algebra_control, r_entries, reflection_equation_check,
                                    sdet_coefficients_central, sdet_factorization_check, sdet_product,
                                    sdet_roots_check, yang_baxter_check)
from askeywilson.ring import ONE, Q, QINV, U, ZERO, Z, exact_divide


def test_yang_baxter():
    assert yang_baxter_check().status == "PASS"


def test_r_at_one():
    R = r_entries(ONE)
    assert [R[i][i] for i in range(4)] == [Q - QINV, ZERO, ZERO, Q - QINV]
    assert R[1][2] == R[2][1] == Q - QINV


def test_r_at_q_one_is_diagonal():
    R = r_entries(U)
    at1 = [[e.subs({"qh": ONE}) for e in row] for row in R]
    assert at1[1][2] == ZERO
    assert all(at1[i][i] == U - U ** -1 for i in range(4))


@pytest.mark.parametrize("mode", ["symbolic", "tensor"])
def test_reflection_equation(mode):
    assert reflection_equation_check(mode).status == "PASS"


def test_reflection_equation_free_algebra_fails():
    rep = reflection_equation_check("symbolic", free=True)
    assert rep.status == "FAIL" and rep.witness
    assert free_algebra_control().status == "PASS"


@pytest.mark.parametrize("f", [U * U - U ** -2, U])
def test_rescaling_invariance(f):
    assert reflection_equation_check("symbolic", scale=f).status == "PASS"


def test_sdet_product_shape():
    p = sdet_product()
    assert p.degree_range("u") == (0, 16)
    # palindromic: u -> 1/u (times u^16) agrees with m_i -> -m_i
    flipped = p.map_exponents(lambda e: (e[0], -e[1]) + e[2:]) * U ** 16
    assert flipped == p.map_exponents(lambda e: e[:4] + tuple(-x for x in e[4:]))
    exact_divide(p, U * U + Z[1] * Z[3])


def test_sdet_printed_normalization_is_off():
    rep = sdet_factorization_check("printed")
    assert rep.status == "FAIL"
    assert "expected" in rep.witness


def test_sdet_computed_normalization():
    assert sdet_factorization_check("computed").status == "PASS"
    assert sdet_roots_check().status == "PASS"


def test_sdet_central():
    assert sdet_coefficients_central("zh").status == "PASS"
