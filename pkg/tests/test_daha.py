import pytest

from askeywilson.daha import (DAHA, EQUAL, ONE_D, QINV, T, UNEQUAL, ZC, compare, completion, confluence_sample,
                              daha_normalize, generator, rule_audit, t3, t3_inv, theta, theta_images,
                              verify_theta_relations)
from askeywilson.ncalg import NcPoly


@pytest.fixture(scope="module")
def printed():
    return {r.check_id: r for r in verify_theta_relations(table="printed")}


@pytest.fixture(scope="module")
def corrected():
    return {r.check_id: r for r in verify_theta_relations(table="corrected")}


def test_axiom_product():
    assert daha_normalize(T[0] * T[1] * T[2] * t3()) == ONE_D.scale(QINV)
    assert daha_normalize(t3() * t3_inv()) == ONE_D


def test_generator_inverses():
    for i in range(4):
        assert not daha_normalize(generator(i) * generator(i, -1) - ONE_D)


def test_centre_commutes():
    for z in ZC:
        assert not daha_normalize(T[0] * z - z * T[0])


def test_theta_images_shape():
    img = theta_images()
    assert set(img) == {"C12", "C23", "C13", "C1", "C2", "C3", "C123"}
    fixed = theta_images("corrected")
    assert fixed["C1"] == img["C3"] and fixed["C3"] == img["C1"]
    assert fixed["C12"] == img["C12"]
    with pytest.raises(ValueError):
        theta_images("other")


def test_theta_central_images_reduce_to_centre():
    # t_i + t_i^-1 is central for the rank-one DAHA
    red = daha_normalize(theta("C2"))
    assert all(not w for (w, _e) in red.terms)


def test_compare_outcomes():
    assert compare(T[0] * ZC[1], ZC[1] * T[0]).outcome == EQUAL
    assert compare(T[0], ONE_D).outcome == UNEQUAL


def test_printed_table_outcomes(printed):
    assert printed["daha.relation.C13"].status == "PASS"
    assert printed["daha.relation.C12"].params["outcome"] == UNEQUAL
    assert printed["daha.relation.C23"].params["outcome"] == UNEQUAL
    assert printed["daha.relation.omega"].params["outcome"] != EQUAL
    for cid, r in printed.items():
        if ".centralizer." in cid or ".central." in cid:
            assert r.status == "PASS", cid


def test_corrected_table_all_equal(corrected):
    bad = [cid for cid, r in corrected.items() if r.status != "PASS"]
    assert not bad


def test_completion_is_bounded():
    comp = completion(8)
    assert comp.rules
    assert max(len(k) for k in comp.rules) <= 8


@pytest.mark.slow
def test_rule_audit():
    assert rule_audit().status == "PASS"


def test_strategy_independence():
    assert confluence_sample(max_word_length=5).status == "PASS"
