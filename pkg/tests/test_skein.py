import random

import pytest
from hypothesis import given, strategies as st

from askeywilson.ncalg import AW, relation_residuals
from askeywilson.ring import A, ONE
from askeywilson.skein import (C, GENERATOR_LOOPS, LoopLabel, SkeinElement, UnsupportedPair, braid_compatibility_check,
                               crossing_index, crossing_soundness_check, displayed_products_check,
                               half_dehn_twist, phi, phi_inverse, puncture_split, puncture_split_check,
                               twist_examples_check, twist_paths_check)
from askeywilson.quantum import intermediate_casimir
from askeywilson.skein import phi_tensor

L = SkeinElement.loop


def test_phi_basics():
    assert phi("A12") == C["C12"]
    assert phi_inverse(C["C1"] * C["C3"]) == L("A1") * L("A3")
    assert phi_tensor("A13u", (2, 2, 2)) == intermediate_casimir("13u", (2, 2, 2))


def test_label_parsing():
    lab = LoopLabel.parse("s1^-1:A23")
    assert lab.indices == (2, 3) and len(lab.prefix) == 1
    assert LoopLabel.parse("A13d").decoration == "d"


def test_displayed_products():
    assert displayed_products_check().status == "PASS"


def test_loop_product_expansion():
    lhs = L("A12") * L("A23")
    rhs = L("A13d").scale(A) + L("A13u").scale(A ** -1) + L("A1") * L("A3") + L("A2") * L("A123")
    assert lhs == rhs


def test_central_loops_commute():
    assert L("A1") * L("A23") == L("A23") * L("A1")


def test_twists():
    assert twist_examples_check().status == "PASS"
    assert half_dehn_twist("s2^-1", "A12") == L("A13d")
    assert half_dehn_twist("s2", "A23") == L("A23")
    for g in GENERATOR_LOOPS:
        assert half_dehn_twist("s1 s1^-1", g) == L(g)


@given(st.sampled_from(["s1", "s2", "s1^-1", "s2^-1", "s1 s2"]),
       st.sampled_from(GENERATOR_LOOPS), st.sampled_from(GENERATOR_LOOPS))
def test_twist_is_multiplicative(word, x, y):
    lhs = half_dehn_twist(word, L(x) * L(y))
    assert lhs == half_dehn_twist(word, x) * half_dehn_twist(word, y)


def test_twist_paths_agree():
    assert twist_paths_check(letters=("s2^-1",), loops=("A12", "A23")).status == "PASS"


def test_braid_compatibility():
    assert braid_compatibility_check(words=("s1", "s2^-1")).status == "PASS"


def test_puncture_split():
    assert puncture_split(1, LoopLabel.parse("A1")).name == "A12"
    assert puncture_split(3, LoopLabel.parse("A1")).name == "A1"
    assert puncture_split(2, LoopLabel.parse("A23")).name == "A234"
    assert puncture_split_check().status == "PASS"


def test_crossing_index_catalog():
    assert crossing_index("A1", "A23", 3) == 0
    assert crossing_index("A12", "A23", 3) == 2
    assert crossing_index("A13d", "A24d", 4) == 4
    assert crossing_index("A13d", "A24u", 4) == 0
    with pytest.raises(UnsupportedPair):
        crossing_index("s1:A12", "A23", 3)


@pytest.mark.parametrize("dims", [(2, 2, 2), (2, 2, 2, 2)])
def test_crossing_zero_commutes(dims):
    assert crossing_soundness_check(dims).status == "PASS"


def test_cyclic_symmetry_of_relations():
    g = {n: AW.gen(n) for n in AW.noncentral + AW.central}
    rot = {"C12": g["C23"], "C23": g["C13"], "C13": g["C12"],
           "C1": g["C2"], "C2": g["C3"], "C3": g["C1"], "C123": g["C123"]}
    rels = relation_residuals()
    images = {k: v.substitute(rot, AW.one()) for k, v in rels.items()}
    assert images["C12"] == rels["C23"]
    assert images["C23"] == rels["C13"]
    assert images["C13"] == rels["C12"]


def test_theta_text_is_even():
    text = (L("A12") * L("A23") - L("A23") * L("A12")).to_text(theta=True)
    assert "theta" in text
    for tok in text.replace("(", " ").replace(")", " ").split():
        if tok.startswith("theta^"):
            assert int(tok.split("^")[1]) % 2 == 0
