import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from askeywilson.weyl import (all_invariants, classical_limit_check, coxeter_relations_hold, enumerate_group,
                              generators, group_report, invariance_check, orbit, orbit_consistency,
                              transform, xi_values, W)

G = generators()


def test_generator_actions():
    assert G[1].act((1, 2, 3, 4)) == (-1, 2, 3, 4)
    assert G[3].act((1, 1, 1, 3)) == (1, 1, 1, 3)
    assert G[3].act((0, 0, 0, 2)) == (1, 1, 1, 1)


def test_group_order_and_relations():
    rep = group_report()
    assert rep.status == "PASS" and rep.params["order"] == 192
    rels = coxeter_relations_hold()
    assert rels["s1s2=s2s1"] and rels["s1s3s1=s3s1s3"]


@pytest.mark.parametrize("f", all_invariants(), ids=lambda f: f.name)
def test_invariance(f):
    assert invariance_check(f).status == "PASS"


def test_orbit_sizes():
    assert len(orbit((1, 3, 7, 19))) == 192
    # (1,2,3,4) lies on a mirror: its orbit meets m_4 = 0
    assert len(orbit((1, 2, 3, 4))) == 96
    assert len(orbit((0, 0, 0, 0))) == 1


def test_orbit_consistency_and_classical_limit():
    assert orbit_consistency().status == "PASS"
    assert classical_limit_check().status == "PASS"


@given(st.lists(st.integers(-4, 4), min_size=4, max_size=4), st.integers(0, 191))
def test_xi_constant_on_orbits(m, k):
    g = enumerate_group()[k]
    r = Fraction(3, 2)
    assert xi_values(g.act(m), r) == xi_values(m, r)


def test_transform_is_a_right_action():
    # a non-invariant test function, so the order of composition is visible
    f = W[0] ** 2 + W[1] ** -2 * W[2] ** 4
    rng = random.Random(1)
    grp = enumerate_group()
    for _ in range(5):
        a, b = rng.choice(grp), rng.choice(grp)
        assert transform(transform(f, a), b) == transform(f, a * b)
