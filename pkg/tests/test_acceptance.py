"""Acceptance criteria, one test each, with pinned time limits.

Every check here is exact (rational or Laurent-polynomial arithmetic), so the
only tolerances are the wall-clock limits below. Each test writes one
PASS/FAIL line, collected again in the terminal summary.
"""
import time

import pytest

from askeywilson import daha, ncalg, quantum, racah, reflection, skein, weyl

# wall-clock limits in seconds
LIMITS = {1: 10, 2: 60, 3: 10, 4: 300, 5: 300, 6: 30, 7: 30, 8: 120, 9: 10, 10: 600, 11: 600, 12: 600, 13: 300}


def _run(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def _failures(reports):
    return [f"{r.check_id}: {r.status} {r.witness or ''}".strip() for r in reports if r.status != "PASS"]


def _finish(acceptance, label, reports, seconds, limit, extra=""):
    bad = _failures(reports)
    detail = "; ".join(bad)[:300] if bad else extra
    ok = acceptance.line(label, not bad, seconds, limit, detail)
    assert not bad, detail
    assert seconds < limit, f"took {seconds:.1f}s, limit {limit}s"
    return ok


def test_criterion_01_casimir_central(acceptance):
    rep, s = _run(lambda: ncalg.check_central(ncalg.casimir_omega(), "aw3"))
    _finish(acceptance, "1", [rep], s, LIMITS[1], "[Omega, C_I] reduces to 0 for every generator")


@pytest.mark.parametrize("dims", [(2, 2, 2), (2, 3, 4), (3, 3, 3)])
def test_criterion_02_tensor_realization(acceptance, dims):
    rep, s = _run(lambda: quantum.verify_saw_in_tensor(dims))
    _finish(acceptance, "2", [rep], s, LIMITS[2], f"dims {dims}")


def test_criterion_03_yang_baxter(acceptance):
    rep, s = _run(reflection.yang_baxter_check)
    _finish(acceptance, "3", [rep], s, LIMITS[3], "entrywise over Q[qh, u, v]")


def test_criterion_04_reflection_equation(acceptance):
    reps, s = _run(lambda: [reflection.reflection_equation_check("symbolic"),
                            reflection.reflection_equation_check("tensor", (2, 2, 2)),
                            reflection.free_algebra_control()])
    _finish(acceptance, "4", reps, s, LIMITS[4], "symbolic, tensor (2,2,2), free-algebra control nonzero")


def test_criterion_05_sklyanin_determinant(acceptance):
    # the factorized right-hand side with its stated prefactor
    rep, s = _run(lambda: reflection.sdet_factorization_check("printed"))
    _finish(acceptance, "5", [rep], s, LIMITS[5], "stated prefactor")


def test_criterion_05b_sklyanin_determinant_recomputed_prefactor(acceptance):
    reps, s = _run(lambda: [reflection.sdet_factorization_check("computed"), reflection.sdet_roots_check()])
    _finish(acceptance, "5b", reps, s, LIMITS[5], "recomputed prefactor")


def test_criterion_06_weyl_group(acceptance):
    def go():
        group = weyl.group_report()
        assert group.params["order"] == 192
        return [group] + [weyl.invariance_check(f) for f in weyl.all_invariants()]

    reps, s = _run(go)
    assert len(reps) == 9
    _finish(acceptance, "6", reps, s, LIMITS[6], "order 192, eight invariants")


def test_criterion_07_skein_products_and_twists(acceptance):
    reps, s = _run(lambda: [skein.displayed_products_check(), skein.twist_examples_check(),
                            skein.twist_paths_check()])
    _finish(acceptance, "7", reps, s, LIMITS[7], "two products, twist examples, fast vs diagram path")


def test_criterion_08_braid_compatibility(acceptance):
    rep, s = _run(lambda: skein.braid_compatibility_check(dims=(2, 2, 2)))
    _finish(acceptance, "8", [rep], s, LIMITS[8], "s1, s2, inverses, s1s2s1, (s1s2)^3 = id")


def test_criterion_09_calabi_yau(acceptance):
    rep, s = _run(ncalg.potential_relations_check)
    _finish(acceptance, "9", [rep], s, LIMITS[9], "three cyclic derivatives")


def test_criterion_10_four_factors(acceptance):
    def go():
        out = [quantum.n4_commutation_check((2, 2, 2, 2)), quantum.n4_commutation_check((2, 2, 2, 3))]
        prod = quantum.n4_products_check()
        return out + [prod]

    reps, s = _run(go)
    _finish(acceptance, "10", reps, s, LIMITS[10], f"orientation {reps[-1].params.get('orientation')}")


def _theta_reports(table):
    return {r.check_id: r for r in daha.verify_theta_relations(table=table)}


def test_criterion_11_daha_embedding(acceptance):
    reps, s = _run(lambda: _theta_reports("printed"))
    omega = reps.pop("daha.relation.omega")
    # omega may stay undecided, but a definite inequality is a failure
    if omega.params["outcome"] == daha.UNEQUAL:
        reps[omega.check_id] = omega
    note = f"omega {omega.params['outcome']}"
    if omega.status == "UNDECIDED":
        print(f"warning: omega relation UNDECIDED ({omega.params['note']})")
    _finish(acceptance, "11", list(reps.values()), s, LIMITS[11], note)


def test_criterion_11b_daha_embedding_corrected_table(acceptance):
    reps, s = _run(lambda: _theta_reports("corrected"))
    _finish(acceptance, "11b", list(reps.values()), s, LIMITS[11], "C1 and C3 images exchanged")


def test_criterion_12_classical_racah(acceptance):
    reps, s = _run(lambda: [racah.verify_racah_relations((2, 2, 2)), racah.verify_racah_relations((2, 2, 3)),
                            racah.classical_limit_check((2, 2, 2), 3), racah.independence_check(2, (4, 4, 4))])
    _finish(acceptance, "12", reps, s, LIMITS[12], "relations, eps^0 limit, 35 monomials independent")


def test_criterion_13_pbw_oracle(acceptance):
    rep, s = _run(lambda: quantum.pbw_oracle_check(words=100, max_length=4, dims=(2, 3, 4)))
    assert rep.params.get("words", 100) >= 100
    _finish(acceptance, "13", [rep], s, LIMITS[13], "100 random words, dims (2,3,4)")
