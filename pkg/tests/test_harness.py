import pytest

from blowup.blowup import classify_with_reduction, random_minimal_reduction
from blowup.harness import (CONSISTENT, NOT_MET, VIOLATION, Analysis, ConstructionError,
                            builtin_examples, check_depth_inequalities, closed_form_fiber_series,
                            construct_6_5, construct_6_6, example_by_name, ex61, ex62, ex63,
                            family_6_6, verify_almost_goto, verify_FCM, verify_hilbert_series_prop,
                            verify_Theo1)
from blowup.hilbert import HilbertSeries, length_of_quotient
from blowup.ideal import Ideal

from conftest import ring


@pytest.fixture(scope="module")
def A62():
    return Analysis(ex62())


@pytest.fixture(scope="module")
def A63():
    I, J = ex63()
    return Analysis(I, reduction=J)


def test_builtin_examples():
    ex = builtin_examples()
    assert len(ex["ex61"].gens) == 5
    assert all(g.degree() == 2 and len(g.terms) == 1 for g in ex["ex61"].gens)
    assert len(ex["ex62"].gens) == 6
    assert [str(g) for g in ex["ex63"].gens][:3] == [str(g) for g in ex["ex63_J"].gens]
    assert len(ex["ex63"].gens) == 5


def test_example_names():
    I, J = example_by_name("ex61(4,3)")
    assert I.ring.nvars == 4 and J is None
    with pytest.raises(KeyError):
        example_by_name("ex99")
    with pytest.raises(ValueError):
        ex61(3, 4)


def test_ex62_verifiers(A62):
    for f in (verify_FCM, verify_Theo1, verify_hilbert_series_prop):
        assert f(A62).verdict == CONSISTENT
    s = A62.summary()
    assert (s["analytic_spread"], s["height"], s["reduction_number"]) == (4, 3, 2)
    assert (s["depth_R"], s["depth_G"], s["depth_F"]) == (5, 4, 4)


def test_ex62_hilbert_series_closed_form(A62):
    rep = verify_hilbert_series_prop(A62)
    assert rep.data["series_matches"]
    assert closed_form_fiber_series(6, 4, 2) == HilbertSeries((1, 2, 1), (1, 1, 1, 1))


def test_trivial_m():
    m = Ideal.maximal(ring("x y z"))
    assert verify_FCM(m).verdict == CONSISTENT
    assert verify_Theo1(m).verdict == CONSISTENT
    assert verify_almost_goto(m).verdict == NOT_MET
    rep = verify_hilbert_series_prop(m)
    assert rep.data["fiber_series"] == {"numerator": [1], "denominator_weights": [1, 1, 1]}
    assert closed_form_fiber_series(3, 3, 0) == HilbertSeries((1,), (1, 1, 1))


def test_minimal_multiplicity_toy():
    rep = verify_hilbert_series_prop(Ideal.maximal(ring("x y")) ** 2)
    # r = 1: numerator 1 + (mu - d) t
    assert rep.data["r_J"] == 1
    assert rep.data["fiber_series"]["numerator"] == [1, 3 - 2]
    assert rep.data["series_matches"]


def test_ex61_theorem():
    rep = verify_Theo1(ex61(3, 3))
    assert rep.verdict == CONSISTENT
    d = rep.data
    assert d["G_CM"] and d["reduction_number"] <= d["expected_bound"] == 2


def test_ex63_reports(A63):
    assert verify_FCM(A63).verdict != VIOLATION
    assert verify_Theo1(A63).verdict == NOT_MET
    rep = verify_almost_goto(A63)
    assert rep.verdict == NOT_MET
    failed = [h.name for h in rep.hypotheses if not h.holds]
    assert failed == ["depth G(I) >= d-2"]
    assert A63.depth_F.depth == 1 < A63.d - 1


def test_depth_pair_logging():
    assert check_depth_inequalities({"F": 1, "G": 0})["flag"] is False
    assert check_depth_inequalities({"F": 4, "G": 4})["gap"] == 0
    assert check_depth_inequalities({"F": 3, "G": 0})["flag"] is True


def test_construct_goto_K_equal_J():
    I = ex61(3, 3)
    J = random_minimal_reduction(I, 0).J
    assert classify_with_reduction(J, J).goto_minimal


def test_construct_goto_on_ex61():
    I = ex61(3, 3)
    J = random_minimal_reduction(I, 0).J
    m = Ideal.maximal(I.ring)
    top = J.colon(m).intersect(I)
    assert classify_with_reduction(top, J).goto_minimal
    for seed in range(3):
        K = construct_6_5(I, J, "goto", seed)
        assert top.contains(K) and K.contains(J)
        assert classify_with_reduction(K, J).goto_minimal


def test_construct_almost_goto_toy():
    R = ring("x y z")
    I = Ideal.maximal(R) ** 2
    J = random_minimal_reduction(I, 0).J
    m = Ideal.maximal(R)
    H = construct_6_5(I, J, "almost-goto", seed=1)
    assert length_of_quotient(H * m, J * m) == 1
    rep = verify_almost_goto(Analysis(H, reduction=J, an_source=("inherited", "J ⊆ H ⊆ I")))
    assert rep.verdict == CONSISTENT
    assert rep.conclusions[0].value


def test_construct_almost_goto_can_be_empty():
    I = ex61(3, 3)
    J = random_minimal_reduction(I, 0).J
    with pytest.raises(ConstructionError):
        construct_6_5(I, J, "almost-goto", seed=0)


def test_family_degenerate_branch():
    fam = family_6_6(3, 4, seed=0)
    assert fam.bound.equals(fam.I)
    rep = construct_6_6(3, 4, seed=0, samples=3)
    assert rep["iff_agree"] and rep["socle_degree_ok"]
    assert all(s["goto_minimal"] for s in rep["samples"])


def test_family_35_socle_degree():
    rep = construct_6_6(3, 5, seed=0, samples=3)
    assert rep["socle_degrees"] == [2 * 4 - 3]
    assert rep["iff_agree"]
    outside = [s for s in rep["samples"] if not s["inside_bound"]]
    assert all(not s["goto_minimal"] for s in outside)


def test_family_requires_range():
    with pytest.raises(ValueError):
        family_6_6(3, 3)
