import random

import pytest

from blowup.blowup import (BlowupError, Powers, a_invariant_F, a_invariant_G, analytic_spread,
                           check_Gs, classify_with_reduction, core_probe, dim1_reduction,
                           fiber_ideal_by_kernel, j_multiplicity, random_minimal_reduction,
                           ratliff_rush, reduction_number, rees_presentation, residual_chain,
                           tau, valabrega_valla_check)
from blowup.harness import _random_linear_matrix, ex61, ex62, ex63
from blowup.hilbert import dimension, hs_multiplicity
from blowup.ideal import Ideal, iter_minors
from blowup.resolution import depth_of_quotient
from blowup.ring import PolyRing

from conftest import ring


# --- presentations ---------------------------------------------------------------

def test_rees_of_principal_ideal():
    R = ring("x y")
    P = rees_presentation(Ideal.parse(R, "x"))
    assert P.rees_ideal.is_zero()
    assert P.fiber_ideal.is_zero() and P.fiber_ring.nvars == 1


def test_rees_of_maximal_ideal():
    R = ring("x y")
    P = rees_presentation(Ideal.maximal(R))
    A = P.ambient
    assert P.rees_ideal.equals(Ideal.parse(A, "x*T2 - y*T1"))


def test_rees_substitution_kills_L():
    I = ex62()
    P = rees_presentation(I)
    A = P.ambient
    R = I.ring
    big = PolyRing(R.variables + ("t",))
    t = big.gen("t")
    images = [big.gen(v) for v in R.variables] + [f.substitute(
        [big.gen(v) for v in R.variables], big) * t for f in P.gens]
    for g in P.rees_ideal.gens:
        assert g.substitute(images, big).is_zero()
    assert A.nvars == 10


def test_fiber_matches_kernel_and_spread():
    I = ex62()
    P = rees_presentation(I)
    assert P.fiber_ideal.equals(fiber_ideal_by_kernel(I))
    assert P.analytic_spread() == 4


def test_non_equigenerated_rees_is_weighted():
    R = ring("x y")
    I = Ideal.parse(R, "x^2, x*y^2, y^4")
    P = rees_presentation(I)
    assert not P.standard_graded
    assert P.rees_ideal.is_homogeneous()
    assert P.fiber_ideal.is_homogeneous()


def test_analytic_spreads():
    R = ring("a b c")
    assert analytic_spread(Ideal.maximal(R)) == 3
    assert analytic_spread(ex61(3, 3)) == 3
    assert analytic_spread(Ideal.parse(R, "a")) == 1


# --- reductions --------------------------------------------------------------------

def test_reduction_of_m():
    R = ring("x y z")
    m = Ideal.maximal(R)
    red = random_minimal_reduction(m, seed=0)
    assert red.J.equals(m) and red.r_J == 0
    assert reduction_number(m, m) == 0


def test_ex62_reduction_number():
    red = random_minimal_reduction(ex62(), seed=0)
    assert red.r_J == 2 and red.is_minimal and red.J.mu() == 4


def test_ex61_reduction_number():
    for seed in range(3):
        assert random_minimal_reduction(ex61(3, 3), seed=seed).r_J <= 1


def test_reduction_invariants():
    I = ex62()
    red = random_minimal_reduction(I, seed=1)
    P = Powers(I)
    r = red.r_J
    J = red.J
    assert P.power(r + 1).equals(J * P.power(r))
    assert not P.power(r).equals(J * P.power(r - 1))
    assert I.contains(J)


def test_two_general_reductions_agree():
    I = ex62()
    assert random_minimal_reduction(I, 3).r_J == random_minimal_reduction(I, 4).r_J


def test_non_reduction_hits_cap():
    I, _ = ex63()
    R = I.ring
    with pytest.raises(BlowupError):
        reduction_number(I, Ideal(R, I.gens[:2]), cap=4)


def test_tau_ex63():
    I, J = ex63()
    t = tau(I, J)
    assert t >= 2
    P = Powers(I)
    assert P.power_m(t).equals(J * P.power_m(t - 1))


# --- one-dimensional reduction and j-multiplicity ---------------------------------------

def test_dim1_reduction_of_m():
    R = ring("x y")
    red = dim1_reduction(Ideal.maximal(R), seed=0)
    assert dimension(red.Q) == 1
    assert red.Q.equals(Ideal(R, red.xs[:1]))


def test_dim1_reduction_ex63_adds_nothing():
    I, _ = ex63()
    red = dim1_reduction(I, seed=0)
    assert red.Q.equals(Ideal(I.ring, red.xs[:2]))


def test_dim1_reduction_ex61():
    red = dim1_reduction(ex61(3, 3), seed=0)
    assert dimension(red.Q) == 1


def test_jmult_trivial():
    R = ring("x y")
    assert j_multiplicity(Ideal.maximal(R)).j_value == 1
    assert j_multiplicity(Ideal.parse(R, "x")).j_value == 0


def test_jmult_equals_e_for_primary():
    I, _ = ex63()
    rep = j_multiplicity(I)
    assert rep.j_value == hs_multiplicity(I)
    assert rep.agreement >= 2


def test_jmult_flags_match_lengths():
    rep = j_multiplicity(ex62())
    L = rep.lengths
    assert rep.goto_minimal_j == (L["Im/xdm"] == 0)
    assert rep.almost_minimal_j == (L["I2/xdI"] == 1)
    assert rep.identity_m()


def test_goto_length_seed_independent():
    I = ex61(3, 3)
    vals = {j_multiplicity(I, seeds=(s, s + 100)).lengths["Im/xdm"] for s in range(3)}
    assert len(vals) == 1


def test_jmult_zero_iff_spread_below_d():
    R = ring("x y z")
    I = Ideal.parse(R, "x^2, x*y, y^2")
    assert analytic_spread(I) < 3
    assert j_multiplicity(I).j_value == 0


# --- classification ---------------------------------------------------------------------

def test_classify_ex62():
    I = ex62()
    J = random_minimal_reduction(I, 0).J
    c = classify_with_reduction(I, J)
    assert c.goto_minimal and c.length_Im_Jm == 0 and c.r_J == 2


def test_classify_ex63():
    I, J = ex63()
    c = classify_with_reduction(I, J)
    assert not c.goto_minimal and c.length_Im_Jm == 1 and c.almost_goto_minimal


def test_classify_I_equals_J():
    m = Ideal.maximal(ring("x y"))
    assert classify_with_reduction(m, m).goto_minimal


def test_classify_rejects_non_reduction():
    I, J = ex63()
    with pytest.raises(BlowupError):
        classify_with_reduction(I, Ideal(I.ring, J.gens[:2]), cap=4)


def test_goto_paths_agree():
    for I in (ex62(), ex61(3, 3)):
        J = random_minimal_reduction(I, 0).J
        assert classify_with_reduction(I, J).goto_minimal == j_multiplicity(I).goto_minimal_j


# --- G_s -----------------------------------------------------------------------------

def test_Gs_examples():
    R = ring("x y z")
    assert check_Gs(Ideal.parse(R, "x, y"), 2)
    assert check_Gs(ex62(), 4)
    assert check_Gs(ex63()[0], 3)


def test_Gs_failure():
    R = ring("x y z")
    # Fitt_1 of (x, y)^2 is (x, y), of height 2 < 3
    assert check_Gs(Ideal.parse(R, "x^2, x*y, y^2"), 2)
    assert not check_Gs(Ideal.parse(R, "x^2, x*y, y^2"), 3)


def _specialize(I: Ideal, rng: random.Random) -> Ideal:
    """Image of I in R/(general linear form), as an ideal of a polynomial ring in one fewer variable."""
    R = I.ring
    sub = PolyRing(R.variables[:-1])
    xs = sub.gens()
    last = sum((v.scale(rng.randrange(R.p)) for v in xs), sub.zero())
    return Ideal(sub, [g.substitute(xs + [last], sub) for g in I.gens])


def _perfect_height_two(R: PolyRing, rng: random.Random) -> Ideal:
    cols = _random_linear_matrix(R, 3, 2, rng)
    gens = []
    for i in range(3):
        keep = [k for k in range(3) if k != i]
        sub = [[c[k] for k in keep] for c in cols]
        gens.append(next(iter_minors(sub, 2, 2, R)))
    return Ideal(R, gens)


def test_Gs_survives_general_hyperplane_section():
    R = ring("x y z w")
    rng = random.Random(33)
    cases = [Ideal.parse(R, "x^2, x*y, y^2")] + [_perfect_height_two(R, rng) for _ in range(3)]
    checked = 0
    for I in cases:
        s = analytic_spread(I)
        if s >= R.nvars or not check_Gs(I, s) or depth_of_quotient(I) == 0:
            continue
        assert check_Gs(_specialize(I, rng), s)
        checked += 1
    assert checked >= 2


# --- residual chains, core, a-invariants ------------------------------------------------

def test_residual_chain_of_m():
    R = ring("x y z")
    m = Ideal.maximal(R)
    chain = residual_chain(m, R.gens())
    assert [s.dim for s in chain[:3]] == [3, 2, 1]
    assert chain[2].K.equals(Ideal(R, R.gens()[:2]))
    assert chain[3].K.is_unit()
    assert chain[0].K.is_zero()


def test_residual_chain_ex62():
    I = ex62()
    J = random_minimal_reduction(I, 0).J
    chain = residual_chain(I, list(J.gens))
    assert chain[3].dim == 1
    assert all(s.residual for s in chain)


def test_core_probes():
    R = ring("x y")
    m = Ideal.maximal(R)
    assert core_probe(m).ideal.equals(m)
    cp = core_probe(ex61(3, 3))
    assert cp.stable and cp.equals_Im and cp.label == "HEURISTIC"


def test_core_probe_ex62():
    cp = core_probe(ex62())
    assert cp.equals_Im and not cp.equals_I


def test_a_invariants():
    R = ring("x y z")
    m = Ideal.maximal(R)
    assert a_invariant_F(m, 0, 3, True) == -3
    assert a_invariant_G(m, 3, 0, 3, True, True) == -3
    I = ex62()
    hs = rees_presentation(I).fiber_hilbert_series()
    assert a_invariant_F(I, 2, 4, True, hs) == -2
    assert a_invariant_G(I, 3, 2, 4, True, True) == -2
    r = random_minimal_reduction(ex61(3, 3), 0).r_J
    assert a_invariant_F(ex61(3, 3), r, 3, True) in (-3, -2)
    # a reduction J of itself: r = 0, so a(G(J)) = -g
    assert a_invariant_G(m, 2, 0, 2, True, True) == -2
    with pytest.raises(BlowupError):
        a_invariant_F(I, 2, 4, False)
    with pytest.raises(BlowupError):
        a_invariant_G(I, 3, 2, 4, True, False)


# --- colon conditions and Ratliff-Rush ------------------------------------------------------

def test_valabrega_valla_m():
    R = ring("x y z")
    m = Ideal.maximal(R)
    for h in range(1, 4):
        for filt in ("adic", "m-adic"):
            assert valabrega_valla_check(m, R.gens(), h, filt, N=3) == (True, None)


def test_valabrega_valla_ex62():
    I = ex62()
    J = random_minimal_reduction(I, 0).J
    ok, _ = valabrega_valla_check(I, list(J.gens), 4, "m-adic", N=2, start=2)
    assert ok


def test_valabrega_valla_ex63_has_a_failure():
    I, J = ex63()
    fails = [(h, valabrega_valla_check(I, list(J.gens), h, "adic", N=3)[1]) for h in (1, 2, 3)]
    assert any(n is not None for _, n in fails)


def test_ratliff_rush_of_m():
    R = ring("x y")
    m = Ideal.maximal(R)
    for j in (1, 2):
        RR, stable = ratliff_rush(m, j)
        assert stable and RR.equals(m ** (j + 1))


def test_ratliff_rush_properties_ex63():
    I, J = ex63()
    P = Powers(I)
    RR = {j: ratliff_rush(I, j)[0] for j in (1, 2, 3)}
    for j in RR:
        assert RR[j].contains(P.power_m(j))
    assert RR[3].equals(P.power_m(3))
    x = J.gens[0] + J.gens[1].scale(7) + J.gens[2].scale(11)
    assert RR[2].colon_element(x).equals(RR[1])
