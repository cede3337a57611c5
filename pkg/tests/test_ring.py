import random

import pytest
from hypothesis import given, settings, strategies as st

from blowup.ring import (DegreeBudgetError, ParseError, PolyRing, PrimeField, RingError,
                         format_polynomial, parse_polynomial)

from conftest import random_poly, ring


def test_parse_minor():
    R = ring("x y z w")
    f = parse_polynomial("x^2-y*w", R)
    assert len(f.terms) == 2
    assert f == R.gen("x") ** 2 - R.gen("y") * R.gen("w")


def test_parse_zero():
    R = ring()
    assert parse_polynomial("0", R).is_zero()
    assert not parse_polynomial("0", R).terms


def test_parse_characteristic_wraps():
    R = ring("x")
    p = R.p
    assert parse_polynomial(f"x+x+({p}-2)*x", R).is_zero()


def test_parse_errors_report_position():
    R = ring()
    with pytest.raises(ParseError) as err:
        parse_polynomial("x + q", R)
    assert "q" in str(err.value)
    with pytest.raises(ParseError) as err:
        parse_polynomial("x + (y", R, line=4)
    assert "line 4" in str(err.value)


def test_parse_print_fixed_point():
    R = ring()
    rng = random.Random(3)
    for _ in range(50):
        f = random_poly(R, rng.randint(0, 4), rng) - random_poly(R, rng.randint(0, 3), rng)
        text = format_polynomial(f)
        g = parse_polynomial(text, R)
        assert g == f
        assert format_polynomial(g) == text


def test_basic_arithmetic():
    R = ring("x y")
    x, y = R.gens()
    assert (x + y) * (x - y) == x ** 2 - y ** 2
    assert (x + y) * R.zero() == R.zero()


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_freshmans_dream(p):
    R = PolyRing(("x", "y"), field=PrimeField(p))
    x, y = R.gens()
    f = R.const(1)
    for _ in range(p):
        f = f * (x + y)
    assert f == x ** p + y ** p


def test_ring_mismatch():
    with pytest.raises(RingError):
        ring("x y").gen("x") + ring("x z").gen("x")


def test_field_must_be_prime():
    with pytest.raises(RingError):
        PrimeField(32004)


def test_bad_rings():
    with pytest.raises(RingError):
        PolyRing(("x", "x"))
    with pytest.raises(RingError):
        PolyRing(("x", "y"), weights=(1, 0))
    with pytest.raises(RingError):
        PolyRing(("x", "y"), order="elim", block=3)


def test_grevlex_tiebreak():
    R = ring("x y z")
    assert R.compare_monomials((1, 0, 1), (0, 2, 0)) == -1
    assert R.compare_monomials((0, 2, 0), (0, 2, 0)) == 0


def test_elimination_block_dominates():
    R = PolyRing(("t", "x"), order="elim", block=1)
    assert R.compare_monomials((1, 0), (0, 60)) == 1


def test_weighted_order_compares_weighted_degree():
    R = PolyRing(("x", "T"), weights=(1, 3), order="wgrevlex")
    assert R.compare_monomials((0, 1), (2, 0)) == 1
    assert R.compare_monomials((0, 1), (4, 0)) == -1


def test_degree_budget_in_groebner():
    from blowup.groebner import buchberger
    R = PolyRing(("x", "y", "z"), degree_cap=3)
    x, y, z = R.gens()
    with pytest.raises(DegreeBudgetError) as err:
        buchberger([x ** 3 - y ** 2 * z, x * y ** 2 - z ** 3])
    assert "S-pair" in str(err.value)


def test_exponent_overflow_detected():
    R = ring("x")
    with pytest.raises(DegreeBudgetError):
        R.encode((1 << 20,))


ORDER_RINGS = [PolyRing(("x", "y", "z")), PolyRing(("x", "y", "z"), order="lex"),
               PolyRing(("x", "y", "z"), order="elim", block=1),
               PolyRing(("x", "y", "z"), weights=(1, 2, 3), order="wgrevlex")]
exps = st.tuples(*[st.integers(0, 6)] * 3)


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(ORDER_RINGS), exps, exps, exps)
def test_order_is_total_and_multiplicative(R, a, b, c):
    ab, ba = R.compare_monomials(a, b), R.compare_monomials(b, a)
    assert ab == -ba
    assert (ab == 0) == (a == b)
    if ab < 0 and R.compare_monomials(b, c) < 0:
        assert R.compare_monomials(a, c) < 0
    ac = tuple(i + j for i, j in zip(a, c))
    bc = tuple(i + j for i, j in zip(b, c))
    assert R.compare_monomials(ac, bc) == ab


SMALL = PolyRing(("x", "y", "z"), field=PrimeField(101))


@st.composite
def polys(draw):
    f = SMALL.zero()
    for _ in range(draw(st.integers(0, 4))):
        e = draw(exps)
        f = f + SMALL.const(draw(st.integers(0, 100))) * _mono(e)
    return f


def _mono(e):
    x, y, z = SMALL.gens()
    return x ** e[0] * y ** e[1] * z ** e[2]


@settings(max_examples=1000, deadline=None)
@given(polys(), polys(), polys())
def test_ring_axioms(f, g, h):
    assert (f + g) + h == f + (g + h)
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f + g == g + f
    assert f * g == g * f
    assert f - f == SMALL.zero()
