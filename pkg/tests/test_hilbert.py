import random

import pytest

from blowup.harness import ex62, ex63
from blowup.hilbert import (HilbertSeries, LengthValue, dimension, height,
                            hilbert_function_by_linear_algebra, hilbert_series_of_quotient,
                            hs_multiplicity, length_of_quotient)
from blowup.ideal import Ideal, IdealError
from blowup.ring import PolyRing

from conftest import random_ideal, ring


def test_polynomial_ring_series():
    R = ring("a b c")
    hs = hilbert_series_of_quotient(Ideal(R, []))
    assert hs == HilbertSeries((1,), (1, 1, 1))
    assert hilbert_series_of_quotient(Ideal.maximal(R)).simplify().numerator == (1,)


def test_ex63_quotient_finite_and_counted():
    I, _ = ex63()
    hs = hilbert_series_of_quotient(I)
    assert hs.dimension() == 0
    coeffs = hs.coefficients(6)
    assert coeffs == [hilbert_function_by_linear_algebra(I, t) for t in range(7)]
    assert length_of_quotient(Ideal.unit(I.ring), I) == sum(coeffs)


def test_dimensions_and_heights():
    I = ex62()
    assert dimension(I) == 1 and height(I) == 3
    R = ring("x y z")
    assert dimension(Ideal.maximal(R)) == 0


def test_lengths():
    I, J = ex63()
    m = Ideal.maximal(I.ring)
    assert length_of_quotient(I * m, J * m) == 1
    assert length_of_quotient(I, I) == 0
    R = ring("a b c d")
    M = Ideal.maximal(R)
    assert length_of_quotient(M, M ** 2) == 4


def test_infinite_length():
    R = ring("x y")
    lam = length_of_quotient(Ideal.parse(R, "x"), Ideal.parse(R, "x*y"))
    assert isinstance(lam, LengthValue) and not lam.finite


def test_containment_checked():
    R = ring("x y")
    with pytest.raises(IdealError):
        length_of_quotient(Ideal.parse(R, "x^2"), Ideal.parse(R, "y"))


def test_multiplicities():
    R = ring("x y")
    m = Ideal.maximal(R)
    assert hs_multiplicity(m) == 1
    assert hs_multiplicity(m ** 2) == 4
    assert hs_multiplicity(Ideal.maximal(ring("x y z")) ** 2) == 8


def test_multiplicity_needs_primary():
    R = ring("x y")
    with pytest.raises(IdealError):
        hs_multiplicity(Ideal.parse(R, "x^2"))


def test_series_independent_of_generators():
    I = ex62()
    R = I.ring
    other = Ideal(R, [I.gens[0] + I.gens[1]] + list(I.gens[1:]) + [I.gens[2] * R.gen("x")])
    assert hilbert_series_of_quotient(I) == hilbert_series_of_quotient(other)


def test_weighted_series():
    R = PolyRing(("x", "T"), weights=(1, 2), order="wgrevlex")
    hs = hilbert_series_of_quotient(Ideal(R, []))
    assert hs.coefficients(5) == [1, 1, 2, 2, 3, 3]


def test_hilbert_function_oracle_random():
    rng = random.Random(1)
    for k in range(20):
        R = ring("x y z w" if k % 2 else "x y z")
        I = random_ideal(R, rng, rng.randint(1, 4), 3)
        coeffs = hilbert_series_of_quotient(I).coefficients(8)
        assert coeffs == [hilbert_function_by_linear_algebra(I, t) for t in range(9)]


def test_length_additivity():
    I, J = ex63()
    m = Ideal.maximal(I.ring)
    top, mid, low = I, I * m, J * m
    assert length_of_quotient(top, low).value == \
        length_of_quotient(top, mid).value + length_of_quotient(mid, low).value
