import random

import pytest

from blowup.groebner import (buchberger, is_reduced, minimal_generators, normal_form,
                             spair_certificate, syzygies)
from blowup.harness import ex62, ex63
from blowup.ideal import Ideal
from blowup.ring import PolyRing

from conftest import random_ideal, ring


def test_normal_form_trivial():
    R = ring("x y")
    x, y = R.gens()
    assert normal_form(x ** 2, [x]).is_zero()
    assert normal_form(y, [x]) == y


def test_normal_form_ex62_generator():
    I = ex62()
    G = buchberger(I.gens)
    for g in I.gens:
        assert normal_form(g, G).is_zero()


def test_monomial_ideal_is_its_own_gb():
    R = ring("x y z")
    x, y, z = R.gens()
    G = buchberger([x ** 2, x * y, x ** 2 * z, y ** 3])
    assert sorted(map(str, G.basis)) == sorted(map(str, [x ** 2, x * y, y ** 3]))


def test_linear_change():
    R = ring("x y")
    x, y = R.gens()
    assert set(map(str, buchberger([x, x + y]).basis)) == {"x", "y"}


def test_ex62_gb_certificate():
    R = ex62().ring
    gens = [R(s) for s in ("x^2-y*w", "x*y-z*w", "x*z-w^2", "y^2-x*z", "y*z-w*x", "z^2-w*y")]
    G = buchberger(gens)
    assert spair_certificate(G)
    assert is_reduced(G)
    for g in gens:
        assert G.contains(g)
    for b in G.basis:
        assert Ideal(R, gens).contains(b)


def test_gb_deterministic():
    R = ring("x y z")
    rng = random.Random(11)
    I = random_ideal(R, rng, 4, 3)
    a = [str(g) for g in buchberger(I.gens).basis]
    b = [str(g) for g in buchberger(list(I.gens)).basis]
    assert a == b


@pytest.mark.parametrize("order", ["grevlex", "lex"])
def test_random_gbs_certified(order):
    R = PolyRing(("x", "y", "z"), order=order)
    rng = random.Random(order)
    for _ in range(8):
        I = random_ideal(R, rng, 3, 3)
        G = buchberger(I.gens)
        assert spair_certificate(G)
        assert is_reduced(G)
        assert all(G.contains(g) for g in I.gens)


def test_inhomogeneous_gb():
    R = ring("x y")
    x, y = R.gens()
    G = buchberger([x * y - 1, x ** 2 - y])
    assert spair_certificate(G)
    assert not G.is_unit()


def test_minimal_generators_drop_redundant():
    R = ring("x y")
    x, y = R.gens()
    assert len(minimal_generators([x, y, x + y, x * y])) == 2


def test_koszul_syzygy():
    R = ring("x y")
    x, y = R.gens()
    S = syzygies([x, y])
    assert S.ncols == 1
    col = S.columns[0]
    assert col[0] * x + col[1] * y == R.zero()
    assert {str(c) for c in col} <= {"y", "-y", "x", "-x"}


def test_single_regular_element_has_no_syzygy():
    R = ring("x y")
    x, y = R.gens()
    assert syzygies([x ** 2 + y ** 2]).ncols == 0


def test_hilbert_burch_syzygies():
    R = ring("x y z")
    rng = random.Random(5)
    forms = [sum((v.scale(rng.randrange(R.p)) for v in R.gens()), R.zero()) for _ in range(6)]
    a = forms[:3]
    b = forms[3:]
    minors = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
    S = syzygies(minors)
    assert S.ncols == 2
    assert S.is_linear()
    for col in S.columns:
        assert sum((c * g for c, g in zip(col, minors)), R.zero()).is_zero()
    # rank 2 at a random point
    pt = [rng.randrange(R.p) for _ in range(3)]
    vals = [[c.evaluate(pt) for c in col] for col in S.columns]
    p = R.p
    assert any((vals[0][i] * vals[1][j] - vals[0][j] * vals[1][i]) % p
               for i in range(3) for j in range(3))


def test_syzygies_ex63_exact():
    I, _ = ex63()
    S = syzygies(list(I.gens))
    assert S.ncols > 0
    assert all(not r for r in S.apply(list(I.gens)))
