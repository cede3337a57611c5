import sys
import random

import pytest

from blowup.ideal import Ideal
from blowup.ring import Polynomial, PolyRing


def ring(names="x y z", **kw) -> PolyRing:
    return PolyRing(tuple(names.split()), **kw)


def mono(R: PolyRing, exps) -> Polynomial:
    return Polynomial(R, {R.encode(exps): 1})


def random_poly(R: PolyRing, deg: int, rng: random.Random, terms: int = 4) -> Polynomial:
    """Random homogeneous polynomial of the given degree."""
    mons = R.monomials_of_degree(deg)
    f = R.zero()
    for _ in range(terms):
        f = f + mono(R, rng.choice(mons)).scale(rng.randrange(1, R.p))
    return f


def random_ideal(R: PolyRing, rng: random.Random, ngens=3, maxdeg=3) -> Ideal:
    gens = []
    while len(gens) < ngens:
        f = random_poly(R, rng.randint(1, maxdeg), rng, terms=rng.randint(1, 3))
        if f:
            gens.append(f)
    return Ideal(R, gens)


@pytest.fixture
def R3():
    return ring("x y z")


@pytest.fixture
def R4():
    return ring("x y z w")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in range(1, 9):
        terminalreporter.write_line(mod.summary_line(n))
