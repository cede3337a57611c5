"""Rees algebras, fiber cones, reductions, j-multiplicity and related invariants."""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field

from .groebner import buchberger, syzygies
from .hilbert import (HilbertSeries, LengthValue, dimension, height,
                      hilbert_series_of_quotient, length_of_quotient)
from .ideal import Ideal, IdealError, compact, fresh_name, iter_minors
from .resolution import depth_report
from .ring import Polynomial, PolyRing, map_poly

log = logging.getLogger(__name__)

REDUCTION_CAP = 30
DRAW_ATTEMPTS = 8


class BlowupError(RuntimeError):
    pass


def _rng(label: str, seed, attempt: int = 0) -> random.Random:
    return random.Random(f"{label}:{seed}:{attempt}")


# --- presentations -----------------------------------------------------------

@dataclass
class BlowupPresentation:
    ideal: Ideal
    gens: list                  # the f_j, minimal generators of I
    ambient: PolyRing           # k[x, T]
    rees_ideal: Ideal           # L, with R(I) = ambient / L
    agr_ideal: Ideal            # L + I·ambient
    fiber_ring: PolyRing        # k[T], standard graded
    fiber_ideal: Ideal
    standard_graded: bool

    def t_images(self) -> list:
        return self.gens

    def analytic_spread(self) -> int:
        return dimension(self.fiber_ideal)

    def rees_depth(self, seed: int = 0):
        return depth_report(self.rees_ideal, seed)

    def agr_depth(self, seed: int = 0):
        return depth_report(self.agr_ideal, seed)

    def fiber_depth(self, seed: int = 0):
        return depth_report(self.fiber_ideal, seed)

    def fiber_hilbert_series(self) -> HilbertSeries:
        return hilbert_series_of_quotient(self.fiber_ideal)


def rees_presentation(I: Ideal) -> BlowupPresentation:
    """R(I), G(I), F(I) as quotients, from the kernel of T_j -> f_j t."""
    ring = I.ring
    if not I.gens or not I.is_homogeneous():
        raise IdealError("rees_presentation needs a nonzero homogeneous ideal")
    gens = I.min_gens()
    n = len(gens)
    degs = [g.degree() for g in gens]
    names = []
    taken = set(ring.variables)
    for j in range(n):
        k = j + 1
        name = f"T{k}"
        while name in taken:
            k += 100
            name = f"T{k}"
        taken.add(name)
        names.append(name)
    t = fresh_name(PolyRing(tuple(taken)), "t")
    standard = len(set(degs)) == 1 and set(ring.weights) <= {1}
    tw = [1] * n if standard else [d + 1 for d in degs]
    ambient = PolyRing(ring.variables + tuple(names), ring.weights + tuple(tw),
                       "grevlex" if standard else "wgrevlex", 0, ring.field, ring.degree_cap)
    # elimination ring, homogeneous with deg t = 1 and deg T_j = deg f_j + 1
    elim = PolyRing((t,) + ring.variables + tuple(names),
                    (1,) + ring.weights + tuple(d + 1 for d in degs), "elim", 1,
                    ring.field, ring.degree_cap)
    tv = elim.gen(0)
    eqs = [elim.gen(1 + ring.nvars + j) - map_poly(f, elim) * tv for j, f in enumerate(gens)]
    G = buchberger(eqs, elim)
    L = []
    for g in G.basis:
        if all(elim.decode(m)[0] == 0 for m in g.terms):
            L.append(Polynomial(ambient, {ambient.encode(elim.decode(m)[1:]): c
                                          for m, c in g.terms.items()}))
    rees = Ideal(ambient, L)
    agr = Ideal(ambient, list(L) + [map_poly(f, ambient) for f in gens])
    fring = PolyRing(tuple(names), (1,) * n, "grevlex", 0, ring.field, ring.degree_cap)
    nx = ring.nvars
    fib = []
    for g in L:
        terms = {}
        for m, c in g.terms.items():
            e = ambient.decode(m)
            if not any(e[:nx]):
                terms[fring.encode(e[nx:])] = c
        if terms:
            fib.append(Polynomial(fring, terms))
    return BlowupPresentation(I, gens, ambient, rees, agr, fring, Ideal(fring, compact(fib)), standard)


def fiber_ideal_by_kernel(I: Ideal) -> Ideal:
    """Kernel of k[T] -> k[x], T_j -> f_j, for equigenerated I (cross-check for the fiber)."""
    ring = I.ring
    gens = I.min_gens()
    n = len(gens)
    names = tuple(f"T{j + 1}" for j in range(n))
    elim = PolyRing(ring.variables + names, ring.weights + tuple(g.degree() for g in gens),
                    "elim", ring.nvars, ring.field, ring.degree_cap)
    eqs = [elim.gen(ring.nvars + j) - map_poly(f, elim) for j, f in enumerate(gens)]
    fring = PolyRing(names, (1,) * n, "grevlex", 0, ring.field, ring.degree_cap)
    out = []
    for g in buchberger(eqs, elim).basis:
        es = [elim.decode(m) for m in g.terms]
        if all(not any(e[:ring.nvars]) for e in es):
            out.append(Polynomial(fring, {fring.encode(e[ring.nvars:]): c
                                          for e, c in zip(es, g.terms.values())}))
    return Ideal(fring, out)


_SPREAD_CACHE = {}


def analytic_spread(I: Ideal) -> int:
    key = id(I)
    hit = _SPREAD_CACHE.get(key)
    if hit is not None and hit[0] is I:
        return hit[1]
    val = rees_presentation(I).analytic_spread()
    _SPREAD_CACHE[key] = (I, val)
    return val


# --- powers and reductions ---------------------------------------------------

class Powers:
    """Cached powers I^n (minimal generators), and products with m."""

    def __init__(self, I: Ideal):
        self.I = I
        self.ring = I.ring
        self.base = Ideal(self.ring, I.min_gens())
        self.m = Ideal.maximal(self.ring)
        self._pow = {0: Ideal.unit(self.ring), 1: self.base}
        self._powm = {}

    def power(self, n: int) -> Ideal:
        if n < 0:
            raise ValueError("negative power")
        if n not in self._pow:
            self._pow[n] = self.power(n - 1) * self.base
        return self._pow[n]

    def power_m(self, n: int) -> Ideal:
        """I^n m, with I^{-1} m read as the unit ideal."""
        if n < 0:
            return Ideal.unit(self.ring)
        if n not in self._powm:
            self._powm[n] = self.power(n) * self.m
        return self._powm[n]


def ideals_equal(A: Ideal, B: Ideal) -> bool:
    """Equality, by span dimensions when both are generated in one common degree."""
    da, db = A.degrees(), B.degrees()
    if A.is_homogeneous() and B.is_homogeneous() and da == db and len(da) == 1:
        # compact() leaves a basis of the span of generators in that degree
        return len(compact(list(A.gens))) == len(compact(list(B.gens))) and \
            len(compact(list(A.gens) + list(B.gens))) == len(compact(list(A.gens)))
    return A.equals(B)


def reduction_number(I: Ideal, J: Ideal, cap: int = REDUCTION_CAP, powers: Powers = None) -> int:
    """Least n with I^{n+1} = J I^n."""
    if not I.contains(J):
        raise BlowupError("J is not contained in I")
    P = powers or Powers(I)
    Jm = Ideal(I.ring, J.min_gens() if J.is_homogeneous() else J.gens)
    for n in range(cap + 1):
        if ideals_equal(P.power(n + 1), Jm * P.power(n)):
            return n
    raise BlowupError(f"no reduction number up to {cap}; J is probably not a reduction")


def tau(I: Ideal, J: Ideal, cap: int = REDUCTION_CAP, powers: Powers = None) -> int:
    """Least n >= 1 with I^n m = J I^{n-1} m."""
    if not I.contains(J):
        raise BlowupError("J is not contained in I")
    P = powers or Powers(I)
    Jm = Ideal(I.ring, J.min_gens() if J.is_homogeneous() else J.gens)
    for n in range(1, cap + 1):
        if ideals_equal(P.power_m(n), Jm * P.power_m(n - 1)):
            return n
    raise BlowupError(f"no tau up to {cap}")


@dataclass
class ReductionData:
    J: Ideal
    coefficients: list
    seed: object
    r_J: int = None
    tau_J: int = None
    is_minimal: bool = False
    attempts: int = 1

    def to_dict(self) -> dict:
        return {"J": [str(g) for g in self.J.gens], "seed": self.seed, "r_J": self.r_J,
                "tau_J": self.tau_J, "is_minimal": self.is_minimal, "attempts": self.attempts}


def random_minimal_reduction(I: Ideal, seed=0, spread: int = None, cap: int = REDUCTION_CAP,
                             with_tau: bool = False) -> ReductionData:
    """J generated by ℓ(I) general combinations of the minimal generators of I."""
    if not I.is_equigenerated():
        raise BlowupError("general reductions need an equigenerated ideal")
    ring = I.ring
    gens = I.min_gens()
    ell = analytic_spread(I) if spread is None else spread
    P = Powers(I)
    errors = []
    for attempt in range(DRAW_ATTEMPTS):
        rng = _rng("reduction", seed, attempt)
        coeffs = [[rng.randrange(1, ring.p) for _ in gens] for _ in range(ell)]
        xs = [_combo(gens, c) for c in coeffs]
        J = Ideal(ring, xs)
        if len(compact(xs)) != ell:
            errors.append("dependent draw")
            continue
        try:
            r = reduction_number(I, J, cap, P)
        except BlowupError as exc:
            errors.append(str(exc))
            continue
        t = tau(I, J, cap, P) if with_tau else None
        return ReductionData(J, coeffs, seed, r, t, True, attempt + 1)
    raise BlowupError(f"no minimal reduction found in {DRAW_ATTEMPTS} draws: {errors}")


def _combo(gens: list, coeffs: list) -> Polynomial:
    acc = gens[0].ring.zero()
    for g, c in zip(gens, coeffs):
        acc = acc + g.scale(c)
    return acc


# --- the one-dimensional reduction and j-multiplicity --------------------------

@dataclass
class Dim1Reduction:
    xs: list
    coefficients: list
    seed: object
    Q: Ideal
    attempts: int = 1


def dim1_reduction(I: Ideal, seed=0, attempts: int = DRAW_ATTEMPTS) -> Dim1Reduction:
    """General x_1..x_d in I and Q = (x_1..x_{d-1}) : I^∞ with dim R/Q = 1."""
    if not I.is_equigenerated():
        raise BlowupError("the general-element reduction needs an equigenerated ideal")
    ring = I.ring
    d = ring.nvars
    gens = I.min_gens()
    for attempt in range(attempts):
        rng = _rng("dim1", seed, attempt)
        coeffs = [[rng.randrange(1, ring.p) for _ in gens] for _ in range(d)]
        xs = [_combo(gens, c) for c in coeffs]
        Q = Ideal(ring, xs[:d - 1]).saturate(I)
        if dimension(Q) == 1:
            return Dim1Reduction(xs, coeffs, seed, Q, attempt + 1)
    raise BlowupError("dim R/Q stayed different from 1; analytic spread is probably below d")


LENGTH_NAMES = ("I/Im", "R/I", "Im/xdI", "I2/xdI", "Im/xdm")


@dataclass
class JMultReport:
    j_value: int
    spread: int
    lengths: dict = field(default_factory=dict)      # name -> value, agreed across seeds
    per_seed: list = field(default_factory=list)
    seeds: list = field(default_factory=list)
    agreement: int = 0
    minimal_j: bool = False
    almost_minimal_j: bool = False
    goto_minimal_j: bool = False
    almost_goto_minimal_j: bool = False

    def identity_m(self, row: dict = None) -> bool:
        """j = λ(Ī/Īm) - 1 + λ(R̄/Ī) + λ(Īm/x̄_d m)."""
        row = row or self.lengths
        if not row:
            return self.j_value == 0
        return row["j"] == row["I/Im"] - 1 + row["R/I"] + row["Im/xdm"]

    def identity_xdI(self, row: dict = None) -> bool:
        """j = λ(Ī/Īm) - 1 + λ(R̄/Ī) + λ(Īm/x̄_d Ī)."""
        row = row or self.lengths
        if not row:
            return self.j_value == 0
        return row["j"] == row["I/Im"] - 1 + row["R/I"] + row["Im/xdI"]

    def to_dict(self) -> dict:
        return {"j": self.j_value, "analytic_spread": self.spread, "lengths": self.lengths,
                "seeds": self.seeds, "agreement": self.agreement,
                "minimal_j": self.minimal_j, "almost_minimal_j": self.almost_minimal_j,
                "goto_minimal_j": self.goto_minimal_j,
                "almost_goto_minimal_j": self.almost_goto_minimal_j,
                "identity_m": self.identity_m(),
                "identity_xdI": self.identity_xdI(),
                "per_seed": self.per_seed}


def jmult_lengths(I: Ideal, red: Dim1Reduction, powers: Powers = None) -> dict:
    """All lengths of the one-dimensional reduction R̄ = R/Q for one draw."""
    ring = I.ring
    P = powers or Powers(I)
    Q = red.Q
    xd = red.xs[-1]
    one = Ideal.unit(ring)
    Ib = P.power(1) + Q
    Imb = P.power_m(1) + Q
    xdI = Ideal(ring, [xd * g for g in P.power(1).gens]) + Q
    xdm = Ideal(ring, [xd * v for v in ring.gens()]) + Q
    I2b = P.power(2) + Q

    def lam(A, B):
        v = length_of_quotient(A, B, check=False)
        if not v.finite:
            raise BlowupError("infinite length in the one-dimensional reduction")
        return v.value

    return {
        "j": lam(one, Q + xd),
        "I/Im": lam(Ib, Imb),
        "R/I": lam(one, Ib),
        "Im/xdI": lam(Imb, xdI),
        "I2/xdI": lam(I2b, xdI),
        "Im/xdm": lam(Imb, xdm),
    }


def j_multiplicity(I: Ideal, seeds=(0, 1), max_seeds: int = 6, spread: int = None) -> JMultReport:
    """j(I) = λ(R̄/x̄_d R̄) with lengths of the additive decomposition, agreed across seeds."""
    ring = I.ring
    d = ring.nvars
    ell = analytic_spread(I) if spread is None else spread
    if ell < d:
        return JMultReport(0, ell, seeds=list(seeds))
    P = Powers(I)
    rows = []
    used = []
    seeds = list(seeds)
    extra = 0
    while True:
        for s in seeds[len(used):]:
            red = dim1_reduction(I, s)
            row = jmult_lengths(I, red, P)
            rows.append(row)
            used.append(s)
        if len(rows) >= 2 and all(r == rows[0] for r in rows):
            break
        if len(rows) >= max_seeds:
            raise BlowupError(f"general-element lengths disagree across seeds: {rows}")
        extra += 1
        seeds.append(f"extra{extra}")
    row = rows[0]
    rep = JMultReport(row["j"], ell, dict(row), rows, used, len(rows))
    rep.minimal_j = row["I2/xdI"] == 0
    rep.almost_minimal_j = row["I2/xdI"] == 1
    rep.goto_minimal_j = row["Im/xdm"] == 0
    rep.almost_goto_minimal_j = row["Im/xdm"] == 1
    return rep


# --- classification with an explicit reduction --------------------------------

@dataclass
class Classification:
    is_reduction: bool
    r_J: int
    mu_J: int
    spread: int
    is_minimal_reduction: bool
    goto_minimal: bool
    length_Im_Jm: object
    almost_goto_minimal: bool
    I2m_eq_JIm: bool
    hypotheses: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        lam = self.length_Im_Jm
        return {"is_reduction": self.is_reduction, "r_J": self.r_J, "mu_J": self.mu_J,
                "analytic_spread": self.spread, "is_minimal_reduction": self.is_minimal_reduction,
                "goto_minimal": self.goto_minimal,
                "length_Im_over_Jm": lam.to_json() if isinstance(lam, LengthValue) else lam,
                "almost_goto_minimal": self.almost_goto_minimal,
                "I2m_equals_JIm": self.I2m_eq_JIm, "hypotheses": self.hypotheses}


def classify_with_reduction(I: Ideal, J: Ideal, spread: int = None, hypotheses: dict = None,
                            cap: int = REDUCTION_CAP) -> Classification:
    """Goto-type flags from I m = J m and λ(I m / J m) for a given minimal reduction J."""
    ring = I.ring
    P = Powers(I)
    try:
        r = reduction_number(I, J, cap, P)
    except BlowupError as exc:
        raise BlowupError(f"J is not a reduction of I: {exc}") from None
    ell = analytic_spread(I) if spread is None else spread
    muJ = J.mu() if J.is_homogeneous() else len(J.gens)
    m = P.m
    Jm = Ideal(ring, J.min_gens()) * m
    Im = P.power_m(1)
    goto = Im.equals(Jm)
    lam = length_of_quotient(Im, Jm, check=False)
    I2m = P.power_m(2)
    JIm = Ideal(ring, J.min_gens()) * Im
    return Classification(True, r, muJ, ell, muJ == ell, goto, lam,
                          lam.finite and lam.value == 1, I2m.equals(JIm),
                          dict(hypotheses or {}))


# --- G_s, residual intersections, core ----------------------------------------

def fitting_height_at_least(I: Ideal, i: int, target: int, batch: int = 64) -> tuple:
    """(ht Fitt_i(I) >= target, height found); minors are added in batches."""
    gens = I.min_gens()
    n = len(gens)
    ring = I.ring
    if i >= n:
        return True, ring.nvars + 1
    S = syzygies(gens, ring)
    t = n - i
    acc = []
    pending = []
    h = 0
    for mnr in iter_minors(S.columns, n, t, ring):
        if mnr:
            pending.append(mnr)
        if len(pending) >= batch:
            acc = compact(acc + pending)
            pending = []
            h = height(Ideal(ring, acc))
            if h >= target:
                return True, h
    acc = compact(acc + pending)
    h = height(Ideal(ring, acc)) if acc else 0
    return h >= target, h


def check_Gs(I: Ideal, s: int, detail: dict = None) -> bool:
    """G_s: ht Fitt_i(I) >= i + 1 for 1 <= i <= s - 1."""
    ring = I.ring
    if s <= ring.nvars and dimension(I) == 0:
        if detail is not None:
            detail["reason"] = "V(I) is the maximal ideal"
        return True
    for i in range(1, s):
        ok, h = fitting_height_at_least(I, i, i + 1)
        if detail is not None:
            detail[i] = {"required": i + 1, "height_found": h}
        if not ok:
            return False
    return True


@dataclass
class ResidualStep:
    i: int
    K: Ideal
    height: int
    dim: int
    height_I_plus_K: int

    @property
    def residual(self) -> bool:
        return self.height >= self.i

    @property
    def geometric(self) -> bool:
        return self.residual and self.height_I_plus_K >= self.i + 1

    def to_dict(self) -> dict:
        return {"i": self.i, "height": self.height, "dim": self.dim,
                "height_I_plus_K": self.height_I_plus_K,
                "residual": self.residual, "geometric": self.geometric}


def residual_chain(I: Ideal, xs: list) -> list:
    """K_i = (x_1..x_i) : I with heights and dimensions."""
    ring = I.ring
    if not all(I.contains(x) for x in xs):
        raise BlowupError("residual chain needs elements of I")
    out = []
    for i in range(len(xs) + 1):
        K = Ideal(ring, xs[:i]).colon(I) if i else Ideal(ring)
        out.append(ResidualStep(i, K, height(K), dimension(K), height(I + K if K.gens else I)))
    return out


@dataclass
class CoreProbe:
    ideal: Ideal
    stable: bool
    rounds: int
    reductions_used: int
    equals_I: bool
    equals_Im: bool
    label: str = "HEURISTIC"

    def to_dict(self) -> dict:
        return {"stable": self.stable, "rounds": self.rounds, "reductions_used": self.reductions_used,
                "equals_I": self.equals_I, "equals_Im": self.equals_Im, "label": self.label,
                "generators": [str(g) for g in self.ideal.gens]}


def core_probe(I: Ideal, trials: int = 2, seed=0, max_rounds: int = 4, spread: int = None) -> CoreProbe:
    """Intersection of random minimal reductions, doubling the count until it repeats."""
    ell = analytic_spread(I) if spread is None else spread
    ring = I.ring
    count = 0
    cur = None
    prev = None
    k = trials
    for rnd in range(1, max_rounds + 1):
        while count < k:
            J = random_minimal_reduction(I, f"core:{seed}:{count}", ell).J
            cur = J if cur is None else cur.intersect(J)
            count += 1
        if prev is not None and prev.equals(cur):
            Im = I * Ideal.maximal(ring)
            return CoreProbe(cur, True, rnd, count, cur.equals(I), cur.equals(Im))
        prev = cur
        k *= 2
    Im = I * Ideal.maximal(ring)
    return CoreProbe(cur, False, max_rounds, count, cur.equals(I), cur.equals(Im))


# --- a-invariants --------------------------------------------------------------

def a_invariant_from_series(hs: HilbertSeries) -> int:
    """deg(numerator) - dim for a standard graded CM algebra."""
    s = hs.simplify()
    return len(s.numerator) - 1 - len(s.weights)


def a_invariant_F(I: Ideal, r: int, s: int, F_is_CM: bool, fiber_hs: HilbertSeries = None) -> int:
    if not F_is_CM:
        raise BlowupError("a(F) = r - s needs F(I) Cohen-Macaulay")
    a = r - s
    if fiber_hs is not None and a_invariant_from_series(fiber_hs) != a:
        raise BlowupError("a(F) from the fiber Hilbert series disagrees with r - s")
    return a


def a_invariant_G(I: Ideal, g: int, r: int, s: int, G_is_CM: bool, Gs: bool) -> int:
    if not (G_is_CM and Gs):
        raise BlowupError("a(G) = max(-g, r - s) needs G(I) Cohen-Macaulay and G_s")
    return max(-g, r - s)


# --- colon conditions and Ratliff-Rush --------------------------------------------

def valabrega_valla_check(I: Ideal, xs: list, h: int, filtration: str = "adic", N: int = 4,
                          start: int = 1) -> tuple:
    """(x_1..x_h) ∩ I_n = (x_1..x_h) I_{n-1} for start <= n <= N; returns (ok, first failing n)."""
    if filtration not in ("adic", "m-adic"):
        raise ValueError("filtration must be 'adic' or 'm-adic'")
    ring = I.ring
    P = Powers(I)
    X = Ideal(ring, xs[:h])
    if not X.gens:
        return True, None
    for n in range(start, N + 1):
        In = P.power(n) if filtration == "adic" else P.power_m(n)
        In1 = P.power(n - 1) if filtration == "adic" else P.power_m(n - 1)
        lhs = X.intersect(In)
        rhs = X * In1
        if not lhs.equals(rhs):
            return False, n
    return True, None


def ratliff_rush(I: Ideal, j: int, cutoff: int = 10) -> tuple:
    """Union of I^{j+t} m : I^t; returns (ideal, stabilized)."""
    P = Powers(I)
    prev = None
    for t in range(1, cutoff + 1):
        cur = P.power_m(j + t)
        for _ in range(t):
            cur = cur.colon(P.base)
        if prev is not None and cur.equals(prev):
            return cur, True
        prev = cur
    return prev, False
