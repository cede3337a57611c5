"""Executable checks of the classification theorems on concrete ideals, and example families."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property

from .blowup import (BlowupError, Powers, a_invariant_from_series, check_Gs, j_multiplicity,
                     random_minimal_reduction, reduction_number, rees_presentation,
                     valabrega_valla_check)
from .hilbert import (HilbertSeries, height, hilbert_series_of_quotient, length_of_quotient,
                      one_minus, pdivmod, psub)
from .ideal import Ideal, iter_minors
from .linalg import rank
from .resolution import depth_report, sliding_depth_check
from .ring import Polynomial, PolyRing

VERIFIED = "verified"
CERTIFIED = "certified-by-sufficient-condition"
ASSERTED = "user-asserted"
FAILED = "failed"

CONSISTENT = "consistent"
VIOLATION = "VIOLATION"
NOT_MET = "hypotheses-not-met"


@dataclass
class Hypothesis:
    name: str
    status: str
    detail: str = ""

    @property
    def holds(self) -> bool:
        return self.status != FAILED

    def to_dict(self):
        return {"name": self.name, "status": self.status, "detail": self.detail}


@dataclass
class Conclusion:
    statement: str
    value: bool
    asserted: bool = True       # False: informational, its extra hypotheses failed

    def to_dict(self):
        return {"statement": self.statement, "value": self.value, "asserted": self.asserted}


@dataclass
class TheoremReport:
    theorem: str
    hypotheses: list = field(default_factory=list)
    conclusions: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        if not all(h.holds for h in self.hypotheses):
            return NOT_MET
        if any(c.asserted and not c.value for c in self.conclusions):
            return VIOLATION
        return CONSISTENT

    def hyp(self, name, ok, detail="", status=None):
        self.hypotheses.append(Hypothesis(name, status or (VERIFIED if ok else FAILED), detail))

    def conclude(self, statement, value, asserted=True):
        self.conclusions.append(Conclusion(statement, bool(value), asserted))

    def to_dict(self) -> dict:
        return {"theorem": self.theorem, "verdict": self.verdict,
                "hypotheses": [h.to_dict() for h in self.hypotheses],
                "conclusions": [c.to_dict() for c in self.conclusions],
                "data": self.data}


# --- shared per-ideal computations ------------------------------------------------

class Analysis:
    """Lazily computed invariants of one ideal, shared by the verifiers.

    `reduction` supplies a minimal reduction explicitly (needed when I is not
    equigenerated).  `an_source` records how the Artin-Nagata condition is known
    when it cannot be certified from I alone: ("inherited", reason) or
    ("asserted", reason).
    """

    def __init__(self, I: Ideal, seed=0, reduction: Ideal = None, an_source: tuple = None):
        self.I = I
        self.ring = I.ring
        self.seed = seed
        self._given_J = reduction
        self.an_source = an_source
        self.powers = Powers(I)

    @property
    def d(self) -> int:
        return self.ring.nvars

    @cached_property
    def mu(self) -> int:
        return self.I.mu()

    @cached_property
    def g(self) -> int:
        # grade equals height in a polynomial ring
        return height(self.I)

    @cached_property
    def presentation(self):
        return rees_presentation(self.I)

    @cached_property
    def s(self) -> int:
        return self.presentation.analytic_spread()

    @cached_property
    def reduction(self):
        if self._given_J is not None:
            return self._given_J
        return random_minimal_reduction(self.I, self.seed, self.s).J

    @cached_property
    def r(self) -> int:
        return reduction_number(self.I, self.reduction, powers=self.powers)

    @cached_property
    def general_reduction(self):
        """A general minimal reduction, which attains r(I); None unless equigenerated."""
        if not self.I.is_equigenerated():
            return None
        if self._given_J is None:
            return self.reduction
        return random_minimal_reduction(self.I, self.seed, self.s).J

    @cached_property
    def r_min(self):
        J = self.general_reduction
        return None if J is None else reduction_number(self.I, J, powers=self.powers)

    def reduction_attains_r(self) -> Hypothesis:
        name = "r_J(I) = r(I)"
        if self.r_min is None:
            return Hypothesis(name, ASSERTED, "r_J(I) taken as r(I); general reductions need an equigenerated ideal")
        return Hypothesis(name, VERIFIED if self.r <= self.r_min else FAILED,
                          f"r_J = {self.r}, general r = {self.r_min}")

    @cached_property
    def Gs(self) -> bool:
        return check_Gs(self.I, self.s, self.Gs_detail)

    @cached_property
    def Gs_detail(self) -> dict:
        return {}

    @cached_property
    def depth_R(self):
        return self.presentation.rees_depth(self.seed)

    @cached_property
    def depth_G(self):
        return self.presentation.agr_depth(self.seed)

    @cached_property
    def depth_F(self):
        return self.presentation.fiber_depth(self.seed)

    @cached_property
    def fiber_series(self) -> HilbertSeries:
        return self.presentation.fiber_hilbert_series()

    def depth_quotient_power(self, j: int) -> int:
        cache = self.__dict__.setdefault("_dqp", {})
        if j not in cache:
            P = self.powers.power(j)
            cache[j] = depth_report(P, self.seed).depth
        return cache[j]

    @cached_property
    def goto(self) -> bool:
        """I m = J m for the chosen minimal reduction."""
        return self.powers.power_m(1).equals(Ideal(self.ring, self.reduction.gens) * self.powers.m)

    @cached_property
    def jmult(self):
        return j_multiplicity(self.I, (self.seed, f"{self.seed}b"), spread=self.s)

    @cached_property
    def an(self) -> Hypothesis:
        return certify_an(self)

    def depth_inequalities(self, upto: int, bound) -> tuple:
        """depth R/I^j >= bound(j) for 1 <= j <= upto; (ok, {j: (depth, need)})."""
        out = {}
        ok = True
        for j in range(1, upto + 1):
            need = bound(j)
            if need <= 0:
                out[j] = (None, need)
                continue
            dep = self.depth_quotient_power(j)
            out[j] = (dep, need)
            if dep < need:
                ok = False
        return ok, out

    def summary(self) -> dict:
        return {"mu": self.mu, "height": self.g, "analytic_spread": self.s,
                "reduction_number": self.r,
                "depth_R": self.depth_R.depth, "dim_R": self.depth_R.dimension,
                "depth_G": self.depth_G.depth, "dim_G": self.depth_G.dimension,
                "depth_F": self.depth_F.depth, "dim_F": self.depth_F.dimension}


def certify_an(A: Analysis) -> Hypothesis:
    """AN^-_{s-2} through one of the known sufficient conditions."""
    name = "AN^-_{s-2}"
    if A.an_source is not None:
        kind, reason = A.an_source
        return Hypothesis(name, ASSERTED if kind == "asserted" else CERTIFIED, reason)
    s, g, d = A.s, A.g, A.d
    if s == g:
        return Hypothesis(name, CERTIFIED, "equimultiple: analytic spread equals height")
    if not A.Gs:
        return Hypothesis(name, FAILED, "G_s fails, no sufficient condition applies")
    if s == g + 1:
        # G_s with s = g + 1 includes ht Fitt_g >= g + 1, i.e. generically a complete intersection
        return Hypothesis(name, CERTIFIED, "analytic deviation one and generically a complete intersection")
    ok, _ = A.depth_inequalities(s - g - 1, lambda j: d - g - j + 1)
    if ok:
        return Hypothesis(name, CERTIFIED, "G_s and depth R/I^j >= d-g-j+1 for 1 <= j <= s-g-1")
    if g == 2 and depth_report(A.I, A.seed).cohen_macaulay:
        return Hypothesis(name, CERTIFIED, "perfect of height two (licci), G_s")
    if A.mu <= 8 and sliding_depth_check(A.I):
        return Hypothesis(name, CERTIFIED, "G_s and sliding depth")
    return Hypothesis(name, FAILED, "no sufficient condition certified")


def _analysis(obj, seed=0) -> Analysis:
    return obj if isinstance(obj, Analysis) else Analysis(obj, seed)


# --- verifiers --------------------------------------------------------------------

def verify_FCM(obj, seed=0) -> TheoremReport:
    """F CM <=> depth G >= s - 1 <=> depth R >= s under the colon condition."""
    A = _analysis(obj, seed)
    rep = TheoremReport("fiber-cone-CM-equivalence")
    s, r = A.s, A.r
    rep.hyp("G_s", A.Gs, f"s = {s}")
    rep.hypotheses.append(A.an)
    rep.hypotheses.append(A.reduction_attains_r())
    J = A.reduction
    ok, bad = valabrega_valla_check(A.I, list(J.gens), len(J.gens), "m-adic", N=r, start=2)
    rep.hyp("J ∩ I^n m = J I^{n-1} m for 2 <= n <= r", ok,
            "" if ok else f"fails at n = {bad}")
    f_cm = A.depth_F.cohen_macaulay
    g_ok = A.depth_G.depth >= s - 1
    r_ok = A.depth_R.depth >= s
    rep.conclude("F(I) CM <=> depth G(I) >= s-1 <=> depth R(I) >= s", f_cm == g_ok == r_ok)
    rep.data.update(A.summary())
    rep.data.update({"F_CM": f_cm, "depth_G_ge_s_minus_1": g_ok, "depth_R_ge_s": r_ok})
    return rep


def verify_Theo1(obj, seed=0) -> TheoremReport:
    """i) R CM (g >= 2) <=> ii) G CM => iii) F CM and a(F) <= -g+1 => iv) r <= s-g+1."""
    A = _analysis(obj, seed)
    rep = TheoremReport("reduction-number-CM-chain")
    s, g, r, d = A.s, A.g, A.r, A.d
    rep.hyp("G_s", A.Gs, f"s = {s}")
    rep.hypotheses.append(A.an)
    rep.hyp("I m = J m", A.goto)
    R_cm = A.depth_R.cohen_macaulay
    G_cm = A.depth_G.cohen_macaulay
    F_cm = A.depth_F.cohen_macaulay
    aF = r - s if F_cm else None
    if F_cm:
        rep.data["a_F_from_series"] = a_invariant_from_series(A.fiber_series)
        rep.conclude("a(F) from the fiber Hilbert series equals r - s",
                     rep.data["a_F_from_series"] == aF)
    iii = F_cm and aF <= -g + 1
    iv = r <= s - g + 1
    if g >= 2:
        rep.conclude("R(I) CM <=> G(I) CM", R_cm == G_cm)
    rep.conclude("G(I) CM => F(I) CM and a(F) <= -g+1", (not G_cm) or iii)
    rep.conclude("F(I) CM and a(F) <= -g+1 => r <= s-g+1", (not iii) or iv)
    extra, detail = A.depth_inequalities(s - g + 1, lambda j: d - g - j + 1)
    rep.data["depth_inequalities"] = {str(j): v for j, v in detail.items()}
    stmts = [G_cm, iii, iv] + ([R_cm] if g >= 2 else [])
    rep.conclude("all statements equivalent (depth R/I^j >= d-g-j+1 for j <= s-g+1)",
                 len(set(stmts)) == 1, asserted=extra)
    rep.data.update(A.summary())
    rep.data.update({"R_CM": R_cm, "G_CM": G_cm, "F_CM": F_cm, "a_F": aF, "g": g,
                     "expected_bound": s - g + 1})
    return rep


def closed_form_fiber_series(mu: int, d: int, r: int) -> HilbertSeries:
    """(1 + (mu - d) t + t^2 + ... + t^r) / (1 - t)^d."""
    num = [1]
    if r >= 1:
        num.append(mu - d)
        num.extend([1] * (r - 1))
    return HilbertSeries(tuple(num) if any(num) else (), (1,) * d)


def verify_hilbert_series_prop(obj, J: Ideal = None, seed=0) -> TheoremReport:
    """For almost minimal j-multiplicity: F CM <=> closed-form HS <=> I^2 m = J I m.

    For m-primary I the hypothesis is read classically, λ(I²/JI) = 1 for a general
    minimal reduction J.  The general-element length in R/(x_1..x_{d-1}) can be
    smaller there, since (x_1..x_{d-1}) ∩ I² may exceed (x_1..x_{d-1}) I.
    """
    A = _analysis(obj, seed)
    rep = TheoremReport("fiber-hilbert-series")
    d, g, s = A.d, A.g, A.s
    rep.hyp("analytic spread = d", s == d, f"s = {s}")
    rep.hyp("G_d", s == d and A.Gs)
    rep.hypotheses.append(A.an)
    dep = depth_report(A.I, seed).depth
    rep.hyp("depth R/I >= min(d-g, 1)", dep >= min(d - g, 1), f"depth = {dep}")
    Jg = J if J is not None else A.general_reduction
    if Jg is None:
        Jg = A.reduction
    if s == d:
        jm = A.jmult
        gen = jm.lengths.get("I2/xdI")
        if g == d:
            Jm = Ideal(A.ring, Jg.gens)
            classical = length_of_quotient(A.powers.power(2), Jm * A.powers.power(1), check=False)
            rep.hyp("almost minimal j-multiplicity", classical == 1,
                    f"m-primary: λ(I²/JI) = {classical}; general-element λ(Ī²/x̄_d Ī) = {gen}")
        else:
            rep.hyp("almost minimal j-multiplicity", jm.almost_minimal_j, f"λ(Ī²/x̄_d Ī) = {gen}")
    r = reduction_number(A.I, Jg, powers=A.powers)
    hs = A.fiber_series
    closed = closed_form_fiber_series(A.mu, d, r)
    i = A.depth_F.cohen_macaulay
    ii = hs == closed
    iii = A.powers.power_m(2).equals(Ideal(A.ring, Jg.gens) * A.powers.power_m(1))
    rep.conclude("F(I) CM <=> HS_F closed form <=> I^2 m = J I m", i == ii == iii)
    rep.data.update({"fiber_series": hs.to_dict(), "closed_form": closed.to_dict(),
                     "F_CM": i, "series_matches": ii, "I2m_eq_JIm": iii, "r_J": r,
                     "mu": A.mu, "d": d})
    return rep


def verify_almost_goto(obj, seed=0) -> TheoremReport:
    """Almost Goto-minimal j-multiplicity and depth G >= d-2 give depth F >= d-1."""
    A = _analysis(obj, seed)
    rep = TheoremReport("almost-goto-fiber-depth")
    d, g, s = A.d, A.g, A.s
    rep.hyp("analytic spread = d", s == d, f"s = {s}")
    rep.hyp("G_d", s == d and A.Gs)
    rep.hypotheses.append(A.an)
    ok, detail = A.depth_inequalities(2, lambda j: min(d - g - j + 1, 1))
    rep.hyp("depth R/I^j >= min(d-g-j+1, 1) for j = 1, 2", ok,
            "; ".join(f"j={j}: {v}" for j, v in detail.items()))
    if s == d:
        jm = A.jmult
        lam = jm.lengths.get("Im/xdm")
        rep.hyp("almost Goto-minimal j-multiplicity", jm.almost_goto_minimal_j, f"λ(Im/x_d m) = {lam}")
    dG = A.depth_G.depth
    rep.hyp("depth G(I) >= d-2", dG >= d - 2, f"depth G = {dG}")
    dF = A.depth_F.depth
    rep.conclude("depth F(I) >= d-1", dF >= d - 1)
    rep.data.update({"depth_G": dG, "depth_F": dF, "d": d})
    return rep


def check_depth_inequalities(depths: dict) -> dict:
    """Log the (F, G) depth pair; gaps of 2 or more are flagged for manual inspection."""
    F, G = depths["F"], depths["G"]
    return {"F": F, "G": G, "gap": abs(F - G), "flag": abs(F - G) >= 2}


# --- examples and constructions ---------------------------------------------------

def _ring(names) -> PolyRing:
    return PolyRing(tuple(names))


def ex61(d: int = 3, n: int = None) -> Ideal:
    """(x1^2, x1x2, ..., x1xd, x2^2, x2x3, ..., x2xn) in k[x1..xd]."""
    n = d if n is None else n
    if d < 2 or not 2 <= n <= d:
        raise ValueError("ex61 needs d >= 2 and 2 <= n <= d")
    R = _ring([f"x{i}" for i in range(1, d + 1)])
    x = R.gens()
    gens = [x[0] * x[j] for j in range(d)] + [x[1] * x[j] for j in range(1, n)]
    return Ideal(R, gens)


def ex62() -> Ideal:
    R = _ring("xyzw")
    x, y, z, w = R.gens()
    top, bot = [x, y, z, w], [w, x, y, z]
    return Ideal(R, [top[i] * bot[j] - top[j] * bot[i] for i in range(4) for j in range(i + 1, 4)])


def ex63() -> tuple:
    R = _ring("xyz")
    gens = [R(s) for s in ("-x^2+y^2", "-y^2+z^2", "x*y", "y*z", "z*x")]
    return Ideal(R, gens), Ideal(R, gens[:3])


def builtin_examples() -> dict:
    I3, J3 = ex63()
    return {"ex61": ex61(3, 3), "ex62": ex62(), "ex63": I3, "ex63_J": J3}


def example_by_name(name: str) -> tuple:
    """(I, explicit J or None) for names ex61, ex61(d,n), ex62, ex63."""
    key = name.replace(" ", "")
    if key == "ex62":
        return ex62(), None
    if key == "ex63":
        return ex63()
    if key.startswith("ex61"):
        args = key[4:].strip("()")
        if not args:
            return ex61(3, 3), None
        parts = [int(a) for a in args.split(",")]
        return ex61(*parts), None
    raise KeyError(f"unknown example {name!r}")


class ConstructionError(RuntimeError):
    pass


def _random_in(C: Ideal, deg: int, rng: random.Random) -> Polynomial:
    """Random combination of the degree-deg generators of C."""
    gs = [g for g in C.gens if g.degree() == deg]
    acc = C.ring.zero()
    for g in gs:
        acc = acc + g.scale(rng.randrange(1, C.ring.p))
    return acc


def construct_6_5(I: Ideal, J: Ideal, mode: str = "goto", seed=0) -> Ideal:
    """K with J ⊆ K ⊆ (J:m) ∩ I, or H = K + (a) for the almost-Goto construction."""
    ring = I.ring
    rng = random.Random(f"c65:{seed}")
    m = Ideal.maximal(ring)
    C = Ideal(ring, J.colon(m).intersect(I).min_gens())
    extra = [g for g in C.gens if not J.contains(g)]
    K = J
    if extra:
        degs = sorted({g.degree() for g in extra})
        for deg in rng.sample(degs, rng.randint(0, len(degs))):
            f = _random_in(Ideal(ring, [g for g in extra if g.degree() == deg]), deg, rng)
            if f:
                K = K + f
    if mode == "goto":
        return K
    if mode != "almost-goto":
        raise ValueError("mode must be 'goto' or 'almost-goto'")
    base = I.intersect(J.colon(m ** 2))
    # a_1..a_n: the variables first, then random bases of m_1
    for basis in range(4):
        xs = ring.gens() if basis == 0 else _random_basis(ring, rng)
        D = base.intersect(J.colon(Ideal(ring, xs[:-1])))
        bad = J.colon_element(xs[-1])
        cands = [g for g in D.min_gens() if not bad.contains(g)]
        if not cands:
            continue
        deg = rng.choice(sorted({g.degree() for g in cands}))
        for _ in range(8):
            a = _random_in(Ideal(ring, [g for g in D.min_gens() if g.degree() == deg]), deg, rng)
            if a and not bad.contains(a):
                return K + a
    raise ConstructionError("I ∩ (J:m²) ∩ (J:(a_1..a_{n-1})) lies inside J:a_n for every basis tried; re-seed")


def _random_basis(ring: PolyRing, rng: random.Random) -> list:
    xs = ring.gens()
    while True:
        rows = [[rng.randrange(ring.p) for _ in xs] for _ in xs]
        if rank(rows, ring.p) == len(xs):
            return [sum((v.scale(c) for v, c in zip(xs, row)), ring.zero()) for row in rows]


def _random_linear_matrix(ring: PolyRing, nrows: int, ncols: int, rng: random.Random) -> list:
    """Columns of a random matrix of linear forms."""
    xs = ring.gens()
    cols = []
    for _ in range(ncols):
        col = []
        for _ in range(nrows):
            f = ring.zero()
            for v in xs:
                f = f + v.scale(rng.randrange(ring.p))
            col.append(f)
        cols.append(col)
    return cols


def _maximal_minor_gens(cols: list, n: int, ring: PolyRing) -> list:
    """Signed maximal minors of the n x (n-1) matrix: the generators annihilated by its columns."""
    gens = []
    for i in range(n):
        keep = [k for k in range(n) if k != i]
        sub = [[c[k] for k in keep] for c in cols]
        det = next(iter_minors(sub, n - 1, n - 1, ring), None)
        det = det if det is not None else ring.zero()
        gens.append(det if i % 2 == 0 else -det)
    return gens


@dataclass
class Family66:
    d: int
    n: int
    seed: object
    ring: PolyRing
    matrix: list            # columns of the n x (n-1) presentation
    I: Ideal
    J: Ideal
    bound: Ideal            # I m^{n-d-1} + J
    socle: Ideal            # J : m
    socle_degrees: list
    socle_equals_bound: bool
    draws: int = 1


def family_6_6(d: int, n: int, seed=0, max_draws: int = 8) -> Family66:
    """Height-two perfect ideal with a random linear presentation, and J from its first d generators."""
    if not (3 <= d < n):
        raise ValueError("need 3 <= d < n")
    ring = _ring([f"x{i}" for i in range(1, d + 1)])
    m = Ideal.maximal(ring)
    for draw in range(max_draws):
        rng = random.Random(f"f66:{d}:{n}:{seed}:{draw}")
        cols = _random_linear_matrix(ring, n, n - 1, rng)
        gens = _maximal_minor_gens(cols, n, ring)
        if any(not g for g in gens):
            continue
        I = Ideal(ring, gens)
        if I.mu() != n or height(I) != 2:
            continue
        if not check_Gs(I, d):
            continue
        J = Ideal(ring, gens[:d])
        try:
            reduction_number(I, J, cap=2 * n)
        except BlowupError:
            continue
        bound = I * (m ** (n - d - 1)) + J if n - d - 1 > 0 else I
        soc = J.colon(m)
        # generator degrees of (J:m)/J from HS(R/(J + m(J:m))) - HS(R/(J:m))
        top = hilbert_series_of_quotient(J + soc * m)
        low = hilbert_series_of_quotient(soc)
        diff = psub(low.numerator, top.numerator)
        q = diff
        for w in ring.weights:
            # numerator difference over (1-t)^d is a polynomial: the socle generator count by degree
            q = _divide_one_minus(q, w)
        degs = sorted({k for k, c in enumerate(q) if c})
        return Family66(d, n, seed, ring, cols, I, J, bound, soc, degs,
                        soc.equals(bound), draw + 1)
    raise ConstructionError(f"no generic matrix found in {max_draws} draws for (d,n) = ({d},{n})")


def _divide_one_minus(a, w):
    q, rem = pdivmod(a, one_minus(w))
    if rem:
        raise ConstructionError("generator count is not a polynomial")
    return q


@dataclass
class KSample:
    K: Ideal
    inside: bool            # K ⊆ I m^{n-d-1} + J
    goto_minimal: bool      # K m = J m
    r_K: int
    depth_hypothesis: bool = None   # depth R/K^j >= d-g-j+1 for 1 <= j <= s-g+1
    equals_J: bool = False
    cm: dict = None

    def to_dict(self):
        out = {"inside_bound": self.inside, "goto_minimal": self.goto_minimal, "r_K": self.r_K,
               "equals_J": self.equals_J,
               "depth_hypothesis": self.depth_hypothesis,
               "generator_degrees": sorted(g.degree() for g in self.K.gens)}
        if self.cm is not None:
            out["cm"] = self.cm
        return out


def sample_K(fam: Family66, rng: random.Random, inside: bool) -> Ideal:
    """J plus one or two random elements, from I m^{n-d-1} (inside) or from I_{n-1} (outside)."""
    ring = fam.ring
    k = fam.n - fam.d - 1
    if inside:
        if rng.random() < 0.25:
            return fam.J
        B = Ideal(ring, fam.bound.min_gens())
        degs = sorted({g.degree() for g in B.gens if not fam.J.contains(g)})
        if not degs:
            return fam.J
        K = fam.J
        for _ in range(rng.randint(1, 2)):
            K = K + _random_in(B, rng.choice(degs), rng)
        return K
    if k <= 0:
        raise ConstructionError("every K is inside the bound when n = d + 1")
    K = fam.J
    for _ in range(rng.randint(1, 2)):
        K = K + _random_in(fam.I, fam.n - 1, rng)
    return K


def check_K(fam: Family66, K: Ideal, with_cm: bool = False, seed=0) -> KSample:
    ring = fam.ring
    m = Ideal.maximal(ring)
    inside = fam.bound.contains(K)
    goto = (K * m).equals(fam.J * m)
    r = reduction_number(K, fam.J)
    # depth R/K^j >= d-g-j+1 for 1 <= j <= s-g+1, with g = 2 and s = d
    dh = True
    for j in range(1, fam.d):
        need = fam.d - 2 - j + 1
        if need > 0 and depth_report(K ** j if j > 1 else K, seed).depth < need:
            dh = False
            break
    cm = None
    if with_cm and goto:
        A = Analysis(K, seed, reduction=fam.J,
                     an_source=("inherited", "J ⊆ K ⊆ I with I perfect of height two and J a minimal reduction"))
        cm = {"R": A.depth_R.cohen_macaulay, "G": A.depth_G.cohen_macaulay,
              "F": A.depth_F.cohen_macaulay}
    return KSample(K, inside, goto, r, dh, K.equals(fam.J), cm)


def construct_6_6(d: int, n: int, seed=0, samples: int = 2, with_cm: bool = False) -> dict:
    """One family draw: the iff between Goto-minimality and K ⊆ I m^{n-d-1} + J, and the socle degree."""
    fam = family_6_6(d, n, seed)
    rng = random.Random(f"k66:{d}:{n}:{seed}")
    out = []
    for i in range(samples):
        inside = (n - d - 1 <= 0) or i % 2 == 0
        K = sample_K(fam, rng, inside)
        out.append(check_K(fam, K, with_cm, seed))
    g = 2
    expected = 2 * (n - 1) - d
    return {
        "d": d, "n": n, "seed": seed, "draws": fam.draws,
        "socle_degrees": fam.socle_degrees,
        "socle_degree_expected": expected,
        "socle_degree_ok": fam.socle_degrees == [expected],
        "socle_equals_bound": fam.socle_equals_bound,
        "samples": [s.to_dict() for s in out],
        "iff_agree": all(s.inside == s.goto_minimal for s in out),
        "dichotomy_ok": all(s.r_K in (0, d - g + 1) for s in out if s.goto_minimal),
        "cm_ok": all(all(s.cm.values()) for s in out if s.cm is not None),
    }
