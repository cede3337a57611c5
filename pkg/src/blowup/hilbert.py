"""Hilbert series of graded quotients from leading-term ideals; dimensions, lengths, multiplicities."""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import reduce

from .ideal import Ideal, IdealError
from .linalg import span_dimension
from .ring import PolyRing


# --- integer polynomials in t, as tuples of coefficients (index = degree) -------

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def padd(a, b):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def psub(a, b):
    return padd(a, tuple(-c for c in b))


def pmul(a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def pshift(a, k):
    return _trim((0,) * k + tuple(a)) if a else ()


def one_minus(w):
    return _trim((1,) + (0,) * (w - 1) + (-1,))


def pdivmod(a, b):
    """Exact-integer division by a polynomial with leading coefficient ±1."""
    a = list(a)
    b = _trim(b)
    lb = b[-1]
    if abs(lb) != 1:
        raise ValueError("divisor must have unit leading coefficient")
    q = [0] * max(0, len(a) - len(b) + 1)
    for k in range(len(a) - len(b), -1, -1):
        c = a[k + len(b) - 1] * lb
        q[k] = c
        if c:
            for i, y in enumerate(b):
                a[k + i] -= c * y
    return _trim(q), _trim(a)


def peval(a, x):
    return sum(c * x ** i for i, c in enumerate(a))


def pstr(a, var="t") -> str:
    parts = []
    for i, c in enumerate(a):
        if not c:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if mono and abs(c) == 1:
            s = mono
        else:
            s = f"{abs(c)}*{mono}" if mono else str(abs(c))
        sign = "-" if c < 0 else "+"
        parts.append((sign, s))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, s in parts[1:]:
        out += f" {sign} {s}"
    return out


# --- monomial ideals ---------------------------------------------------------

def _minimalize(mons):
    mons = sorted(set(mons), key=sum)
    out = []
    for m in mons:
        if not any(all(a <= b for a, b in zip(g, m)) for g in out):
            out.append(m)
    return out


def _deg(m, w):
    return sum(a * b for a, b in zip(m, w))


def monomial_numerator(mons, weights) -> tuple:
    """Numerator K(t) with HS(S/(mons)) = K(t) / prod(1 - t^w_i)."""
    mons = _minimalize(mons)
    return _numer(mons, tuple(weights))


def _numer(mons, w):
    if not mons:
        return (1,)
    if any(not any(m) for m in mons):
        return ()
    # base case: generators with pairwise disjoint supports
    support = [tuple(i for i, e in enumerate(m) if e) for m in mons]
    seen = set()
    disjoint = True
    for s in support:
        if seen.intersection(s):
            disjoint = False
            break
        seen.update(s)
    if disjoint:
        return reduce(pmul, (one_minus(_deg(m, w)) for m in mons), (1,))
    if len(mons) <= 2:
        a, b = mons
        lcm = tuple(max(x, y) for x, y in zip(a, b))
        out = psub(psub((1,), pshift((1,), _deg(a, w))), pshift((1,), _deg(b, w)))
        return padd(out, pshift((1,), _deg(lcm, w)))
    # pivot x_i^e: x_i occurs most often among mixed generators, e its smallest
    # exponent there (below any pure power of x_i, so the pivot is not in M)
    n = len(w)
    mixed = [m for m in mons if sum(1 for a in m if a) > 1]
    counts = [sum(1 for m in mixed if m[k]) for k in range(n)]
    i = max(range(n), key=lambda k: counts[k])
    e = min(m[i] for m in mixed if m[i])
    piv = tuple(e if k == i else 0 for k in range(n))
    # K(M) = K(M + (p)) + t^deg(p) K(M : p)
    plus = _minimalize(mons + [piv])
    colon = _minimalize([tuple(max(a - b, 0) for a, b in zip(m, piv)) for m in mons])
    return padd(_numer(plus, w), pshift(_numer(colon, w), _deg(piv, w)))


# --- Hilbert series ----------------------------------------------------------

@dataclass(frozen=True)
class HilbertSeries:
    """numerator(t) / prod(1 - t^w) over the given weights."""
    numerator: tuple
    weights: tuple

    def simplify(self) -> "HilbertSeries":
        num = self.numerator
        ws = list(self.weights)
        keep = []
        for w in sorted(ws):
            if num:
                q, r = pdivmod(num, one_minus(w))
                if not r:
                    num = q
                    continue
            keep.append(w)
        return HilbertSeries(num, tuple(keep))

    def denominator(self) -> tuple:
        return reduce(pmul, (one_minus(w) for w in self.weights), (1,))

    def dimension(self) -> int:
        """Pole order at t = 1; -1 for the zero series."""
        if not self.numerator:
            return -1
        num = self.numerator
        order = 0
        while True:
            q, r = pdivmod(num, (-1, 1))
            if r:
                break
            num = q
            order += 1
        return len(self.weights) - order

    def coefficients(self, upto: int) -> list:
        """Power series coefficients HF(0..upto)."""
        series = [0] * (upto + 1)
        for i, c in enumerate(self.numerator[:upto + 1]):
            series[i] = c
        for w in self.weights:
            for k in range(w, upto + 1):
                series[k] += series[k - w]
        return series

    def __eq__(self, other):
        if not isinstance(other, HilbertSeries):
            return NotImplemented
        return pmul(self.numerator, other.denominator()) == pmul(other.numerator, self.denominator())

    def __hash__(self):
        s = self.simplify()
        return hash((s.numerator, s.weights))

    def __sub__(self, other):
        num = psub(pmul(self.numerator, other.denominator()), pmul(other.numerator, self.denominator()))
        return HilbertSeries(num, self.weights + other.weights).simplify()

    def __str__(self):
        s = self.simplify()
        if not s.weights:
            return pstr(s.numerator)
        den = " * ".join(f"(1 - t^{w})" if w > 1 else "(1 - t)" for w in s.weights)
        return f"({pstr(s.numerator)}) / ({den})"

    def multiplicity(self) -> int:
        """Leading coefficient data: numerator/(1-t)^... evaluated at 1 (standard grading)."""
        s = self.simplify()
        if any(w != 1 for w in s.weights):
            raise ValueError("multiplicity needs standard grading")
        return peval(s.numerator, 1)

    def to_dict(self) -> dict:
        s = self.simplify()
        return {"numerator": list(s.numerator), "denominator_weights": list(s.weights)}


@dataclass(frozen=True)
class LengthValue:
    value: int = None      # None means infinite

    @property
    def finite(self) -> bool:
        return self.value is not None

    def __int__(self):
        if self.value is None:
            raise ValueError("infinite length")
        return self.value

    def __eq__(self, other):
        if isinstance(other, int):
            return self.value == other
        if isinstance(other, LengthValue):
            return self.value == other.value
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __str__(self):
        return "inf" if self.value is None else str(self.value)

    def to_json(self):
        return self.value if self.value is not None else "infinite"


def hilbert_series_of_quotient(A: Ideal) -> HilbertSeries:
    ring = A.ring
    if not A.is_homogeneous():
        raise IdealError("Hilbert series needs a homogeneous ideal")
    if not A.gens:
        return HilbertSeries((1,), ring.weights)
    lead = [ring.decode(m) for m in A.gb().leading_monomials()]
    return HilbertSeries(monomial_numerator(lead, ring.weights), ring.weights)


def module_hilbert_series(ring: PolyRing, leading: dict, shifts: list) -> HilbertSeries:
    """HS of a quotient of a graded free module: leading[i] are the exponent tuples in component i."""
    if min(shifts, default=0) < 0:
        raise ValueError("negative shifts not supported")
    num = ()
    for i, s in enumerate(shifts):
        num = padd(num, pshift(monomial_numerator(leading.get(i, []), ring.weights), s))
    return HilbertSeries(num, ring.weights)


def dimension(A: Ideal) -> int:
    """Krull dimension of R/A; -1 for the unit ideal."""
    return hilbert_series_of_quotient(A).dimension()


def height(A: Ideal) -> int:
    """Height of A; the unit ideal gets nvars + 1, above every proper ideal."""
    d = dimension(A)
    n = A.ring.nvars
    return n + 1 if d < 0 else n - d


def length_of_quotient(A: Ideal, B: Ideal, check: bool = True) -> LengthValue:
    """λ(A/B) for homogeneous B ⊆ A."""
    if check and not A.contains(B):
        raise IdealError("length_of_quotient needs B contained in A")
    diff = psub(hilbert_series_of_quotient(B).numerator, hilbert_series_of_quotient(A).numerator)
    if not diff:
        return LengthValue(0)
    den = reduce(pmul, (one_minus(w) for w in A.ring.weights), (1,))
    q, r = pdivmod(diff, den)
    if r:
        return LengthValue(None)
    return LengthValue(peval(q, 1))


def length_in_quotient(A: Ideal, B: Ideal, Q: Ideal) -> LengthValue:
    """λ of (A + Q)/(B + Q), i.e. the length of Ā/B̄ in R/Q."""
    return length_of_quotient(A + Q, B + Q)


def general_combinations(gens: list, k: int, rng: random.Random) -> list:
    p = gens[0].ring.p
    out = []
    for _ in range(k):
        acc = gens[0].ring.zero()
        for g in gens:
            acc = acc + g.scale(rng.randrange(1, p))
        out.append(acc)
    return out


def hs_multiplicity(A: Ideal, seed: int = 0, max_trials: int = 6) -> int:
    """e(A) for an m-primary equigenerated ideal: λ(R/(d general combinations))."""
    ring = A.ring
    if not A.is_equigenerated():
        raise IdealError("hs_multiplicity needs an equigenerated homogeneous ideal")
    if dimension(A) != 0:
        raise IdealError("hs_multiplicity needs an m-primary ideal")
    gens = A.min_gens()
    d = ring.nvars
    seen = []
    for trial in range(max_trials):
        rng = random.Random(f"hs-mult:{seed}:{trial}")
        J = Ideal(ring, general_combinations(gens, d, rng))
        lam = length_of_quotient(Ideal.unit(ring), J, check=False)
        if lam.finite:
            if lam.value in seen:
                return lam.value
            seen.append(lam.value)
    raise IdealError(f"multiplicity draws never agreed: {seen}")


def hilbert_function_by_linear_algebra(A: Ideal, t: int) -> int:
    """dim_k (R/A)_t from the span of monomial multiples of the generators."""
    ring = A.ring
    mons = [ring.encode(e) for e in ring.monomials_of_degree(t)]
    polys = []
    for g in A.gens:
        dg = g.degree()
        if dg > t:
            continue
        for e in ring.monomials_of_degree(t - dg):
            polys.append(g.mul_monomial(ring.encode(e)))
    return len(mons) - span_dimension(polys, mons)
