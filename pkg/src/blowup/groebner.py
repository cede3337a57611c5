"""Buchberger's algorithm, normal forms, reduced Gröbner bases and syzygies.

The engine works on *terms*: a packed monomial shifted left by ``low`` bits,
the low bits holding a free-module component index, plus an optional
position block stored above the monomial.  Blocks compare before anything
else (a position-over-term split), components break ties after the monomial
(term-over-position).  With ``low == 0`` and no block this is the ideal case.

Elements are dicts term -> coefficient in [1, p).
"""
from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass, field

from .ring import FIELD_BITS, FIELD_MASK, DegreeBudgetError, Polynomial, PolyRing

log = logging.getLogger(__name__)

BLOCK_BITS = 4

# callbacks (order, basis) run on every basis the engine returns; used by certificate audits
observers = []


class TermOrder:
    """Term arithmetic for a free module; ``low`` bits of component index."""

    def __init__(self, ring: PolyRing, low: int = 0, blocks: bool = False):
        self.ring = ring
        self.low = low
        self.lowmask = (1 << low) - 1
        self.flip = ring.flip << low
        self.guard = ring.guard << low
        self.high = ring.nfields * FIELD_BITS + low
        self.monomask = ring.value_mask << low
        self.blocks = blocks
        self.chk = self.guard | self.lowmask | (((1 << BLOCK_BITS) - 1) << self.high)
        self.degshift = ring._deg_shift + low
        self.p = ring.p
        self.ideal_case = low == 0 and not blocks

    def key(self, t: int) -> int:
        return t ^ self.flip

    def deg(self, t: int) -> int:
        return (t >> self.degshift) & FIELD_MASK

    def divides(self, a: int, b: int) -> bool:
        g = self.guard
        return ((b | g) - a) & self.chk == g

    def same_component(self, a: int, b: int) -> bool:
        return (a ^ b) & ~self.monomask == 0

    def mono(self, t: int) -> int:
        return (t & self.monomask) >> self.low

    def component(self, t: int) -> int:
        return t & self.lowmask

    def block(self, t: int) -> int:
        return t >> self.high

    def lcm(self, a: int, b: int) -> int:
        ring = self.ring
        ma, mb = self.mono(a), self.mono(b)
        ea, eb = ring.decode(ma), ring.decode(mb)
        # degree fields may carry a module shift; keep it, take lcm of exponents
        shift = ma - ring.encode(ea)
        m = ring.encode([x if x > y else y for x, y in zip(ea, eb)]) + shift
        return (a & ~self.monomask) | (m << self.low)

    def coprime(self, a: int, b: int) -> bool:
        ea = self.ring.decode(self.mono(a))
        eb = self.ring.decode(self.mono(b))
        return not any(x and y for x, y in zip(ea, eb))

    def lead(self, f: dict) -> int:
        fl = self.flip
        return max(f, key=lambda t: t ^ fl)

    def term(self, mono: int, comp: int = 0, block: int = 0, shift: int = 0) -> int:
        """Pack a ring monomial into component ``comp`` with a degree shift."""
        m = mono + shift * self.ring.shift_unit
        return (block << self.high) | (m << self.low) | comp


def make_monic(f: dict, lt: int, p: int) -> dict:
    c = f[lt]
    if c == 1:
        return f
    inv = pow(c, -1, p)
    return {t: v * inv % p for t, v in f.items()}


class Reducer:
    """Division by a growing list of monic elements, with a divisor cache."""

    def __init__(self, order: TermOrder):
        self.order = order
        self.elems = []      # (lt, terms)
        self.active = []
        self._cache = {}     # term -> divisor index, or -(elements scanned) - 1

    def add(self, lt: int, f: dict) -> int:
        self.elems.append((lt, f))
        self.active.append(True)
        return len(self.elems) - 1

    def deactivate(self, i: int):
        self.active[i] = False
        self._cache = {t: j for t, j in self._cache.items() if j != i}

    def find_divisor(self, t: int):
        cache = self._cache
        c = cache.get(t)
        if c is not None:
            if c >= 0:
                return c
            start = -c - 1
        else:
            start = 0
        elems = self.elems
        g = self.order.guard
        chk = self.order.chk
        active = self.active
        tg = t | g
        for i in range(start, len(elems)):
            if active[i] and (tg - elems[i][0]) & chk == g:
                cache[t] = i
                return i
        cache[t] = -len(elems) - 1
        return None

    def _run(self, f: dict, full: bool, quots):
        if not f:
            return {}
        order = self.order
        p = order.p
        fl = order.flip
        f = dict(f)
        heap = [-(t ^ fl) for t in f]
        heapq.heapify(heap)
        out = {}
        elems = self.elems
        push = heapq.heappush
        pop = heapq.heappop
        find = self.find_divisor
        while heap:
            t = (-pop(heap)) ^ fl
            c = f.pop(t, 0)
            if not c:
                continue
            i = find(t)
            if i is None:
                out[t] = c
                if not full:
                    out.update(f)
                    return out
                continue
            lt, g = elems[i]
            q = t - lt
            if quots is not None:
                quots.append((q, c, i))
            neg = p - c
            for s, v in g.items():
                if s == lt:
                    continue
                s += q
                old = f.get(s)
                if old is None:
                    f[s] = neg * v % p
                    push(heap, -(s ^ fl))
                else:
                    nv = (old + neg * v) % p
                    if nv:
                        f[s] = nv
                    else:
                        del f[s]
        return out

    def reduce(self, f: dict, full: bool = True) -> dict:
        """Normal form of ``f`` (or only its top-reduced form)."""
        return self._run(f, full, None)

    def reduce_with_quotients(self, f: dict):
        """(remainder, quotients); quotients are (term shift, coefficient, element index)."""
        quots = []
        return self._run(f, True, quots), quots


@dataclass
class GBStats:
    pairs_total: int = 0
    pairs_reduced: int = 0
    zero_reductions: int = 0
    max_degree: int = 0

    def line(self):
        return (f"pairs={self.pairs_total} reduced={self.pairs_reduced} "
                f"zero={self.zero_reductions} maxdeg={self.max_degree}")


def spoly(order: TermOrder, a: tuple, b: tuple, lcm: int) -> dict:
    (lta, fa), (ltb, fb) = a, b
    p = order.p
    qa, qb = lcm - lta, lcm - ltb
    out = {t + qa: v for t, v in fa.items() if t != lta}
    for t, v in fb.items():
        if t == ltb:
            continue
        t += qb
        nv = (out.get(t, 0) - v) % p
        if nv:
            out[t] = nv
        else:
            out.pop(t, None)
    return out


@dataclass
class TermGB:
    """Raw result of :func:`buchberger_terms`."""
    basis: list                 # reduced, sorted by leading term: (lt, terms)
    minimal_inputs: list        # indices of inputs that were not redundant when met
    stats: GBStats


def buchberger_terms(order: TermOrder, gens: list, degree_limit: int = None,
                     trace: bool = False, reduce_basis: bool = True) -> TermGB:
    """Gröbner basis of the submodule generated by the term-dicts ``gens``.

    Pairs and inputs are processed in order of sugar degree (pairs first at
    equal sugar), with Gebauer-Möller pair management.  For homogeneous
    input the inputs that survive reduction at their degree form a minimal
    generating set.
    """
    p = order.p
    fl = order.flip
    deg = order.deg
    stats = GBStats()
    ideal_case = order.ideal_case
    red = Reducer(order)
    elems = red.elems
    sugar = []
    basis = []           # indices into red.elems of the current basis
    pairs = {}           # (i, j) -> lcm
    heap = []
    minimal = []

    def install(h: dict, s: int):
        lt = order.lead(h)
        h = make_monic(h, lt, p)
        idx = red.add(lt, h)
        sugar.append(s)
        cands = []
        for g in basis:
            ltg = elems[g][0]
            if order.same_component(ltg, lt):
                cands.append((g, order.lcm(ltg, lt)))
        # chain criterion among the new pairs: keep one per minimal lcm
        keep = []
        for a, (g, L) in enumerate(cands):
            for b, (g2, L2) in enumerate(cands):
                if b != a and order.divides(L2, L) and (L2 != L or b < a):
                    break
            else:
                keep.append((g, L))
        # chain criterion on the old pairs
        for key in list(pairs):
            L = pairs[key]
            if order.divides(lt, L):
                i, j = key
                if order.lcm(elems[i][0], lt) != L and order.lcm(elems[j][0], lt) != L:
                    del pairs[key]
        for g, L in keep:
            ltg = elems[g][0]
            if ideal_case and order.coprime(ltg, lt):
                continue
            dL = deg(L)
            ps = max(sugar[g] + dL - deg(ltg), s + dL - deg(lt))
            pairs[(g, idx)] = L
            heapq.heappush(heap, (ps, 0, L ^ fl, g, idx))
            stats.pairs_total += 1
        for g in list(basis):
            if order.divides(lt, elems[g][0]):
                basis.remove(g)
                red.deactivate(g)
        basis.append(idx)

    for n, g in enumerate(gens):
        if g:
            d = max(deg(t) for t in g)
            heapq.heappush(heap, (d, 1, order.lead(g) ^ fl, n, -1))

    while heap:
        s, kind, _, i, j = heapq.heappop(heap)
        if kind == 1:
            h = red.reduce(gens[i])
            if h:
                minimal.append(i)
                install(h, s)
            continue
        L = pairs.pop((i, j), None)
        if L is None:
            continue
        d = deg(L)
        if degree_limit is not None and d > degree_limit:
            raise DegreeBudgetError(d, degree_limit, "S-pair")
        if d > stats.max_degree:
            stats.max_degree = d
        stats.pairs_reduced += 1
        h = red.reduce(spoly(order, elems[i], elems[j], L))
        if not h:
            stats.zero_reductions += 1
            continue
        install(h, s)
    if trace:
        log.info("buchberger: %s basis=%d", stats.line(), len(basis))
    final = [elems[i] for i in basis]
    final = interreduce(order, final) if reduce_basis else sorted(final, key=lambda e: e[0] ^ fl)
    for fn in observers:
        fn(order, final)
    return TermGB(final, sorted(minimal), stats)


def interreduce(order: TermOrder, elems: list) -> list:
    """Reduced basis from a GB whose leading terms are pairwise non-divisible."""
    fl = order.flip
    elems = sorted(elems, key=lambda e: e[0] ^ fl)
    red = Reducer(order)
    for e in elems:
        red.add(*e)
    out = []
    for k, (lt, f) in enumerate(elems):
        red.active[k] = False
        red._cache.clear()
        tail = red.reduce({t: v for t, v in f.items() if t != lt})
        red.active[k] = True
        tail[lt] = 1
        out.append((lt, tail))
    return out


# --- polynomial level ---------------------------------------------------------

@dataclass(eq=False)
class ReducedGB:
    ring: PolyRing
    basis: list
    stats: GBStats = field(default_factory=GBStats, repr=False)

    def __post_init__(self):
        self._reducer = None

    @property
    def reducer(self) -> Reducer:
        if self._reducer is None:
            r = Reducer(TermOrder(self.ring))
            for g in self.basis:
                r.add(g.lm, g.terms)
            self._reducer = r
        return self._reducer

    def reduce(self, f: Polynomial) -> Polynomial:
        if f.ring != self.ring:
            raise ValueError("ring mismatch")
        return Polynomial(self.ring, self.reducer.reduce(f.terms))

    def contains(self, f: Polynomial) -> bool:
        return not self.reducer.reduce(f.terms, full=False)

    def leading_monomials(self) -> list:
        return [g.lm for g in self.basis]

    def leading_exponents(self) -> list:
        return [self.ring.decode(g.lm) for g in self.basis]

    def is_unit(self) -> bool:
        return any(g.lm == 0 for g in self.basis)

    def __len__(self):
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)

    def __eq__(self, other):
        return (isinstance(other, ReducedGB) and self.ring == other.ring
                and [g.terms for g in self.basis] == [g.terms for g in other.basis])

    def __hash__(self):
        return hash((self.ring, tuple(tuple(sorted(g.terms.items())) for g in self.basis)))


def default_limit(ring: PolyRing, shift: int = 0) -> int:
    return ring.degree_cap * max(ring.weights) + shift


def buchberger(gens, ring: PolyRing = None, trace: bool = False,
               degree_limit: int = None) -> ReducedGB:
    """Reduced Gröbner basis of the ideal generated by ``gens``."""
    gens = [g for g in gens if g]
    if ring is None:
        if not gens:
            raise ValueError("ring required for an empty generator list")
        ring = gens[0].ring
    for g in gens:
        if g.ring != ring:
            raise ValueError("generators live in different rings")
    if degree_limit is None:
        degree_limit = default_limit(ring)
    res = buchberger_terms(TermOrder(ring), [g.terms for g in gens], degree_limit, trace)
    return ReducedGB(ring, [Polynomial(ring, f) for _, f in res.basis], res.stats)


def minimal_generators(gens: list, ring: PolyRing = None) -> list:
    """Minimal homogeneous generators, chosen from ``gens`` by ascending degree."""
    gens = [g for g in gens if g]
    if not gens:
        return []
    ring = ring or gens[0].ring
    if not all(g.is_homogeneous() for g in gens):
        raise ValueError("minimal generators need homogeneous input")
    res = buchberger_terms(TermOrder(ring), [g.terms for g in gens], default_limit(ring))
    return [gens[i] for i in res.minimal_inputs]


def normal_form(f: Polynomial, G) -> Polynomial:
    """Remainder of ``f`` on division by ``G`` (a list of polynomials or a ReducedGB)."""
    if isinstance(G, ReducedGB):
        return G.reduce(f)
    red = Reducer(TermOrder(f.ring))
    for g in G:
        if g.ring != f.ring:
            raise ValueError("ring mismatch")
        if g:
            red.add(g.lm, make_monic(g.terms, g.lm, f.ring.p))
    return Polynomial(f.ring, red.reduce(f.terms))


def spair_certificate(gb, order: TermOrder = None) -> bool:
    """True when every S-polynomial of basis pairs reduces to zero."""
    if isinstance(gb, ReducedGB):
        order = TermOrder(gb.ring)
        elems = [(g.lm, make_monic(g.terms, g.lm, gb.ring.p)) for g in gb.basis]
    else:
        elems = list(gb)
    red = Reducer(order)
    for e in elems:
        red.add(*e)
    for i in range(len(elems)):
        for j in range(i + 1, len(elems)):
            if not order.same_component(elems[i][0], elems[j][0]):
                continue
            L = order.lcm(elems[i][0], elems[j][0])
            if red.reduce(spoly(order, elems[i], elems[j], L)):
                return False
    return True


def is_reduced(gb: ReducedGB) -> bool:
    ring = gb.ring
    for g in gb.basis:
        if g.lc != 1:
            return False
        for h in gb.basis:
            if h is not g and any(ring.divides(h.lm, m) for m in g.terms):
                return False
    return True


# --- free modules -------------------------------------------------------------

def component_bits(n: int) -> int:
    return max(1, (n - 1).bit_length())


def encode_vector(order: TermOrder, vec, shifts, block: int = 0, offset: int = 0) -> dict:
    """Term-dict of a column vector of polynomials; component i gets index offset+i."""
    out = {}
    unit = order.ring.shift_unit
    hi = block << order.high
    low = order.low
    for i, f in enumerate(vec):
        if not f:
            continue
        base = shifts[i] * unit
        c = offset + i
        for m, v in f.terms.items():
            out[hi | ((m + base) << low) | c] = v
    return out


def decode_vector(order: TermOrder, terms: dict, shifts, offset: int = 0) -> list:
    ring = order.ring
    unit = ring.shift_unit
    out = [dict() for _ in shifts]
    for t, v in terms.items():
        i = order.component(t) - offset
        out[i][order.mono(t) - shifts[i] * unit] = v
    return [Polynomial(ring, d) for d in out]


@dataclass
class SyzygyMatrix:
    """Columns are relations: sum_i column[i] * gens[i] = 0."""
    ring: PolyRing
    nrows: int
    columns: list                   # list of columns, each a list of nrows polynomials
    row_degrees: list
    col_degrees: list

    @property
    def ncols(self) -> int:
        return len(self.columns)

    def entry(self, i: int, j: int) -> Polynomial:
        return self.columns[j][i]

    def rows(self) -> list:
        return [[c[i] for c in self.columns] for i in range(self.nrows)]

    def apply(self, gens) -> list:
        """Products column . gens, all zero for a genuine syzygy matrix."""
        ring = self.ring
        out = []
        for col in self.columns:
            acc = ring.zero()
            for a, g in zip(col, gens):
                if a and g:
                    acc = acc + a * g
            out.append(acc)
        return out

    def is_linear(self) -> bool:
        return all(f.is_zero() or (f.is_homogeneous() and f.degree() == 1)
                   for col in self.columns for f in col)

    def __str__(self):
        rows = self.rows()
        return "\n".join("[" + ", ".join(str(f) for f in r) + "]" for r in rows)


def _shift_floor(shifts):
    lo = min(shifts, default=0)
    return [s - lo for s in shifts], lo


def module_syzygies(columns: list, row_degrees: list, ring: PolyRing,
                    minimal: bool = True, degree_limit: int = None,
                    trace: bool = False) -> tuple:
    """Syzygies of the vectors ``columns`` in a free module with given row degrees.

    The columns v_1..v_m are lifted to (v_i, e_i) in F + S^m with the F block
    dominant; Gröbner basis elements without F part generate the syzygies.
    Returns (syzygy columns, column degrees) where the degrees are those of the
    homogeneous syzygies when the input is graded.
    """
    m = len(columns)
    if m == 0:
        return [], []
    r = len(row_degrees)
    homogeneous = True
    col_deg = []
    for v in columns:
        d = None
        for i, f in enumerate(v):
            if not f:
                continue
            if not f.is_homogeneous():
                homogeneous = False
                break
            e = f.degree() + row_degrees[i]
            if d is None:
                d = e
            elif d != e:
                homogeneous = False
                break
        col_deg.append(d if d is not None else 0)
    row_sh, lo = _shift_floor(list(row_degrees))
    col_sh = [d - lo for d in col_deg]
    if not homogeneous:
        col_sh = [0] * m
    if min(col_sh, default=0) < 0:
        raise ValueError("bad degree data")
    low = component_bits(max(r, m))
    order = TermOrder(ring, low, blocks=True)
    gens = []
    for k, v in enumerate(columns):
        t = encode_vector(order, v, row_sh, block=1)
        t[order.term(0, k, 0, col_sh[k])] = 1
        gens.append(t)
    limit = degree_limit if degree_limit is not None else default_limit(ring, max(col_sh + row_sh))
    res = buchberger_terms(order, gens, limit, trace)
    syz = [f for lt, f in res.basis if order.block(lt) == 0]
    if minimal and homogeneous and syz:
        order0 = TermOrder(ring, low)
        syz = [{t & ~(((1 << BLOCK_BITS) - 1) << order.high): v for t, v in f.items()} for f in syz]
        mres = buchberger_terms(order0, syz, limit, trace, reduce_basis=False)
        syz = [syz[i] for i in mres.minimal_inputs]
        order = order0
    cols, degs = [], []
    for f in syz:
        cols.append(decode_vector(order, f, col_sh))
        lt = order.lead(f)
        degs.append(order.deg(lt) + (lo if homogeneous else 0))
    if homogeneous:
        pairs = sorted(zip(degs, range(len(cols))))
        cols = [cols[k] for _, k in pairs]
        degs = [d for d, _ in pairs]
    return cols, degs


def syzygies(gens: list, ring: PolyRing = None, minimal: bool = True,
             trace: bool = False) -> SyzygyMatrix:
    """First syzygy module of ``gens`` (minimal when the input is homogeneous)."""
    if ring is None:
        ring = gens[0].ring
    degs = [g.degree() if g else 0 for g in gens]
    cols, cdeg = module_syzygies([[g] for g in gens], [0], ring, minimal, trace=trace)
    # relations of scalar generators: column entries live in rows of gens
    return SyzygyMatrix(ring, len(gens), cols, degs, cdeg)
