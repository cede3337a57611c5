"""Ideals: arithmetic, intersections, quotients, saturation, elimination, Fitting ideals."""
from __future__ import annotations

import itertools
import logging
import threading

import numpy as np

from .groebner import (ReducedGB, Reducer, TermOrder, buchberger, minimal_generators,
                       module_syzygies, syzygies)
from .linalg import rref
from .ring import Polynomial, PolyRing, RingError, map_poly

log = logging.getLogger(__name__)

SATURATION_CAP = 64


class IdealError(ValueError):
    pass


class Ideal:
    """Ideal of a polynomial ring, given by generators; Gröbner bases cached per order."""

    def __init__(self, ring: PolyRing, gens=()):
        self.ring = ring
        out = []
        for g in gens:
            if not isinstance(g, Polynomial):
                g = ring(g)
            elif g.ring != ring:
                raise RingError("generator from another ring")
            if g:
                out.append(g)
        self.gens = tuple(out)
        self._gb = {}
        self._lock = threading.Lock()
        self._mingens = None

    @classmethod
    def parse(cls, ring: PolyRing, text: str) -> "Ideal":
        return cls(ring, [ring(s) for s in text.split(",") if s.strip()])

    @classmethod
    def maximal(cls, ring: PolyRing) -> "Ideal":
        return cls(ring, ring.gens())

    @classmethod
    def unit(cls, ring: PolyRing) -> "Ideal":
        return cls(ring, [ring.const(1)])

    def __repr__(self):
        return f"Ideal({', '.join(str(g) for g in self.gens)})"

    def __len__(self):
        return len(self.gens)

    def __iter__(self):
        return iter(self.gens)

    # --- Gröbner data --------------------------------------------------------
    def gb(self, ring: PolyRing = None) -> ReducedGB:
        ring = ring or self.ring
        G = self._gb.get(ring)
        if G is None:
            gens = self.gens if ring == self.ring else [map_poly(g, ring) for g in self.gens]
            G = buchberger(gens, ring)
            with self._lock:
                G = self._gb.setdefault(ring, G)
        return G

    def is_zero(self) -> bool:
        return not self.gens

    def is_unit(self) -> bool:
        return bool(self.gens) and self.gb().is_unit()

    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.gens)

    def degrees(self) -> list:
        return sorted({g.degree() for g in self.gens})

    def is_equigenerated(self) -> bool:
        return self.is_homogeneous() and len(self.degrees()) <= 1

    def reduce(self, f: Polynomial) -> Polynomial:
        return self.gb().reduce(f)

    def contains(self, other) -> bool:
        if isinstance(other, Ideal):
            self._check(other)
            return all(self.contains(g) for g in other.gens)
        if not isinstance(other, Polynomial):
            other = self.ring(other)
        if not other:
            return True
        if not self.gens:
            return False
        return self.gb().contains(other)

    __contains__ = contains

    def equals(self, other: "Ideal") -> bool:
        self._check(other)
        return self.gb() == other.gb()

    def _check(self, other):
        if other.ring != self.ring:
            raise RingError("ideals live in different rings")

    # --- arithmetic ----------------------------------------------------------
    def __add__(self, other) -> "Ideal":
        if isinstance(other, Polynomial):
            other = Ideal(self.ring, [other])
        self._check(other)
        return Ideal(self.ring, compact(list(self.gens) + list(other.gens)))

    def __mul__(self, other) -> "Ideal":
        if isinstance(other, Polynomial):
            return Ideal(self.ring, [g * other for g in self.gens])
        self._check(other)
        prods = [a * b for a in self.gens for b in other.gens]
        return Ideal(self.ring, compact(prods))

    def __pow__(self, n: int) -> "Ideal":
        if n < 0:
            raise ValueError("negative power")
        out = Ideal.unit(self.ring)
        base = self
        if n and self.is_homogeneous():
            base = Ideal(self.ring, self.min_gens())
        for _ in range(n):
            out = out * base
        return out

    def extend(self, ring: PolyRing) -> "Ideal":
        """Same generators in a ring containing this one's variables."""
        return Ideal(ring, [map_poly(g, ring) for g in self.gens])

    # --- intersections and quotients -----------------------------------------
    def intersect(self, other: "Ideal") -> "Ideal":
        """A ∩ B by eliminating u from u·A + (1-u)·B."""
        self._check(other)
        if not self.gens or not other.gens:
            return Ideal(self.ring)
        ring = self.ring
        u = fresh_name(ring, "u")
        big = PolyRing((u,) + ring.variables, (1,) + ring.weights, "elim", 1,
                       ring.field, ring.degree_cap)
        U = big.gen(0)
        gens = [U * map_poly(a, big) for a in self.gens]
        gens += [(1 - U) * map_poly(b, big) for b in other.gens]
        return Ideal(ring, _eliminated(buchberger(gens, big), ring, 1))

    def colon_element(self, f: Polynomial, method: str = None) -> "Ideal":
        """A : f."""
        ring = self.ring
        if not f:
            return Ideal.unit(ring)
        if self.contains(f):
            return Ideal.unit(ring)
        if not self.gens:
            return Ideal(ring)
        if method is None:
            method = "syz" if self.is_homogeneous() and f.is_homogeneous() else "intersect"
        if method == "syz":
            # first coordinates of syzygies of (f, a_1, .., a_k)
            cols, _ = module_syzygies([[f]] + [[a] for a in self.gens], [0], ring, minimal=False)
            return Ideal(ring, compact([c[0] for c in cols if c[0]]))
        inter = self.intersect(Ideal(ring, [f]))
        return Ideal(ring, compact([divide_exact(g, f) for g in inter.gens]))

    def colon(self, other, method: str = None) -> "Ideal":
        """A : B as the intersection of A : b over generators b of B."""
        if isinstance(other, Polynomial):
            return self.colon_element(other, method)
        self._check(other)
        if method is None and len(other.gens) > 1 and self.is_homogeneous() and other.is_homogeneous():
            method = "module"
        if method == "module":
            return self._colon_module(other)
        out = None
        for b in other.gens:
            q = self.colon_element(b, method)
            out = q if out is None else out.intersect(q)
            if out.equals(self):
                break
        return out if out is not None else Ideal.unit(self.ring)

    def _colon_module(self, other: "Ideal") -> "Ideal":
        # f in A : B  iff  f*b_i in A for all i: first coordinates of syzygies
        # of the column (b_1..b_k) together with the columns a*e_i
        ring = self.ring
        bs = [b for b in other.gens if not self.contains(b)]
        if not bs:
            return Ideal.unit(ring)
        if not self.gens:
            return Ideal(ring)
        top = max(b.degree() for b in bs)
        rows = [top - b.degree() for b in bs]
        k = len(bs)
        zero = ring.zero()
        cols = [list(bs)]
        for i in range(k):
            for a in self.gens:
                col = [zero] * k
                col[i] = a
                cols.append(col)
        syz, _ = module_syzygies(cols, rows, ring, minimal=False)
        return Ideal(ring, compact([c[0] for c in syz if c[0]]))

    def saturate(self, other, cap: int = SATURATION_CAP) -> "Ideal":
        """A : B^∞ by iterating the colon until it stabilizes."""
        if isinstance(other, Polynomial):
            other = Ideal(self.ring, [other])
        cur = self
        for _ in range(cap):
            nxt = cur.colon(other)
            if nxt.equals(cur):
                return cur
            cur = nxt
        raise IdealError(f"saturation did not stabilize within {cap} steps")

    def saturate_by_generators(self, other: "Ideal") -> "Ideal":
        """A : B^∞ as the intersection of A : b^∞, each by eliminating u from A + (1 - u b)."""
        ring = self.ring
        out = None
        u = fresh_name(ring, "u")
        big = PolyRing((u,) + ring.variables, (1,) + ring.weights, "elim", 1,
                       ring.field, ring.degree_cap)
        U = big.gen(0)
        for b in other.gens:
            gens = [map_poly(a, big) for a in self.gens] + [1 - U * map_poly(b, big)]
            q = Ideal(ring, _eliminated(buchberger(gens, big), ring, 1))
            out = q if out is None else out.intersect(q)
        return out if out is not None else Ideal.unit(ring)

    def eliminate(self, front_vars) -> "Ideal":
        """A ∩ k[remaining variables], as an ideal of the smaller ring."""
        ring = self.ring
        front = [v if isinstance(v, str) else ring.variables[v] for v in front_vars]
        rest = [v for v in ring.variables if v not in front]
        if len(rest) == ring.nvars:
            return self
        order = front + rest
        w = [ring.weights[ring.index(v)] for v in order]
        big = PolyRing(tuple(order), tuple(w), "elim", len(front), ring.field, ring.degree_cap)
        sub = PolyRing(tuple(rest), tuple(w[len(front):]), "grevlex" if set(w[len(front):]) <= {1}
                       else "wgrevlex", 0, ring.field, ring.degree_cap)
        return Ideal(sub, _eliminated(self.gb(big), sub, len(front)))

    # --- generators ----------------------------------------------------------
    def min_gens(self) -> list:
        if self._mingens is None:
            if not self.is_homogeneous():
                raise IdealError("minimal generators need a homogeneous ideal")
            gens = sorted(self.gens, key=lambda g: g.degree())
            self._mingens = minimal_generators(gens, self.ring)
        return list(self._mingens)

    def mu(self) -> int:
        return len(self.min_gens())

    def minimalized(self) -> "Ideal":
        out = Ideal(self.ring, self.min_gens())
        out._gb = dict(self._gb)
        return out

    def fitting_ideal(self, i: int) -> "Ideal":
        """Fitt_i: (n-i)-minors of a presentation matrix of min_gens, n = μ."""
        gens = self.min_gens()
        n = len(gens)
        if i >= n:
            return Ideal.unit(self.ring)
        S = syzygies(gens, self.ring)
        return minors_ideal(S.columns, n, n - i, self.ring)

    # --- Hilbert data (see hilbert.py) ---------------------------------------
    def hilbert_series(self):
        from .hilbert import hilbert_series_of_quotient
        return hilbert_series_of_quotient(self)

    def dimension(self) -> int:
        from .hilbert import dimension
        return dimension(self)

    def height(self) -> int:
        from .hilbert import height
        return height(self)


def fresh_name(ring: PolyRing, base: str) -> str:
    name = base
    k = 0
    while name in ring.variables:
        k += 1
        name = f"{base}{k}"
    return name


def _eliminated(G: ReducedGB, target: PolyRing, nfront: int) -> list:
    big = G.ring
    out = []
    for g in G.basis:
        if all(not any(big.decode(m)[:nfront]) for m in g.terms):
            out.append(_drop_front(g, target, nfront))
    return out


def _drop_front(g: Polynomial, target: PolyRing, nfront: int) -> Polynomial:
    big = g.ring
    return Polynomial(target, {target.encode(big.decode(m)[nfront:]): c for m, c in g.terms.items()})


def divide_exact(g: Polynomial, f: Polynomial) -> Polynomial:
    """g / f, raising IdealError if f does not divide g."""
    ring = g.ring
    order = TermOrder(ring)
    lt = f.lm
    inv = pow(f.terms[lt], -1, ring.p)
    red = Reducer(order)
    red.add(lt, {m: c * inv % ring.p for m, c in f.terms.items()})
    rem, quots = red.reduce_with_quotients(g.terms)
    if rem:
        raise IdealError("division failure: divisor does not divide")
    q = {}
    p = ring.p
    for shift, c, _ in quots:
        q[shift] = (q.get(shift, 0) + c * inv) % p
    return Polynomial(ring, {m: c for m, c in q.items() if c})


def compact(gens: list) -> list:
    """Drop zeros and linear dependencies among homogeneous generators of equal degree."""
    gens = [g for g in gens if g]
    if len(gens) < 2:
        return gens
    ring = gens[0].ring
    by_deg = {}
    rest = []
    for g in gens:
        if g.is_homogeneous():
            by_deg.setdefault(g.degree(), []).append(g)
        else:
            rest.append(g)
    out = []
    for d in sorted(by_deg):
        group = by_deg[d]
        if len(group) == 1:
            out.append(group[0].monic())
            continue
        cols = sorted({m for g in group for m in g.terms}, key=lambda m: m ^ ring.flip, reverse=True)
        index = {m: i for i, m in enumerate(cols)}
        M = np.zeros((len(group), len(cols)), dtype=np.int64)
        for r, g in enumerate(group):
            for m, c in g.terms.items():
                M[r, index[m]] = c
        R, _ = rref(M, ring.p)
        for row in R:
            nz = np.nonzero(row)[0]
            out.append(Polynomial(ring, {cols[i]: int(row[i]) for i in nz}))
    return out + [g.monic() for g in rest]


def iter_minors(columns: list, nrows: int, t: int, ring: PolyRing):
    """All t-minors of the nrows x len(columns) matrix given by columns."""
    ncols = len(columns)
    if t == 0:
        yield ring.const(1)
        return
    if t > min(nrows, ncols):
        return
    memo = {}

    def det(rows: tuple, cols: tuple) -> Polynomial:
        if not rows:
            return ring.const(1)
        key = (rows, cols)
        v = memo.get(key)
        if v is not None:
            return v
        r = rows[0]
        acc = {}
        p = ring.p
        for k, c in enumerate(cols):
            a = columns[c][r]
            if not a:
                continue
            sub = det(rows[1:], cols[:k] + cols[k + 1:])
            if sub:
                term = a * sub
                acc = _acc(acc, term.terms, 1 if k % 2 == 0 else -1, p)
        v = Polynomial(ring, acc)
        memo[key] = v
        return v

    for cols in itertools.combinations(range(ncols), t):
        for rows in itertools.combinations(range(nrows), t):
            yield det(rows, cols)


def _acc(acc, terms, sign, p):
    for m, c in terms.items():
        s = (acc.get(m, 0) + sign * c) % p
        if s:
            acc[m] = s
        else:
            acc.pop(m, None)
    return acc


def minors_ideal(columns: list, nrows: int, t: int, ring: PolyRing) -> Ideal:
    """Ideal of t-minors (the unit ideal for t <= 0)."""
    if t <= 0:
        return Ideal.unit(ring)
    gens = []
    batch = []
    for m in iter_minors(columns, nrows, t, ring):
        if m:
            batch.append(m)
        if len(batch) >= 256:
            gens = compact(gens + batch)
            batch = []
    return Ideal(ring, compact(gens + batch))


def fitting_ideal_of_matrix(columns: list, nrows: int, i: int, ring: PolyRing) -> Ideal:
    """Fitt_i of the cokernel of a matrix with nrows rows: its (nrows - i)-minors."""
    return minors_ideal(columns, nrows, nrows - i, ring)


def maximal_ideal(ring: PolyRing) -> Ideal:
    return Ideal.maximal(ring)
