"""Minimal graded free resolutions, depth, Cohen-Macaulayness and Koszul homology."""
from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field

from .groebner import (TermOrder, buchberger_terms, component_bits,
                       default_limit, encode_vector, module_syzygies)
from .hilbert import (HilbertSeries, hilbert_series_of_quotient, module_hilbert_series,
                      one_minus, pmul)
from .ideal import Ideal, IdealError
from .ring import Polynomial, PolyRing

log = logging.getLogger(__name__)

KOSZUL_MAX_GENS = 8


# --- matrices given as lists of columns ---------------------------------------

def column_degree(col, row_degrees):
    for f, r in zip(col, row_degrees):
        if f:
            return f.degree() + r
    return None


def prune_presentation(columns: list, row_degrees: list) -> tuple:
    """Cancel unit entries of a presentation matrix without changing its cokernel."""
    cols = [list(c) for c in columns]
    rows = list(row_degrees)
    while True:
        hit = None
        for j, c in enumerate(cols):
            for i, f in enumerate(c):
                if f and f.is_constant():
                    hit = (i, j)
                    break
            if hit:
                break
        if hit is None:
            return cols, rows
        i, j = hit
        piv = cols[j]
        inv = pow(piv[i].lc, -1, piv[i].ring.p)
        out = []
        for k, c in enumerate(cols):
            if k == j:
                continue
            a = c[i]
            if a:
                s = a.scale(inv)
                c = [x - s * y if y else x for x, y in zip(c, piv)]
            out.append(c[:i] + c[i + 1:])
        cols = [c for c in out if any(c)]
        rows = rows[:i] + rows[i + 1:]


def minimal_columns(columns: list, row_degrees: list, ring: PolyRing) -> list:
    """A minimal generating set of the submodule spanned by homogeneous columns."""
    cols = [c for c in columns if any(c)]
    if not cols:
        return []
    shifts = list(row_degrees)
    lo = min(shifts)
    shifts = [s - lo for s in shifts]
    order = TermOrder(ring, component_bits(len(shifts)))
    gens = [encode_vector(order, c, shifts) for c in cols]
    res = buchberger_terms(order, gens, default_limit(ring, max(shifts)), reduce_basis=False)
    keep = sorted(res.minimal_inputs, key=lambda k: (column_degree(cols[k], row_degrees), k))
    return [cols[k] for k in keep]


def matmul_zero(A_cols: list, B_cols: list) -> bool:
    """Whether A·B = 0, where B's columns index A's columns."""
    for b in B_cols:
        acc = None
        for a_col, coef in zip(A_cols, b):
            if not coef:
                continue
            prod = [coef * x if x else x for x in a_col]
            acc = prod if acc is None else [x + y for x, y in zip(acc, prod)]
        if acc is not None and any(acc):
            return False
    return True


@dataclass
class FreeResolution:
    ring: PolyRing
    matrices: list            # matrices[k] : F_{k+1} -> F_k, as lists of columns
    shifts: list              # shifts[k] = degrees of the basis of F_k

    @property
    def length(self) -> int:
        return len(self.matrices)

    def ranks(self) -> list:
        return [len(s) for s in self.shifts]

    def betti(self) -> dict:
        out = {}
        for i, degs in enumerate(self.shifts):
            for d in degs:
                out[(i, d)] = out.get((i, d), 0) + 1
        return out

    def betti_table(self) -> list:
        """Rows [i, degree, count], sorted."""
        return [[i, d, c] for (i, d), c in sorted(self.betti().items())]

    def is_complex(self) -> bool:
        return all(matmul_zero(self.matrices[k], self.matrices[k + 1])
                   for k in range(len(self.matrices) - 1))

    def is_minimal(self) -> bool:
        return not any(f and f.is_constant() for M in self.matrices for c in M for f in c)


def resolve_columns(columns: list, row_degrees: list, ring: PolyRing, max_length: int = None) -> FreeResolution:
    """Minimal resolution of the cokernel of a homogeneous matrix."""
    cols, rows = prune_presentation(columns, row_degrees)
    cols = minimal_columns(cols, rows, ring)
    n = ring.nvars
    cap = n + 1 if max_length is None else max_length
    matrices, shifts = [], [list(rows)]
    cur_rows = rows
    while cols and len(matrices) < cap:
        degs = [column_degree(c, cur_rows) for c in cols]
        matrices.append(cols)
        shifts.append(degs)
        cols, _ = module_syzygies(cols, cur_rows, ring, minimal=True)
        cur_rows = degs
    if len(matrices) > n:
        raise AssertionError("resolution longer than the number of variables")
    return FreeResolution(ring, matrices, shifts)


def free_resolution(obj, row_degrees: list = None) -> FreeResolution:
    """Minimal graded free resolution of R/A (for an Ideal) or of coker(columns)."""
    if isinstance(obj, Ideal):
        ring = obj.ring
        if not obj.is_homogeneous():
            raise IdealError("resolutions need homogeneous input")
        if obj.is_unit():
            return FreeResolution(ring, [], [])
        gens = obj.min_gens()
        return resolve_columns([[g] for g in gens], [0], ring)
    ring = obj[0][0].ring
    return resolve_columns(obj, row_degrees, ring)


def projective_dimension(obj, row_degrees: list = None) -> int:
    return free_resolution(obj, row_degrees).length


# --- depth -------------------------------------------------------------------

def _random_form(ring: PolyRing, variables: list, rng: random.Random) -> Polynomial:
    p = ring.p
    acc = {}
    for i in variables:
        acc[ring.var(i)] = rng.randrange(1, p)
    return Polynomial(ring, acc)


def _cut_candidates(ring: PolyRing):
    """Variable groups whose general linear forms are tried as regular elements."""
    classes = {}
    for i, w in enumerate(ring.weights):
        classes.setdefault(w, []).append(i)
    return [(w, classes[w]) for w in sorted(classes)]


@dataclass
class DepthResult:
    depth: int
    dimension: int
    regular_sequence: list = field(default_factory=list)
    method: str = "cuts"         # "cuts" or "cuts+resolution"

    @property
    def cohen_macaulay(self) -> bool:
        return self.depth == self.dimension


def _is_regular_cut(hs: HilbertSeries, nxt: Ideal, w: int) -> bool:
    return hilbert_series_of_quotient(nxt).numerator == pmul(hs.numerator, one_minus(w))


def depth_report(A: Ideal, seed: int = 0, attempts: int = 3) -> DepthResult:
    """depth of S/A: cut by verified regular general forms, then certify the rest.

    A cut y is regular exactly when HS(S/(A+y)) = (1 - t^deg y) HS(S/A).  When
    no drawn form is regular the remaining depth is read off a minimal free
    resolution (Auslander-Buchsbaum).
    """
    ring = A.ring
    if not A.is_homogeneous():
        raise IdealError("depth needs a homogeneous ideal")
    if A.is_unit():
        raise IdealError("depth of the zero ring")
    hs = hilbert_series_of_quotient(A)
    dim = hs.dimension()
    cur = A
    seq = []
    rng = random.Random(f"depth:{seed}")
    cands = _cut_candidates(ring)
    while dim > 0:
        found = None
        for attempt in range(attempts):
            for w, group in cands:
                y = _random_form(ring, group, rng)
                nxt = cur + y
                if _is_regular_cut(hs, nxt, w):
                    found = (y, nxt, w)
                    break
            if found:
                break
        if found is None:
            break
        y, cur, w = found
        seq.append(y)
        hs = hilbert_series_of_quotient(cur)
        dim -= 1
    total_dim = len(seq) + dim
    if dim == 0:
        return DepthResult(len(seq), total_dim, seq, "cuts")
    pd = projective_dimension(cur)
    return DepthResult(len(seq) + ring.nvars - pd, total_dim, seq, "cuts+resolution")


def has_socle(A: Ideal) -> bool:
    """Whether the irrelevant ideal is associated to S/A (A : m != A)."""
    m = Ideal.maximal(A.ring)
    return not A.contains(A.colon(m))


def depth_of_quotient(A: Ideal, seed: int = 0) -> int:
    return depth_report(A, seed).depth


def depth_by_resolution(A: Ideal) -> int:
    return A.ring.nvars - projective_dimension(A)


def is_cohen_macaulay(A: Ideal, seed: int = 0) -> bool:
    return depth_report(A, seed).cohen_macaulay


# --- modules presented by matrices -------------------------------------------

def module_depth(columns: list, row_degrees: list, ring: PolyRing) -> int:
    """depth of coker(columns) by Auslander-Buchsbaum; -1 for the zero module."""
    cols, rows = prune_presentation(columns, row_degrees)
    if not rows:
        return -1
    return ring.nvars - resolve_columns(cols, rows, ring).length


def module_dimension(columns: list, row_degrees: list, ring: PolyRing) -> int:
    cols, rows = prune_presentation(columns, row_degrees)
    if not rows:
        return -1
    lo = min(rows)
    shifts = [r - lo for r in rows]
    order = TermOrder(ring, component_bits(len(shifts)))
    gens = [encode_vector(order, c, shifts) for c in cols if any(c)]
    res = buchberger_terms(order, gens, default_limit(ring, max(shifts)))
    leading = {}
    for lt, _ in res.basis:
        i = order.component(lt)
        leading.setdefault(i, []).append(ring.decode(order.mono(lt) - shifts[i] * ring.shift_unit))
    return module_hilbert_series(ring, leading, shifts).dimension()


# --- Koszul homology ---------------------------------------------------------

@dataclass
class KoszulHomologyModule:
    index: int
    ring: PolyRing
    columns: list          # presentation matrix (relations), as columns
    row_degrees: list      # degrees of the generators of H_i

    def is_zero(self) -> bool:
        cols, rows = prune_presentation(self.columns, self.row_degrees)
        return not rows

    def depth(self) -> int:
        return module_depth(self.columns, self.row_degrees, self.ring)

    def dimension(self) -> int:
        return module_dimension(self.columns, self.row_degrees, self.ring)

    def is_cohen_macaulay(self) -> bool:
        if self.is_zero():
            return True
        return self.depth() == self.dimension()


def koszul_differential(gens: list, i: int) -> tuple:
    """d_i : K_i -> K_{i-1} as columns, with the subset bases of both sides."""
    n = len(gens)
    ring = gens[0].ring
    src = list(itertools.combinations(range(n), i))
    dst = list(itertools.combinations(range(n), i - 1))
    index = {s: k for k, s in enumerate(dst)}
    cols = []
    for s in src:
        col = [ring.zero()] * len(dst)
        for pos, j in enumerate(s):
            t = s[:pos] + s[pos + 1:]
            g = gens[j]
            col[index[t]] = g if pos % 2 == 0 else -g
        cols.append(col)
    return cols, src, dst


def koszul_homology(gens: list, i: int) -> KoszulHomologyModule:
    """H_i of the Koszul complex on homogeneous ``gens``, presented over the ring."""
    n = len(gens)
    if n > KOSZUL_MAX_GENS:
        raise IdealError(f"Koszul homology limited to {KOSZUL_MAX_GENS} generators")
    if not 0 <= i <= n:
        raise ValueError("Koszul index out of range")
    ring = gens[0].ring
    degs = [g.degree() for g in gens]
    basis_deg = lambda s: sum(degs[j] for j in s)
    if i == 0:
        return KoszulHomologyModule(0, ring, [[g] for g in gens], [0])
    d_i, src, _ = koszul_differential(gens, i)
    src_deg = [basis_deg(s) for s in src]
    # cycles Z_i = ker d_i, as vectors in K_i
    dst_deg = [basis_deg(s) for s in itertools.combinations(range(n), i - 1)]
    Z, zdeg = module_syzygies(d_i, dst_deg, ring, minimal=True)
    if not Z:
        return KoszulHomologyModule(i, ring, [], [])
    # boundaries B_i = im d_{i+1}
    B = koszul_differential(gens, i + 1)[0] if i < n else []
    a = len(Z)
    # relations among the cycles modulo boundaries: syzygies of [Z | B], top a rows
    rel, _ = module_syzygies(Z + B, src_deg, ring, minimal=True)
    columns = [c[:a] for c in rel]
    columns = [c for c in columns if any(c)]
    return KoszulHomologyModule(i, ring, columns, zdeg)


def sliding_depth_check(A: Ideal, detail: dict = None) -> bool:
    """depth H_i >= d - n + i for 0 <= i <= n - g, over minimal generators."""
    gens = A.min_gens()
    n = len(gens)
    d = A.ring.nvars
    g = A.height()
    ok = True
    for i in range(0, n - g + 1):
        need = d - n + i
        if need <= 0:
            continue
        H = koszul_homology(gens, i)
        if H.is_zero():
            dep = None
        else:
            dep = H.depth()
        if detail is not None:
            detail[i] = {"required": need, "depth": dep}
        if dep is not None and dep < need:
            ok = False
            break
    return ok


def strongly_cm_check(A: Ideal, detail: dict = None) -> bool:
    """Every nonzero Koszul homology module on the minimal generators is CM."""
    gens = A.min_gens()
    for i in range(len(gens) + 1):
        H = koszul_homology(gens, i)
        cm = H.is_cohen_macaulay()
        if detail is not None:
            detail[i] = cm
        if not cm:
            return False
    return True
