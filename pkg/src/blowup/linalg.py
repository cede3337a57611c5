"""Dense linear algebra over F_p on numpy int64 arrays."""
from __future__ import annotations

import numpy as np


def rref(rows, p: int):
    """Reduced row echelon form mod p.  Returns (matrix, pivot columns)."""
    M = np.array(rows, dtype=np.int64) % p
    if M.ndim != 2 or M.size == 0:
        return M.reshape(len(rows), -1), []
    nr, nc = M.shape
    pivots = []
    r = 0
    for c in range(nc):
        if r == nr:
            break
        nz = np.nonzero(M[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            M[[r, k]] = M[[k, r]]
        inv = pow(int(M[r, c]), -1, p)
        M[r] = M[r] * inv % p
        col = M[:, c].copy()
        col[r] = 0
        idx = np.nonzero(col)[0]
        if idx.size:
            M[idx] = (M[idx] - np.outer(col[idx], M[r])) % p
        pivots.append(c)
        r += 1
    return M[:r], pivots


def rank(rows, p: int) -> int:
    if len(rows) == 0:
        return 0
    return len(rref(rows, p)[1])


def row_reduce(rows, p: int) -> list:
    """Nonzero rows of the reduced echelon form, as lists of ints."""
    M, _ = rref(rows, p)
    return [list(map(int, r)) for r in M]


def nullspace(rows, p: int) -> list:
    """Basis of {v : rows . v = 0} mod p."""
    M, piv = rref(rows, p)
    nc = M.shape[1] if M.ndim == 2 else 0
    free = [c for c in range(nc) if c not in set(piv)]
    out = []
    for f in free:
        v = [0] * nc
        v[f] = 1
        for r, c in enumerate(piv):
            v[c] = int(-M[r, f] % p)
        out.append(v)
    return out


def span_dimension(polys, degree_monomials) -> int:
    """Dimension of the span of homogeneous polynomials in one graded piece."""
    if not polys:
        return 0
    index = {m: i for i, m in enumerate(degree_monomials)}
    rows = np.zeros((len(polys), len(index)), dtype=np.int64)
    for r, f in enumerate(polys):
        for m, c in f.terms.items():
            rows[r, index[m]] = c
    return rank(rows, polys[0].ring.p)
