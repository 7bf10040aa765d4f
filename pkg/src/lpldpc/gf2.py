"""Dense GF(2) linear algebra on uint8 arrays."""

from __future__ import annotations

import numpy as np


def rref(mat):
    """Reduced row echelon form over GF(2); returns (R, pivot_columns)."""
    a = (np.asarray(mat) & 1).astype(np.uint8).copy()
    m, n = a.shape
    pivots = []
    r = 0
    for c in range(n):
        if r >= m:
            break
        hits = np.flatnonzero(a[r:, c])
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        others = np.flatnonzero(a[:, c])
        others = others[others != r]
        if others.size:
            a[others] ^= a[r]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(mat):
    return len(rref(mat)[1])


def nullspace_basis(mat):
    """Basis of the right null space of ``mat`` over GF(2), shape (k, n)."""
    a, pivots = rref(mat)
    n = a.shape[1]
    free = [c for c in range(n) if c not in pivots]
    basis = np.zeros((len(free), n), dtype=np.uint8)
    for t, f in enumerate(free):
        basis[t, f] = 1
        for r, p in enumerate(pivots):
            basis[t, p] = a[r, f]
    return basis
