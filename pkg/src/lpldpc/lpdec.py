"""Decoding over the parity relaxation polytope.

The feasible region is the intersection, over all checks, of the convex
hulls of the single-check even-weight codes, described explicitly by the
odd-subset inequalities

    sum_{i in S} x_i - sum_{i in N(j) \\ S} x_i <= |S| - 1,   S odd,

together with the box 0 <= x <= 1. Decoding maximizes the signal-domain
correlation sum((1 - 2 x_i) * llr_i), equivalently minimizes llr . x over
the polytope.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import gf2, simplex

__all__ = [
    "INTEGRALITY_TOL",
    "FEASIBILITY_TOL",
    "MAX_CHECK_DEGREE",
    "MAX_DIMENSION",
    "PolytopeConstraints",
    "DecodeOutcome",
    "build_constraints",
    "lp_solve",
    "lp_decode",
    "ml_decode",
    "membership",
    "enumerate_codewords",
]

INTEGRALITY_TOL = 1e-6
FEASIBILITY_TOL = 1e-8
TIE_TOL = 1e-9         # two optima count as tied when their values match this closely
TIE_FACE_EPS = 1e-12   # slack when probing the optimal face; see lp_decode
MAX_CHECK_DEGREE = 16  # 2^(d_c - 1) inequalities per check
MAX_DIMENSION = 24     # brute-force codeword enumeration cap


@dataclass(frozen=True, eq=False)
class PolytopeConstraints:
    """Rows a.x <= b: the n upper box rows first, then each check's odd-subset
    rows (sizes ascending, subsets in lexicographic order). ``row_check[r]``
    names the originating check, -1 for box rows."""

    n: int
    a: np.ndarray
    b: np.ndarray
    row_check: np.ndarray


@lru_cache(maxsize=64)
def build_constraints(g):
    """Odd-subset plus box description of the decoding polytope of ``g``.

    Cached per graph (graphs are immutable). Checks of degree above
    MAX_CHECK_DEGREE are rejected since the row count doubles per degree.
    """
    degs = [len(row) for row in g.check_nbrs]
    if max(degs) > MAX_CHECK_DEGREE:
        raise ValueError(
            f"check degree {max(degs)} exceeds cap {MAX_CHECK_DEGREE}"
        )
    total = g.n + sum(1 << (d - 1) for d in degs if d >= 1)
    a = np.zeros((total, g.n))
    b = np.zeros(total)
    row_check = np.full(total, -1, dtype=np.int64)
    a[np.arange(g.n), np.arange(g.n)] = 1.0
    b[:g.n] = 1.0
    r = g.n
    for j, nbrs in enumerate(g.check_nbrs):
        nbrs = sorted(nbrs)
        for size in range(1, len(nbrs) + 1, 2):
            for subset in itertools.combinations(nbrs, size):
                a[r, nbrs] = -1.0
                a[r, list(subset)] = 1.0
                b[r] = size - 1
                row_check[r] = j
                r += 1
    return PolytopeConstraints(n=g.n, a=a, b=b, row_check=row_check)


def lp_solve(cons, c, sense="max"):
    """Optimize c.x over the polytope; returns (vertex, value).

    Deterministic Bland pivoting, so tied optima always resolve to the same
    vertex. Solver failures raise rather than return suboptimal points.
    """
    sol = simplex.solve(np.asarray(c, dtype=float), cons.a, cons.b, sense=sense)
    return sol.x, sol.value


def membership(g, w, tol=FEASIBILITY_TOL):
    """True iff ``w`` satisfies every polytope constraint within ``tol``."""
    w = np.asarray(w, dtype=float)
    if w.shape != (g.n,):
        raise ValueError(f"expected a length-{g.n} vector, got shape {w.shape}")
    if (w < -tol).any():
        return False
    cons = build_constraints(g)
    return bool((cons.a @ w <= cons.b + tol).all())


@dataclass(frozen=True, eq=False)
class DecodeOutcome:
    """Result of one LP decode.

    ``status`` is ``integral`` (vertex rounds to a codeword), ``fractional``
    (vertex has a non-binary coordinate), or ``tie`` (a second optimal vertex
    with different support exists; counted as a failure). ``objective`` is
    the signal-domain correlation at the optimum.
    """

    status: str
    vertex: np.ndarray
    objective: float
    codeword: np.ndarray | None = None

    @property
    def is_integral(self):
        return self.status == "integral"

    def is_zero_codeword(self):
        return self.status == "integral" and not self.codeword.any()


def _parity_ok(g, bits):
    h = g.parity_check_matrix().astype(np.int64)
    return not ((h @ bits.astype(np.int64)) % 2).any()


def lp_decode(g, lamp):
    """Decode a modified LLR vector by linear programming.

    The objective is max-normalized before solving, which makes the pivot
    path (hence the outcome) invariant under positive scaling of the input.
    After the first solve, a second solve over the optimal face maximizes
    distance from the found vertex; if it moves beyond the integrality
    tolerance, a second optimum exists (values match far inside TIE_TOL) and
    the instance is classified as a tie. The face carries only a 1e-12
    buffer: genuine ties sit within float error of the optimum, while a
    looser face would also sweep up near-tie instances whose optimum is
    merely shallow.
    """
    lamp = np.asarray(lamp, dtype=float)
    if lamp.shape != (g.n,):
        raise ValueError(f"expected a length-{g.n} LLR vector, got shape {lamp.shape}")
    if not np.isfinite(lamp).all():
        raise ValueError("LLR vector must be finite")
    cons = build_constraints(g)
    scale = np.abs(lamp).max()
    cn = lamp / scale if scale > 0 else lamp.copy()

    sol = simplex.solve(cn, cons.a, cons.b, sense="min")
    x1 = sol.x
    objective = float(lamp.sum() - 2.0 * (lamp @ x1))

    away = np.where(x1 >= 0.5, 1.0, -1.0)
    a2 = np.vstack([cons.a, cn])
    b2 = np.append(cons.b, cn @ x1 + TIE_FACE_EPS)
    sol2 = simplex.solve(away, a2, b2, sense="min")
    if np.abs(sol2.x - x1).max() > INTEGRALITY_TOL:
        return DecodeOutcome(status="tie", vertex=x1, objective=objective)

    rounded = np.rint(x1)
    if np.abs(x1 - rounded).max() <= INTEGRALITY_TOL and _parity_ok(g, rounded):
        return DecodeOutcome(
            status="integral", vertex=x1, objective=objective,
            codeword=rounded.astype(np.uint8),
        )
    return DecodeOutcome(status="fractional", vertex=x1, objective=objective)


def _codeword_chunks(basis, chunk_bits=16):
    k, _ = basis.shape
    words = basis.astype(np.int64)
    step = 1 << min(chunk_bits, k)
    shifts = np.arange(k, dtype=np.int64)
    for lo in range(0, 1 << k, step):
        idx = np.arange(lo, min(lo + step, 1 << k), dtype=np.int64)
        msgs = (idx[:, None] >> shifts) & 1
        yield ((msgs @ words) % 2).astype(np.uint8)


def enumerate_codewords(g):
    """All solutions of the parity checks, as a (2^k, n) uint8 array.

    k = n - rank(H) over GF(2); capped at MAX_DIMENSION.
    """
    basis = gf2.nullspace_basis(g.parity_check_matrix())
    k = basis.shape[0]
    if k > MAX_DIMENSION:
        raise ValueError(f"code dimension {k} exceeds cap {MAX_DIMENSION}")
    return np.vstack(list(_codeword_chunks(basis)))


def ml_decode(g, lamp):
    """Brute-force maximum of the signal-domain correlation over all codewords.

    Returns (codeword, value). Exact ties resolve to the lexicographically
    smallest bit vector.
    """
    lamp = np.asarray(lamp, dtype=float)
    if lamp.shape != (g.n,):
        raise ValueError(f"expected a length-{g.n} LLR vector, got shape {lamp.shape}")
    basis = gf2.nullspace_basis(g.parity_check_matrix())
    if basis.shape[0] > MAX_DIMENSION:
        raise ValueError(f"code dimension {basis.shape[0]} exceeds cap {MAX_DIMENSION}")
    total = lamp.sum()
    best_value = -np.inf
    best_bytes = None
    for chunk in _codeword_chunks(basis):
        values = total - 2.0 * (chunk @ lamp)
        cmax = values.max()
        if cmax < best_value:
            continue
        for row in np.flatnonzero(values == cmax):
            key = chunk[row].tobytes()
            if cmax > best_value or key < best_bytes:
                best_value = float(cmax)
                best_bytes = key
    codeword = np.frombuffer(best_bytes, dtype=np.uint8).copy()
    return codeword, best_value
