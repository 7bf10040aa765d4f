"""Bipartite Tanner graphs: alist IO, random regular sampling, BFS tiers.

Variable and check indices are 0-based everywhere in memory; alist files are
1-based on disk.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

__all__ = [
    "TannerGraph",
    "BfsTiers",
    "AlistError",
    "GenerationError",
    "DisconnectedGraphError",
    "parse_alist",
    "emit_alist",
    "generate_regular",
    "bfs_tiers",
    "neighbor_set",
]

# Full resamples of the stub matching before giving up on a simple graph.
RETRY_CAP = 10_000


class AlistError(ValueError):
    """Malformed alist input."""


class GenerationError(RuntimeError):
    """Random graph generation could not produce a simple graph."""


class DisconnectedGraphError(ValueError):
    """A BFS root does not reach every node of the graph."""

    def __init__(self, unreachable_vars, unreachable_checks):
        self.unreachable_vars = tuple(unreachable_vars)
        self.unreachable_checks = tuple(unreachable_checks)
        names = [f"v{i}" for i in self.unreachable_vars]
        names += [f"c{j}" for j in self.unreachable_checks]
        super().__init__("graph is disconnected; unreachable nodes: " + ", ".join(names))


class TannerGraph:
    """Immutable bipartite adjacency between n variable nodes and m check nodes.

    ``check_nbrs[j]`` lists the variables incident to check j (the stored
    order is the file/insertion order); ``var_nbrs[i]`` is the exact transpose
    view with checks in ascending order of construction. Parallel edges are
    rejected. Instances are safe to share across threads.
    """

    __slots__ = ("n", "m", "check_nbrs", "var_nbrs")

    def __init__(self, n, check_nbrs):
        n = int(n)
        if n < 1:
            raise ValueError("need at least one variable node")
        rows = tuple(tuple(int(i) for i in row) for row in check_nbrs)
        if not rows:
            raise ValueError("need at least one check node")
        var_nbrs = [[] for _ in range(n)]
        seen = set()
        for j, row in enumerate(rows):
            for i in row:
                if not 0 <= i < n:
                    raise ValueError(f"check {j}: variable index {i} out of range [0, {n})")
                if (i, j) in seen:
                    raise ValueError(f"duplicate edge between variable {i} and check {j}")
                seen.add((i, j))
        for j, row in enumerate(rows):
            for i in row:
                var_nbrs[i].append(j)
        self.n = n
        self.m = len(rows)
        self.check_nbrs = rows
        self.var_nbrs = tuple(tuple(r) for r in var_nbrs)

    def __eq__(self, other):
        if not isinstance(other, TannerGraph):
            return NotImplemented
        return self.n == other.n and self.check_nbrs == other.check_nbrs

    def __hash__(self):
        return hash((self.n, self.check_nbrs))

    def __repr__(self):
        return f"TannerGraph(n={self.n}, m={self.m}, edges={self.num_edges})"

    @property
    def num_edges(self):
        return sum(len(r) for r in self.check_nbrs)

    @property
    def var_degrees(self):
        return np.array([len(r) for r in self.var_nbrs], dtype=np.int64)

    @property
    def check_degrees(self):
        return np.array([len(r) for r in self.check_nbrs], dtype=np.int64)

    def regular_degrees(self):
        """(d_v, d_c) when both sides have uniform degree, else None."""
        vd = {len(r) for r in self.var_nbrs}
        cd = {len(r) for r in self.check_nbrs}
        if len(vd) == 1 and len(cd) == 1:
            return vd.pop(), cd.pop()
        return None

    def edges(self):
        """All (variable, check) pairs, variable-major, deterministic order."""
        return tuple((i, j) for i in range(self.n) for j in self.var_nbrs[i])

    def parity_check_matrix(self):
        h = np.zeros((self.m, self.n), dtype=np.uint8)
        for j, row in enumerate(self.check_nbrs):
            h[j, list(row)] = 1
        return h


def parse_alist(text):
    """Parse an alist document (str or bytes) into a TannerGraph.

    Layout: header ``n m``, max degrees, per-variable and per-check degree
    lists, then the 1-based neighbor lists (zero padding allowed). Both
    adjacency blocks are cross-checked against each other.
    """
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("ascii")
    lines = []
    for raw in text.splitlines():
        parts = raw.split()
        if parts:
            try:
                lines.append([int(p) for p in parts])
            except ValueError as exc:
                raise AlistError(f"non-integer token in line {raw!r}") from exc
    if len(lines) < 4:
        raise AlistError("truncated file: need header, max degrees and degree lists")
    if len(lines[0]) != 2:
        raise AlistError("header must contain exactly 'n m'")
    n, m = lines[0]
    if n < 1 or m < 1:
        raise AlistError(f"non-positive dimensions n={n}, m={m}")
    if len(lines[1]) != 2:
        raise AlistError("second line must contain the two maximum degrees")
    dv_max, dc_max = lines[1]
    if len(lines[2]) != n:
        raise AlistError(f"expected {n} variable degrees, got {len(lines[2])}")
    if len(lines[3]) != m:
        raise AlistError(f"expected {m} check degrees, got {len(lines[3])}")
    var_deg, check_deg = lines[2], lines[3]
    if any(d < 0 or d > dv_max for d in var_deg) or any(d < 0 or d > dc_max for d in check_deg):
        raise AlistError("degree list entry exceeds declared maximum degree")
    if len(lines) != 4 + n + m:
        raise AlistError(f"expected {4 + n + m} lines, got {len(lines)}")

    def read_block(block, degrees, upper, what):
        out = []
        for k, row in enumerate(block):
            entries = [e for e in row if e != 0]  # zeros are padding
            if len(entries) != degrees[k]:
                raise AlistError(
                    f"{what} {k}: declared degree {degrees[k]} but {len(entries)} neighbors listed"
                )
            if any(e < 1 or e > upper for e in entries):
                raise AlistError(f"{what} {k}: neighbor index out of range 1..{upper}")
            if len(set(entries)) != len(entries):
                raise AlistError(f"{what} {k}: duplicate edge in neighbor list")
            out.append([e - 1 for e in entries])
        return out

    var_lists = read_block(lines[4:4 + n], var_deg, m, "variable")
    check_lists = read_block(lines[4 + n:], check_deg, n, "check")
    want = {(i, j) for i, row in enumerate(var_lists) for j in row}
    have = {(i, j) for j, row in enumerate(check_lists) for i in row}
    if want != have:
        raise AlistError("variable and check adjacency blocks disagree")
    return TannerGraph(n, check_lists)


def emit_alist(g):
    """Canonical alist text for a graph: zero-padded, 1-based, newline terminated."""
    dv_max = int(g.var_degrees.max())
    dc_max = int(g.check_degrees.max())
    out = [f"{g.n} {g.m}", f"{dv_max} {dc_max}"]
    out.append(" ".join(str(len(r)) for r in g.var_nbrs))
    out.append(" ".join(str(len(r)) for r in g.check_nbrs))
    for row in g.var_nbrs:
        padded = [j + 1 for j in row] + [0] * (dv_max - len(row))
        out.append(" ".join(str(e) for e in padded))
    for row in g.check_nbrs:
        padded = [i + 1 for i in row] + [0] * (dc_max - len(row))
        out.append(" ".join(str(e) for e in padded))
    return "\n".join(out) + "\n"


def generate_regular(n, d_v, d_c, seed):
    """Sample a simple (d_v, d_c)-regular Tanner graph.

    Configuration model: the n*d_v variable stubs are matched against the
    m*d_c check stubs by a seeded random permutation, resampling from scratch
    until the multigraph has no parallel edges (at most RETRY_CAP attempts).
    Deterministic for a fixed seed.
    """
    n, d_v, d_c = int(n), int(d_v), int(d_c)
    if d_v < 1 or d_c < 2:
        raise ValueError("need d_v >= 1 and d_c >= 2")
    if (n * d_v) % d_c != 0:
        raise ValueError(f"n*d_v = {n * d_v} is not divisible by d_c = {d_c}")
    m = n * d_v // d_c
    if d_v > m or d_c > n:
        raise GenerationError(
            f"no simple graph exists: degrees ({d_v}, {d_c}) exceed the opposite side ({m}, {n})"
        )
    rng = np.random.default_rng(seed)
    var_of = np.repeat(np.arange(n, dtype=np.int64), d_v)
    check_stub = np.repeat(np.arange(m, dtype=np.int64), d_c)
    for _ in range(RETRY_CAP):
        check_of = check_stub[rng.permutation(n * d_v)]
        pair_ids = var_of * m + check_of
        if np.unique(pair_ids).size == n * d_v:
            rows = [[] for _ in range(m)]
            for i, j in zip(var_of.tolist(), check_of.tolist()):
                rows[j].append(i)
            return TannerGraph(n, [sorted(r) for r in rows])
    raise GenerationError(
        f"no simple ({d_v}, {d_c})-regular graph found in {RETRY_CAP} resamples (n={n}, m={m})"
    )


@dataclass(frozen=True)
class BfsTiers:
    """Breadth-first tier numbers from a variable-node root.

    ``var_tier[i]`` / ``check_tier[j]`` hold graph distances from the root;
    variables sit on even tiers and checks on odd tiers. ``num_tiers`` is the
    eccentricity of the root.
    """

    root: int
    var_tier: np.ndarray
    check_tier: np.ndarray
    num_tiers: int


def bfs_tiers(g, root):
    """Tier ordering of all nodes by distance from variable node ``root``."""
    if not 0 <= root < g.n:
        raise ValueError(f"root {root} out of range [0, {g.n})")
    var_tier = np.full(g.n, -1, dtype=np.int64)
    check_tier = np.full(g.m, -1, dtype=np.int64)
    var_tier[root] = 0
    queue = deque([(root, True)])
    while queue:
        node, is_var = queue.popleft()
        if is_var:
            for j in g.var_nbrs[node]:
                if check_tier[j] < 0:
                    check_tier[j] = var_tier[node] + 1
                    queue.append((j, False))
        else:
            for i in g.check_nbrs[node]:
                if var_tier[i] < 0:
                    var_tier[i] = check_tier[node] + 1
                    queue.append((i, True))
    if (var_tier < 0).any() or (check_tier < 0).any():
        raise DisconnectedGraphError(
            np.flatnonzero(var_tier < 0).tolist(), np.flatnonzero(check_tier < 0).tolist()
        )
    num_tiers = int(max(var_tier.max(), check_tier.max()))
    return BfsTiers(root=int(root), var_tier=var_tier, check_tier=check_tier, num_tiers=num_tiers)


def neighbor_set(g, variables):
    """Union of check neighborhoods over a set of variable indices."""
    out = set()
    for i in variables:
        if not 0 <= i < g.n:
            raise ValueError(f"variable index {i} out of range [0, {g.n})")
        out.update(g.var_nbrs[i])
    return out
