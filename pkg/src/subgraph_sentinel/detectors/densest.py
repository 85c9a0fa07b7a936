"""Densest subgraph: exact via parametric minimum cut, approximate via peeling.

Density of a subset is (edges inside) / (vertices), so a k-clique scores
(k-1)/2. The exact mode binary-searches the density with an integer-scaled
cut construction, which terminates at the true optimum because distinct
achievable densities are at least 1/(N(N-1)) apart. Peeling is the classic
remove-the-minimum-degree-vertex sweep with a one-half guarantee.
"""
from __future__ import annotations

import heapq
from collections import deque

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

from ..errors import DegenerateGraphError, InvalidSpecError
from .base import DetectorResult, register

__all__ = ["densest_subgraph", "densest_at_least"]

_MODES = ("exact_flow", "peel")


def _peel_suffixes(graph):
    """Vertex removal order (min degree first, ties to the smallest index)
    plus the edge count of every suffix. Returns (order, suffix_edges)."""
    N = graph.n_nodes
    deg = graph.degrees().astype(np.int64).copy()
    nbrs = [graph.neighbors(i) for i in range(N)]
    heap = [(int(deg[v]), v) for v in range(N)]
    heapq.heapify(heap)
    removed = np.zeros(N, dtype=bool)
    order = []
    m_left = graph.total_edges()
    suffix_edges = [m_left]
    while heap:
        d, v = heapq.heappop(heap)
        if removed[v] or d != deg[v]:
            continue  # stale entry
        removed[v] = True
        order.append(v)
        m_left -= int(deg[v])
        suffix_edges.append(m_left)
        for u in nbrs[v]:
            if not removed[u]:
                deg[u] -= 1
                heapq.heappush(heap, (int(deg[u]), u))
    return order, suffix_edges


def _peel_best(graph, min_size):
    order, suffix_edges = _peel_suffixes(graph)
    N = graph.n_nodes
    best_t = None
    best = (-1.0, 0)
    for t in range(N):
        size = N - t
        if size < min_size:
            break
        h = suffix_edges[t] / size
        if h > best[0]:
            best = (h, size)
            best_t = t
    witness = tuple(sorted(order[best_t:]))
    return best[0], witness


def _exact_flow(graph):
    N = graph.n_nodes
    m = graph.total_edges()
    if m == 0:
        raise DegenerateGraphError("densest subgraph needs at least one edge")
    degs = graph.degrees().astype(np.int64)
    dmax = int(degs.max())
    D = N * (N - 1)
    M = max(dmax, 1)
    a_cap = 2 * D * M
    j_hi = D * (N - 1)
    if a_cap + 2 * j_hi >= 2 ** 31:
        raise InvalidSpecError(
            "graph too large for the int32 exact-flow construction; use peel")
    edges = graph.edges()
    # nodes: 0 = source, 1..N = vertices, N+1 = sink
    src = np.concatenate([
        np.zeros(N, dtype=np.int64),            # s -> i
        np.arange(1, N + 1),                    # i -> t
        edges[:, 0] + 1, edges[:, 1] + 1,       # both arc directions per edge
    ])
    dst = np.concatenate([
        np.arange(1, N + 1),
        np.full(N, N + 1, dtype=np.int64),
        edges[:, 1] + 1, edges[:, 0] + 1,
    ])
    cap = np.concatenate([
        np.full(N, a_cap, dtype=np.int64),
        np.zeros(N, dtype=np.int64),            # filled per iteration
        np.full(2 * m, 2 * D, dtype=np.int64),
    ])

    def feasible(j):
        cap[N: 2 * N] = a_cap + 2 * j - 2 * D * degs
        g = csr_matrix((cap.astype(np.int32), (src, dst)), shape=(N + 2, N + 2))
        res = maximum_flow(g, 0, N + 1)
        if res.flow_value >= N * a_cap:
            return None
        # source side of the min cut: BFS on the residual graph
        flow = res.flow
        resid = g - flow  # forward residual; reverse residual is flow.T > 0
        fwd = (resid > 0).tolil().rows
        bwd = (flow.T > 0).tolil().rows
        seen = [False] * (N + 2)
        seen[0] = True
        queue = deque([0])
        while queue:
            u = queue.popleft()
            for v in list(fwd[u]) + list(bwd[u]):
                if not seen[v]:
                    seen[v] = True
                    queue.append(v)
        subset = [v - 1 for v in range(1, N + 1) if seen[v]]
        return subset

    lo = 0
    lo_witness = feasible(0)
    assert lo_witness, "a graph with an edge has a positive-density subset"
    hi = j_hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        wit = feasible(mid)
        if wit is None:
            hi = mid
        else:
            lo = mid
            lo_witness = wit
    witness = tuple(sorted(lo_witness))
    value = graph.subgraph_edges(witness) / len(witness)
    return value, witness


@register("densest_subgraph")
def densest_subgraph(graph, mode="exact_flow"):
    """Maximum of (edges inside S) / |S| over nonempty vertex subsets.

    exact_flow delivers the optimum; its witness is the (unique) largest
    optimal subset, the one the minimum cut exposes. peel is the greedy
    sweep: always a feasible density, never less than half the optimum.
    """
    if mode not in _MODES:
        raise InvalidSpecError(f"mode must be one of {_MODES}, got {mode!r}")
    if graph.n_nodes == 0:
        raise DegenerateGraphError("densest subgraph needs vertices")
    if mode == "exact_flow":
        value, witness = _exact_flow(graph)
        return DetectorResult("densest_subgraph", value, witness, True)
    if graph.total_edges() == 0:
        raise DegenerateGraphError("densest subgraph needs at least one edge")
    value, witness = _peel_best(graph, 1)
    return DetectorResult("densest_subgraph", value, witness, False)


@register("densest_at_least")
def densest_at_least(graph, n):
    """Best density among peel suffixes of size >= n: a lower bound on the
    size-constrained optimum (exact when n = N, where only V qualifies)."""
    N = graph.n_nodes
    if not 1 <= n <= N:
        raise InvalidSpecError(f"minimum size {n} outside [1, {N}]")
    if graph.total_edges() == 0:
        raise DegenerateGraphError("density profile needs at least one edge")
    value, witness = _peel_best(graph, n)
    return DetectorResult("densest_at_least", value, witness, n == N)
