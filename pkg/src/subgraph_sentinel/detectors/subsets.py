"""Streaming enumeration of all n-subsets with their internal edge counts.

The scan, generalized-likelihood, and likelihood-ratio statistics all reduce to
a pass over W_S for every subset S of a fixed size. Subsets are produced in
lexicographic order, in chunks, as index arrays; edge counts come from masked
popcounts on the packed adjacency rows. Small combination tables are cached
because calibration loops revisit the same (N, n) thousands of times.
"""
from __future__ import annotations

import itertools
import math

import numpy as np

from ..errors import BudgetExceededError

__all__ = ["subset_count", "check_budget", "iter_subset_edge_counts"]

_ONE = np.uint64(1)
_CHUNK = 1 << 16
_CACHE_MAX_ROWS = 1 << 21
_comb_cache = {}


def subset_count(N, n):
    return math.comb(N, n)


def check_budget(N, n, budget):
    total = subset_count(N, n)
    if total > budget:
        raise BudgetExceededError(
            f"C({N},{n}) = {total} subsets exceeds the budget of {budget}")
    return total


def _combinations_array(N, n):
    """All n-subsets of range(N), lexicographic, as an int16 (C, n) array."""
    key = (N, n)
    hit = _comb_cache.get(key)
    if hit is not None:
        return hit
    combs = np.fromiter(itertools.chain.from_iterable(
        itertools.combinations(range(N), n)), dtype=np.int16,
        count=subset_count(N, n) * n).reshape(-1, n)
    if combs.shape[0] <= _CACHE_MAX_ROWS:
        if len(_comb_cache) >= 4:
            _comb_cache.pop(next(iter(_comb_cache)))
        _comb_cache[key] = combs
    return combs


def _chunk_edge_counts(graph, combs):
    """Internal edge count of every subset row of combs."""
    rows = graph.packed_rows
    words = rows.shape[1]
    c, n = combs.shape
    if words == 1:
        flat = rows[:, 0]
        masks = np.bitwise_or.reduce(_ONE << combs.astype(np.uint64), axis=1)
        sel = flat[combs] & masks[:, None]
        return (np.bitwise_count(sel).sum(axis=1) // 2).astype(np.int64)
    masks = np.zeros((c, words), dtype=np.uint64)
    r = np.arange(c)
    for t in range(n):
        col = combs[:, t].astype(np.int64)
        masks[r, col >> 6] |= _ONE << (col.astype(np.uint64) & np.uint64(63))
    w = np.zeros(c, dtype=np.int64)
    for t in range(n):
        sel = rows[combs[:, t].astype(np.int64)] & masks
        w += np.bitwise_count(sel).sum(axis=1).astype(np.int64)
    return w // 2


def iter_subset_edge_counts(graph, n, chunk=_CHUNK):
    """Yield (offset, combs_chunk, counts_chunk) over all n-subsets, lex order."""
    N = graph.n_nodes
    total = subset_count(N, n)
    if total == 0:
        return
    if total * n <= _CACHE_MAX_ROWS * n and total <= _CACHE_MAX_ROWS:
        combs = _combinations_array(N, n)
        for off in range(0, total, chunk):
            part = combs[off: off + chunk]
            yield off, part, _chunk_edge_counts(graph, part)
        return
    it = itertools.combinations(range(N), n)
    off = 0
    while True:
        block = list(itertools.islice(it, chunk))
        if not block:
            return
        part = np.asarray(block, dtype=np.int16)
        yield off, part, _chunk_edge_counts(graph, part)
        off += len(block)
