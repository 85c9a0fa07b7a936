"""
Sandwiching the block-eigenvalue scan in polynomial time
========================================================

The spectral scan maximizes the top eigenvalue of an n x n principal
block of the squared adjacency matrix, over all size-n blocks. Exact
maximization is a combinatorial search, but the toolkit brackets it
from both sides in polynomial time: a feasible block gives a certified
lower bound, and entrywise thresholding gives a dual upper bound. On
small graphs the exact optimum is computable by enumeration, so the
sandwich can be watched directly.
"""

from itertools import combinations

import numpy as np

from subgraph_sentinel.detectors import (DETECTORS, sdp_dual_bound,
                                         squared_adjacency, support_eig)
from subgraph_sentinel.models import ModelSpec, sample

rng = np.random.default_rng(2024)
print(f"{'graph':>6s} {'lower':>9s} {'exact':>9s} {'upper':>9s}   gap")
for k in range(8):
    N = int(rng.integers(16, 24))
    n = int(rng.integers(4, 6))
    p1 = float(rng.uniform(0.6, 0.95))
    spec = ModelSpec.planted(N, 0.2, p1, n)
    g = sample(spec, master_seed=300 + k, stream_index=0)

    B = squared_adjacency(g)
    exact = max(support_eig(B, s) for s in combinations(range(N), n))
    relaxed = DETECTORS["relaxed_scan"](g, n=n)
    lower, upper = relaxed.lower_bound, relaxed.value
    assert lower <= exact + 1e-9 <= upper + 1e-9
    print(f"{k:6d} {lower:9.3f} {exact:9.3f} {upper:9.3f}   "
          f"{upper - lower:6.3f}")

print("at these sizes the feasible search found the true optimum on "
      "every graph;\nonly the dual side is slack")

# The upper side is a one-parameter family of dual bounds: for any
# shift z >= 0, zeroing entries of magnitude <= z and adding n*z to the
# top eigenvalue dominates every principal n-block. The relaxed scan
# takes the minimum over a grid of shifts; any single shift already
# bounds the best block.
g = sample(ModelSpec.planted(24, 0.2, 0.9, 5), master_seed=400,
           stream_index=0)
B = squared_adjacency(g)
best_block = DETECTORS["sparse_eig"](g, n=5).value
print("\nsparse eigenvalue dual bound across shifts:")
for z in (0.0, 0.5, 1.0, 2.0):
    print(f"  z={z:3.1f}: bound {sdp_dual_bound(B, 5, z):8.3f} "
          f">= best block {best_block:.3f}")
