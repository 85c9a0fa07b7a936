"""
A small worst-case-risk phase portrait
======================================

Sweeps a grid of planted-block densities for two detectors and prints
the estimated risk per cell, reproducing in miniature the transition
from powerless (gamma near 1) to powerful (gamma near 0). The same grid
can be run from the command line:

    subgraph-sentinel phase --config demos/sweep_small.json --out out.csv
"""

from subgraph_sentinel.sweep import phase_sweep, rows_to_csv

cells = [{"N": 40, "n": 6, "p0": 0.2, "p1": round(p1, 2)}
         for p1 in (0.2, 0.35, 0.5, 0.65, 0.8, 0.95)]

rows = phase_sweep(cells, detectors=["total_degree", "scan"],
                   alpha=0.05, replicates=150, seed=17, workers=1)

print(f"{'p1':>5s} {'detector':>14s} {'type1':>7s} {'type2':>7s} "
      f"{'gamma':>7s} {'regime':>18s}")
for row in rows:
    print(f"{row['p1']:5.2f} {row['detector']:>14s} {row['type1']:7.3f} "
          f"{row['type2']:7.3f} {row['gamma']:7.3f} {row['regime']:>18s}")

# The regime column is the asymptotic verdict, and at N=40 it stays
# "Undetectable" even where the Monte Carlo shows the scan winning.
# No contradiction: the classifier checks its own applicability, and at
# this size the subset is too large a fraction of the graph for the
# asymptotic boundary to mean much.
from subgraph_sentinel.regimes import classify_regime

r = classify_regime(40, 6, 0.2, 0.95)
print("\nclassifier side conditions at the strongest cell:", r.side_ok)
print("the finite-sample estimates above are the ground truth here")

# The CSV form is what the command-line tool writes.
print("\nfirst lines of the CSV encoding:")
print("\n".join(rows_to_csv(rows).splitlines()[:4]))
