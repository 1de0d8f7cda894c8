"""How big the M-basis transform gets on complete graphs.

The transform always returns an M-basis, but its Gram entries grow quickly
with the genus. The dual Laplacian still has determinant equal to the tree
count, so the group is the same.

Usage: python3 demos/transform_growth.py [max_n]   (default 6; 7 takes ~30s)
"""

import sys
import time

from cyclefire.graph import complete_graph, fundamental_cycle_basis, genus, spanning_tree_count
from cyclefire.linalg import determinant, nontrivial_invariant_factors

from cyclefire.mbasis import mbasis_transform

max_n = int(sys.argv[1]) if len(sys.argv) > 1 else 6
for n in range(3, max_n + 1):
    g = complete_graph(n)
    start = time.perf_counter()
    cert = mbasis_transform(fundamental_cycle_basis(g))
    took = time.perf_counter() - start
    L = cert.dual_laplacian
    bits = max(abs(int(x)).bit_length() for x in L.flat)
    assert determinant(L) == spanning_tree_count(g)
    print(f"K{n}: genus {genus(g):2d}  largest entry {bits:7d} bits  "
          f"group {nontrivial_invariant_factors(L)}  {took:.2f}s")
