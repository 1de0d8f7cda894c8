"""z-superstables of a circuit M-basis of K5.

The reference basis has six circuits. Its Gram matrix is an M-matrix with
determinant 125, and there are exactly 125 z-superstable configurations.
(1,1,0,0,0,1) shows the gap between set firing and multiset firing.

Usage: python3 demos/k5_superstables.py
"""

import time

from cyclefire.firing import (
    degree_histogram,
    enumerate_z_superstables,
    is_set_superstable,
    maximal_elements,
    z_superstable_witness,
)
from cyclefire.graph import complete_graph
from cyclefire.linalg import determinant, to_nested
from cyclefire.mbasis import is_cycle_m_basis, is_m_matrix
from cyclefire.reference_bases import K5_CONFIGURATION, K5_DUAL_LAPLACIAN, K5_IOTA, columns

basis = columns(K5_IOTA)
print("cycle M-basis:", bool(is_cycle_m_basis(complete_graph(5), basis)))
for row in to_nested(K5_DUAL_LAPLACIAN):
    print("  ", row)
print("M-matrix:", is_m_matrix(K5_DUAL_LAPLACIAN).reason, " det", determinant(K5_DUAL_LAPLACIAN))

start = time.perf_counter()
configs = enumerate_z_superstables(K5_DUAL_LAPLACIAN)
print(f"{len(configs)} z-superstables in {time.perf_counter() - start:.3f}s")
print("by degree", degree_histogram(configs))
print("maximal:", " ".join("".join(map(str, c)) for c in maximal_elements(configs)))

c = K5_CONFIGURATION
print(c, "set-superstable:", is_set_superstable(c, K5_DUAL_LAPLACIAN))
print("but the multiset", z_superstable_witness(c, K5_DUAL_LAPLACIAN), "fires legally")
