"""The diamond graph, classical and dual.

Usage: python3 demos/diamond_walkthrough.py
"""

from cyclefire.firing import (
    classical_criticals,
    classical_superstables,
    critical_group,
    enumerate_z_superstables,
    fire_multiset,
    stabilize,
)
from cyclefire.graph import diamond, face_basis, genus, reduced_laplacian, spanning_tree_count
from cyclefire.linalg import to_nested
from cyclefire.mbasis import dual_laplacian


def words(configs):
    return " ".join("".join(map(str, c)) for c in sorted(configs))


g = diamond()
print("edges", g.edges, "genus", genus(g), "trees", spanning_tree_count(g))
L = reduced_laplacian(g)
print("reduced Laplacian", to_nested(L))
print("critical group Z/%d" % critical_group(g))
print("superstables", words(classical_superstables(g)))
print("criticals   ", words(classical_criticals(g)))

# the two bounded faces give the dual side
faces = face_basis(g)
Ls = dual_laplacian(faces)
print("face vectors", faces.vectors)
print("dual Laplacian", to_nested(Ls))
dual = enumerate_z_superstables(Ls)
print("dual superstables", words(dual))
# 22 is stable but not superstable: the pair of faces fires together
print("22 fires (1,1) to", fire_multiset((2, 2), Ls, (1, 1)))

# stabilizing 5 chips on vertex 2
print("stabilize (0,5,0):", stabilize((0, 5, 0), L))
