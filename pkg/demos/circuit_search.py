"""Searching for circuit M-bases, and two exhausted searches.

Usage: python3 demos/circuit_search.py
"""

from cyclefire.circuits import SearchConstraints, find_circuit_m_basis
from cyclefire.graph import complete_bipartite, complete_graph
from cyclefire.linalg import to_nested

runs = [
    ("K5", complete_graph(5), SearchConstraints()),
    ("K5 triangles only", complete_graph(5), SearchConstraints(exact_lens=frozenset({3}))),
    ("K3,3 up to length 6", complete_bipartite(3, 3), SearchConstraints(max_len=6)),
    ("K3,3 four-cycles only", complete_bipartite(3, 3), SearchConstraints(exact_lens=frozenset({4}))),
    ("K5 with budget 10", complete_graph(5), SearchConstraints(budget=10)),
]

for name, g, cons in runs:
    result = find_circuit_m_basis(g, cons)
    print(f"{name}: {result.report()}")
    if result:
        for c in result.circuits:
            print("   circuit", c.vertices)
        for row in to_nested(result.certificate.dual_laplacian):
            print("   ", row)
