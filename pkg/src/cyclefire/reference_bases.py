"""Published circuit M-bases for K5 and K3,3, with their Gram matrices.

Rows of each ``iota`` follow the lexicographic edge order of the graph
built by :func:`cyclefire.graph.complete_graph` (vertices relabelled
``1..5 -> 0..4``) or :func:`cyclefire.graph.complete_bipartite`
(parts ``{0,1,2}`` and ``{3,4,5}``).
"""

K5_IOTA = (
    (1, 0, -1, 0, 1, 0),
    (0, -1, 0, 0, -1, 1),
    (0, 0, 0, 1, 0, -1),
    (-1, 1, 1, -1, 0, 0),
    (0, 1, -1, 1, 0, 0),
    (1, 0, 0, -1, 0, 0),
    (0, -1, 0, 0, 1, 0),
    (0, 0, 0, 0, -1, 1),
    (0, 0, -1, 1, 0, 0),
    (1, 0, 0, 0, -1, 0),
)

K5_DUAL_LAPLACIAN = (
    (4, -1, -2, 0, 0, 0),
    (-1, 4, 0, 0, 0, -1),
    (-2, 0, 4, -3, -1, 0),
    (0, 0, -3, 5, 0, -1),
    (0, 0, -1, 0, 5, -2),
    (0, -1, 0, -1, -2, 3),
)

K33_IOTA = (
    (-1, 0, 1, 0),
    (0, 1, -1, 0),
    (1, -1, 0, 0),
    (1, 0, 0, -1),
    (0, -1, 1, 1),
    (-1, 1, -1, 0),
    (0, 0, -1, 1),
    (0, 0, 0, -1),
    (0, 0, 1, 0),
)

K33_DUAL_LAPLACIAN = (
    (4, -2, 0, -1),
    (-2, 4, -3, -1),
    (0, -3, 6, 0),
    (-1, -1, 0, 4),
)

# A z-superstable configuration of the K5 basis together with the multiset
# firing that empties it.
K5_CONFIGURATION = (1, 1, 0, 0, 0, 1)
K5_FIRING = (5, 3, 8, 6, 4, 6)

K5_SUPERSTABLE_HISTOGRAM = (1, 6, 19, 38, 39, 19, 3)

K5_MAXIMAL_SUPERSTABLES = tuple(
    tuple(int(ch) for ch in word)
    for word in (
        "000112", "000211", "010022", "010210", "010300", "020021",
        "020040", "020111", "021020", "021110", "030101", "100102",
        "101020", "101110", "130020", "130110", "200021", "200111",
        "210020", "210110", "300020", "310000",
    )
)


def columns(iota):
    """The columns of a row-major ``iota`` as vectors."""
    return [tuple(row[k] for row in iota) for k in range(len(iota[0]))]
