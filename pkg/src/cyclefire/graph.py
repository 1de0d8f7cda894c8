"""Graphs, incidence and Laplacian matrices, cycle bases and face tracing.

Orientation convention: edge ``{i, j}`` with ``i < j`` runs from tail ``i``
to head ``j``; its incidence column has -1 in row ``i`` and +1 in row ``j``.
Edge-indexed vectors use the graph's edge order as coordinate order.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from os import PathLike
from typing import Iterable, Mapping, Sequence

import numpy as np

from .linalg import columns_to_matrix, determinant, dot, zeros


class GraphError(ValueError):
    """Base class for invalid graph input."""


class GraphFormatError(GraphError):
    pass


class DisconnectedGraphError(GraphError):
    pass


class SelfLoopError(GraphError):
    pass


class DuplicateEdgeError(GraphError):
    pass


class NotSpanningTreeError(GraphError):
    pass


class NonPlanarRotationError(GraphError):
    pass


@dataclass(frozen=True)
class Graph:
    """A connected simple graph on vertices ``0 .. vertex_count - 1``.

    ``edges`` are stored as ``(min, max)`` pairs in a fixed order that
    defines the coordinates of every edge-indexed vector.
    """

    vertex_count: int
    edges: tuple[tuple[int, int], ...]
    root: int = 0
    rotation: Mapping[int, tuple[int, ...]] | None = field(default=None, compare=False)

    def __post_init__(self):
        n = self.vertex_count
        if not isinstance(n, int) or n < 1:
            raise GraphFormatError(f"vertex count must be a positive integer, got {n!r}")
        seen = set()
        normalized = []
        for e in self.edges:
            if len(e) != 2:
                raise GraphFormatError(f"edge {e!r} is not a vertex pair")
            i, j = int(e[0]), int(e[1])
            for v in (i, j):
                if not 0 <= v < n:
                    raise GraphFormatError(f"edge {e!r}: vertex {v} out of range 0..{n - 1}")
            if i == j:
                raise SelfLoopError(f"self-loop at vertex {i}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise DuplicateEdgeError(f"duplicate edge {key[0]}-{key[1]}")
            seen.add(key)
            normalized.append(key)
        object.__setattr__(self, "edges", tuple(normalized))
        if not 0 <= self.root < n:
            raise GraphFormatError(f"root {self.root} is not a vertex")
        unreached = set(range(n)) - _reachable(n, normalized, self.root)
        if unreached:
            raise DisconnectedGraphError(
                f"graph is disconnected: vertex {min(unreached)} unreachable from {self.root}"
            )
        if self.rotation is not None:
            rot = {int(v): tuple(int(w) for w in nbrs) for v, nbrs in self.rotation.items()}
            for v in range(n):
                if sorted(rot.get(v, ())) != sorted(self.neighbors(v)):
                    raise GraphFormatError(f"rotation at vertex {v} does not list its neighbors")
            object.__setattr__(self, "rotation", rot)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def edge_index(self) -> dict[tuple[int, int], int]:
        return {e: k for k, e in enumerate(self.edges)}

    def neighbors(self, v: int) -> list[int]:
        return sorted([j for i, j in self.edges if i == v] + [i for i, j in self.edges if j == v])

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    @property
    def non_root(self) -> list[int]:
        """Firing sites in classical mode, in vertex order."""
        return [v for v in range(self.vertex_count) if v != self.root]

    def with_lex_order(self) -> "Graph":
        return Graph(self.vertex_count, tuple(sorted(self.edges)), self.root, self.rotation)


def _reachable(n, edges, start):
    adj = {v: [] for v in range(n)}
    for i, j in edges:
        adj[i].append(j)
        adj[j].append(i)
    seen = {start}
    todo = [start]
    while todo:
        v = todo.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return seen


def load_graph(document: str | Mapping, *, edge_order: str | None = None) -> Graph:
    """Build a :class:`Graph` from a JSON document (text or parsed mapping).

    Recognised keys: ``vertices``, ``edges``, ``root``, ``rotation``,
    ``edge_order`` (``"input"`` or ``"lex"``). The keyword argument
    overrides the document's ``edge_order``.
    """
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise GraphFormatError(f"graph document is not valid JSON: {exc}") from exc
    if not isinstance(document, Mapping):
        raise GraphFormatError("graph document must be a JSON object")
    try:
        n = document["vertices"]
        edges = document["edges"]
    except KeyError as exc:
        raise GraphFormatError(f"graph document missing key {exc.args[0]!r}") from None
    if not isinstance(n, int) or isinstance(n, bool):
        raise GraphFormatError(f"'vertices' must be an integer, got {n!r}")
    if not isinstance(edges, list) or not all(isinstance(e, (list, tuple)) for e in edges):
        raise GraphFormatError("'edges' must be a list of vertex pairs")
    order = edge_order or document.get("edge_order", "input")
    if order not in ("input", "lex"):
        raise GraphFormatError(f"unknown edge_order {order!r}")
    rotation = document.get("rotation")
    if rotation is not None:
        try:
            rotation = {int(v): tuple(int(w) for w in nbrs) for v, nbrs in rotation.items()}
        except (AttributeError, TypeError, ValueError) as exc:
            raise GraphFormatError(f"malformed rotation system: {exc}") from None
    g = Graph(n, tuple(tuple(e) for e in edges), int(document.get("root", 0)), rotation)
    return g.with_lex_order() if order == "lex" else g


def read_graph(path: str | PathLike, *, edge_order: str | None = None) -> Graph:
    with open(path) as fh:
        return load_graph(fh.read(), edge_order=edge_order)


def graph_to_document(g: Graph) -> dict:
    doc = {"vertices": g.vertex_count, "edges": [list(e) for e in g.edges], "root": g.root}
    if g.rotation is not None:
        doc["rotation"] = {str(v): list(nbrs) for v, nbrs in sorted(g.rotation.items())}
    return doc


# -- small named families ---------------------------------------------------

DIAMOND_COORDINATES = {0: (0.0, 0.0), 1: (1.0, 1.0), 2: (2.0, 0.0), 3: (1.0, -1.0)}


def diamond() -> Graph:
    """K4 minus the edge 1-3, drawn with 0-2 as the diagonal."""
    g = Graph(4, ((0, 1), (0, 2), (0, 3), (1, 2), (2, 3)))
    return with_rotation(g, rotation_from_coordinates(g, DIAMOND_COORDINATES))


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple(combinations(range(n), 2)))


def complete_bipartite(m: int, n: int) -> Graph:
    """Parts ``{0..m-1}`` and ``{m..m+n-1}``, edges in lexicographic order."""
    return Graph(m + n, tuple((i, m + j) for i in range(m) for j in range(n)))


def cycle_graph(n: int) -> Graph:
    return Graph(n, tuple(sorted((i, (i + 1) % n) for i in range(n))))


def path_graph(n: int) -> Graph:
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def rotation_from_coordinates(
    g: Graph, coords: Mapping[int, tuple[float, float]]
) -> dict[int, tuple[int, ...]]:
    """Counterclockwise neighbour order read off a straight-line drawing."""
    rot = {}
    for v in range(g.vertex_count):
        x0, y0 = coords[v]
        rot[v] = tuple(
            sorted(g.neighbors(v), key=lambda w: math.atan2(coords[w][1] - y0, coords[w][0] - x0))
        )
    return rot


def with_rotation(g: Graph, rotation: Mapping[int, Sequence[int]]) -> Graph:
    return Graph(g.vertex_count, g.edges, g.root, rotation)


# -- matrices ---------------------------------------------------------------

def incidence_matrix(g: Graph) -> np.ndarray:
    """Signed ``|V| x |E|`` incidence matrix."""
    d = zeros(g.vertex_count, g.edge_count)
    for k, (i, j) in enumerate(g.edges):
        d[i, k] = -1
        d[j, k] = 1
    return d


def reduced_incidence(g: Graph) -> np.ndarray:
    return np.delete(incidence_matrix(g), g.root, axis=0)


def reduced_laplacian(g: Graph) -> np.ndarray:
    rows = g.non_root
    pos = {v: k for k, v in enumerate(rows)}
    L = zeros(len(rows), len(rows))
    for i, j in g.edges:
        for a, b in ((i, j), (j, i)):
            if a in pos:
                L[pos[a], pos[a]] += 1
                if b in pos:
                    L[pos[a], pos[b]] -= 1
    return L


def genus(g: Graph) -> int:
    return g.edge_count - g.vertex_count + 1


def spanning_tree_count(g: Graph) -> int:
    """Number of spanning trees, as the determinant of the reduced Laplacian."""
    return determinant(reduced_laplacian(g))


# -- flow bases ----------------------------------------------------------------

@dataclass(frozen=True)
class FlowBasis:
    """Ordered integer flow vectors (the columns of the matrix iota)."""

    graph: Graph
    vectors: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        vecs = tuple(tuple(int(x) for x in v) for v in self.vectors)
        for k, v in enumerate(vecs):
            if len(v) != self.graph.edge_count:
                raise ValueError(
                    f"vector {k} has {len(v)} entries; graph has {self.graph.edge_count} edges"
                )
        object.__setattr__(self, "vectors", vecs)

    def __len__(self):
        return len(self.vectors)

    def matrix(self) -> np.ndarray:
        return columns_to_matrix(self.vectors, self.graph.edge_count)


def is_flow(g: Graph, vector: Sequence[int]) -> bool:
    """True iff the edge vector lies in the kernel of the incidence matrix."""
    net = [0] * g.vertex_count
    for (i, j), x in zip(g.edges, vector):
        net[i] -= x
        net[j] += x
    return not any(net)


def walk_vector(g: Graph, walk: Sequence[int]) -> tuple[int, ...]:
    """Signed edge vector of the closed walk ``walk[0] -> walk[1] -> ... -> walk[0]``."""
    index = g.edge_index
    vec = [0] * g.edge_count
    for a, b in zip(walk, list(walk[1:]) + [walk[0]]):
        key = (min(a, b), max(a, b))
        if key not in index:
            raise GraphError(f"{a}-{b} is not an edge")
        vec[index[key]] += 1 if a < b else -1
    return tuple(vec)


def is_circuit_vector(g: Graph, vector: Sequence[int]) -> bool:
    """Entries in {-1, 0, 1}, in the flow lattice, support a single simple cycle."""
    if any(x not in (-1, 0, 1) for x in vector) or not any(vector):
        return False
    if not is_flow(g, vector):
        return False
    support = [g.edges[k] for k, x in enumerate(vector) if x]
    deg: dict[int, int] = {}
    for i, j in support:
        deg[i] = deg.get(i, 0) + 1
        deg[j] = deg.get(j, 0) + 1
    if any(d != 2 for d in deg.values()):
        return False
    start = support[0][0]
    verts = set(deg)
    return _reachable_in(verts, support, start) == verts


def _reachable_in(verts, edges, start):
    adj = {v: [] for v in verts}
    for i, j in edges:
        adj[i].append(j)
        adj[j].append(i)
    seen = {start}
    todo = [start]
    while todo:
        v = todo.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return seen


def bfs_tree(g: Graph) -> list[tuple[int, int]]:
    """Breadth-first spanning tree from the root, neighbours in vertex order."""
    seen = {g.root}
    queue = deque([g.root])
    tree = []
    while queue:
        v = queue.popleft()
        for w in g.neighbors(v):
            if w not in seen:
                seen.add(w)
                tree.append((min(v, w), max(v, w)))
                queue.append(w)
    return tree


def fundamental_cycle_basis(g: Graph, tree: Iterable[Sequence[int]] | str = "auto") -> FlowBasis:
    """One circuit per non-tree edge, in edge order.

    The non-tree edge ``(u, v)``, ``u < v``, gets coefficient +1 and the
    circuit closes through the tree path from ``v`` back to ``u``.
    """
    if isinstance(tree, str):
        if tree != "auto":
            raise ValueError(f"tree must be an edge list or 'auto', got {tree!r}")
        tree_edges = bfs_tree(g)
    else:
        tree_edges = [(min(e), max(e)) for e in tree]
    index = g.edge_index
    for e in tree_edges:
        if e not in index:
            raise NotSpanningTreeError(f"{e[0]}-{e[1]} is not an edge of the graph")
    if len(set(tree_edges)) != g.vertex_count - 1 or _reachable(
        g.vertex_count, tree_edges, g.root
    ) != set(range(g.vertex_count)):
        raise NotSpanningTreeError("edge set is not a spanning tree")
    tree_set = set(tree_edges)

    adj: dict[int, list[int]] = {v: [] for v in range(g.vertex_count)}
    for i, j in tree_edges:
        adj[i].append(j)
        adj[j].append(i)
    parent = {g.root: None}
    depth = {g.root: 0}
    order = [g.root]
    for v in order:
        for w in sorted(adj[v]):
            if w not in parent:
                parent[w] = v
                depth[w] = depth[v] + 1
                order.append(w)

    def tree_path(a, b):
        up_a, up_b = [a], [b]
        while depth[up_a[-1]] > depth[up_b[-1]]:
            up_a.append(parent[up_a[-1]])
        while depth[up_b[-1]] > depth[up_a[-1]]:
            up_b.append(parent[up_b[-1]])
        while up_a[-1] != up_b[-1]:
            up_a.append(parent[up_a[-1]])
            up_b.append(parent[up_b[-1]])
        return up_a + up_b[-2::-1]

    vectors = []
    for u, v in g.edges:
        if (u, v) in tree_set:
            continue
        # closed walk u -> v, then back along the tree from v to u
        walk = [u] + tree_path(v, u)[:-1]
        vectors.append(walk_vector(g, walk))
    return FlowBasis(g, tuple(vectors))


# -- planar faces --------------------------------------------------------------

def face_walks(g: Graph) -> list[list[tuple[int, int]]]:
    """Trace every face of the rotation system as a cyclic list of darts.

    The dart following ``(u, v)`` is ``(v, w)`` where ``w`` comes right
    after ``u`` in the rotation at ``v``. Faces are listed in order of
    their smallest dart.
    """
    if g.rotation is None:
        raise GraphError("graph has no rotation system")
    rot = g.rotation
    succ = {}
    for v, nbrs in rot.items():
        for k, u in enumerate(nbrs):
            succ[(v, u)] = nbrs[(k + 1) % len(nbrs)]
    darts = sorted([(i, j) for i, j in g.edges] + [(j, i) for i, j in g.edges])
    used = set()
    faces = []
    for d in darts:
        if d in used:
            continue
        walk = []
        while d not in used:
            used.add(d)
            walk.append(d)
            u, v = d
            d = (v, succ[(v, u)])
        faces.append(walk)
    # an edgeless graph still has one (empty) face
    euler = g.vertex_count - g.edge_count + max(len(faces), 1)
    if euler != 2:
        raise NonPlanarRotationError(f"rotation system not planar: V - E + F = {euler}, expected 2")
    return faces


def _face_vector(g: Graph, walk: list[tuple[int, int]]) -> tuple[int, ...]:
    index = g.edge_index
    vec = [0] * g.edge_count
    for a, b in walk:
        vec[index[(min(a, b), max(a, b))]] += 1 if a < b else -1
    return tuple(vec)


def outer_face_index(g: Graph, walks: list[list[tuple[int, int]]]) -> int:
    """Longest boundary walk; ties go to the lexicographically smallest edge set."""
    def key(k):
        edges = sorted({(min(a, b), max(a, b)) for a, b in walks[k]})
        return (-len(walks[k]), edges)
    return min(range(len(walks)), key=key)


def trace_faces(g: Graph) -> list[tuple[int, ...]]:
    """Bounded-face flow vectors of a planar rotation system.

    The faces are traced from the darts, so an edge shared by two faces
    is traversed in opposite directions by them. The longest face is
    taken as the unbounded one and dropped.
    """
    walks = face_walks(g)
    if not walks:
        return []
    outer = outer_face_index(g, walks)
    return [_face_vector(g, w) for k, w in enumerate(walks) if k != outer]


def face_basis(g: Graph) -> FlowBasis:
    return FlowBasis(g, tuple(trace_faces(g)))


def dual_reduced_laplacian(g: Graph) -> np.ndarray:
    """Reduced Laplacian of the planar dual multigraph, rooted at the outer face.

    Rows follow the order of :func:`trace_faces`. Loops of the dual (from
    bridges of ``g``) contribute nothing.
    """
    walks = face_walks(g)
    if not walks:
        return zeros(0, 0)
    outer = outer_face_index(g, walks)
    face_of = {d: k for k, w in enumerate(walks) for d in w}
    keep = [k for k in range(len(walks)) if k != outer]
    pos = {k: r for r, k in enumerate(keep)}
    L = zeros(len(keep), len(keep))
    for i, j in g.edges:
        a, b = face_of[(i, j)], face_of[(j, i)]
        if a == b:
            continue
        for x, y in ((a, b), (b, a)):
            if x in pos:
                L[pos[x], pos[x]] += 1
                if y in pos:
                    L[pos[x], pos[y]] -= 1
    return L


def gram_of_vectors(vectors: Sequence[Sequence[int]]) -> list[list[int]]:
    return [[dot(u, v) for v in vectors] for u in vectors]
