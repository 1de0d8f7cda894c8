"""Simple circuits and the search for circuit M-bases."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from .graph import (
    Graph,
    GraphError,
    dual_reduced_laplacian,
    face_walks,
    fundamental_cycle_basis,
    is_circuit_vector,
    spanning_tree_count,
    trace_faces,
    walk_vector,
)
from .linalg import columns_to_matrix, determinant, dot, gram
from .mbasis import MBasisCertificate, _certificate, is_cycle_m_basis
from . import reference_bases


@dataclass(frozen=True)
class Circuit:
    """A simple cycle traversed ``vertices[0] -> vertices[1] -> ... -> vertices[0]``."""

    vertices: tuple[int, ...]
    vector: tuple[int, ...]

    def __len__(self):
        return len(self.vertices)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(k for k, x in enumerate(self.vector) if x)

    @property
    def signs(self) -> tuple[int, ...]:
        return tuple(x for x in self.vector if x)


def enumerate_circuits(g: Graph, max_len: int | None = None) -> list[Circuit]:
    """Every simple cycle of length at most ``max_len``, once each.

    A cycle starts at its smallest vertex and leaves towards the smaller of
    that vertex's two cycle neighbours. Output is sorted by length, then by
    vertex sequence.
    """
    limit = g.vertex_count if max_len is None else min(max_len, g.vertex_count)
    adj = [g.neighbors(v) for v in range(g.vertex_count)]
    found = []
    for s in range(g.vertex_count):
        path = [s]
        on_path = {s}

        def extend():
            u = path[-1]
            for w in adj[u]:
                if w == s and len(path) >= 3 and path[1] < path[-1]:
                    found.append(tuple(path))
                elif w > s and w not in on_path and len(path) < limit:
                    path.append(w)
                    on_path.add(w)
                    extend()
                    path.pop()
                    on_path.discard(w)

        extend()
    found.sort(key=lambda c: (len(c), c))
    return [Circuit(c, walk_vector(g, c)) for c in found]


@dataclass(frozen=True)
class SearchConstraints:
    """Limits on a circuit M-basis search.

    ``order`` is ``"ascending"`` or ``"descending"`` by circuit length;
    ``seed`` shuffles circuits within each length (the search is
    exhaustive either way, so an infeasible verdict must not change).
    """

    max_len: int | None = None
    exact_lens: frozenset[int] | None = None
    budget: int = 10**7
    require_full_span: bool = True
    order: str = "ascending"
    seed: int | None = None

    def __post_init__(self):
        if self.budget < 1:
            raise ValueError("node budget must be positive")
        if self.max_len is not None and self.max_len < 3:
            raise ValueError("circuits have length at least 3")
        if self.exact_lens is not None:
            lens = frozenset(int(k) for k in self.exact_lens)
            if not lens or min(lens) < 3:
                raise ValueError("circuits have length at least 3")
            object.__setattr__(self, "exact_lens", lens)
        if self.order not in ("ascending", "descending"):
            raise ValueError(f"unknown order {self.order!r}")

    def admits(self, length: int) -> bool:
        if self.max_len is not None and length > self.max_len:
            return False
        return self.exact_lens is None or length in self.exact_lens


@dataclass
class SearchResult:
    status: str  # "found", "infeasible" or "inconclusive"
    certificate: MBasisCertificate | None
    nodes: int
    circuits_considered: int
    seconds: float
    circuits: list[Circuit] = field(default_factory=list, repr=False)

    def __bool__(self):
        return self.status == "found"

    def report(self) -> dict:
        return {
            "status": self.status,
            "nodes": self.nodes,
            "circuits_considered": self.circuits_considered,
        }


class _Echelon:
    # integer row echelon form, for incremental independence tests
    def __init__(self):
        self.rows: list[tuple[int, list[int]]] = []

    def reduce(self, v: Sequence[int]) -> list[int] | None:
        v = list(v)
        for p, r in self.rows:
            if v[p]:
                a, b = r[p], v[p]
                v = [a * x - b * y for x, y in zip(v, r)]
                c = 0
                for x in v:
                    c = gcd(c, x)
                if c > 1:
                    v = [x // c for x in v]
        if not any(v):
            return None
        return v

    def push(self, v: list[int]):
        p = next(k for k, x in enumerate(v) if x)
        self.rows.append((p, v))

    def pop(self):
        self.rows.pop()


def _candidates(g: Graph, cons: SearchConstraints) -> list[Circuit]:
    top = cons.max_len
    if cons.exact_lens is not None:
        top = max(cons.exact_lens) if top is None else min(top, max(cons.exact_lens))
    circuits = [c for c in enumerate_circuits(g, top) if cons.admits(len(c))]
    if cons.seed is not None:
        rng = random.Random(cons.seed)
        groups: dict[int, list[Circuit]] = {}
        for c in circuits:
            groups.setdefault(len(c), []).append(c)
        circuits = []
        for k in sorted(groups):
            rng.shuffle(groups[k])
            circuits.extend(groups[k])
    if cons.order == "descending":
        circuits.sort(key=len, reverse=True)
    return circuits


def find_circuit_m_basis(g: Graph, cons: SearchConstraints | None = None) -> SearchResult:
    """Depth-first search for ``genus(g)`` oriented circuits forming an M-basis.

    Circuits are taken in candidate order; a new one must have
    non-positive product with every chosen one in some orientation, and
    must be rationally independent of them. The first circuit keeps its
    canonical orientation (negating a whole basis changes nothing). A full
    set is accepted iff its Gram determinant is the spanning-tree count.
    The status is ``"infeasible"`` only when the whole tree was explored.
    """
    cons = cons or SearchConstraints()
    start = time.perf_counter()
    target = fundamental_cycle_basis(g)
    need = len(target)
    trees = spanning_tree_count(g)
    circuits = _candidates(g, cons)
    vecs = [c.vector for c in circuits]
    chosen: list[tuple[int, ...]] = []
    picked: list[int] = []
    echelon = _Echelon()
    nodes = 0

    class OutOfBudget(Exception):
        pass

    def accept() -> bool:
        if not cons.require_full_span:
            return True
        return determinant(gram(columns_to_matrix(chosen, g.edge_count))) == trees

    def rec(first: int) -> bool:
        nonlocal nodes
        if len(chosen) == need:
            return accept()
        for k in range(first, len(vecs) - (need - len(chosen)) + 1):
            v = vecs[k]
            prods = [dot(v, f) for f in chosen]
            signs = []
            if all(p <= 0 for p in prods):
                signs.append(1)
            if chosen and all(p >= 0 for p in prods):
                signs.append(-1)
            if not signs:
                continue
            reduced = echelon.reduce(v)
            if reduced is None:
                continue
            for s in signs:
                nodes += 1
                if nodes > cons.budget:
                    raise OutOfBudget
                chosen.append(v if s == 1 else tuple(-x for x in v))
                picked.append(k)
                echelon.push(reduced)
                if rec(k + 1):
                    return True
                echelon.pop()
                picked.pop()
                chosen.pop()
        return False

    try:
        found = rec(0)
        status = "found" if found else "infeasible"
    except OutOfBudget:
        status = "inconclusive"
        found = False
    cert = None
    if found:
        cert = _certificate(chosen, g, "find_circuit_m_basis")
        check = is_cycle_m_basis(g, cert.vectors)
        if cons.require_full_span and not check:
            raise AssertionError(f"search produced an invalid basis: {check.failure}")
    used = [circuits[k] for k in picked] if found else []
    return SearchResult(status, cert, nodes, len(circuits), time.perf_counter() - start, used)


# -- planar graphs ---------------------------------------------------------------

def blocks(g: Graph) -> list[list[int]]:
    """Edge indices of each 2-connected block with a cycle, bridges left out.

    Two edges share a block iff a chain of fundamental cycles links them.
    """
    parent = list(range(g.edge_count))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    in_cycle = set()
    for v in fundamental_cycle_basis(g).vectors:
        support = [k for k, x in enumerate(v) if x]
        in_cycle.update(support)
        for k in support[1:]:
            parent[find(k)] = find(support[0])
    groups: dict[int, list[int]] = {}
    for k in sorted(in_cycle):
        groups.setdefault(find(k), []).append(k)
    return sorted(groups.values())


def _block_graph(g: Graph, edge_ids: list[int]) -> tuple[Graph, list[int]]:
    verts = sorted({v for k in edge_ids for v in g.edges[k]})
    relabel = {v: i for i, v in enumerate(verts)}
    edges = [(relabel[g.edges[k][0]], relabel[g.edges[k][1]]) for k in edge_ids]
    rotation = None
    if g.rotation is not None:
        keep = set(verts)
        nbrs = {v: set() for v in verts}
        for k in edge_ids:
            i, j = g.edges[k]
            nbrs[i].add(j)
            nbrs[j].add(i)
        rotation = {
            relabel[v]: tuple(relabel[w] for w in g.rotation[v] if w in keep and w in nbrs[v])
            for v in verts
        }
    # relabelling is monotone, so every edge keeps its orientation
    return Graph(len(verts), edges, 0, rotation), edge_ids


def planar_circuit_m_basis(g: Graph) -> MBasisCertificate:
    """Bounded faces of the embedding given by ``g.rotation``.

    The Gram matrix must equal the reduced Laplacian of the dual graph
    rooted at the outer face. When some bounded face is not a simple cycle
    (the graph is not 2-connected) the faces of each block are used
    instead, and the Gram matrix is compared block by block.
    """
    if g.rotation is None:
        raise GraphError("planar_circuit_m_basis needs a rotation system")
    faces = trace_faces(g)
    if all(is_circuit_vector(g, f) for f in faces):
        cert = _certificate(faces, g, "planar_circuit_m_basis")
        expected = dual_reduced_laplacian(g)
        _compare(cert.dual_laplacian, expected)
    else:
        face_walks(g)  # planarity check on the whole embedding
        vectors = []
        expected_blocks = []
        for edge_ids in blocks(g):
            h, ids = _block_graph(g, edge_ids)
            for f in trace_faces(h):
                vec = [0] * g.edge_count
                for k, x in zip(ids, f):
                    vec[k] = x
                vectors.append(tuple(vec))
            expected_blocks.append(dual_reduced_laplacian(h))
        cert = _certificate(vectors, g, "planar_circuit_m_basis")
        n = len(vectors)
        expected = np.zeros((n, n), dtype=object)
        at = 0
        for B in expected_blocks:
            m = B.shape[0]
            expected[at:at + m, at:at + m] = B
            at += m
        _compare(cert.dual_laplacian, expected)
    for k, v in enumerate(cert.vectors):
        if not is_circuit_vector(g, v):
            raise AssertionError(f"face {k} is not a circuit")
    check = is_cycle_m_basis(g, cert.vectors)
    if not check:
        raise AssertionError(f"face basis fails validation: {check.failure}")
    return cert


def _compare(actual, expected, what="dual Laplacian"):
    if actual.shape != expected.shape:
        raise AssertionError(f"{what}: shape {actual.shape} != {expected.shape}")
    for i in range(actual.shape[0]):
        for j in range(actual.shape[1]):
            if actual[i, j] != expected[i, j]:
                raise AssertionError(
                    f"{what}: entry ({i},{j}) is {actual[i, j]}, expected {expected[i, j]}"
                )


# -- published bases ---------------------------------------------------------------

_REFERENCE = {
    "K5": (lambda: _complete(5), reference_bases.K5_IOTA, reference_bases.K5_DUAL_LAPLACIAN),
    "K33": (lambda: _bipartite(3, 3), reference_bases.K33_IOTA, reference_bases.K33_DUAL_LAPLACIAN),
}


def _complete(n):
    from .graph import complete_graph
    return complete_graph(n)


def _bipartite(m, n):
    from .graph import complete_bipartite
    return complete_bipartite(m, n)


def reference_graphs() -> Iterable[str]:
    return tuple(_REFERENCE)


def verify_reference_basis(name: str) -> MBasisCertificate:
    """Load a reference circuit basis, validate it and check its recorded Gram matrix.

    Any mismatch raises :class:`AssertionError` naming the failing part.
    """
    if name not in _REFERENCE:
        raise KeyError(f"unknown reference basis {name!r}; choose from {sorted(_REFERENCE)}")
    make, iota, printed = _REFERENCE[name]
    g = make()
    vectors = reference_bases.columns(iota)
    for k, v in enumerate(vectors):
        if not is_circuit_vector(g, v):
            raise AssertionError(f"{name}: column {k} is not a circuit")
    check = is_cycle_m_basis(g, vectors)
    if not check:
        raise AssertionError(f"{name}: {check.failure} {check.witness}")
    cert = _certificate(vectors, g, f"reference:{name}")
    _compare(cert.dual_laplacian, np.array(printed, dtype=object), f"{name} dual Laplacian")
    return cert
