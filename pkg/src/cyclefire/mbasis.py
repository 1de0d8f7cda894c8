"""Integer Gram-Schmidt, the M-basis transform and M-matrix checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .graph import FlowBasis, Graph, is_flow, spanning_tree_count
from .linalg import (
    SingularMatrixError,
    as_int_matrix,
    columns_to_matrix,
    determinant,
    dot,
    gram,
    rational_inverse,
    same_lattice,
    solve_rational,
)


class DependentVectorsError(ValueError):
    """Input vectors are linearly dependent; ``index`` is the first culprit."""

    def __init__(self, index: int, message: str | None = None):
        self.index = index
        super().__init__(message or f"vector {index} is dependent on the vectors before it")


def _as_vectors(vs) -> list[tuple[int, ...]]:
    if isinstance(vs, (FlowBasis, MBasisCertificate)):
        return list(vs.vectors)
    return [tuple(int(x) for x in v) for v in vs]


def integer_gram_schmidt(vs: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Pairwise orthogonal ``q_i`` with ``q_i`` in the integer span of ``v_1..v_i``.

    ``q_1 = v_1`` and ``q_i = P_i * (v_i - sum_j (v_i.q_j / |q_j|^2) q_j)``
    with ``P_i`` the product of ``|q_j|^2`` over ``j < i``. No content is
    divided out, so entries grow quickly.
    """
    vs = _as_vectors(vs)
    qs: list[tuple[int, ...]] = []
    norms: list[int] = []
    for i, v in enumerate(vs):
        if not any(v):
            raise DependentVectorsError(i, f"vector {i} is zero")
        prod = 1
        for n in norms:
            prod *= n
        q = [prod * x for x in v]
        for qj, nj in zip(qs, norms):
            c = prod // nj * dot(v, qj)
            q = [a - c * b for a, b in zip(q, qj)]
        if not any(q):
            raise DependentVectorsError(i)
        qs.append(tuple(q))
        norms.append(dot(q, q))
    return qs


def mbasis_transform_vectors(vs) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    """Run the transform on raw vectors; returns ``(fs, qs)``.

    ``f_1 = v_1`` and ``f_{n+1}`` is built by sweeping ``j = 1..n``,
    adding ``floor(-f_j.a / f_j.q_j) * q_j`` to the running vector ``a``
    (which starts at ``v_{n+1}``). Every such step adds an integer
    combination of earlier ``v``'s, so the lattice is unchanged.
    """
    vs = _as_vectors(vs)
    qs = integer_gram_schmidt(vs)
    fs: list[tuple[int, ...]] = []
    fq: list[int] = []
    for i, v in enumerate(vs):
        a = list(v)
        for f, q, d in zip(fs, qs, fq):
            t = -dot(f, a) // d
            if t:
                a = [x + t * y for x, y in zip(a, q)]
        fs.append(tuple(a))
        fq.append(dot(a, qs[i]))
    return fs, qs


@dataclass(frozen=True)
class MBasisCertificate:
    """A flow basis together with its dual Laplacian and pairwise products."""

    vectors: tuple[tuple[int, ...], ...]
    dual_laplacian: np.ndarray
    graph: Graph | None = None
    source: str = ""

    @property
    def pairwise_products(self) -> np.ndarray:
        return self.dual_laplacian

    @property
    def basis(self) -> FlowBasis:
        if self.graph is None:
            raise ValueError("certificate is not attached to a graph")
        return FlowBasis(self.graph, self.vectors)

    def to_document(self) -> dict:
        doc = {
            "vectors": [[str(x) for x in v] for v in self.vectors],
            "dual_laplacian": [[str(x) for x in row] for row in self.dual_laplacian],
            "pairwise_products": [[str(x) for x in row] for row in self.pairwise_products],
            "determinant": str(determinant(self.dual_laplacian)),
        }
        if self.source:
            doc["source"] = self.source
        return doc


def _certificate(vectors, graph=None, source="") -> MBasisCertificate:
    vectors = tuple(tuple(int(x) for x in v) for v in vectors)
    dim = len(vectors[0]) if vectors else (graph.edge_count if graph else 0)
    return MBasisCertificate(vectors, gram(columns_to_matrix(vectors, dim)), graph, source)


def mbasis_transform(vs) -> MBasisCertificate:
    """Replace a lattice basis by one with pairwise non-positive products.

    Accepts a :class:`FlowBasis` or any sequence of integer vectors.
    """
    graph = vs.graph if isinstance(vs, FlowBasis) else None
    fs, _ = mbasis_transform_vectors(vs)
    return _certificate(fs, graph, "mbasis_transform")


def dual_laplacian(b) -> np.ndarray:
    """Gram matrix ``iota^T iota`` of the basis vectors."""
    vecs = _as_vectors(b)
    dim = b.graph.edge_count if isinstance(b, FlowBasis) else (len(vecs[0]) if vecs else 0)
    return gram(columns_to_matrix(vecs, dim))


def is_z_matrix(L) -> bool:
    L = as_int_matrix(L) if not isinstance(L, np.ndarray) else L
    n, m = L.shape
    if n != m:
        raise ValueError("Z-matrix test needs a square matrix")
    return all(L[i, j] <= 0 for i in range(n) for j in range(n) if i != j)


@dataclass(frozen=True)
class MMatrixReport:
    is_m_matrix: bool
    reason: str
    inverse: np.ndarray | None = field(default=None, repr=False)
    witness: tuple[Fraction, ...] | None = None

    def __bool__(self):
        return self.is_m_matrix


def is_m_matrix(L) -> MMatrixReport:
    """Decide whether ``L`` is a non-singular M-matrix, exactly.

    A Z-matrix qualifies iff it is invertible with an entrywise
    nonnegative inverse. When it does, ``x = L^-1 1`` is returned as a
    witness: ``x >= 0`` and ``L x = 1 > 0``. The report is truthy iff
    ``L`` is an M-matrix.
    """
    L = as_int_matrix(L) if not isinstance(L, np.ndarray) else L
    if not is_z_matrix(L):
        return MMatrixReport(False, "not a Z-matrix")
    try:
        inv = rational_inverse(L)
    except SingularMatrixError:
        return MMatrixReport(False, "singular")
    n = L.shape[0]
    if any(inv[i, j] < 0 for i in range(n) for j in range(n)):
        return MMatrixReport(False, "inverse has a negative entry", inv)
    x = tuple(sum(inv[i, j] for j in range(n)) for i in range(n))
    if all(xi >= 0 for xi in x):
        Lx = [sum(L[i, j] * x[j] for j in range(n)) for i in range(n)]
        if all(v > 0 for v in Lx):
            return MMatrixReport(True, "nonnegative inverse; positive witness L x", inv, x)
    return MMatrixReport(True, "nonnegative inverse", inv)


@dataclass(frozen=True)
class BasisDiagnosis:
    ok: bool
    failure: str | None = None
    witness: tuple[int, ...] = ()
    determinant: int | None = None
    expected_determinant: int | None = None
    dual_laplacian: np.ndarray | None = field(default=None, repr=False)

    def __bool__(self):
        return self.ok


def is_cycle_m_basis(g: Graph, vectors) -> BasisDiagnosis:
    """Check that ``vectors`` is a flow-lattice basis of ``g`` with a Z-matrix Gram.

    Conditions, in order: every vector is a flow; the Gram determinant
    equals the spanning-tree count (equivalent to spanning the whole flow
    lattice for independent flows); off-diagonal Gram entries are <= 0.
    The diagnosis names the first failing condition and its witnesses.
    """
    vecs = _as_vectors(vectors)
    for k, v in enumerate(vecs):
        if len(v) != g.edge_count:
            raise ValueError(f"vector {k} has {len(v)} entries; graph has {g.edge_count} edges")
    for k, v in enumerate(vecs):
        if not is_flow(g, v):
            return BasisDiagnosis(False, "not a flow", (k,))
    L = gram(columns_to_matrix(vecs, g.edge_count))
    det = determinant(L)
    trees = spanning_tree_count(g)
    if det != trees:
        return BasisDiagnosis(
            False, "does not span the flow lattice", (), det, trees, L
        )
    n = len(vecs)
    for i in range(n):
        for j in range(i + 1, n):
            if L[i, j] > 0:
                return BasisDiagnosis(False, "Gram matrix is not a Z-matrix", (i, j), det, trees, L)
    return BasisDiagnosis(True, None, (), det, trees, L)


def integer_span_coefficients(target: Sequence[int], vs: Sequence[Sequence[int]]):
    """Coefficients ``c`` with ``sum c_k v_k = target`` if they exist and are integral."""
    A = columns_to_matrix([tuple(v) for v in vs], len(target))
    x = solve_rational(A, target)
    if x is None or any(c.denominator != 1 for c in x):
        return None
    return [int(c) for c in x]


def spans_same_lattice(before, after) -> bool:
    a, b = _as_vectors(before), _as_vectors(after)
    if not a:
        return not b
    return same_lattice(columns_to_matrix(a, len(a[0])), columns_to_matrix(b, len(a[0])))
