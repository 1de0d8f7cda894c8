"""Exact integer and rational linear algebra.

Matrices are numpy arrays with ``dtype=object`` holding Python ints (or
``fractions.Fraction`` for inverses), so every operation is exact and
arbitrary precision. Nothing in this module touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

import numpy as np


class SingularMatrixError(ValueError):
    """Raised when an inverse is requested for a matrix with det = 0."""


def as_int_matrix(rows, shape: tuple[int, int] | None = None) -> np.ndarray:
    """Coerce nested sequences (or an integer ndarray) to an object array of ints."""
    if isinstance(rows, np.ndarray) and rows.ndim == 2:
        out = np.empty(rows.shape, dtype=object)
        for idx, x in np.ndenumerate(rows):
            out[idx] = int(x)
        return out
    rows = [list(r) for r in rows]
    if not rows:
        return np.empty(shape if shape is not None else (0, 0), dtype=object)
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError("ragged matrix")
    out = np.empty((len(rows), width), dtype=object)
    for i, r in enumerate(rows):
        for j, x in enumerate(r):
            out[i, j] = int(x)
    return out


def zeros(m: int, n: int) -> np.ndarray:
    out = np.empty((m, n), dtype=object)
    out.fill(0)
    return out


def identity(n: int) -> np.ndarray:
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = 1
    return out


def columns_to_matrix(vectors: Sequence[Sequence[int]], nrows: int) -> np.ndarray:
    """Stack integer vectors as the columns of an ``nrows x len(vectors)`` matrix."""
    out = zeros(nrows, len(vectors))
    for j, v in enumerate(vectors):
        if len(v) != nrows:
            raise ValueError(f"vector {j} has length {len(v)}, expected {nrows}")
        for i, x in enumerate(v):
            out[i, j] = int(x)
    return out


def matrix_columns(A: np.ndarray) -> list[tuple[int, ...]]:
    return [tuple(int(x) for x in A[:, j]) for j in range(A.shape[1])]


def to_nested(A: np.ndarray) -> list[list[int]]:
    return [[int(x) for x in row] for row in A]


def dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


def gram(B) -> np.ndarray:
    """Return ``B^T B`` for a matrix whose columns are the basis vectors."""
    B = as_int_matrix(B) if not isinstance(B, np.ndarray) else B
    cols = matrix_columns(B)
    k = len(cols)
    G = zeros(k, k)
    for i in range(k):
        for j in range(i, k):
            G[i, j] = G[j, i] = dot(cols[i], cols[j])
    return G


def determinant(A) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    M = to_nested(as_int_matrix(A) if not isinstance(A, np.ndarray) else A)
    n = len(M)
    if n == 0:
        return 1
    if any(len(r) != n for r in M):
        raise ValueError("determinant of a non-square matrix")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def rank(A) -> int:
    """Rank over the rationals, via integer row echelon form."""
    A = as_int_matrix(A) if not isinstance(A, np.ndarray) else A
    H, _ = hnf(A)
    return sum(1 for row in H if any(x != 0 for x in row))


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def hnf(A) -> tuple[np.ndarray, np.ndarray]:
    """Row Hermite normal form.

    Returns ``(H, U)`` with ``H = U @ A``, ``U`` unimodular, ``H`` in row
    echelon form with positive pivots, entries above each pivot reduced
    into ``[0, pivot)``, and zero rows at the bottom.
    """
    A = as_int_matrix(A) if not isinstance(A, np.ndarray) else A
    m, n = A.shape
    H = to_nested(A)
    U = to_nested(identity(m))

    def combine(i, k, a, b, c, d):
        # row_i, row_k <- a*row_i + b*row_k, c*row_i + d*row_k
        for M in (H, U):
            ri, rk = M[i], M[k]
            M[i] = [a * x + b * y for x, y in zip(ri, rk)]
            M[k] = [c * x + d * y for x, y in zip(ri, rk)]

    r = 0
    for col in range(n):
        if r == m:
            break
        for k in range(r + 1, m):
            if H[k][col] == 0:
                continue
            x, y = H[r][col], H[k][col]
            g, s, t = _xgcd(x, y)
            combine(r, k, s, t, -y // g, x // g)
        if H[r][col] == 0:
            continue
        if H[r][col] < 0:
            H[r] = [-x for x in H[r]]
            U[r] = [-x for x in U[r]]
        p = H[r][col]
        for i in range(r):
            q = H[i][col] // p
            if q:
                H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                U[i] = [a - q * b for a, b in zip(U[i], U[r])]
        r += 1
    return as_int_matrix(H, (m, n)), as_int_matrix(U, (m, m))


@dataclass(frozen=True)
class SnfDecomposition:
    """``D = U @ A @ V`` with ``U``, ``V`` unimodular and ``D`` diagonal."""

    D: np.ndarray
    U: np.ndarray
    V: np.ndarray

    @property
    def diagonal(self) -> tuple[int, ...]:
        k = min(self.D.shape)
        return tuple(int(self.D[i, i]) for i in range(k))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def snf(A) -> SnfDecomposition:
    """Smith normal form with transforms.

    Pivots on the smallest nonzero absolute value in the trailing block.
    Diagonal entries are nonnegative and satisfy ``d1 | d2 | ...``.
    """
    A = as_int_matrix(A) if not isinstance(A, np.ndarray) else A
    m, n = A.shape
    M = to_nested(A)
    U = to_nested(identity(m))
    V = to_nested(identity(n))

    def swap_rows(i, k):
        M[i], M[k] = M[k], M[i]
        U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for R in (M, V):
            for row in R:
                row[j], row[k] = row[k], row[j]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        M[dst] = [a + q * b for a, b in zip(M[dst], M[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for R in (M, V):
            for row in R:
                row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    x = M[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                break
            _, i, j = best
            swap_rows(t, i)
            swap_cols(t, j)
            p = M[t][t]
            dirty = False
            for i in range(t + 1, m):
                if M[i][t]:
                    add_row(i, t, -(M[i][t] // p))
                    dirty = dirty or M[i][t] != 0
            for j in range(t + 1, n):
                if M[t][j]:
                    add_col(j, t, -(M[t][j] // p))
                    dirty = dirty or M[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if M[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if M[t][t] < 0:
            M[t] = [-x for x in M[t]]
            U[t] = [-x for x in U[t]]
    return SnfDecomposition(
        D=as_int_matrix(M, (m, n)), U=as_int_matrix(U, (m, m)), V=as_int_matrix(V, (n, n))
    )


def cokernel_snf(A) -> SnfDecomposition:
    """Smith form of a generating set for the column lattice of ``A``.

    For square ``A`` with ``det A = D != 0`` the lattice contains ``D Z^n``,
    so it is also generated by ``A mod D`` together with ``D I``. Working
    with those columns keeps entries below ``|D|`` however large ``A`` is.
    ``U`` and the diagonal describe ``Z^n / A Z^n`` exactly as for
    :func:`snf`; ``V`` refers to the widened generator matrix. Other
    shapes fall back to :func:`snf`.
    """
    A = as_int_matrix(A) if not isinstance(A, np.ndarray) else A
    m, n = A.shape
    if m != n:
        return snf(A)
    D = abs(determinant(A))
    if D == 0:
        return snf(A)
    gens = [[int(x) % D for x in row] + [D * (i == j) for j in range(n)]
            for i, row in enumerate(A)]
    return snf(as_int_matrix(gens, (n, 2 * n)))


def invariant_factors(A) -> tuple[int, ...]:
    return cokernel_snf(A).diagonal


def nontrivial_invariant_factors(A) -> tuple[int, ...]:
    """Invariant factors with the 1s dropped (zeros kept: they are free summands)."""
    return tuple(d for d in invariant_factors(A) if d != 1)


def integer_kernel_basis(A) -> np.ndarray:
    """Columns form a basis of ``{x in Z^n : A x = 0}``.

    Taken from the columns of ``V`` in ``U A V = D`` that meet zero diagonal
    entries, so the result spans the saturated kernel lattice.
    """
    A = as_int_matrix(A) if not isinstance(A, np.ndarray) else A
    dec = snf(A)
    r = dec.rank
    return dec.V[:, r:].copy()


def _nonzero_rows(H: np.ndarray) -> list[tuple[int, ...]]:
    return [tuple(int(x) for x in row) for row in H if any(x != 0 for x in row)]


def same_lattice(B1, B2) -> bool:
    """True iff the columns of ``B1`` and ``B2`` generate the same lattice."""
    B1 = as_int_matrix(B1) if not isinstance(B1, np.ndarray) else B1
    B2 = as_int_matrix(B2) if not isinstance(B2, np.ndarray) else B2
    if B1.shape[0] != B2.shape[0]:
        raise ValueError("lattices live in spaces of different dimension")
    H1, _ = hnf(B1.T.copy())
    H2, _ = hnf(B2.T.copy())
    return _nonzero_rows(H1) == _nonzero_rows(H2)


def rational_inverse(A) -> np.ndarray:
    """Exact inverse as an object array of ``Fraction``.

    Raises :class:`SingularMatrixError` when ``det A = 0``.
    """
    A = as_int_matrix(A) if not isinstance(A, np.ndarray) else A
    n, m = A.shape
    if n != m:
        raise ValueError("inverse of a non-square matrix")
    M = [[Fraction(int(x)) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(A)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            raise SingularMatrixError("det = 0: matrix is singular")
        M[c], M[piv] = M[piv], M[c]
        p = M[c][c]
        M[c] = [x / p for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            out[i, j] = M[i][n + j]
    return out


def solve_rational(A, b: Sequence[int]) -> list[Fraction] | None:
    """Some rational solution of ``A x = b``, or None if inconsistent."""
    A = as_int_matrix(A) if not isinstance(A, np.ndarray) else A
    m, n = A.shape
    M = [[Fraction(int(x)) for x in A[i]] + [Fraction(int(b[i]))] for i in range(m)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        p = M[r][c]
        M[r] = [x / p for x in M[r]]
        for i in range(m):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * bb for a, bb in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    if any(M[i][n] != 0 for i in range(r, m)):
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = M[i][n]
    return x


def vector_gcd(v: Iterable[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g
