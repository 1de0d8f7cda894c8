"""Chip-firing dynamics for graph Laplacians and general M-matrices.

Convention: firing site ``i`` subtracts column ``i`` of the matrix, so a
multiset firing ``z`` sends ``c`` to ``c - L z`` and two configurations
are equivalent when their difference lies in the column lattice of ``L``.
For the symmetric matrices used throughout (reduced and dual
Laplacians) rows and columns coincide. A redistribution matrix given in
the row convention can be passed through :meth:`RedistributionMatrix.from_rows`.
"""

from __future__ import annotations

import heapq
import random
from collections import Counter
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .graph import Graph, reduced_laplacian
from .linalg import (
    as_int_matrix,
    cokernel_snf,
    determinant,
    nontrivial_invariant_factors,
    rational_inverse,
    to_nested,
)
from .mbasis import is_m_matrix

ChipConfig = tuple[int, ...]


class NotAvalancheFiniteError(RuntimeError):
    """Stabilization did not finish within the firing cap."""


class NotMMatrixError(ValueError):
    pass


class RedistributionMatrix:
    """Square integer matrix with positive diagonal and non-positive off-diagonal."""

    def __init__(self, L):
        L = as_int_matrix(L) if not isinstance(L, np.ndarray) else L
        n, m = L.shape
        if n != m:
            raise ValueError(f"redistribution matrix must be square, got {n}x{m}")
        for i in range(n):
            if L[i, i] <= 0:
                raise ValueError(f"diagonal entry {i} is {L[i, i]}, must be positive")
            for j in range(n):
                if i != j and L[i, j] > 0:
                    raise ValueError(f"off-diagonal entry ({i}, {j}) is {L[i, j]}, must be <= 0")
        self.matrix = L
        self.size = n
        self.columns = [tuple(int(L[i, j]) for i in range(n)) for j in range(n)]
        self.diagonal = tuple(int(L[i, i]) for i in range(n))

    @classmethod
    def from_rows(cls, delta) -> "RedistributionMatrix":
        """Build from a matrix whose row ``i`` is subtracted when site ``i`` fires."""
        delta = as_int_matrix(delta) if not isinstance(delta, np.ndarray) else delta
        return cls(delta.T.copy())

    def __repr__(self):
        return f"RedistributionMatrix({to_nested(self.matrix)})"

    @cached_property
    def m_matrix_report(self):
        return is_m_matrix(self.matrix)

    @property
    def avalanche_finite(self) -> bool:
        return bool(self.m_matrix_report)

    @cached_property
    def determinant(self) -> int:
        return determinant(self.matrix)

    @cached_property
    def adjugate(self) -> list[list[int]]:
        """``det(L) * L^-1`` as integers."""
        inv = rational_inverse(self.matrix)
        d = self.determinant
        return [[int(x * d) for x in row] for row in inv]

    @cached_property
    def snf(self):
        return cokernel_snf(self.matrix)

    @cached_property
    def coset_superstables(self) -> dict[tuple[int, ...], ChipConfig]:
        """The z-superstable of each class, keyed by :func:`coset_label`."""
        _require_m_matrix(self)
        return _coset_superstables(self)

    def apply(self, z: Sequence[int]) -> ChipConfig:
        """``L z``."""
        out = [0] * self.size
        for j, zj in enumerate(z):
            if zj:
                col = self.columns[j]
                for i in range(self.size):
                    out[i] += col[i] * zj
        return tuple(out)


def _as_redistribution(L) -> RedistributionMatrix:
    return L if isinstance(L, RedistributionMatrix) else RedistributionMatrix(L)


def _as_config(c, n: int) -> ChipConfig:
    c = tuple(int(x) for x in c)
    if len(c) != n:
        raise ValueError(f"configuration has {len(c)} entries, expected {n}")
    return c


def _require_m_matrix(R: RedistributionMatrix):
    if not R.avalanche_finite:
        raise NotMMatrixError(f"matrix is not an M-matrix ({R.m_matrix_report.reason})")


# -- classical firing --------------------------------------------------------

def fire_vertex(c: Sequence[int], g: Graph, v: int) -> ChipConfig:
    """Fire non-root vertex ``v``; ``c`` is indexed by the non-root vertices.

    No legality check is made.
    """
    sites = g.non_root
    if v not in sites:
        raise IndexError(f"{v} is not a non-root vertex of the graph")
    c = _as_config(c, len(sites))
    k = sites.index(v)
    L = reduced_laplacian(g)
    return tuple(x - int(L[i, k]) for i, x in enumerate(c))


def fire_multiset(c: Sequence[int], L, z: Sequence[int]) -> ChipConfig:
    R = _as_redistribution(L)
    c = _as_config(c, R.size)
    z = _as_config(z, R.size)
    Lz = R.apply(z)
    return tuple(a - b for a, b in zip(c, Lz))


def stabilize(
    c: Sequence[int],
    L,
    *,
    max_fires: int = 10**6,
    rng: random.Random | None = None,
) -> tuple[ChipConfig, tuple[int, ...]]:
    """Fire legal sites (``c_i >= L_ii``) until none is left.

    By default the lowest-index legal site fires next; with ``rng`` a
    uniformly random legal site is chosen instead. Returns the stable
    configuration and the number of times each site fired.
    """
    R = _as_redistribution(L)
    c = list(_as_config(c, R.size))
    if any(x < 0 for x in c):
        raise ValueError("stabilization needs an effective configuration")
    n = R.size
    diag = R.diagonal
    cols = R.columns
    counts = [0] * n
    fires = 0
    while True:
        if rng is None:
            i = next((k for k in range(n) if c[k] >= diag[k]), None)
        else:
            legal = [k for k in range(n) if c[k] >= diag[k]]
            i = rng.choice(legal) if legal else None
        if i is None:
            return tuple(c), tuple(counts)
        if fires >= max_fires:
            raise NotAvalancheFiniteError(
                f"not avalanche finite: still unstable after {max_fires} fires"
            )
        col = cols[i]
        for k in range(n):
            c[k] -= col[k]
        counts[i] += 1
        fires += 1


def is_stable(c: Sequence[int], L) -> bool:
    R = _as_redistribution(L)
    return all(x < d for x, d in zip(_as_config(c, R.size), R.diagonal))


# -- superstability ------------------------------------------------------------

def is_set_superstable(c: Sequence[int], L) -> bool:
    """No nonzero 0/1 vector ``z`` keeps ``c - L z`` effective."""
    R = _as_redistribution(L)
    c = _as_config(c, R.size)
    for z in product((0, 1), repeat=R.size):
        if any(z) and all(x >= 0 for x in fire_multiset(c, R, z)):
            return False
    return True


def _firing_box_witness(c: ChipConfig, R: RedistributionMatrix):
    # exhaustive over 0 <= z <= floor(L^-1 c), pruned with the best case
    # that the unassigned coordinates could still contribute
    n = R.size
    d = R.determinant
    adj = R.adjugate
    upper = [sum(adj[i][j] * c[j] for j in range(n)) // d for i in range(n)]
    L = [[int(R.matrix[i, j]) for j in range(n)] for i in range(n)]
    # slack[k][p]: most negative contribution rows can get from coordinates >= p
    slack = [[0] * (n + 1) for _ in range(n)]
    for k in range(n):
        for p in range(n - 1, -1, -1):
            extra = L[k][p] * upper[p] if p != k else 0
            slack[k][p] = slack[k][p + 1] + extra
    z = [0] * n

    def rec(p, partial):
        if p == n:
            return any(z) and all(partial[k] <= c[k] for k in range(n))
        for v in range(upper[p] + 1):
            z[p] = v
            nxt = [partial[k] + L[k][p] * v for k in range(n)]
            if all(nxt[k] + slack[k][p + 1] <= c[k] for k in range(n)):
                if rec(p + 1, nxt):
                    return True
            elif nxt[p] + slack[p][p + 1] > c[p]:
                break
        z[p] = 0
        return False

    return tuple(z) if rec(0, [0] * n) else None


def _config_box_witness(c: ChipConfig, R: RedistributionMatrix):
    # Search over the configurations y = c - L z instead of over z. With
    # A = det(L) L^-1 >= 0, z >= 0 is A y <= A c; as y >= 0 every term of
    # A y is nonnegative, which bounds y_p by (A c - partial)_k / A_kp for
    # every row k. z is integral iff A (c - y) is divisible by det(L).
    n = R.size
    d = R.determinant
    A = R.adjugate
    target = [sum(A[i][j] * c[j] for j in range(n)) for i in range(n)]
    y = [0] * n

    def rec(p, partial):
        if p == n:
            if tuple(y) == c:
                return None
            diff = [target[k] - partial[k] for k in range(n)]
            if all(x % d == 0 for x in diff):
                return tuple(x // d for x in diff)
            return None
        top = min((target[k] - partial[k]) // A[k][p] for k in range(n) if A[k][p] > 0)
        for v in range(top + 1):
            nxt = [partial[k] + A[k][p] * v for k in range(n)]
            y[p] = v
            found = rec(p + 1, nxt)
            if found is not None:
                return found
        y[p] = 0
        return None

    return rec(0, [0] * n)


def _coset_superstables(R: RedistributionMatrix) -> dict[tuple[int, ...], ChipConfig]:
    # Each class of Z^n / L Z^n holds exactly one z-superstable, and it is
    # the unique minimiser of w.y over effective y in the class, for
    # w = adj(L) 1 > 0 (L^-1 y is componentwise smallest there). Minimising
    # a positive weight over effective members of a class is a shortest path
    # in the Cayley graph of the group with generators e_i, so Dijkstra from
    # the zero class visits every superstable exactly once.
    n = R.size
    weights = [sum(row) for row in R.adjugate]
    moduli = [d for d in R.snf.diagonal if d != 1]
    gens = [coset_label(tuple(int(i == k) for i in range(n)), R) for k in range(n)]
    start = tuple(0 for _ in moduli)
    best = {start: (0, (0,) * n)}
    done: dict[tuple[int, ...], ChipConfig] = {}
    heap = [(0, (0,) * n, start)]
    while heap:
        dist, y, label = heapq.heappop(heap)
        if label in done:
            continue
        done[label] = y
        for k in range(n):
            nxt = tuple((a + b) % m for a, b, m in zip(label, gens[k], moduli))
            if nxt in done:
                continue
            cand = dist + weights[k]
            if nxt not in best or cand < best[nxt][0]:
                ny = y[:k] + (y[k] + 1,) + y[k + 1:]
                best[nxt] = (cand, ny)
                heapq.heappush(heap, (cand, ny, nxt))
    return done


def _coset_witness(c: ChipConfig, R: RedistributionMatrix):
    s = R.coset_superstables[coset_label(c, R)]
    if s == c:
        return None
    d = R.determinant
    diff = [a - b for a, b in zip(c, s)]
    z = tuple(sum(a * x for a, x in zip(row, diff)) // d for row in R.adjugate)
    assert all(x >= 0 for x in z) and fire_multiset(c, R, z) == s
    return z


def z_superstable_witness(c: Sequence[int], L, *, method: str = "coset"):
    """A nonzero ``z >= 0`` with ``c - L z >= 0``, or None if ``c`` is z-superstable.

    ``"firing"`` scans ``0 <= z <= floor(L^-1 c)`` and ``"config"`` scans
    the resulting configurations ``c - L z``; both are exhaustive but blow
    up when ``L^-1`` has large entries. ``"coset"`` compares ``c`` with the
    superstable of its class (see :func:`enumerate_z_superstables`) and
    returns ``z = L^-1 (c - s)``, which is checked before it is returned.
    """
    R = _as_redistribution(L)
    _require_m_matrix(R)
    c = _as_config(c, R.size)
    if any(x < 0 for x in c):
        raise ValueError("z-superstability is defined for effective configurations")
    if method == "coset":
        return _coset_witness(c, R)
    if method == "config":
        return _config_box_witness(c, R)
    if method == "firing":
        return _firing_box_witness(c, R)
    raise ValueError(f"unknown method {method!r}")


def is_z_superstable(c: Sequence[int], L, *, method: str = "coset") -> bool:
    return z_superstable_witness(c, L, method=method) is None


def _order_ideal(n: int, member) -> list[ChipConfig]:
    # grow a downward-closed family from 0 one chip at a time
    zero = (0,) * n
    if not member(zero):
        return []
    found = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for s in frontier:
            for i in range(n):
                t = s[:i] + (s[i] + 1,) + s[i + 1:]
                if t in found:
                    continue
                if all(t[:k] + (t[k] - 1,) + t[k + 1:] in found for k in range(n) if t[k]):
                    if member(t):
                        found.add(t)
                        nxt.append(t)
        frontier = nxt
    return sorted(found)


def enumerate_z_superstables(L, *, method: str = "coset") -> list[ChipConfig]:
    """All z-superstable configurations, sorted.

    ``"coset"`` finds the superstable of every class by a shortest-path
    search over the group, ``det(L)`` classes in all. ``"ideal"`` grows the
    set from 0 with the exhaustive test (it is closed under lowering an
    entry, so every member is reached through members). ``"box"`` tests
    every configuration with ``c_i < L_ii``.
    """
    R = _as_redistribution(L)
    _require_m_matrix(R)
    if method == "coset":
        return sorted(R.coset_superstables.values())
    if method == "ideal":
        return _order_ideal(R.size, lambda c: _config_box_witness(c, R) is None)
    if method == "box":
        box = product(*(range(d) for d in R.diagonal))
        return sorted(c for c in box if _config_box_witness(tuple(c), R) is None)
    raise ValueError(f"unknown method {method!r}")


def set_superstables(L) -> list[ChipConfig]:
    R = _as_redistribution(L)
    return _order_ideal(R.size, lambda c: is_set_superstable(c, R))


def classical_superstables(g: Graph) -> list[ChipConfig]:
    """Superstable configurations on the non-root vertices of ``g``."""
    if g.vertex_count == 1:
        return [()]
    return set_superstables(reduced_laplacian(g))


def canonical_configuration(g: Graph) -> ChipConfig:
    return tuple(g.degree(v) - 1 for v in g.non_root)


def classical_criticals(g: Graph) -> list[ChipConfig]:
    """Critical configurations, as ``k - c`` over the superstables ``c``."""
    k = canonical_configuration(g)
    return sorted(tuple(a - b for a, b in zip(k, c)) for c in classical_superstables(g))


def is_recurrent(c: Sequence[int], g: Graph) -> bool:
    """Stable, and returns to itself after the root fires and the result stabilizes."""
    L = reduced_laplacian(g)
    if g.vertex_count == 1:
        return True
    c = _as_config(c, g.vertex_count - 1)
    if any(x < 0 for x in c) or not is_stable(c, L):
        return False
    from_root = [sum(1 for e in g.edges if set(e) == {v, g.root}) for v in g.non_root]
    stable, _ = stabilize([a + b for a, b in zip(c, from_root)], L)
    return stable == c


# -- cosets and groups -----------------------------------------------------------

def coset_label(c: Sequence[int], L) -> tuple[int, ...]:
    """Canonical name of the class of ``c`` modulo the column lattice of ``L``.

    With ``U L V = D`` in Smith form, ``c`` is in the lattice iff ``(U c)_i``
    is divisible by ``d_i`` for every ``i``; the label keeps the residues for
    the nontrivial ``d_i`` (and the raw value where ``d_i = 0``).
    """
    M = L.matrix if isinstance(L, RedistributionMatrix) else as_int_matrix(L)
    dec = L.snf if isinstance(L, RedistributionMatrix) else cokernel_snf(M)
    c = _as_config(c, M.shape[0])
    Uc = [sum(int(dec.U[i, j]) * c[j] for j in range(len(c))) for i in range(len(c))]
    diag = list(dec.diagonal) + [0] * (len(c) - len(dec.diagonal))
    return tuple(x % d if d else x for x, d in zip(Uc, diag) if d != 1)


def critical_group(g: Graph) -> tuple[int, ...]:
    """Nontrivial invariant factors of the reduced Laplacian."""
    if g.vertex_count == 1:
        return ()
    return nontrivial_invariant_factors(reduced_laplacian(g))


# -- reporting helpers -----------------------------------------------------------

def degree_histogram(configs: Iterable[Sequence[int]]) -> list[int]:
    """Entry ``d`` counts the configurations holding ``d`` chips in total."""
    counts = Counter(sum(c) for c in configs)
    if not counts:
        return []
    return [counts.get(d, 0) for d in range(max(counts) + 1)]


def maximal_elements(configs: Iterable[Sequence[int]]) -> list[ChipConfig]:
    configs = sorted({tuple(c) for c in configs})
    return [
        c for c in configs
        if not any(o != c and all(a <= b for a, b in zip(c, o)) for o in configs)
    ]


def energy(c: Sequence[int], L) -> int:
    """``c^T L c``."""
    M = L.matrix if isinstance(L, RedistributionMatrix) else as_int_matrix(L)
    n = M.shape[0]
    return sum(int(c[i]) * int(M[i, j]) * int(c[j]) for i in range(n) for j in range(n))


def inverse_energy(c: Sequence[int], L) -> Fraction:
    """``c^T L^-1 c``."""
    M = L.matrix if isinstance(L, RedistributionMatrix) else as_int_matrix(L)
    inv = rational_inverse(M)
    n = M.shape[0]
    return sum((Fraction(int(c[i])) * inv[i, j] * int(c[j]) for i in range(n) for j in range(n)),
               Fraction(0))
