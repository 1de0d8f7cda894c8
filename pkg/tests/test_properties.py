"""Corpus-wide invariants of the firing rules on M-matrices."""

import pytest

from cyclefire.firing import (
    RedistributionMatrix,
    coset_label,
    enumerate_z_superstables,
    set_superstables,
)
from cyclefire.graph import (
    dual_reduced_laplacian,
    fundamental_cycle_basis,
    genus,
    reduced_laplacian,
    trace_faces,
)
from cyclefire.linalg import determinant, nontrivial_invariant_factors
from cyclefire.mbasis import dual_laplacian, mbasis_transform
from oracles import planar_with_rotation


@pytest.fixture(scope="module")
def matrices(atlas):
    out = []
    for g in atlas:
        if 0 < genus(g) <= 6:
            out.append(reduced_laplacian(g))
            out.append(mbasis_transform(fundamental_cycle_basis(g)).dual_laplacian)
    return out


def test_bijection_with_coset_labels(matrices):
    for L in matrices:
        R = RedistributionMatrix(L)
        configs = enumerate_z_superstables(R)
        assert len(configs) == abs(R.determinant)
        labels = {coset_label(c, R) for c in configs}
        assert len(labels) == len(configs)
        # every label is hit: the label group has det(L) elements
        factors = nontrivial_invariant_factors(L)
        total = 1
        for d in factors:
            total *= d
        assert total == len(labels)


def test_box_bound(matrices):
    for L in matrices:
        R = RedistributionMatrix(L)
        for c in enumerate_z_superstables(R):
            assert all(x < d for x, d in zip(c, R.diagonal))


def test_downward_closure(matrices):
    failures = []
    for L in matrices:
        configs = set(enumerate_z_superstables(L))
        for c in configs:
            for i, x in enumerate(c):
                if x and c[:i] + (x - 1,) + c[i + 1:] not in configs:
                    failures.append((c, i))
    assert failures == []


def test_classical_and_dual_agree_on_planar_graphs(atlas):
    for g in atlas:
        h = planar_with_rotation(g)
        if h is None or genus(g) == 0:
            continue
        faces = enumerate_z_superstables(dual_laplacian(trace_faces(h)))
        dual = dual_reduced_laplacian(h)
        assert faces == set_superstables(dual)
        assert len(faces) == determinant(dual)
