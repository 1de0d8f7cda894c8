import json

import pytest

from cyclefire.graph import (
    DisconnectedGraphError,
    DuplicateEdgeError,
    Graph,
    GraphFormatError,
    NonPlanarRotationError,
    NotSpanningTreeError,
    SelfLoopError,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    diamond,
    dual_reduced_laplacian,
    face_walks,
    fundamental_cycle_basis,
    genus,
    graph_to_document,
    incidence_matrix,
    is_circuit_vector,
    is_flow,
    load_graph,
    path_graph,
    read_graph,
    reduced_incidence,
    reduced_laplacian,
    rotation_from_coordinates,
    spanning_tree_count,
    trace_faces,
    walk_vector,
    with_rotation,
)
from cyclefire.linalg import determinant, gram, rank, to_nested
from oracles import count_spanning_trees, planar_with_rotation


def test_load_diamond_document():
    g = load_graph(json.dumps({"vertices": 4, "edges": [[0, 1], [0, 2], [0, 3], [1, 2], [2, 3]]}))
    assert g.vertex_count == 4 and g.edge_count == 5
    assert g == diamond()


def test_load_keeps_input_order_unless_asked():
    doc = {"vertices": 3, "edges": [[1, 2], [0, 1], [2, 0]]}
    assert load_graph(doc).edges == ((1, 2), (0, 1), (0, 2))
    assert load_graph(doc, edge_order="lex").edges == ((0, 1), (0, 2), (1, 2))
    assert load_graph({**doc, "edge_order": "lex"}).edges == ((0, 1), (0, 2), (1, 2))


def test_single_edge_is_a_tree():
    g = load_graph({"vertices": 2, "edges": [[0, 1]]})
    assert genus(g) == 0
    assert to_nested(incidence_matrix(g)) == [[-1], [1]]
    assert to_nested(reduced_incidence(g)) == [[1]]


@pytest.mark.parametrize(
    "doc, error, text",
    [
        ({"vertices": 2, "edges": [[0, 1], [1, 0]]}, DuplicateEdgeError, "duplicate edge 0-1"),
        ({"vertices": 2, "edges": [[0, 0], [0, 1]]}, SelfLoopError, "vertex 0"),
        ({"vertices": 3, "edges": [[0, 1]]}, DisconnectedGraphError, "vertex 2"),
        ({"vertices": 2, "edges": [[0, 5]]}, GraphFormatError, "vertex 5"),
        ({"edges": []}, GraphFormatError, "vertices"),
    ],
)
def test_load_errors_name_the_culprit(doc, error, text):
    with pytest.raises(error, match=text):
        load_graph(doc)


def test_load_rejects_bad_json():
    with pytest.raises(GraphFormatError, match="not valid JSON"):
        load_graph("{nope")


def test_document_round_trip(tmp_path):
    g = diamond()
    path = tmp_path / "g.json"
    path.write_text(json.dumps(graph_to_document(g)))
    h = read_graph(path)
    assert h == g and h.rotation == g.rotation


def test_diamond_matrices():
    g = diamond()
    assert to_nested(reduced_incidence(g)) == [
        [1, 0, 0, -1, 0],
        [0, 1, 0, 1, -1],
        [0, 0, 1, 0, 1],
    ]
    assert to_nested(reduced_laplacian(g)) == [[2, -1, 0], [-1, 3, -1], [0, -1, 2]]
    assert genus(g) == 2
    assert spanning_tree_count(g) == 8


def test_incidence_columns_sum_to_zero(atlas):
    for g in atlas[:40]:
        B = incidence_matrix(g)
        assert all(sum(B[:, k]) == 0 for k in range(g.edge_count))


def test_reduced_incidence_has_full_rank(atlas):
    for g in atlas:
        if g.vertex_count > 1:
            assert rank(reduced_incidence(g)) == g.vertex_count - 1


def test_triangle_laplacian():
    assert to_nested(reduced_laplacian(cycle_graph(3))) == [[2, -1], [-1, 2]]


def test_named_counts():
    assert genus(complete_graph(5)) == 6
    assert spanning_tree_count(complete_graph(5)) == 125
    assert spanning_tree_count(complete_bipartite(3, 3)) == 81


def test_tree_count_matches_brute_force(atlas):
    for g in atlas:
        assert spanning_tree_count(g) == count_spanning_trees(g)


def test_fundamental_basis_with_star_tree():
    b = fundamental_cycle_basis(diamond(), [(0, 1), (0, 2), (0, 3)])
    assert b.vectors == ((1, -1, 0, 1, 0), (0, 1, -1, 0, 1))


def test_fundamental_basis_rejects_non_tree():
    with pytest.raises(NotSpanningTreeError):
        fundamental_cycle_basis(diamond(), [(0, 1), (1, 2), (0, 2)])


def test_fundamental_basis_on_tree_is_empty():
    assert fundamental_cycle_basis(path_graph(5)).vectors == ()


def test_fundamental_basis_spans_flow_lattice(atlas):
    for g in atlas:
        b = fundamental_cycle_basis(g)
        assert len(b) == genus(g)
        for v in b.vectors:
            assert is_flow(g, v) and is_circuit_vector(g, v)
        assert determinant(gram(b.matrix())) == spanning_tree_count(g)


def test_reversing_an_edge_keeps_the_gram_matrix(atlas):
    for g in atlas[::7]:
        b = fundamental_cycle_basis(g)
        for k in range(g.edge_count):
            flipped = [tuple(-x if i == k else x for i, x in enumerate(v)) for v in b.vectors]
            assert to_nested(gram_of(flipped, g)) == to_nested(gram(b.matrix()))


def gram_of(vectors, g):
    from cyclefire.linalg import columns_to_matrix

    return gram(columns_to_matrix(vectors, g.edge_count))


def test_walk_vector_and_circuit_check():
    g = diamond()
    v = walk_vector(g, [0, 1, 2])
    assert v == (1, -1, 0, 1, 0)
    assert is_circuit_vector(g, v)
    assert not is_circuit_vector(g, (1, -1, 0, 1, 0)[:4] + (1,))
    # sum of the two triangles is the outer 4-cycle, still a circuit
    w = tuple(a + b for a, b in zip(v, walk_vector(g, [0, 2, 3])))
    assert is_circuit_vector(g, w)


def test_diamond_faces():
    g = diamond()
    faces = trace_faces(g)
    assert len(faces) == 2
    assert to_nested(gram_of(faces, g)) == [[3, -1], [-1, 3]]
    assert to_nested(dual_reduced_laplacian(g)) == [[3, -1], [-1, 3]]


def test_triangle_has_one_bounded_face():
    g = cycle_graph(3)
    g = with_rotation(g, {0: (1, 2), 1: (2, 0), 2: (0, 1)})
    faces = trace_faces(g)
    assert len(faces) == 1 and is_circuit_vector(g, faces[0])


def test_k4_faces():
    g = complete_graph(4)
    g = with_rotation(g, rotation_from_coordinates(g, {0: (0, 0), 1: (3, 0), 2: (0, 3), 3: (1, 1)}))
    faces = trace_faces(g)
    assert len(faces) == 3 and all(sum(map(abs, f)) == 3 for f in faces)
    assert determinant(gram_of(faces, g)) == 16


def test_nonplanar_rotation_is_rejected():
    g = complete_graph(5)
    g = with_rotation(g, {v: tuple(g.neighbors(v)) for v in range(5)})
    with pytest.raises(NonPlanarRotationError, match="not planar"):
        face_walks(g)


def test_rotation_must_list_neighbours():
    with pytest.raises(GraphFormatError, match="rotation at vertex"):
        Graph(3, ((0, 1), (1, 2)), 0, {0: (1,), 1: (0,), 2: (1,)})


def test_face_bases_of_planar_corpus(atlas):
    seen = 0
    for g in atlas:
        h = planar_with_rotation(g)
        if h is None:
            continue
        seen += 1
        faces = trace_faces(h)
        assert len(faces) == genus(g)
        assert all(is_flow(h, f) for f in faces)
        G = gram_of(faces, h)
        assert to_nested(G) == to_nested(dual_reduced_laplacian(h))
        assert determinant(G) == spanning_tree_count(g)
    assert seen == 129
