import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from opinion_game.errors import GraphFormatError, ValidationError
from opinion_game.graph import (
    EDGE_SHRINK,
    Network,
    build_network,
    game_assumption_violations,
    load_edge_list,
    load_weighted_network,
    raw_graph_from_edges,
    validate,
)


def write(tmp_path, text, name="g.txt"):
    path = tmp_path / name
    path.write_text(text)
    return path


def test_edge_list_undirected_path(tmp_path):
    raw = load_edge_list(write(tmp_path, "0 1\n1 2\n"))
    assert raw.n == 3
    assert {tuple(a) for a in raw.arcs} == {(0, 1), (1, 0), (1, 2), (2, 1)}


def test_edge_list_directed_keeps_orientation(tmp_path):
    raw = load_edge_list(write(tmp_path, "0\t1\n1\t2\n"), directed=True)
    assert {tuple(a) for a in raw.arcs} == {(0, 1), (1, 2)}


def test_edge_list_comments_and_renumbering(tmp_path):
    raw = load_edge_list(write(tmp_path, "# header\n% other\n\n10 -5\n-5 7\n10 10\n10 -5\n"))
    assert raw.node_ids == (-5, 7, 10)
    # self-loop and duplicate dropped
    assert {tuple(a) for a in raw.arcs} == {(2, 0), (0, 2), (0, 1), (1, 0)}


@pytest.mark.parametrize("text, line", [("a b\n", 1), ("0 1\n2\n", 2), ("# c\n0 1\n1 x\n", 3)])
def test_edge_list_parse_error_names_line(tmp_path, text, line):
    with pytest.raises(GraphFormatError, match=f":{line}:"):
        load_edge_list(write(tmp_path, text))


def test_edge_list_empty_graph(tmp_path):
    with pytest.raises(GraphFormatError, match="no edges"):
        load_edge_list(write(tmp_path, "# nothing\n"))


def test_karate_counts(karate_raw):
    assert karate_raw.n == 34
    assert karate_raw.num_arcs == 156


def test_build_two_node_weights():
    raw = raw_graph_from_edges([(0, 1)])
    net = build_network(raw, 0.5, 0.3)
    expected = 0.2 * (1 - EDGE_SHRINK)
    assert net.W[0, 1] == pytest.approx(expected, rel=1e-15)
    assert net.W[1, 0] == pytest.approx(expected, rel=1e-15)


def test_build_star_center_row():
    raw = raw_graph_from_edges([(0, 1), (0, 2), (0, 3)])
    net = build_network(raw, 0.4, 0.2)
    np.testing.assert_allclose(net.W[0].toarray().ravel(), [0, *[0.4 * (1 - EDGE_SHRINK) / 3] * 3], rtol=1e-15)


@pytest.mark.parametrize(
    "w0, theta, z0",
    [(1.0, 0.2, 0.0), (-0.1, 0.2, 0.0), (0.5, -0.1, 0.0), (0.5, 0.2, 1.5)],
)
def test_build_rejects_out_of_range(w0, theta, z0):
    with pytest.raises(ValidationError):
        build_network(raw_graph_from_edges([(0, 1)]), w0, theta, z0)


def test_build_isolated_node_has_empty_row(tmp_path):
    # node 2 only appears as a directed target, so its row is empty
    raw = load_edge_list(write(tmp_path, "0 1\n1 2\n"), directed=True)
    net = build_network(raw, 0.3, 0.2)
    assert net.W[2].nnz == 0
    assert validate(net) == []


def _net_with_row_sum(total, z0=0.0):
    W = sp.csr_matrix(np.array([[0.0, total], [0.5, 0.0]]))
    return Network(W, np.zeros(2), np.zeros(2), np.array([0.0, z0]))


def test_validate_boundaries():
    assert validate(_net_with_row_sum(0.999999)) == []
    problems = validate(_net_with_row_sum(1.0))
    assert any(p.startswith("substochasticity row 0") for p in problems)


def test_validate_bias_range():
    problems = validate(_net_with_row_sum(0.5, z0=1.5))
    assert problems == [problems[0]] and problems[0].startswith("bias range node 1")


def test_validate_self_loop_and_convexity():
    W = sp.csr_matrix(np.array([[0.1, 0.5], [0.5, 0.0]]))
    net = Network(W, np.array([0.3, 0.0]), np.array([0.3, 0.0]), np.zeros(2))
    problems = validate(net)
    assert any(p.startswith("self-loop node 0") for p in problems)
    assert any(p.startswith("convex combination row 0") for p in problems)


def test_negative_weights_pass_validate_but_not_game_assumptions():
    W = sp.csr_matrix(np.array([[0.0, -0.4], [0.5, 0.0]]))
    net = Network(W, np.full(2, 0.2), np.full(2, 0.2), np.zeros(2))
    assert validate(net) == []
    assert game_assumption_violations(net) == ["negative edge weight in row 0"]


def test_weighted_file_roundtrip(tmp_path):
    text = "# n\n3\n0 1 0.25\n1 2 0.5\n2 0 0.125\n0 0.1 0.2 0.5\n1 0.2 0.1 -0.5\n2 0.3 0.3 0\n"
    net = load_weighted_network(write(tmp_path, text))
    assert net.n == 3
    assert net.W[1, 2] == 0.5
    np.testing.assert_array_equal(net.w0, [0.1, 0.2, 0.3])
    np.testing.assert_array_equal(net.z0, [0.5, -0.5, 0.0])
    assert validate(net) == []


@pytest.mark.parametrize(
    "text, match",
    [
        ("", "empty"),
        ("2\n0 1 0.5\n0 0 0 0\n", "missing parameter"),
        ("2\n0 5 0.5\n0 0 0 0\n1 0 0 0\n", "out of range"),
        ("2\n0 1\n", "expected"),
        ("2\n0 1 x\n", ":2:"),
    ],
)
def test_weighted_file_errors(tmp_path, text, match):
    with pytest.raises(GraphFormatError, match=match):
        load_weighted_network(write(tmp_path, text))


edge_lists = st.lists(
    st.tuples(st.integers(-1000, 1000), st.integers(-1000, 1000)), min_size=1, max_size=40
).filter(lambda es: any(u != v for u, v in es))


@settings(max_examples=60, deadline=None)
@given(edges=edge_lists, w0=st.floats(0, 1), frac=st.floats(0, 1), z0=st.floats(-1, 1))
def test_build_network_always_validates(edges, w0, frac, z0):
    raw = raw_graph_from_edges(edges)
    net = build_network(raw, w0, frac * (1 - w0), z0)
    assert validate(net) == []


@settings(max_examples=60, deadline=None)
@given(edges=edge_lists, offset=st.integers(-10**6, 10**6))
def test_renumbering_preserves_counts_and_degrees(edges, offset):
    a = raw_graph_from_edges(edges, directed=True)
    b = raw_graph_from_edges([(u + offset, v + offset) for u, v in edges], directed=True)
    assert a.num_arcs == b.num_arcs
    np.testing.assert_array_equal(a.out_degree(), b.out_degree())
    np.testing.assert_array_equal(a.in_degree(), b.in_degree())
    # degree sequence matches the distinct non-loop input arcs
    distinct = {(u, v) for u, v in edges if u != v}
    assert a.num_arcs == len(distinct)
    assert sorted(a.out_degree()[a.out_degree() > 0]) == sorted(
        np.unique([u for u, _ in distinct], return_counts=True)[1]
    )
