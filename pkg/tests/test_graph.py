import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import DATA, google
from reduced_google import oracle
from reduced_google.errors import GraphParseError, LabelResolutionError
from reduced_google.graph import (
    DirectedGraph,
    GoogleOperator,
    SubsetSelection,
    apply_google,
    apply_transition,
    parse_edge_list,
    parse_labels,
    parse_subset,
    reverse_graph,
)
from reduced_google.io import write_edge_list, write_labels


def edge_set(g):
    return set(zip(*map(list, g.edges())))


def test_parse_two_cycle():
    g = parse_edge_list("0 1\n1 0")
    assert g.node_count == 2
    assert edge_set(g) == {(0, 1), (1, 0)}
    assert len(g.dangling) == 0


def test_parse_collapses_duplicates_and_self_loops():
    g = parse_edge_list("0 1\n0 1\n0 0")
    assert g.node_count == 2
    assert edge_set(g) == {(0, 1)}
    assert g.dangling.tolist() == [1]


def test_parse_comments_and_blank_lines():
    g = parse_edge_list("# header\n\n0 2  # trailing\n2 1\n")
    assert g.node_count == 3
    assert edge_set(g) == {(0, 2), (2, 1)}


def test_isolated_ids_become_dangling():
    g = parse_edge_list("0 4")
    assert g.node_count == 5
    assert g.dangling.tolist() == [1, 2, 3, 4]


@pytest.mark.parametrize(
    "text, line",
    [("0 1\n1\n", 2), ("0 1 2\n", 1), ("a b\n", 1), ("0 -1\n", 1)],
)
def test_parse_errors_carry_line_number(text, line):
    with pytest.raises(GraphParseError) as info:
        parse_edge_list(text)
    assert info.value.line == line


def test_empty_input_is_an_error():
    with pytest.raises(GraphParseError):
        parse_edge_list("# nothing here\n\n")


LABELS5 = "0\tA\n1\tB\n2\tC\n3\tD\n4\tE\n"
EDGES5 = "A B\nB C\nC A\nD A\nA E\n"


def test_label_fixture_resolves_and_round_trips(tmp_path):
    g = parse_edge_list(EDGES5, LABELS5)
    assert g.node_count == 5
    assert g.labels == ("A", "B", "C", "D", "E")
    assert edge_set(g) == {(0, 1), (1, 2), (2, 0), (3, 0), (0, 4)}
    write_edge_list(tmp_path / "e.txt", g)
    write_labels(tmp_path / "l.tsv", g)
    again = parse_edge_list((tmp_path / "e.txt").read_text(), (tmp_path / "l.tsv").read_text())
    assert again == g


def test_unknown_label():
    with pytest.raises(LabelResolutionError) as info:
        parse_edge_list("A B\nA Z\n", LABELS5)
    assert info.value.line == 2


def test_label_table_must_be_dense():
    with pytest.raises(GraphParseError):
        parse_labels("0\tA\n2\tB\n")


def test_subset_keeps_order_and_accepts_ids():
    g = parse_edge_list(EDGES5, LABELS5)
    s = parse_subset("C\n0\nE\n", g)
    assert s.members == (2, 0, 4)
    assert s.labels == ("C", "A", "E")


@pytest.mark.parametrize("text", ["A\nA\n", "Q\n", "7\n", ""])
def test_invalid_subsets(text):
    g = parse_edge_list(EDGES5, LABELS5)
    with pytest.raises(GraphParseError):
        parse_subset(text, g)


def test_reverse_single_edge():
    g = reverse_graph(parse_edge_list("0 1"))
    assert edge_set(g) == {(1, 0)}
    assert g.dangling.tolist() == [0]


def test_reverse_two_cycle_is_same():
    g = parse_edge_list("0 1\n1 0")
    assert reverse_graph(g) == g


def test_reverse_is_involution_and_swaps_degrees():
    g = oracle.random_graph(50, 3.0, seed=5)
    r = reverse_graph(g)
    assert reverse_graph(r) == g
    np.testing.assert_array_equal(r.out_degree, g.in_degree)
    assert edge_set(r) == {(b, a) for a, b in edge_set(g)}


def test_transition_permutation():
    g = parse_edge_list("0 1\n1 0")
    np.testing.assert_array_equal(apply_transition(g, [1.0, 0.0]), [0.0, 1.0])


def test_transition_dangling_spreads_uniformly():
    g = parse_edge_list("0 1")
    np.testing.assert_array_equal(apply_transition(g, [0.0, 1.0]), [0.5, 0.5])


def test_transition_dimension_mismatch():
    with pytest.raises(ValueError):
        apply_transition(parse_edge_list("0 1"), [1.0, 0.0, 0.0])


def test_transition_conserves_sum():
    g = oracle.random_graph(20, 2.5, seed=11)
    v = np.random.default_rng(0).random(20)
    assert abs(apply_transition(g, v).sum() - v.sum()) <= 1e-14


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 50), st.integers(0, 10_000))
def test_transition_matches_dense(n, seed):
    g = oracle.random_graph(n, 3.0, seed=seed)
    v = np.random.default_rng(seed).standard_normal(n)
    S = oracle.dense_transition(g)
    np.testing.assert_allclose(apply_transition(g, v), S @ v, rtol=0, atol=1e-14)


def test_google_two_cycle():
    op = GoogleOperator(parse_edge_list("0 1\n1 0"), 0.85)
    np.testing.assert_allclose(apply_google(op, [1.0, 0.0]), [0.075, 0.925], atol=1e-15)


def test_google_star_matches_dense():
    g = parse_edge_list("0 1\n0 2\n1 0\n2 0")
    op = GoogleOperator(g, 0.85)
    v = np.array([0.2, 0.5, 0.3])
    np.testing.assert_allclose(apply_google(op, v), oracle.dense_google(g) @ v, rtol=0, atol=1e-15)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 60), st.integers(0, 10_000), st.floats(0.05, 0.95))
def test_google_keeps_probability_vectors(n, seed, alpha):
    g = oracle.random_graph(n, 2.0, seed=seed)
    v = np.random.default_rng(seed).random(n)
    v /= v.sum()
    y = apply_google(GoogleOperator(g, alpha), v)
    assert np.all(y >= 0)
    assert abs(y.sum() - 1) <= 1e-12


def test_google_rejects_bad_vectors():
    op = GoogleOperator(parse_edge_list("0 1\n1 0"))
    for bad in ([0.5, 0.6], [1.5, -0.5], [np.nan, 1.0], [1.0]):
        with pytest.raises(ValueError):
            apply_google(op, bad)


def test_google_transpose_is_adjoint():
    g = oracle.random_graph(30, 3.0, seed=2)
    op = google(g)
    rng = np.random.default_rng(1)
    x, u = rng.random(30), rng.random(30)
    assert abs(u @ op.matmat(x) - op.rmatmat(u) @ x) < 1e-14


@pytest.mark.parametrize("alpha", [0.0, 1.0, -0.1])
def test_alpha_range(alpha):
    with pytest.raises(ValueError):
        GoogleOperator(parse_edge_list("0 1"), alpha)


def test_subset_selection_invariants():
    with pytest.raises(ValueError):
        SubsetSelection((0, 2), node_count=2)
    assert len(SubsetSelection((0, 1), node_count=2)) == 2
    with pytest.raises(ValueError):
        SubsetSelection(())
    s = SubsetSelection((3, 1))
    assert s.labels == ("3", "1")


def test_graph_is_immutable():
    g = parse_edge_list("0 1")
    with pytest.raises(ValueError):
        g.indices[0] = 0
    assert isinstance(g, DirectedGraph)


def test_bundled_fixture_parses():
    g = parse_edge_list((DATA / "fixture40_edges.txt").read_text(), (DATA / "fixture40_labels.tsv").read_text())
    assert g.node_count == 40
    assert np.all(g.out_degree[g.dangling] == 0)
