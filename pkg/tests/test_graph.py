import numpy as np
import pytest
from pydantic import ValidationError

from models.graph_models import LabeledGraph, SourceGraph, VertexPairSet
from utils.errors import ArityError, GraphFormatError, UnknownVertexError
from utils.graph_algos import scc_condense
from utils.graph_io import (graph_digest, parse_graph, parse_matrix, parse_source_graph, serialize_graph,
                            serialize_matrix, serialize_pairs, serialize_source_graph)


def test_vertices_are_interned_in_first_seen_order():
    graph = LabeledGraph()
    assert graph.add_edge("x", "y", "a")
    assert not graph.add_edge("x", "y", "a")
    assert graph.add_edge("x", "y", "b")
    assert graph.vertices == ("x", "y")
    assert graph.vertex_id("y") == 1
    assert graph.m == 2
    assert graph.alphabet == frozenset({"a", "b"})


@pytest.mark.parametrize("label", ["", "a b", "it's"])
def test_invalid_labels(label):
    with pytest.raises(GraphFormatError):
        LabeledGraph().add_edge("x", "y", label)


def test_unknown_vertex():
    with pytest.raises(UnknownVertexError):
        LabeledGraph(["x"]).vertex_id("nope")


def test_add_path_checks_arity():
    graph = LabeledGraph()
    graph.add_path(["a", "b", "c"], ["(", ")"])
    assert graph.has_edge("b", "c", ")")
    with pytest.raises(ArityError):
        graph.add_path(["a", "b"], ["(", ")"])


def test_fresh_name_skips_taken_names():
    graph = LabeledGraph(["u", "u#1"])
    assert graph.fresh_name("v") == "v"
    assert graph.fresh_name("u") == "u#2"


def test_adjacency_index_follows_mutation():
    graph = LabeledGraph(edges=[("x", "y", "a")])
    assert graph.out_edges(0) == [(1, "a")]
    graph.add_edge("y", "x", "b")
    assert graph.in_edges(0) == [(1, "b")]


def test_derived_graphs():
    graph = LabeledGraph(edges=[("x", "y", "a"), ("y", "z", "b")])
    assert graph.reverse().has_edge("y", "x", "a")
    only_a = graph.filter_by_label(["a"])
    assert only_a.vertices == graph.vertices and only_a.m == 1
    merged = graph.union(LabeledGraph(edges=[("z", "w", "c")]))
    assert merged.vertices == ("x", "y", "z", "w")
    both = graph.disjoint_union(graph)
    assert both.n == 6 and both.has_edge("R:y", "R:z", "b")
    with pytest.raises(ValueError):
        graph.disjoint_union(graph, prefixes=("P", "P"))


def test_graph_text_round_trip_keeps_isolated_vertices():
    text = "# demo\nnode lonely\nx y (\ny z )\n"
    graph = parse_graph(text)
    assert graph.vertices == ("lonely", "x", "y", "z")
    again = parse_graph(serialize_graph(graph))
    assert again == graph
    assert graph_digest(again) == graph_digest(graph)


def test_graph_parse_error_carries_the_line():
    with pytest.raises(GraphFormatError, match="line 2"):
        parse_graph("x y a\nx y\n")


def test_digest_changes_with_the_graph():
    graph = parse_graph("x y a\n")
    before = graph_digest(graph)
    graph.add_edge("y", "x", "a")
    assert graph_digest(graph) != before


def test_vertex_pair_set():
    pairs = VertexPairSet([(2, 0), (0, 1), (0, 1)])
    assert list(pairs) == [(0, 1), (2, 0)]
    assert len(pairs) == 2
    assert pairs == {(0, 1), (2, 0)}
    assert pairs.restrict([0], [1]) == VertexPairSet([(0, 1)])
    graph = LabeledGraph(["a", "b", "c"])
    assert pairs.named(graph) == [("a", "b"), ("c", "a")]
    assert serialize_pairs(pairs, graph) == "a b\nc a\n"


def test_source_graph_validation():
    with pytest.raises(ValidationError):
        SourceGraph(vertices=("a",), edges=(("a", "a"),))
    with pytest.raises(ValidationError):
        SourceGraph(vertices=("a",), edges=(("a", "b"),))
    with pytest.raises(ValidationError):
        SourceGraph(vertices=("a", "b"), parts=(("a",), ("a", "b")))


def test_source_graph_adjacency_respects_direction():
    undirected = SourceGraph(vertices=("a", "b"), edges=(("a", "b"),))
    directed = SourceGraph(vertices=("a", "b"), edges=(("a", "b"),), directed=True)
    assert undirected.adjacency() == {"a": {"b"}, "b": {"a"}}
    assert directed.adjacency() == {"a": {"b"}, "b": set()}


def test_source_graph_text():
    source = parse_source_graph("directed\npart P0 a b\npart P1 c\nnode d\na c\nc b\n")
    assert source.directed
    assert source.parts == (("a", "b"), ("c",))
    assert source.vertices == ("a", "b", "c", "d")
    assert parse_source_graph(serialize_source_graph(source)) == source
    with pytest.raises(GraphFormatError):
        parse_source_graph("a b c\n")
    with pytest.raises(GraphFormatError):
        parse_source_graph("a a\n")


def test_matrix_text():
    m = parse_matrix("1 0\n0 1\n")
    assert m.dtype == bool
    assert np.array_equal(m, np.eye(2, dtype=bool))
    assert serialize_matrix(m) == "1 0\n0 1\n"
    with pytest.raises(GraphFormatError):
        parse_matrix("1 0\n1\n")
    with pytest.raises(GraphFormatError):
        parse_matrix("2\n")


def test_scc_condensation_is_topological():
    graph = LabeledGraph(edges=[("x", "y", "a"), ("y", "x", "a"), ("y", "z", "a"), ("z", "z", "b"), ("w", "x", "a")])
    cond = scc_condense(graph, "a")
    x, y, z, w = (graph.vertex_id(v) for v in "xyzw")
    assert cond.assignment[x] == cond.assignment[y]
    assert cond.assignment[w] < cond.assignment[x] < cond.assignment[z]
    assert cond.nontrivial[cond.assignment[x]]
    # the z self-loop is labeled b, so z is trivial in the a-subgraph
    assert not cond.nontrivial[cond.assignment[z]]
    assert scc_condense(graph).nontrivial[scc_condense(graph).assignment[z]]
    assert all(a < b for a, b in cond.dag_edges)
