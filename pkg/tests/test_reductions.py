import itertools
import logging
import random

import pytest

from agents.andersen_agent import apa_on_demand, apa_word_check
from agents.clique_reduction_agent import (apa_clique_gadget, binary_line, binary_line_reversed, bit_width,
                                           check_clique_neighbor_gadgets, clique_code, kclique_to_dyck2,
                                           kcycle_on_demand, place_values, planted_route, route_word,
                                           triangle_to_dyck1, unary_line, unary_line_reversed,
                                           variant_reductions)
from agents.grammar_agent import preset, to_cnf
from agents.oracle_agent import brute_kclique, brute_kcycle, brute_triangle, cyk
from agents.reduction_agent import ReductionAgent, ReductionConfig
from models.graph_models import LabeledGraph, SourceGraph
from utils.errors import GuardrailExceeded, ReductionInputError, UnknownPresetError
from utils.graph_io import read_instance_bundle, write_instance_bundle
from utils.random_graphs import random_graph, random_kpartite_digraph, random_tripartite


def _complete(n: int) -> SourceGraph:
    names = tuple(f"v{i}" for i in range(1, n + 1))
    return SourceGraph(vertices=names, edges=tuple(itertools.combinations(names, 2)))


def _solve(solver, instance) -> bool:
    return solver.on_demand(preset(instance.grammar_preset), instance.graph, *instance.query)


# -- triangle skeleton --------------------------------------------------------------------

def test_triangle_walk_spells_nested_brackets():
    source = SourceGraph(vertices=("a1", "a2", "a3", "b1", "c1"),
                         edges=(("a3", "b1"), ("b1", "c1"), ("c1", "a3")),
                         parts=(("a1", "a2", "a3"), ("b1",), ("c1",)))
    instance = triangle_to_dyck1(source)
    assert instance.query == ("u", "a1'")
    route = ["u", "a1", "a2", "a3", "b1", "c1", "a3'", "a2'", "a1'"]
    assert "".join(route_word(instance.graph, route)) == "(((())))"


def test_triangle_reduction_matches_brute_force(solver):
    for seed in range(200):
        rng = random.Random(seed)
        size = rng.randint(1, 15)
        source = random_tripartite(rng, size, rng.choice([0.05, 0.15, 0.3]), plant_triangle=seed % 3 == 0)
        instance = triangle_to_dyck1(source)
        assert _solve(solver, instance) == brute_triangle(source), seed


def test_triangle_reduction_needs_three_parts():
    two_parts = SourceGraph(vertices=("a", "b"), edges=(("a", "b"),), parts=(("a",), ("b",)))
    with pytest.raises(ReductionInputError):
        triangle_to_dyck1(two_parts)
    inside_a_part = SourceGraph(vertices=("a1", "a2", "b", "c"), edges=(("a1", "a2"),),
                                parts=(("a1", "a2"), ("b",), ("c",)))
    with pytest.raises(ReductionInputError, match="tripartite"):
        triangle_to_dyck1(inside_a_part)


def test_fresh_names_avoid_source_vertices():
    source = SourceGraph(vertices=("u", "b", "c"), edges=(("u", "b"), ("b", "c"), ("c", "u")),
                         parts=(("u",), ("b",), ("c",)))
    instance = triangle_to_dyck1(source)
    assert instance.query == ("u#1", "u'")


# -- cycles and variants ---------------------------------------------------------------------

@pytest.mark.parametrize("k,target", [(5, "dyck:1"), (5, "anbn"), (5, "palindrome:ab"), (7, "dyck:1")])
def test_kcycle_reduction_matches_brute_force(solver, k, target):
    for seed in range(50):
        rng = random.Random(seed)
        source = random_kpartite_digraph(rng, k, rng.randint(1, 3), rng.choice([0.2, 0.35, 0.5]),
                                         plant_cycle=seed % 4 == 0)
        instance = kcycle_on_demand(source, k, target)
        assert _solve(solver, instance) == brute_kcycle(source, k), (seed, target)


def test_kcycle_without_a_closing_layer(solver):
    source = random_kpartite_digraph(random.Random(3), 5, 2, 0.9, acyclic=True)
    assert not brute_kcycle(source, 5)
    assert not _solve(solver, kcycle_on_demand(source, 5))


def test_kcycle_parameters():
    source = random_kpartite_digraph(random.Random(0), 5, 2, 0.5)
    with pytest.raises(ReductionInputError):
        kcycle_on_demand(source, 4)
    with pytest.raises(ReductionInputError):
        kcycle_on_demand(source, 7)
    with pytest.raises(UnknownPresetError):
        kcycle_on_demand(source, 5, "apa")


@pytest.mark.parametrize("target,preset_name", [
    ("anbn_mid", "anbn_mid:ab"),
    ("anbn_mid:ab", "anbn_mid:ab"),
    ("anbn_mid:c", "anbn_mid:c"),
    ("eqcount", "eqcount"),
    ("palindrome:ab", "palindrome:ab"),
])
def test_variant_reductions_match_brute_force(solver, target, preset_name):
    for seed in range(100):
        rng = random.Random(100 + seed)
        source = random_tripartite(rng, rng.randint(1, 6), rng.choice([0.1, 0.3]), plant_triangle=seed % 3 == 0)
        instance = variant_reductions(source, target)
        assert instance.grammar_preset == preset_name
        assert _solve(solver, instance) == brute_triangle(source), (seed, target)


def test_unknown_variant():
    source = random_tripartite(random.Random(0), 2, 0.5)
    with pytest.raises(UnknownPresetError):
        variant_reductions(source, "dyck:2")


# -- clique gadgets ------------------------------------------------------------------------

def test_vertex_encodings():
    assert bit_width(1) == 1 and bit_width(3) == 2 and bit_width(4) == 3
    assert binary_line(1, 2) == ["lb", "lp"]
    assert binary_line_reversed(1, 2) == ["rp", "rb"]
    assert binary_line(6, 3) == ["lp", "lp", "lb"]
    assert binary_line_reversed(6, 3) == ["rb", "rp", "rp"]
    assert unary_line(2) == ["alpha", "alpha"]
    assert unary_line(2, 3) == ["alpha"] * 6
    assert unary_line_reversed(3, 2) == ["beta"] * 6
    assert clique_code((2, 5), 6) == 2 + 5 * 7
    assert place_values(3, 1) == {"CL1": 16, "CNG1": 1, "CL2": 1, "CNG2": 4, "CL3": 4, "CNG3": 16}


def test_dyck2_gadget_on_a_triangle(solver):
    source = _complete(3)
    instance = kclique_to_dyck2(source, 1)
    params = instance.gadget
    assert params.cliques == ((1,), (2,), (3,))
    assert params.neighbors == ((2, 3), (1, 3), (1, 2))
    assert params.bits == 2
    assert check_clique_neighbor_gadgets(instance)
    assert instance.graph.m <= params.edge_bound_constant * source.n ** 2 * params.bits
    assert _solve(solver, instance)


def test_dyck2_planted_route_is_a_dyck_word():
    instance = kclique_to_dyck2(_complete(3), 1)
    word = route_word(instance.graph, planted_route(instance, ["v1", "v2", "v3"]))
    assert word[0] == "lb" and word[-1] == "rb"
    assert cyk(to_cnf(preset("dyck:2")), word)


def test_dyck2_planted_route_for_six_cliques():
    source = _complete(6)
    instance = kclique_to_dyck2(source, 2)
    assert check_clique_neighbor_gadgets(instance)
    assert len(instance.gadget.cliques) == 15
    assert instance.graph.m <= instance.gadget.edge_bound_constant * 6 ** 3 * instance.gadget.bits
    word = route_word(instance.graph, planted_route(instance, list(source.vertices)))
    assert cyk(to_cnf(preset("dyck:2")), word)


def test_dyck2_gadget_matches_brute_force(solver):
    for seed in range(100):
        rng = random.Random(seed)
        source = random_graph(rng, rng.randint(3, 10), rng.choice([0.2, 0.35, 0.5]))
        instance = kclique_to_dyck2(source, 1)
        assert _solve(solver, instance) == brute_kclique(source, 3), seed


def test_dyck2_gadget_for_six_cliques_matches_brute_force(solver):
    for seed in range(50):
        rng = random.Random(500 + seed)
        n = rng.randint(6, 10)
        source = random_graph(rng, n, rng.choice([0.4, 0.6]), plant_clique=6 if seed % 3 == 0 else None)
        instance = kclique_to_dyck2(source, 2)
        assert _solve(solver, instance) == brute_kclique(source, 6), seed


def test_triangle_free_graph_gives_no_dyck2_walk(solver):
    path = SourceGraph(vertices=("v1", "v2", "v3", "v4"), edges=(("v1", "v2"), ("v2", "v3"), ("v3", "v4")))
    assert not _solve(solver, kclique_to_dyck2(path, 1))


def test_clique_gadgets_check_their_input():
    with pytest.raises(ReductionInputError):
        kclique_to_dyck2(_complete(5), 2)
    directed = SourceGraph(vertices=("a", "b", "c"), edges=(("a", "b"),), directed=True)
    with pytest.raises(ReductionInputError):
        kclique_to_dyck2(directed, 1)


def test_points_to_gadget_on_a_triangle():
    source = _complete(3)
    instance = apa_clique_gadget(source, 1)
    assert instance.grammar_preset == "apa"
    assert instance.graph.alphabet == {"alpha", "e", "beta", "gamma"}
    assert check_clique_neighbor_gadgets(instance)
    assert instance.graph.m <= instance.gadget.edge_bound_constant * (source.n + 1) ** 3
    assert apa_on_demand(instance.graph, "p", "q")


def test_points_to_planted_route_alone_derives_the_query():
    instance = apa_clique_gadget(_complete(3), 1)
    route = planted_route(instance, ["v1", "v2", "v3"])
    only_route = LabeledGraph()
    for x, y in zip(route, route[1:]):
        for u, v in ((x, y), (y, x)):
            for w, label in instance.graph.out_edges(instance.graph.vertex_id(u)):
                if instance.graph.name_of(w) == v:
                    only_route.add_edge(u, v, label)
    assert apa_on_demand(only_route, "p", "q")


def test_points_to_planted_route_spells_a_points_to_word():
    instance = apa_clique_gadget(_complete(3), 1)
    word = route_word(instance.graph, planted_route(instance, ["v1", "v2", "v3"]))
    assert word[0] == "alpha" and word[-1] == "beta"
    assert word.count("gamma") == 1 and word.count("alpha_bar") == 1
    assert word.count("alpha") == 1 + 17 + 1 * 2 + 4 * 3
    assert word.count("beta") == 2 + 4 * 3 + 16 * 1 + 1
    assert apa_word_check(word)


def test_points_to_gadget_without_edges():
    edgeless = SourceGraph(vertices=("v1", "v2", "v3"))
    assert not apa_on_demand(apa_clique_gadget(edgeless, 1).graph, "p", "q")


def test_points_to_gadget_rejects_an_open_wedge():
    wedge = SourceGraph(vertices=("v1", "v2", "v3", "v4"), edges=(("v1", "v2"), ("v1", "v3")))
    assert not brute_kclique(wedge, 3)
    assert not apa_on_demand(apa_clique_gadget(wedge, 1).graph, "p", "q")


def test_points_to_gadget_on_a_five_cycle():
    names = tuple(f"v{i}" for i in range(1, 6))
    cycle = SourceGraph(vertices=names, edges=tuple(zip(names, names[1:] + names[:1])))
    assert not apa_on_demand(apa_clique_gadget(cycle, 1).graph, "p", "q")


def test_points_to_gadget_matches_brute_force():
    for seed in range(100):
        rng = random.Random(seed)
        source = random_graph(rng, rng.randint(3, 12), rng.choice([0.15, 0.3, 0.45]),
                              plant_clique=3 if seed % 4 == 0 else None)
        instance = apa_clique_gadget(source, 1)
        assert apa_on_demand(instance.graph, "p", "q") == brute_kclique(source, 3), seed


def test_points_to_counting_gadgets_hold_the_common_neighbors():
    source = SourceGraph(vertices=("v1", "v2", "v3", "v4"),
                         edges=(("v1", "v2"), ("v1", "v3"), ("v2", "v3"), ("v3", "v4")))
    instance = apa_clique_gadget(source, 1)
    assert instance.gadget.neighbors == ((2, 3), (1, 3), (1, 2, 4), (3,))
    assert check_clique_neighbor_gadgets(instance)
    # neighbor 4 of clique (3,) enters the shared ladder at its foot
    assert instance.graph.has_edge("CNG1:t2:c0", "CNG1:lad1:0", "e")
    instance.graph.add_edge("CNG1:t0:c0", "CNG1:lad1:3", "e")
    assert not check_clique_neighbor_gadgets(instance)


def test_points_to_gadget_size_guardrail():
    with pytest.raises(GuardrailExceeded):
        apa_clique_gadget(_complete(6), 2)


# -- the reduction agent --------------------------------------------------------------------

def test_agent_attaches_and_checks_the_oracle_answer():
    agent = ReductionAgent(ReductionConfig())
    assert agent.verifying
    source = random_tripartite(random.Random(5), 3, 0.4, plant_triangle=True)
    instance = agent.generate("triangle-dyck1", source=source)
    assert instance.ground_truth is True
    assert agent.check(instance)


def test_agent_skips_verification_beyond_the_guardrail(caplog):
    agent = ReductionAgent(ReductionConfig(k=3, verify=True))
    edgeless = SourceGraph(vertices=tuple(f"v{i}" for i in range(1, 10)))
    with caplog.at_level(logging.WARNING, logger="agents.reduction_agent"):
        instance = agent.generate("kclique-dyck2", source=edgeless)
    assert instance.ground_truth is None
    assert "skipping verification" in caplog.text
    assert agent.check(instance) is None


def test_large_k_is_not_verified_by_default():
    assert not ReductionAgent(ReductionConfig(k=3)).verifying
    assert ReductionAgent(ReductionConfig(k=3, verify=True)).verifying


def test_agent_rejects_unknown_generators():
    with pytest.raises(ReductionInputError):
        ReductionAgent(ReductionConfig()).generate("nope")
    with pytest.raises(ReductionInputError):
        ReductionAgent(ReductionConfig()).generate("triangle-dyck1")


def test_bundle_round_trip(tmp_path):
    agent = ReductionAgent(ReductionConfig())
    source = random_tripartite(random.Random(8), 2, 0.5, plant_triangle=True)
    instance = agent.generate("triangle-dyck1", source=source)
    root = write_instance_bundle(instance, str(tmp_path / "bundle"), agent.grammar_text(instance))
    assert {p.name for p in root.iterdir()} == {"graph.txt", "grammar.txt", "query.txt", "meta.txt", "truth.txt"}
    loaded = read_instance_bundle(str(root))
    assert loaded.graph == instance.graph
    assert loaded.query == instance.query
    assert loaded.ground_truth is True
    assert loaded.grammar_preset == "dyck:1"
    assert loaded.source_digest == instance.source_digest
    assert agent.check(loaded)
