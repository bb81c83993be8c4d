import logging
import random

import pytest

from agents.grammar_agent import preset, to_cnf
from agents.oracle_agent import bar_hillel_all_pairs
from agents.solver_agent import (SolverAgent, SolverConfig, all_pairs, all_pairs_linear, derive_facts,
                                 join_free_all_pairs, on_demand, regular_all_pairs, regular_on_demand)
from models.graph_models import LabeledGraph
from tests.helpers import path_graph, random_grammar
from utils.errors import JoinInducingError, NotLinearError, NotRegularError
from utils.grammar_dsl import parse_grammar
from utils.random_graphs import random_labeled_graph


def test_dyck1_all_pairs_on_a_path():
    graph = path_graph(["(", ")", "("])
    cnf = to_cnf(preset("dyck:1"))
    pairs = all_pairs(cnf, graph)
    assert pairs == {(v, v) for v in range(4)} | {(0, 2)}
    assert on_demand(cnf, graph, "v0", "v2")
    assert not on_demand(cnf, graph, "v0", "v3")
    assert on_demand(cnf, graph, "v3", "v3")


def test_dyck1_through_a_cycle():
    # v0 -(-> v1, v1 -(-> v1, v1 -)-> v2, v2 -)-> v2: every (^i )^j with i, j >= 1
    graph = LabeledGraph(edges=[("v0", "v1", "("), ("v1", "v1", "("), ("v1", "v2", ")"), ("v2", "v2", ")")])
    cnf = to_cnf(preset("dyck:1"))
    assert on_demand(cnf, graph, "v0", "v2")
    assert on_demand(cnf, graph, "v1", "v2")
    assert not on_demand(cnf, graph, "v2", "v0")


def test_early_exit_returns_the_target_fact():
    graph = path_graph(["a", "b"] * 3)
    cnf = to_cnf(preset("eqcount"))
    goal = (cnf.start, graph.vertex_id("v0"), graph.vertex_id("v2"))
    facts = derive_facts(cnf, graph, target=goal)
    assert goal in facts
    assert len(facts) <= len(derive_facts(cnf, graph))


def test_random_grammars_match_the_product_oracle():
    auto = SolverAgent(SolverConfig())
    generic = SolverAgent(SolverConfig(strategy="generic"))
    for seed in range(150):
        rng = random.Random(seed)
        g = random_grammar(rng)
        graph = random_labeled_graph(rng, rng.randint(1, 6), ["a", "b"], 0.3)
        expected = bar_hillel_all_pairs(to_cnf(g), graph)
        assert auto.all_pairs(g, graph) == expected, seed
        assert generic.all_pairs(g, graph) == expected, seed
        for _ in range(3):
            s, t = rng.randrange(graph.n), rng.randrange(graph.n)
            got = auto.on_demand(g, graph, graph.name_of(s), graph.name_of(t))
            assert got == ((s, t) in expected), (seed, auto.last_strategy)


@pytest.mark.parametrize("name", ["anbn", "palindrome:ab", "dyck_nested:1"])
def test_linear_solver_matches_the_cubic_one(name):
    g = preset(name)
    cnf = to_cnf(g)
    labels = list(cnf.terminals)
    for seed in range(25):
        graph = random_labeled_graph(random.Random(seed), 7, labels, 0.25)
        assert all_pairs_linear(g, graph) == all_pairs(cnf, graph)


def test_linear_solver_rejects_concatenation():
    with pytest.raises(NotLinearError):
        all_pairs_linear(preset("dyck:1"), path_graph(["("]))


def test_join_free_scan():
    g = parse_grammar("S -> 'a' | eps\n")
    graph = path_graph(["a", "b"])
    assert join_free_all_pairs(g, graph) == {(0, 0), (1, 1), (2, 2), (0, 1)}
    with pytest.raises(JoinInducingError):
        join_free_all_pairs(preset("anbn"), graph)


@pytest.mark.parametrize("text", ["S -> 'a' S | 'b'\n", "S -> S 'a' | 'b'\n", "S -> 'a' A | eps\nA -> 'b' S\n"])
def test_regular_search_matches_the_cubic_solver(text):
    g = parse_grammar(text)
    cnf = to_cnf(g)
    for seed in range(25):
        rng = random.Random(seed)
        graph = random_labeled_graph(rng, 6, ["a", "b"], 0.3)
        expected = all_pairs(cnf, graph)
        assert regular_all_pairs(g, graph) == expected
        s, t = graph.vertices[0], graph.vertices[-1]
        assert regular_on_demand(g, graph, s, t) == ((0, graph.n - 1) in expected)


def test_regular_search_rejects_other_grammars():
    with pytest.raises(NotRegularError):
        regular_on_demand(preset("anbn"), path_graph(["a", "b"]), "v0", "v2")


def test_strategies_are_transparent(solver):
    graph = random_labeled_graph(random.Random(7), 8, ["a", "b"], 0.3)
    g = preset("anbn")
    expected = solver.all_pairs(g, graph)
    assert solver.last_strategy == "linear"
    assert SolverAgent(SolverConfig(strategy="generic")).all_pairs(g, graph) == expected
    assert SolverAgent(SolverConfig(strategy="linear")).all_pairs(g, graph) == expected


def test_auto_picks_the_geq_algorithms_only_on_their_alphabet(solver):
    g = preset("geq")
    graph = path_graph(["a", "b"])
    assert solver.on_demand(g, graph, "v0", "v2")
    assert solver.last_strategy == "geq-od"
    graph.add_edge("v2", "v3", "c")
    assert not solver.on_demand(g, graph, "v0", "v3")
    assert solver.last_strategy == "generic"
    assert solver.last_fact_count > 0


def test_explain_reports_the_classification(solver):
    text = solver.explain(preset("dyck:1"))
    assert "join_inducing=true" in text
    assert "witness=()" in text
    assert "strategy=generic" in text
    assert "strategy=regular" in solver.explain(parse_grammar("S -> 'a' S | 'b'\n"), on_demand_query=True)


def test_inert_labels_are_logged(caplog):
    graph = path_graph(["(", "z", ")"])
    with caplog.at_level(logging.WARNING, logger="agents.solver_agent"):
        pairs = all_pairs(to_cnf(preset("dyck:1")), graph)
    assert (0, 3) not in pairs
    assert "inert" in caplog.text
