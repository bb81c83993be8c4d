import itertools
import random
from typing import Iterator, Sequence, Tuple

from models.grammar_models import Grammar, Production, Symbol
from models.graph_models import LabeledGraph


def random_grammar(rng: random.Random, nonterminals: Sequence[str] = ("S", "A", "B"),
                   terminals: Sequence[str] = ("a", "b"), rules: int = 6, max_body: int = 3) -> Grammar:
    """Arbitrary (possibly empty-language, possibly ambiguous) grammar with start ``S``."""
    productions = []
    for _ in range(rules):
        body = tuple(
            Symbol.t(rng.choice(terminals)) if rng.random() < 0.5 else Symbol.nt(rng.choice(nonterminals))
            for _ in range(rng.randint(0, max_body))
        )
        productions.append(Production(head=rng.choice(nonterminals), body=body))
    return Grammar.build("S", productions, extra_nonterminals=nonterminals)


def words(alphabet: Sequence[str], max_length: int) -> Iterator[Tuple[str, ...]]:
    for length in range(max_length + 1):
        yield from itertools.product(alphabet, repeat=length)


def path_graph(labels: Sequence[str], prefix: str = "v") -> LabeledGraph:
    """``v0 -l0-> v1 -l1-> ...``"""
    graph = LabeledGraph([f"{prefix}0"])
    graph.add_path([f"{prefix}{i}" for i in range(len(labels) + 1)], list(labels))
    return graph
