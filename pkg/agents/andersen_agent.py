"""
Andersen-style inclusion-based points-to analysis as a four-rule Datalog program.

Edge relations (``x -> y`` in the instance graph):

    alpha(x, y)   y = &x
    e(x, y)       y = x
    beta(x, y)    y = *x
    gamma(x, y)   *y = x

``T(x, y)`` reads "y may point to x". The rules::

    T(x, y) <- alpha(x, y)
    T(x, y) <- T(x, z), e(z, y)
    T(w, y) <- T(w, z), T(z, x), beta(x, y)
    T(w, z) <- T(w, x), gamma(x, y), T(z, y)
"""

import logging
from collections import deque
from functools import lru_cache
from typing import Deque, Dict, List, Sequence, Tuple

from agents.grammar_agent import APA_TERMINALS, preset, to_cnf
from agents.oracle_agent import cyk
from models.grammar_models import CnfGrammar
from models.graph_models import LabeledGraph
from models.solver_models import TRelation
from utils.errors import AlphabetError

logger = logging.getLogger(__name__)

# Greek spellings accepted by parse_apa_word.
_ALIASES = {
    "α": "alpha", "ᾱ": "alpha_bar", "β": "beta", "β̄": "beta_bar",
    "γ": "gamma", "γ̄": "gamma_bar", "ē": "e_bar",
}


def validate_apa_instance(graph: LabeledGraph) -> LabeledGraph:
    extra = graph.alphabet - set(APA_TERMINALS)
    if extra:
        raise AlphabetError(f"points-to instances use labels {list(APA_TERMINALS)}, found {sorted(extra)}")
    return graph


def _adjacency(graph: LabeledGraph, label: str) -> Tuple[Dict[int, List[int]], Dict[int, List[int]]]:
    out: Dict[int, List[int]] = {}
    into: Dict[int, List[int]] = {}
    for u, v, a in graph.edges:
        if a == label:
            out.setdefault(u, []).append(v)
            into.setdefault(v, []).append(u)
    return out, into


def apa_fixpoint(graph: LabeledGraph) -> TRelation:
    """
    Least fixpoint of the four rules, evaluated semi-naively: every new ``T`` fact
    is joined once against the current relation in each body position it can fill.

    Args:
        graph (LabeledGraph): Instance over ``alpha``, ``e``, ``beta``, ``gamma``

    Returns:
        TRelation: The inverse points-to relation
    """
    validate_apa_instance(graph)
    e_out, _ = _adjacency(graph, "e")
    beta_out, _ = _adjacency(graph, "beta")
    gamma_out, gamma_in = _adjacency(graph, "gamma")

    t = TRelation()
    delta: Deque[Tuple[int, int]] = deque()

    def derive(x: int, y: int) -> None:
        if t.add(x, y):
            delta.append((x, y))

    for u, v, a in graph.edges:
        if a == "alpha":
            derive(u, v)

    while delta:
        p, q = delta.popleft()
        # T(p, q) as T(x, z) of rule 2
        for y in e_out.get(q, ()):
            derive(p, y)
        # as T(w, z) of rule 3
        for x in t.seconds(q):
            for y in beta_out.get(x, ()):
                derive(p, y)
        # as T(z, x) of rule 3
        for y in beta_out.get(q, ()):
            for w in t.firsts(p):
                derive(w, y)
        # as T(w, x) of rule 4
        for y in gamma_out.get(q, ()):
            for z in t.firsts(y):
                derive(p, z)
        # as T(z, y) of rule 4
        for x in gamma_in.get(q, ()):
            for w in t.firsts(x):
                derive(w, p)
    logger.debug("points-to fixpoint: %d facts over %d vertices", len(t), graph.n)
    return t


def apa_on_demand(graph: LabeledGraph, p: str, q: str) -> bool:
    """True iff ``T(p, q)`` holds at the fixpoint."""
    pair = (graph.vertex_id(p), graph.vertex_id(q))
    return pair in apa_fixpoint(graph)


@lru_cache(maxsize=1)
def apa_cnf() -> CnfGrammar:
    return to_cnf(preset("apa"))


def parse_apa_word(text: str) -> List[str]:
    """Split a word such as ``"alpha gamma alpha gamma_bar alpha_bar"`` (Greek letters accepted)."""
    return [_ALIASES.get(token, token) for token in text.split()]


def apa_word_check(word: Sequence[str]) -> bool:
    """
    Whether a path word (backward edges written as ``<label>_bar``) derives from ``T``.

    Args:
        word (Sequence[str]): Label names

    Returns:
        bool: Membership in the two-sided ``T`` / ``T_bar`` grammar
    """
    return cyk(apa_cnf(), list(word))
