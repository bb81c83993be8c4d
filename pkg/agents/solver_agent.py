"""
CFL-reachability solvers.

``all_pairs`` is the cubic worklist algorithm over a CNF grammar; the other
entry points are the specialized algorithms the grammar classification makes
available (join-free scan, linear grammars, regular on-demand search). The G>=
algorithms live in :mod:`agents.geq_agent`.
"""

import logging
from collections import deque
from typing import Deque, Dict, Iterable, List, Literal, Optional, Set, Tuple, get_args

from pydantic import BaseModel

from agents.geq_agent import geq_all_pairs_dominance, geq_on_demand
from agents.grammar_agent import FreshNames, classify, is_linear, is_regular, to_cnf, to_proper
from models.grammar_models import ClassificationReport, CnfGrammar, Grammar, Production, render_word
from models.graph_models import LabeledGraph, VertexPairSet
from utils.errors import JoinInducingError, NotLinearError, NotRegularError

logger = logging.getLogger(__name__)

Fact = Tuple[str, int, int]
Strategy = Literal["auto", "generic", "linear", "joinfree", "regular", "geq-od", "geq-dom"]
STRATEGIES = get_args(Strategy)


class FactSet:
    """
    Derived facts ``(A, u, v)``: some word of ``A`` labels a walk from ``u`` to ``v``.

    Indexed by ``(A, u)`` and ``(A, v)``; iteration is in insertion order.
    """

    def __init__(self):
        self._facts: Dict[Fact, None] = {}
        self._out: Dict[Tuple[str, int], Dict[int, None]] = {}
        self._in: Dict[Tuple[str, int], Dict[int, None]] = {}

    def add(self, a: str, u: int, v: int) -> bool:
        if (a, u, v) in self._facts:
            return False
        self._facts[(a, u, v)] = None
        self._out.setdefault((a, u), {})[v] = None
        self._in.setdefault((a, v), {})[u] = None
        return True

    def successors(self, a: str, u: int) -> List[int]:
        return list(self._out.get((a, u), ()))

    def predecessors(self, a: str, v: int) -> List[int]:
        return list(self._in.get((a, v), ()))

    def pairs(self, a: str) -> VertexPairSet:
        return VertexPairSet((u, v) for b, u, v in self._facts if b == a)

    def __contains__(self, fact: object) -> bool:
        return fact in self._facts

    def __iter__(self):
        return iter(self._facts)

    def __len__(self) -> int:
        return len(self._facts)


def _warn_inert_labels(graph: LabeledGraph, terminals: Iterable[str]) -> None:
    inert = sorted(graph.alphabet - set(terminals))
    if inert:
        logger.warning("edge labels %s are not grammar terminals; those edges are inert", inert)


def derive_facts(g: CnfGrammar, graph: LabeledGraph, target: Optional[Fact] = None) -> FactSet:
    """
    Saturate the fact set with a FIFO worklist.

    Args:
        g (CnfGrammar): Grammar in CNF
        graph (LabeledGraph): Input graph
        target (Optional[Fact]): Stop as soon as this fact is derived

    Returns:
        FactSet: All derivable facts (or a subset containing ``target``)
    """
    _warn_inert_labels(graph, g.terminals)
    by_label: Dict[str, List[str]] = {}
    for head, label in g.unary_rules:
        by_label.setdefault(label, []).append(head)
    by_left: Dict[str, List[Tuple[str, str]]] = {}
    by_right: Dict[str, List[Tuple[str, str]]] = {}
    for head, left, right in g.binary_rules:
        by_left.setdefault(left, []).append((head, right))
        by_right.setdefault(right, []).append((head, left))

    facts = FactSet()
    queue: Deque[Fact] = deque()

    def push(a: str, u: int, v: int) -> bool:
        if facts.add(a, u, v):
            queue.append((a, u, v))
            return (a, u, v) == target
        return False

    for u, v, label in graph.edges:
        for head in by_label.get(label, ()):
            if push(head, u, v):
                return facts
    if g.accepts_empty:
        for v in range(graph.n):
            if push(g.start, v, v):
                return facts

    while queue:
        b, u, v = queue.popleft()
        for head, right in by_left.get(b, ()):
            for w in facts.successors(right, v):
                if push(head, u, w):
                    return facts
        for head, left in by_right.get(b, ()):
            for w in facts.predecessors(left, u):
                if push(head, w, v):
                    return facts
    logger.debug("worklist saturated with %d facts on n=%d m=%d", len(facts), graph.n, graph.m)
    return facts


def all_pairs(g: CnfGrammar, graph: LabeledGraph) -> VertexPairSet:
    """Every ``(u, v)`` such that some word of ``L(g)`` labels a walk from ``u`` to ``v``."""
    return derive_facts(g, graph).pairs(g.start)


def on_demand(g: CnfGrammar, graph: LabeledGraph, s: str, t: str) -> bool:
    su, tv = graph.vertex_id(s), graph.vertex_id(t)
    if g.accepts_empty and su == tv:
        return True
    goal = (g.start, su, tv)
    return goal in derive_facts(g, graph, target=goal)


# -- linear grammars -----------------------------------------------------------------

class _LinearRules:
    """A linear grammar split so that every rule consumes exactly one edge."""

    def __init__(self, g: Grammar):
        proper = to_proper(g)
        self.start = proper.start
        self.accepts_empty = False
        self.terminals = proper.terminals
        self.term: Dict[str, List[str]] = {}
        self.left: Dict[str, List[Tuple[str, str]]] = {}
        self.right: Dict[str, List[Tuple[str, str]]] = {}
        self._fresh = FreshNames(list(proper.nonterminals) + list(proper.terminals))
        for p in proper.productions:
            if p.is_epsilon:
                self.accepts_empty = True
            else:
                self._peel(p.head, p.body)

    def _peel(self, head: str, body) -> None:
        if len(body) == 1:
            self.term.setdefault(body[0].name, []).append(head)
            return
        first, last = body[0], body[-1]
        if first.is_terminal:
            rest = body[1:]
            if len(rest) == 1 and not rest[0].is_terminal:
                inner = rest[0].name
            else:
                inner = self._fresh(head)
                self._peel(inner, rest)
            self.left.setdefault(inner, []).append((head, first.name))
        else:
            rest = body[:-1]
            if len(rest) == 1:
                inner = rest[0].name
            else:
                inner = self._fresh(head)
                self._peel(inner, rest)
            self.right.setdefault(inner, []).append((head, last.name))


def all_pairs_linear(g: Grammar, graph: LabeledGraph) -> VertexPairSet:
    """
    Linear-grammar solver: a fact ``(B, u, v)`` only ever grows by one edge in
    front of ``u`` or behind ``v``, so each fact costs O(deg) work.
    """
    if not is_linear(g):
        raise NotLinearError("grammar has a body with two or more nonterminals")
    rules = _LinearRules(g)
    _warn_inert_labels(graph, rules.terminals)
    facts = FactSet()
    queue: Deque[Fact] = deque()

    def push(a: str, u: int, v: int) -> None:
        if facts.add(a, u, v):
            queue.append((a, u, v))

    for u, v, label in graph.edges:
        for head in rules.term.get(label, ()):
            push(head, u, v)
    if rules.accepts_empty:
        for v in range(graph.n):
            push(rules.start, v, v)
    while queue:
        b, u, v = queue.popleft()
        for head, label in rules.left.get(b, ()):
            for w, edge_label in graph.in_edges(u):
                if edge_label == label:
                    push(head, w, v)
        for head, label in rules.right.get(b, ()):
            for x, edge_label in graph.out_edges(v):
                if edge_label == label:
                    push(head, u, x)
    return facts.pairs(rules.start)


# -- join-free grammars -------------------------------------------------------------

def join_free_all_pairs(g: Grammar, graph: LabeledGraph) -> VertexPairSet:
    """A join-free language has only words of length <= 1: one pass over the edges."""
    cnf = to_cnf(g)
    if cnf.binary_rules:
        raise JoinInducingError("grammar derives a word of length >= 2; use the cubic solver")
    words = {label for head, label in cnf.unary_rules if head == cnf.start}
    pairs: Set[Tuple[int, int]] = {(u, v) for u, v, label in graph.edges if label in words}
    if cnf.accepts_empty:
        pairs.update((v, v) for v in range(graph.n))
    return VertexPairSet(pairs)


# -- regular grammars ----------------------------------------------------------------

def _regular_search(productions: Iterable[Production], start: str, graph: LabeledGraph, source: int) -> Set[int]:
    """Vertices reachable from ``source`` by a word of a right-regular grammar (BFS over vertex x nonterminal)."""
    eps: Set[str] = set()
    final: Dict[str, Set[str]] = {}
    step: Dict[str, List[Tuple[str, str]]] = {}
    for p in productions:
        if p.is_epsilon:
            eps.add(p.head)
        elif len(p.body) == 1:
            final.setdefault(p.head, set()).add(p.body[0].name)
        else:
            step.setdefault(p.head, []).append((p.body[0].name, p.body[1].name))
    accepted: Set[int] = set()
    seen = {(source, start)}
    queue: Deque[Tuple[int, str]] = deque(seen)
    while queue:
        v, a = queue.popleft()
        if a in eps:
            accepted.add(v)
        labels = final.get(a, set())
        moves = step.get(a, [])
        for w, label in graph.out_edges(v):
            if label in labels:
                accepted.add(w)
            for needed, nxt in moves:
                if needed == label and (w, nxt) not in seen:
                    seen.add((w, nxt))
                    queue.append((w, nxt))
    return accepted


def _as_right_regular(g: Grammar, graph: LabeledGraph) -> Tuple[List[Production], LabeledGraph, bool]:
    if is_regular(g, "right"):
        return list(g.productions), graph, False
    if is_regular(g, "left"):
        flipped = [Production(head=p.head, body=tuple(reversed(p.body))) for p in g.productions]
        return flipped, graph.reverse(), True
    raise NotRegularError("grammar is neither right- nor left-regular")


def regular_on_demand(g: Grammar, graph: LabeledGraph, s: str, t: str) -> bool:
    """O(m * |G|) search for right- or left-regular grammars; left-regular ones run on the reversed graph."""
    productions, searched, flipped = _as_right_regular(g, graph)
    su, tv = graph.vertex_id(s), graph.vertex_id(t)
    if flipped:
        return su in _regular_search(productions, g.start, searched, tv)
    return tv in _regular_search(productions, g.start, searched, su)


def regular_all_pairs(g: Grammar, graph: LabeledGraph) -> VertexPairSet:
    productions, searched, flipped = _as_right_regular(g, graph)
    pairs = []
    for v in range(graph.n):
        for w in _regular_search(productions, g.start, searched, v):
            pairs.append((w, v) if flipped else (v, w))
    return VertexPairSet(pairs)


# -- dispatch ------------------------------------------------------------------------

class SolverConfig(BaseModel):
    """
    Configuration settings for the SolverAgent.

    Attributes:
        strategy (str): Algorithm to run, or ``auto`` to follow the grammar classification
    """
    strategy: Strategy = "auto"


class SolverAgent:
    """
    Runs CFL-reachability queries with the algorithm the grammar admits.

    ``auto`` follows the dichotomy: join-free grammars get the linear scan,
    G>= gets its dedicated algorithms, linear grammars the O(mn) solver and
    everything else the cubic worklist.
    """

    def __init__(self, config: SolverConfig):
        """
        Initialize the SolverAgent.

        Args:
            config (SolverConfig): Strategy selection
        """
        self.config = config
        self.last_strategy: Optional[str] = None
        self.last_fact_count = 0

    def _strategy(self, report: ClassificationReport, graph: LabeledGraph, on_demand_query: bool) -> str:
        if self.config.strategy != "auto":
            return self.config.strategy
        chosen = report.on_demand_strategy if on_demand_query else report.strategy
        if chosen.startswith("geq") and not graph.alphabet <= {"a", "b"}:
            chosen = "generic"
        return chosen

    def explain(self, g: Grammar, graph: Optional[LabeledGraph] = None, on_demand_query: bool = False) -> str:
        report = classify(g)
        lines = [
            f"join_inducing={str(report.join_inducing).lower()}",
            f"witness={render_word(report.witness) if report.witness else ''}",
            f"linear={str(report.linear).lower()}",
            f"right_regular={str(report.right_regular).lower()}",
            f"left_regular={str(report.left_regular).lower()}",
            f"accepts_empty={str(report.accepts_empty).lower()}",
            f"empty_language={str(report.empty_language).lower()}",
            f"strategy={self._strategy(report, graph or LabeledGraph(), on_demand_query)}",
        ]
        return "\n".join(lines)

    def all_pairs(self, g: Grammar, graph: LabeledGraph) -> VertexPairSet:
        """
        Solve All-Pairs.

        Args:
            g (Grammar): Grammar (CNF is computed when needed)
            graph (LabeledGraph): Input graph

        Returns:
            VertexPairSet: The reachable pairs
        """
        strategy = self._strategy(classify(g), graph, False)
        self.last_strategy = strategy
        self.last_fact_count = 0
        logger.debug("all-pairs with strategy %s", strategy)
        if strategy == "joinfree":
            return join_free_all_pairs(g, graph)
        if strategy == "linear":
            return all_pairs_linear(g, graph)
        if strategy == "regular":
            return regular_all_pairs(g, graph)
        if strategy in ("geq-dom", "geq-od"):
            return geq_all_pairs_dominance(graph)
        cnf = g if isinstance(g, CnfGrammar) else to_cnf(g)
        facts = derive_facts(cnf, graph)
        self.last_fact_count = len(facts)
        return facts.pairs(cnf.start)

    def on_demand(self, g: Grammar, graph: LabeledGraph, s: str, t: str) -> bool:
        """
        Decide whether ``t`` is reachable from ``s``.

        Args:
            g (Grammar): Grammar
            graph (LabeledGraph): Input graph
            s (str): Source vertex name
            t (str): Target vertex name

        Returns:
            bool: True when some word of the language labels an s-to-t walk
        """
        strategy = self._strategy(classify(g), graph, True)
        self.last_strategy = strategy
        self.last_fact_count = 0
        su, tv = graph.vertex_id(s), graph.vertex_id(t)
        logger.debug("on-demand %s -> %s with strategy %s", s, t, strategy)
        if strategy == "regular":
            return regular_on_demand(g, graph, s, t)
        if strategy == "geq-od":
            return geq_on_demand(graph, s, t)
        if strategy in ("joinfree", "linear", "geq-dom"):
            return (su, tv) in self.all_pairs(g, graph)
        cnf = g if isinstance(g, CnfGrammar) else to_cnf(g)
        if cnf.accepts_empty and su == tv:
            return True
        goal = (cnf.start, su, tv)
        facts = derive_facts(cnf, graph, target=goal)
        self.last_fact_count = len(facts)
        return goal in facts
