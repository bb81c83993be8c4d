"""
Brute-force reference implementations.

Nothing here shares code with the solvers: the oracles work directly on the
grammar and graph data types and are written to be obviously correct rather
than fast. Size limits are hard errors (:class:`GuardrailExceeded`).
"""

import itertools
import logging
from typing import Dict, FrozenSet, List, Sequence, Set, Tuple

import numpy as np

from models.grammar_models import CnfGrammar, Grammar, Production
from models.graph_models import LabeledGraph, SourceGraph, VertexPairSet
from models.solver_models import TRelation
from utils.errors import GuardrailExceeded

logger = logging.getLogger(__name__)

MAX_PATH_LENGTH = 16
MAX_CLIQUE_SIZE = 6
MAX_CLIQUE_VERTICES = 20
MAX_CYCLE_VERTICES = 40
MAX_MATRIX_DIM = 64
MAX_TRIANGLE_VERTICES = 300

Word = Tuple[str, ...]


def cyk(g: CnfGrammar, word: Sequence[str]) -> bool:
    """Cocke-Younger-Kasami membership test."""
    n = len(word)
    if n == 0:
        return g.accepts_empty
    unary: Dict[str, Set[str]] = {}
    for p in g.productions:
        if len(p.body) == 1:
            unary.setdefault(p.body[0].name, set()).add(p.head)
    binary = [(p.head, p.body[0].name, p.body[1].name) for p in g.productions if len(p.body) == 2]
    # table[i][l] = nonterminals deriving word[i:i + l + 1]
    table: List[List[Set[str]]] = [[set() for _ in range(n)] for _ in range(n)]
    for i, symbol in enumerate(word):
        if symbol not in unary:
            return False
        table[i][0] = set(unary[symbol])
    for length in range(2, n + 1):
        for i in range(n - length + 1):
            cell = table[i][length - 1]
            for split in range(1, length):
                left, right = table[i][split - 1], table[i + split][length - split - 1]
                if not left or not right:
                    continue
                for head, b, c in binary:
                    if b in left and c in right:
                        cell.add(head)
    return g.start in table[0][n - 1]


def earley_membership(g: Grammar, word: Sequence[str]) -> bool:
    """
    Earley recognizer on the grammar as written (epsilon and unit rules included),
    with the usual nullable-symbol shortcut in the predictor.
    """
    rules: Dict[str, List[Production]] = {}
    for p in g.productions:
        rules.setdefault(p.head, []).append(p)
    nullable: Set[str] = set()
    changed = True
    while changed:
        changed = False
        for p in g.productions:
            if p.head not in nullable and all(not s.is_terminal and s.name in nullable for s in p.body):
                nullable.add(p.head)
                changed = True

    n = len(word)
    Item = Tuple[str, Tuple, int, int]
    charts: List[List[Item]] = [[] for _ in range(n + 1)]
    seen: List[Set[Item]] = [set() for _ in range(n + 1)]

    def add(i: int, item: Item) -> None:
        if item not in seen[i]:
            seen[i].add(item)
            charts[i].append(item)

    for p in rules.get(g.start, ()):
        add(0, (p.head, p.body, 0, 0))
    for i in range(n + 1):
        k = 0
        while k < len(charts[i]):
            head, body, dot, origin = charts[i][k]
            k += 1
            if dot < len(body):
                symbol = body[dot]
                if symbol.is_terminal:
                    if i < n and word[i] == symbol.name:
                        add(i + 1, (head, body, dot + 1, origin))
                else:
                    for p in rules.get(symbol.name, ()):
                        add(i, (p.head, p.body, 0, i))
                    if symbol.name in nullable:
                        add(i, (head, body, dot + 1, origin))
            else:
                for h2, b2, d2, o2 in list(charts[origin]):
                    if d2 < len(b2) and not b2[d2].is_terminal and b2[d2].name == head:
                        add(i, (h2, b2, d2 + 1, o2))
    return any(head == g.start and dot == len(body) and origin == 0
               for head, body, dot, origin in charts[n])


def _product_matrices(g: CnfGrammar, graph: LabeledGraph) -> Dict[str, np.ndarray]:
    """
    Productive nonterminals ``(p, A, q)`` of the product of ``g`` with the graph,
    one boolean matrix per ``A``, grown by rounds of boolean products.
    """
    n = graph.n
    prod = {a: np.zeros((n, n), dtype=bool) for a in g.nonterminals}
    for p in g.productions:
        if len(p.body) == 1:
            for u, v, label in graph.edges:
                if label == p.body[0].name:
                    prod[p.head][u, v] = True
    if g.accepts_empty:
        prod[g.start] |= np.eye(n, dtype=bool)
    binary = [(p.head, p.body[0].name, p.body[1].name) for p in g.productions if len(p.body) == 2]
    rounds = 0
    changed = True
    while changed:
        changed = False
        rounds += 1
        for head, b, c in binary:
            grown = prod[head] | ((prod[b].astype(np.int64) @ prod[c].astype(np.int64)) > 0)
            if (grown != prod[head]).any():
                prod[head] = grown
                changed = True
    logger.debug("product grammar stable after %d rounds", rounds)
    return prod


def bar_hillel_reachability(g: CnfGrammar, graph: LabeledGraph, s: str, t: str) -> bool:
    """Productivity of ``(s, S, t)`` in the product grammar."""
    return bool(_product_matrices(g, graph)[g.start][graph.vertex_id(s), graph.vertex_id(t)])


def bar_hillel_all_pairs(g: CnfGrammar, graph: LabeledGraph) -> VertexPairSet:
    start = _product_matrices(g, graph)[g.start]
    return VertexPairSet((int(u), int(v)) for u, v in zip(*np.nonzero(start)))


def enumerate_paths(graph: LabeledGraph, s: str, t: str, maxlen: int) -> FrozenSet[Word]:
    """Label words of all ``s``-to-``t`` walks with at most ``maxlen`` edges."""
    if maxlen > MAX_PATH_LENGTH:
        raise GuardrailExceeded(f"path enumeration limited to length {MAX_PATH_LENGTH}, asked for {maxlen}")
    source, target = graph.vertex_id(s), graph.vertex_id(t)
    words: Set[Word] = set()
    stack: List[Tuple[int, Word]] = [(source, ())]
    while stack:
        v, word = stack.pop()
        if v == target:
            words.add(word)
        if len(word) < maxlen:
            for w, label in graph.out_edges(v):
                stack.append((w, word + (label,)))
    return frozenset(words)


def brute_triangle(g3: SourceGraph) -> bool:
    """Triangle with one vertex per part (any triangle when no partition is given)."""
    if g3.n > MAX_TRIANGLE_VERTICES:
        raise GuardrailExceeded(f"triangle search limited to {MAX_TRIANGLE_VERTICES} vertices")
    adj = g3.adjacency()
    if g3.parts:
        candidates = itertools.product(*g3.parts[:3]) if len(g3.parts) >= 3 else ()
    else:
        candidates = itertools.combinations(g3.vertices, 3)
    for a, b, c in candidates:
        if b in adj[a] and c in adj[b] and a in adj[c]:
            return True
    return False


def brute_kclique(g: SourceGraph, c: int) -> bool:
    if c > MAX_CLIQUE_SIZE or g.n > MAX_CLIQUE_VERTICES:
        raise GuardrailExceeded(
            f"clique search limited to c <= {MAX_CLIQUE_SIZE}, n <= {MAX_CLIQUE_VERTICES} (got c={c}, n={g.n})")
    adj = g.adjacency()
    for group in itertools.combinations(g.vertices, c):
        if all(v in adj[u] for u, v in itertools.combinations(group, 2)):
            return True
    return False


def brute_kcycle(g: SourceGraph, k: int) -> bool:
    """Simple directed cycle of exactly ``k`` vertices, searched from its smallest vertex."""
    if g.n > MAX_CYCLE_VERTICES:
        raise GuardrailExceeded(f"cycle search limited to {MAX_CYCLE_VERTICES} vertices")
    index = {v: i for i, v in enumerate(g.vertices)}
    adj = g.adjacency()

    def extend(path: List[str]) -> bool:
        last = path[-1]
        if len(path) == k:
            return path[0] in adj[last]
        for nxt in adj[last]:
            if index[nxt] > index[path[0]] and nxt not in path:
                path.append(nxt)
                if extend(path):
                    return True
                path.pop()
        return False

    return any(extend([v]) for v in g.vertices)


def naive_bmm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    if n > MAX_MATRIX_DIM:
        raise GuardrailExceeded(f"naive product limited to dimension {MAX_MATRIX_DIM}")
    c = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(n):
            c[i, j] = any(a[i, k] and b[k, j] for k in range(n))
    return c


def naive_apa(graph: LabeledGraph) -> TRelation:
    """Round-robin application of the four points-to rules over plain pair lists until nothing changes."""
    rel = {label: [(u, v) for u, v, a in graph.edges if a == label] for label in ("alpha", "e", "beta", "gamma")}
    t: Set[Tuple[int, int]] = set(rel["alpha"])
    while True:
        before = len(t)
        current = list(t)
        for x, z in current:
            for z2, y in rel["e"]:
                if z == z2:
                    t.add((x, y))
        current = list(t)
        for w, z in current:
            for z2, x in current:
                if z == z2:
                    for x2, y in rel["beta"]:
                        if x == x2:
                            t.add((w, y))
        current = list(t)
        for w, x in current:
            for x2, y in rel["gamma"]:
                if x == x2:
                    for z, y2 in current:
                        if y == y2:
                            t.add((w, z))
        if len(t) == before:
            return TRelation(t)
