"""
Algorithms for ``G>= = {a^i b^j | i >= j}``.

Both reduce to two single-label path problems: the longest ``a``-walk into a
switch vertex and the shortest ``b``-walk out of it. A walk through an
``a``-cycle can be pumped, so its length is ``+inf``.
"""

import logging
from collections import deque
from typing import List, Tuple

import numpy as np

from models.graph_models import LabeledGraph, VertexPairSet
from models.solver_models import ExtremalPathMatrix
from utils.errors import AlphabetError
from utils.graph_algos import Condensation, scc_condense

logger = logging.getLogger(__name__)


def _check_alphabet(graph: LabeledGraph) -> None:
    extra = graph.alphabet - {"a", "b"}
    if extra:
        raise AlphabetError(f"G>= algorithms need labels in {{a, b}}, found {sorted(extra)}")


def _dag_successors(cond: Condensation) -> List[List[int]]:
    succ: List[List[int]] = [[] for _ in cond.members]
    for a, b in cond.dag_edges:
        succ[a].append(b)
    return succ


def longest_a_from(graph: LabeledGraph, cond: Condensation, succ: List[List[int]], source: int) -> np.ndarray:
    """Longest ``a``-walk length from ``source`` to every vertex (-inf unreachable, +inf unbounded)."""
    best = np.full(len(cond.members), -np.inf)
    origin = cond.assignment[source]
    best[origin] = np.inf if cond.nontrivial[origin] else 0.0
    for c in range(origin, len(cond.members)):
        if best[c] == -np.inf:
            continue
        for d in succ[c]:
            candidate = np.inf if cond.nontrivial[d] else best[c] + 1
            if candidate > best[d]:
                best[d] = candidate
    return best[np.asarray(cond.assignment, dtype=int)] if graph.n else np.zeros(0)


def _bfs(graph: LabeledGraph, root: int, label: str, backwards: bool) -> np.ndarray:
    dist = np.full(graph.n, np.inf)
    dist[root] = 0
    queue = deque([root])
    while queue:
        v = queue.popleft()
        edges = graph.in_edges(v) if backwards else graph.out_edges(v)
        for w, edge_label in edges:
            if edge_label == label and dist[w] == np.inf:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def geq_on_demand(graph: LabeledGraph, s: str, t: str) -> bool:
    """
    Decide whether some ``s``-to-``t`` walk is labeled ``a^i b^j`` with ``i >= j``.

    Args:
        graph (LabeledGraph): Graph over ``{a, b}``
        s (str): Source vertex
        t (str): Target vertex

    Returns:
        bool: Whether a switch vertex ``v`` has ``longest_a(s, v) >= shortest_b(v, t)``
    """
    _check_alphabet(graph)
    su, tv = graph.vertex_id(s), graph.vertex_id(t)
    cond = scc_condense(graph, "a")
    la = longest_a_from(graph, cond, _dag_successors(cond), su)
    lb = _bfs(graph, tv, "b", backwards=True)
    return bool(np.any((la > -np.inf) & (lb < np.inf) & (la >= lb)))


def extremal_matrices(graph: LabeledGraph) -> Tuple[ExtremalPathMatrix, ExtremalPathMatrix]:
    """All-pairs longest ``a``-walks and shortest ``b``-walks."""
    cond = scc_condense(graph, "a")
    succ = _dag_successors(cond)
    n = graph.n
    ma = np.full((n, n), -np.inf)
    mb = np.full((n, n), np.inf)
    for v in range(n):
        ma[v] = longest_a_from(graph, cond, succ, v)
        mb[v] = _bfs(graph, v, "b", backwards=False)
    return (ExtremalPathMatrix(values=ma, mode="longest", label="a"),
            ExtremalPathMatrix(values=mb, mode="shortest", label="b"))


def dominance_product(ma: ExtremalPathMatrix, mb: ExtremalPathMatrix) -> np.ndarray:
    """Boolean ``C[i][j] = exists k: ma[i][k] >= mb[k][j]`` over meaningful entries only."""
    a, b = ma.values, mb.values
    a_ok, b_ok = ma.meaningful, mb.meaningful
    n = a.shape[0]
    result = np.zeros((n, n), dtype=bool)
    for i in range(n):
        hits = (a[i][:, None] >= b) & a_ok[i][:, None] & b_ok
        result[i] = hits.any(axis=0)
    return result


def geq_all_pairs_dominance(graph: LabeledGraph) -> VertexPairSet:
    """All-Pairs for G>= as longest-a matrix, shortest-b matrix, then their existence-dominance product."""
    _check_alphabet(graph)
    ma, mb = extremal_matrices(graph)
    product = dominance_product(ma, mb)
    logger.debug("dominance product on n=%d found %d pairs", graph.n, int(product.sum()))
    return VertexPairSet((int(i), int(j)) for i, j in zip(*np.nonzero(product)))
