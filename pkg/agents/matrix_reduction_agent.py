"""
Boolean matrix multiplication through any join-inducing grammar, and the
family of graphs whose output is quadratic in their size.
"""

import hashlib
import logging
from typing import List, Sequence, Tuple

import numpy as np

from agents.grammar_agent import classify
from models.graph_models import LabeledGraph, VertexPairSet
from models.grammar_models import Grammar
from models.reduction_models import ReductionInstance
from utils.errors import JoinFreeError, ReductionInputError
from utils.graph_io import serialize_matrix

logger = logging.getLogger(__name__)


def join_witness(g: Grammar) -> Tuple[str, ...]:
    """The classification witness ``r1 .. rk`` (k >= 2) of a join-inducing grammar."""
    report = classify(g)
    if not report.join_inducing:
        raise JoinFreeError(f"grammar {g.name or g.start!r} is join-free; it cannot encode a product")
    return report.witness


def layer_vertex(layer: int, i: int) -> str:
    return f"V{layer}_{i}"


def _layers(graph: LabeledGraph, k: int, n: int) -> None:
    for layer in range(k + 1):
        for i in range(n):
            graph.add_vertex(layer_vertex(layer, i))


def _add_identity_layers(graph: LabeledGraph, witness: Sequence[str], n: int) -> None:
    """Layers ``2 .. k-1`` are matched vertex to vertex."""
    k = len(witness)
    for layer in range(2, k):
        for i in range(n):
            graph.add_edge(layer_vertex(layer - 1, i), layer_vertex(layer, i), witness[layer - 1])


def _filtered(generator: str, graph: LabeledGraph, g: Grammar, k: int, n: int, **fields) -> ReductionInstance:
    sources = tuple(layer_vertex(0, i) for i in range(n))
    targets = tuple(layer_vertex(k, j) for j in range(n))
    return ReductionInstance(generator=generator, graph=graph, grammar_preset=g.name or "custom",
                             mode="all_pairs_filtered", pair_filter=(sources, targets), **fields)


def bmm_to_cfg(a: np.ndarray, b: np.ndarray, g: Grammar) -> ReductionInstance:
    """
    Encode ``C = A . B`` as All-Pairs over the witness word of ``g``.

    Layers ``V0 .. Vk`` hold ``n`` vertices each; ``A`` wires layer 0 to 1 with ``r1``,
    ``B`` wires layer ``k-1`` to ``k`` with ``rk`` and the layers in between are copied
    along the diagonal. Every V0-to-Vk walk therefore spells exactly the witness, and
    ``C[i, j]`` holds iff ``(V0_i, Vk_j)`` is in the output.

    Args:
        a (np.ndarray): Left n x n 0/1 matrix
        b (np.ndarray): Right n x n 0/1 matrix
        g (Grammar): A join-inducing grammar

    Returns:
        ReductionInstance: Filtered All-Pairs instance (sources V0, targets Vk)
    """
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape != b.shape:
        raise ReductionInputError(f"matrices must be square and of equal size, got {a.shape} and {b.shape}")
    witness = join_witness(g)
    k, n = len(witness), a.shape[0]
    graph = LabeledGraph()
    _layers(graph, k, n)
    for i, j in zip(*np.nonzero(a)):
        graph.add_edge(layer_vertex(0, i), layer_vertex(1, j), witness[0])
    _add_identity_layers(graph, witness, n)
    for i, j in zip(*np.nonzero(b)):
        graph.add_edge(layer_vertex(k - 1, i), layer_vertex(k, j), witness[-1])
    digest_text = serialize_matrix(a) + "\n" + serialize_matrix(b)
    logger.debug("bmm reduction: n=%d witness length %d, %d edges", n, k, graph.m)
    return _filtered("bmm", graph, g, k, n, parameters={"n": str(n), "k": str(k)},
                     source_digest=hashlib.sha256(digest_text.encode("utf-8")).hexdigest())


def decode_product(instance: ReductionInstance, pairs: VertexPairSet) -> np.ndarray:
    """Read the product matrix back from the instance's All-Pairs output."""
    n, k = int(instance.parameters["n"]), int(instance.parameters["k"])
    graph = instance.graph
    c = np.zeros((n, n), dtype=bool)
    for u, v in pairs.named(graph):
        if u.startswith("V0_") and v.startswith(f"V{k}_"):
            c[int(u[3:]), int(v[len(f"V{k}_"):])] = True
    return c


def product_pairs(c: np.ndarray, k: int) -> Tuple[Tuple[str, str], ...]:
    """Named layer pairs of the nonzero entries of a product matrix."""
    return tuple((layer_vertex(0, i), layer_vertex(k, j)) for i, j in zip(*np.nonzero(c)))


def worst_case_family(g: Grammar, n: int) -> ReductionInstance:
    """
    A graph with ``k * n`` edges whose All-Pairs output over V0 x Vk has ``n^2`` pairs.

    Every V0 vertex points at the hub ``V1_0``, the hub's diagonal copy in layer ``k-1``
    points at every Vk vertex, and the layers in between are diagonal.
    """
    if n < 1:
        raise ReductionInputError(f"n must be positive, got {n}")
    witness = join_witness(g)
    k = len(witness)
    graph = LabeledGraph()
    _layers(graph, k, n)
    for i in range(n):
        graph.add_edge(layer_vertex(0, i), layer_vertex(1, 0), witness[0])
    _add_identity_layers(graph, witness, n)
    for j in range(n):
        graph.add_edge(layer_vertex(k - 1, 0), layer_vertex(k, j), witness[-1])
    truth: List[Tuple[str, str]] = [(layer_vertex(0, i), layer_vertex(k, j)) for i in range(n) for j in range(n)]
    return _filtered("worst-case", graph, g, k, n, parameters={"n": str(n), "k": str(k)},
                     ground_truth=tuple(truth))
