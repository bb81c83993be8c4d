"""
Graph-side counterparts of the language operations CFL-reachability is closed under.
"""

import logging
from typing import Dict, Set, Tuple

from networkx.utils import UnionFind

from models.graph_models import LabeledGraph, VertexPairSet
from utils.errors import ReductionInputError

logger = logging.getLogger(__name__)

Homomorphism = Dict[str, Tuple[str, ...]]


def right_quotient_extend(graph: LabeledGraph, symbol: str) -> Tuple[LabeledGraph, Dict[str, str]]:
    """
    Give every vertex ``v`` a fresh sink ``t_v`` reached by one ``symbol`` edge.

    ``(u, v)`` is in the output of ``L / symbol`` on ``graph`` exactly when
    ``(u, t_v)`` is in the output of ``L`` on the extended graph.

    Args:
        graph (LabeledGraph): Input graph (left untouched)
        symbol (str): The quotient terminal

    Returns:
        Tuple[LabeledGraph, Dict[str, str]]: Extended graph and the map ``v -> t_v``
    """
    extended = LabeledGraph(graph.vertices, graph.named_edges())
    sinks: Dict[str, str] = {}
    for v in graph.vertices:
        sinks[v] = extended.fresh_name(f"t_{v}")
        extended.add_edge(v, sinks[v], symbol)
    return extended, sinks


def decode_quotient_pairs(extended: LabeledGraph, pairs: VertexPairSet, sinks: Dict[str, str]) -> Set[Tuple[str, str]]:
    """Named pairs ``(u, v)`` of the original graph whose ``(u, t_v)`` is in ``pairs``."""
    back = {t: v for v, t in sinks.items()}
    return {(u, back[t]) for u, t in pairs.named(extended) if u in sinks and t in back}


def parse_homomorphism(text: str) -> Homomorphism:
    """
    Parse ``"a=ad,b=b,e="``: each image is read letter by letter, or split on ``+``
    when labels are longer than one character (``call=lp+x``). An empty image erases.
    """
    h: Homomorphism = {}
    for item in filter(None, (part.strip() for part in text.split(","))):
        label, sep, image = item.partition("=")
        if not sep or not label.strip():
            raise ReductionInputError(f"homomorphism entry {item!r} is not 'label=image'")
        image = image.strip()
        h[label.strip()] = tuple(image.split("+")) if "+" in image else tuple(image)
    return h


def hom_vertex_map(graph: LabeledGraph, h: Homomorphism) -> Dict[str, str]:
    """
    Endpoints of edges whose image is empty are merged; each vertex maps to the
    lowest-id member of its class.

    Merging is exact when erased labels form symmetric relations (every erased edge
    has its reverse); otherwise merging may admit walks that cross an erased edge
    against its direction.
    """
    missing = sorted(graph.alphabet - set(h))
    if missing:
        raise ReductionInputError(f"homomorphism is not defined on {', '.join(missing)}")
    classes = UnionFind(graph.vertices)
    erased = 0
    for u, v, label in graph.named_edges():
        if not h[label]:
            classes.union(u, v)
            erased += 1
    if erased:
        logger.debug("merging endpoints of %d erased edges", erased)
    order = {name: i for i, name in enumerate(graph.vertices)}
    rep: Dict[str, str] = {}
    for group in classes.to_sets():
        leader = min(group, key=order.__getitem__)
        rep.update({v: leader for v in group})
    return {v: rep[v] for v in graph.vertices}


def inverse_hom_transform(graph: LabeledGraph, h: Homomorphism) -> LabeledGraph:
    """
    Graph whose All-Pairs output under ``L`` equals the output of ``h^-1(L)`` on ``graph``.

    Every edge labeled ``a`` becomes a fresh line spelling ``h(a)``; edges whose image is
    empty collapse their endpoints (see :func:`hom_vertex_map`).

    Args:
        graph (LabeledGraph): Input graph over the domain alphabet of ``h``
        h (Homomorphism): Image of every label, as a tuple of target labels

    Returns:
        LabeledGraph: Graph over the target alphabet; vertex names follow :func:`hom_vertex_map`
    """
    rep = hom_vertex_map(graph, h)
    out = LabeledGraph(dict.fromkeys(rep[v] for v in graph.vertices))
    for idx, (u, v, label) in enumerate(graph.named_edges()):
        image = h[label]
        if not image:
            continue
        interior = []
        for _ in image[1:]:
            interior.append(out.fresh_name(f"h{idx}"))
            out.add_vertex(interior[-1])
        out.add_path([rep[u]] + interior + [rep[v]], list(image))
    return out
