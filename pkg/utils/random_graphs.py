"""Seeded generators for random labeled graphs and random reduction sources."""

import itertools
import random
from typing import List, Optional, Sequence, Tuple

from models.graph_models import LabeledGraph, SourceGraph


def random_labeled_graph(rng: random.Random, n: int, labels: Sequence[str],
                         density: float, prefix: str = "v") -> LabeledGraph:
    """Every ordered pair (self-loops included) gets an edge with probability ``density``."""
    names = [f"{prefix}{i}" for i in range(n)]
    graph = LabeledGraph(names)
    for u in names:
        for v in names:
            if rng.random() < density:
                graph.add_edge(u, v, rng.choice(list(labels)))
    return graph


def sparse_labeled_graph(rng: random.Random, n: int, labels: Sequence[str],
                         edges_per_vertex: int = 2, prefix: str = "v") -> LabeledGraph:
    names = [f"{prefix}{i}" for i in range(n)]
    graph = LabeledGraph(names)
    for _ in range(edges_per_vertex * n):
        graph.add_edge(rng.choice(names), rng.choice(names), rng.choice(list(labels)))
    return graph


def random_graph(rng: random.Random, n: int, density: float,
                 plant_clique: Optional[int] = None) -> SourceGraph:
    """Undirected G(n, p) on ``v1..vn``, optionally with a clique on a random vertex subset."""
    names = [f"v{i}" for i in range(1, n + 1)]
    edges = {(u, v) for u, v in itertools.combinations(names, 2) if rng.random() < density}
    if plant_clique:
        chosen = sorted(rng.sample(names, plant_clique), key=names.index)
        edges |= set(itertools.combinations(chosen, 2))
    return SourceGraph(vertices=tuple(names), edges=tuple(sorted(edges, key=lambda e: (names.index(e[0]), names.index(e[1])))))


def random_tripartite(rng: random.Random, size: int, density: float,
                      plant_triangle: bool = False) -> SourceGraph:
    """Parts ``a*``, ``b*``, ``c*``; cross edges only, stored as a->b, b->c, c->a."""
    parts = [tuple(f"{p}{i}" for i in range(1, size + 1)) for p in "abc"]
    edges: List[Tuple[str, str]] = []
    for left, right in ((0, 1), (1, 2), (2, 0)):
        edges += [(u, v) for u in parts[left] for v in parts[right] if rng.random() < density]
    if plant_triangle:
        a, b, c = (rng.choice(part) for part in parts)
        edges += [(a, b), (b, c), (c, a)]
    return SourceGraph(vertices=sum(parts, ()), edges=tuple(dict.fromkeys(edges)), parts=tuple(parts))


def random_kpartite_digraph(rng: random.Random, k: int, size: int, density: float,
                            plant_cycle: bool = False, acyclic: bool = False) -> SourceGraph:
    """
    Layers ``L1..Lk`` with edges only from layer i to layer i+1 (and k to 1 unless ``acyclic``).
    """
    parts = [tuple(f"x{i}_{j}" for j in range(1, size + 1)) for i in range(1, k + 1)]
    last = k - 1 if acyclic else k
    edges: List[Tuple[str, str]] = []
    for i in range(last):
        edges += [(u, v) for u in parts[i] for v in parts[(i + 1) % k] if rng.random() < density]
    if plant_cycle and not acyclic:
        cycle = [rng.choice(part) for part in parts]
        edges += [(cycle[i], cycle[(i + 1) % k]) for i in range(k)]
    return SourceGraph(vertices=sum(parts, ()), edges=tuple(dict.fromkeys(edges)),
                       parts=tuple(parts), directed=True)
