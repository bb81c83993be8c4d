from typing import Optional, Tuple

import networkx as nx
from pydantic import BaseModel, ConfigDict

from models.graph_models import LabeledGraph


class Condensation(BaseModel):
    """
    Strongly connected components of a (label-restricted) graph.

    Components are numbered in topological order of the condensation DAG, so
    component ``i`` can only have edges into components ``j > i``.

    Attributes:
        assignment (Tuple[int, ...]): Component index of every vertex id
        members (Tuple[Tuple[int, ...], ...]): Sorted vertex ids of each component
        dag_edges (Tuple[Tuple[int, int], ...]): Edges between distinct components
        nontrivial (Tuple[bool, ...]): Component has a cycle (size > 1 or a self-loop)
    """
    model_config = ConfigDict(frozen=True)

    assignment: Tuple[int, ...]
    members: Tuple[Tuple[int, ...], ...]
    dag_edges: Tuple[Tuple[int, int], ...]
    nontrivial: Tuple[bool, ...]

    @property
    def order(self) -> Tuple[int, ...]:
        return tuple(range(len(self.members)))


def scc_condense(graph: LabeledGraph, restrict_label: Optional[str] = None) -> Condensation:
    """
    Condense the ``restrict_label``-subgraph of ``graph`` (all edges when None).

    Args:
        graph (LabeledGraph): Input graph
        restrict_label (Optional[str]): Keep only edges with this label

    Returns:
        Condensation: Components in a deterministic topological order
    """
    g = graph.to_networkx(restrict_label)
    dag = nx.condensation(g)
    members = {c: tuple(sorted(dag.nodes[c]["members"])) for c in dag.nodes}
    topo = list(nx.lexicographical_topological_sort(dag, key=lambda c: members[c][0]))
    rank = {c: i for i, c in enumerate(topo)}

    assignment = [0] * graph.n
    for c, vs in members.items():
        for v in vs:
            assignment[v] = rank[c]
    ordered = tuple(members[c] for c in topo)
    nontrivial = tuple(len(vs) > 1 or g.has_edge(vs[0], vs[0]) for vs in ordered)
    dag_edges = tuple(sorted({(rank[a], rank[b]) for a, b in dag.edges}))
    return Condensation(assignment=tuple(assignment), members=ordered,
                        dag_edges=dag_edges, nontrivial=nontrivial)
