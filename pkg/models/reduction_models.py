from typing import Dict, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from models.graph_models import LabeledGraph

NamedPairs = Tuple[Tuple[str, str], ...]


class CliqueGadgetParams(BaseModel):
    """
    Bookkeeping of a clique-list / clique-neighbor gadget construction.

    Attributes:
        k (int): Clique block size; the encoded source problem is a 3k-clique
        bits (int): Bit width ``ceil(log2(n + 1))`` of the vertex-expansion encoding
        encoding (str): ``binary`` (bracket labels) or ``unary`` (pointer-analysis labels)
        open_labels (Tuple[str, str]): Forward labels for bit 0 and bit 1
        close_labels (Tuple[str, str]): Reversed labels for bit 0 and bit 1
        vertex_names (Tuple[str, ...]): Source vertex of id ``i`` is ``vertex_names[i - 1]``
        cliques (Tuple[Tuple[int, ...], ...]): All k-cliques, sorted id tuples in lexicographic order
        neighbors (Tuple[Tuple[int, ...], ...]): Common neighbors of each clique
        edge_bound_constant (int): ``c`` with ``m <= c * n^(k+1) * bits`` (binary) or
            ``m <= c * (n+1)^(4k-1)`` (unary)
    """
    model_config = ConfigDict(frozen=True)

    k: int = Field(ge=1)
    bits: int = Field(ge=1)
    encoding: Literal["binary", "unary"] = "binary"
    open_labels: Tuple[str, str] = ("lb", "lp")
    close_labels: Tuple[str, str] = ("rb", "rp")
    vertex_names: Tuple[str, ...]
    cliques: Tuple[Tuple[int, ...], ...]
    neighbors: Tuple[Tuple[int, ...], ...]
    edge_bound_constant: int

    @model_validator(mode="after")
    def _neighbors_avoid_clique(self) -> "CliqueGadgetParams":
        if len(self.cliques) != len(self.neighbors):
            raise ValueError("one neighbor set per clique required")
        for t, nt in zip(self.cliques, self.neighbors):
            if set(t) & set(nt):
                raise ValueError(f"neighbor set of clique {t} intersects the clique")
        return self


class ReductionInstance(BaseModel):
    """
    A generated CFL-reachability instance together with how to read its answer.

    Attributes:
        generator (str): Generator name
        parameters (Dict[str, str]): Generator parameters, stringified for ``meta.txt``
        source_digest (str): Digest of the source instance the graph was built from
        graph (LabeledGraph): The generated graph
        grammar_preset (str): Preset naming the grammar the query is posed against
        mode (str): ``on_demand`` (use ``query``) or ``all_pairs_filtered`` (use ``pair_filter``)
        query (Optional[Tuple[str, str]]): Queried pair for on-demand instances
        pair_filter (Optional[Tuple[Tuple[str, ...], Tuple[str, ...]]]): Source and target vertices kept
        ground_truth (Optional[Union[bool, NamedPairs]]): Oracle answer, if verified
        decode (Dict[str, str]): Generator-specific vertex correspondences
        gadget (Optional[CliqueGadgetParams]): Clique gadget bookkeeping
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    generator: str
    parameters: Dict[str, str] = Field(default_factory=dict)
    source_digest: str = ""
    graph: LabeledGraph
    grammar_preset: str
    mode: Literal["on_demand", "all_pairs_filtered"] = "on_demand"
    query: Optional[Tuple[str, str]] = None
    pair_filter: Optional[Tuple[Tuple[str, ...], Tuple[str, ...]]] = None
    ground_truth: Optional[Union[bool, NamedPairs]] = None
    decode: Dict[str, str] = Field(default_factory=dict)
    gadget: Optional[CliqueGadgetParams] = None

    @model_validator(mode="after")
    def _query_matches_mode(self) -> "ReductionInstance":
        if self.mode == "on_demand":
            if self.query is None:
                raise ValueError("on_demand instances need a query pair")
            for v in self.query:
                if not self.graph.has_vertex(v):
                    raise ValueError(f"query vertex {v!r} not in graph")
        elif self.pair_filter is None:
            raise ValueError("all_pairs_filtered instances need a pair filter")
        return self
