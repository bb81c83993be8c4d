import re
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

import networkx as nx
from pydantic import BaseModel, ConfigDict, model_validator

from utils.errors import ArityError, GraphFormatError, UnknownVertexError

_LABEL = re.compile(r"^[^\s']+$")
_NAME = re.compile(r"^\S+$")

Edge = Tuple[int, int, str]


class LabeledGraph:
    """
    Directed multigraph with terminal-named edge labels.

    Vertices are interned: the first time a name is seen it receives the next
    dense integer id. Identical ``(src, dst, label)`` triples are stored once.
    Builders mutate; everything downstream treats a finished graph as read-only.
    """

    def __init__(self, vertices: Iterable[str] = (), edges: Iterable[Tuple[str, str, str]] = ()):
        self._names: List[str] = []
        self._ids: Dict[str, int] = {}
        self._edges: Dict[Edge, None] = {}
        self._out: Optional[List[List[Tuple[int, str]]]] = None
        self._in: Optional[List[List[Tuple[int, str]]]] = None
        for name in vertices:
            self.add_vertex(name)
        for src, dst, label in edges:
            self.add_edge(src, dst, label)

    # -- construction -------------------------------------------------------

    def add_vertex(self, name: str) -> int:
        known = self._ids.get(name)
        if known is not None:
            return known
        if not _NAME.match(name or ""):
            raise GraphFormatError(f"invalid vertex name {name!r}")
        self._ids[name] = len(self._names)
        self._names.append(name)
        self._out = self._in = None
        return self._ids[name]

    def add_edge(self, src: str, dst: str, label: str) -> bool:
        """Add ``src -label-> dst``; returns False when the triple was already present."""
        if not _LABEL.match(label or ""):
            raise GraphFormatError(f"label {label!r} is not a valid terminal name")
        key = (self.add_vertex(src), self.add_vertex(dst), label)
        if key in self._edges:
            return False
        self._edges[key] = None
        self._out = self._in = None
        return True

    def add_path(self, names: Sequence[str], labels: Sequence[str]) -> None:
        """Add the line ``names[0] -labels[0]-> names[1] ...``, interning missing vertices."""
        if len(labels) != len(names) - 1:
            raise ArityError(f"path over {len(names)} vertices needs {len(names) - 1} labels, got {len(labels)}")
        for name in names:
            self.add_vertex(name)
        for i, label in enumerate(labels):
            self.add_edge(names[i], names[i + 1], label)

    def fresh_name(self, base: str) -> str:
        """``base`` itself when unused, otherwise the first free ``base#i``."""
        if base not in self._ids:
            return base
        i = 1
        while f"{base}#{i}" in self._ids:
            i += 1
        return f"{base}#{i}"

    # -- queries ------------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self._names)

    @property
    def m(self) -> int:
        return len(self._edges)

    @property
    def vertices(self) -> Tuple[str, ...]:
        return tuple(self._names)

    @property
    def edges(self) -> List[Edge]:
        return list(self._edges)

    def named_edges(self) -> List[Tuple[str, str, str]]:
        return [(self._names[u], self._names[v], a) for u, v, a in self._edges]

    @property
    def alphabet(self) -> FrozenSet[str]:
        return frozenset(a for _, _, a in self._edges)

    def has_vertex(self, name: str) -> bool:
        return name in self._ids

    def vertex_id(self, name: str) -> int:
        try:
            return self._ids[name]
        except KeyError:
            raise UnknownVertexError(f"unknown vertex {name!r}") from None

    def name_of(self, vid: int) -> str:
        return self._names[vid]

    def has_edge(self, src: str, dst: str, label: str) -> bool:
        if src not in self._ids or dst not in self._ids:
            return False
        return (self._ids[src], self._ids[dst], label) in self._edges

    def _build_index(self) -> None:
        self._out = [[] for _ in self._names]
        self._in = [[] for _ in self._names]
        for u, v, a in self._edges:
            self._out[u].append((v, a))
            self._in[v].append((u, a))

    def out_edges(self, u: int) -> List[Tuple[int, str]]:
        if self._out is None:
            self._build_index()
        return self._out[u]

    def in_edges(self, v: int) -> List[Tuple[int, str]]:
        if self._in is None:
            self._build_index()
        return self._in[v]

    # -- derived graphs -----------------------------------------------------

    def reverse(self) -> "LabeledGraph":
        return LabeledGraph(self._names, ((self._names[v], self._names[u], a) for u, v, a in self._edges))

    def filter_by_label(self, labels: Iterable[str]) -> "LabeledGraph":
        keep = set(labels)
        return LabeledGraph(self._names, (e for e in self.named_edges() if e[2] in keep))

    def union(self, other: "LabeledGraph") -> "LabeledGraph":
        """Merge by vertex name."""
        merged = LabeledGraph(self._names, self.named_edges())
        for name in other.vertices:
            merged.add_vertex(name)
        for edge in other.named_edges():
            merged.add_edge(*edge)
        return merged

    def disjoint_union(self, other: "LabeledGraph", prefixes: Tuple[str, str] = ("L:", "R:")) -> "LabeledGraph":
        left, right = prefixes
        if left == right:
            raise ValueError("disjoint_union needs two distinct prefixes")
        result = LabeledGraph()
        for prefix, graph in ((left, self), (right, other)):
            for name in graph.vertices:
                result.add_vertex(prefix + name)
            for u, v, a in graph.named_edges():
                result.add_edge(prefix + u, prefix + v, a)
        return result

    def to_networkx(self, label: Optional[str] = None) -> nx.DiGraph:
        """Simple digraph over vertex ids, optionally restricted to one label."""
        g = nx.DiGraph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from((u, v) for u, v, a in self._edges if label is None or a == label)
        return g

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LabeledGraph):
            return NotImplemented
        return self._names == other._names and set(self.named_edges()) == set(other.named_edges())

    def __repr__(self) -> str:
        return f"LabeledGraph(n={self.n}, m={self.m}, alphabet={sorted(self.alphabet)})"


class VertexPairSet:
    """Set of ``(u, v)`` vertex-id pairs, iterated in sorted order."""

    __slots__ = ("_pairs", "_set")

    def __init__(self, pairs: Iterable[Tuple[int, int]] = ()):
        self._set: FrozenSet[Tuple[int, int]] = frozenset(pairs)
        self._pairs: Tuple[Tuple[int, int], ...] = tuple(sorted(self._set))

    def __iter__(self) -> Iterator[Tuple[int, int]]:
        return iter(self._pairs)

    def __len__(self) -> int:
        return len(self._pairs)

    def __contains__(self, pair: object) -> bool:
        return pair in self._set

    def __eq__(self, other: object) -> bool:
        if isinstance(other, VertexPairSet):
            return self._set == other._set
        if isinstance(other, (set, frozenset)):
            return self._set == other
        return NotImplemented

    def __repr__(self) -> str:
        return f"VertexPairSet({list(self._pairs)!r})"

    def as_set(self) -> Set[Tuple[int, int]]:
        return set(self._set)

    def restrict(self, sources: Iterable[int], targets: Iterable[int]) -> "VertexPairSet":
        src, dst = set(sources), set(targets)
        return VertexPairSet(p for p in self._pairs if p[0] in src and p[1] in dst)

    def named(self, graph: LabeledGraph) -> List[Tuple[str, str]]:
        return [(graph.name_of(u), graph.name_of(v)) for u, v in self._pairs]


class SourceGraph(BaseModel):
    """
    Unlabeled input of a reduction (clique, triangle or cycle instance).

    Attributes:
        vertices (Tuple[str, ...]): Vertex names in declaration order
        edges (Tuple[Tuple[str, str], ...]): Edges; unordered pairs unless ``directed``
        parts (Tuple[Tuple[str, ...], ...]): Optional vertex partition (tripartite / k-partite inputs)
        directed (bool): Whether edges are ordered
    """
    model_config = ConfigDict(frozen=True)

    vertices: Tuple[str, ...]
    edges: Tuple[Tuple[str, str], ...] = ()
    parts: Tuple[Tuple[str, ...], ...] = ()
    directed: bool = False

    @model_validator(mode="after")
    def _check(self) -> "SourceGraph":
        known = set(self.vertices)
        if len(known) != len(self.vertices):
            raise ValueError("duplicate vertex names")
        for u, v in self.edges:
            if u not in known or v not in known:
                raise ValueError(f"edge ({u}, {v}) uses an undeclared vertex")
            if u == v:
                raise ValueError(f"self-loop on {u}")
        seen: Set[str] = set()
        for part in self.parts:
            for v in part:
                if v not in known or v in seen:
                    raise ValueError(f"vertex {v!r} missing or listed in two parts")
                seen.add(v)
        return self

    @property
    def n(self) -> int:
        return len(self.vertices)

    def edge_set(self) -> Set[Tuple[str, str]]:
        """Ordered pairs; undirected edges appear in both orientations."""
        pairs = set(self.edges)
        if not self.directed:
            pairs |= {(v, u) for u, v in self.edges}
        return pairs

    def adjacency(self) -> Dict[str, Set[str]]:
        adj: Dict[str, Set[str]] = {v: set() for v in self.vertices}
        for u, v in self.edge_set():
            adj[u].add(v)
        return adj

    def part_of(self) -> Dict[str, int]:
        return {v: i for i, part in enumerate(self.parts) for v in part}
