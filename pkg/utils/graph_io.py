"""
Text formats for graphs, pair sets, source instances, matrices and instance bundles.

Graph file::

    # comment
    node isolated_vertex
    src dst label
"""

import hashlib
from pathlib import Path
from typing import Dict, Iterable, List, Tuple

import numpy as np

from models.graph_models import LabeledGraph, SourceGraph, VertexPairSet
from models.reduction_models import ReductionInstance
from utils.errors import GraphFormatError


def _content_lines(text: str) -> Iterable[Tuple[int, List[str]]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line.split()


def parse_graph(text: str) -> LabeledGraph:
    graph = LabeledGraph()
    for lineno, tokens in _content_lines(text):
        try:
            if len(tokens) == 2 and tokens[0] == "node":
                graph.add_vertex(tokens[1])
            elif len(tokens) == 3:
                graph.add_edge(*tokens)
            else:
                raise GraphFormatError(f"expected 'src dst label' or 'node name', got {len(tokens)} fields")
        except GraphFormatError as e:
            raise GraphFormatError(str(e), lineno) from None
    return graph


def serialize_graph(graph: LabeledGraph) -> str:
    """All vertices are declared up front so ids survive a round trip."""
    lines = [f"node {name}" for name in graph.vertices]
    lines += [f"{u} {v} {a}" for u, v, a in graph.named_edges()]
    return "\n".join(lines) + "\n" if lines else ""


def read_graph(path: str) -> LabeledGraph:
    return parse_graph(Path(path).read_text(encoding="utf-8"))


def graph_digest(graph: LabeledGraph) -> str:
    return hashlib.sha256(serialize_graph(graph).encode("utf-8")).hexdigest()


def serialize_pairs(pairs: VertexPairSet, graph: LabeledGraph) -> str:
    return "".join(f"{u} {v}\n" for u, v in pairs.named(graph))


# -- source instances of reductions ----------------------------------------------

def parse_source_graph(text: str) -> SourceGraph:
    """
    ``directed`` flag line, ``part <label> v1 v2 ...`` partition lines,
    ``node v`` declarations and ``u v`` edge lines.
    """
    vertices: Dict[str, None] = {}
    edges: List[Tuple[str, str]] = []
    parts: List[Tuple[str, ...]] = []
    directed = False
    for lineno, tokens in _content_lines(text):
        head = tokens[0]
        if head == "directed" and len(tokens) == 1:
            directed = True
        elif head == "part" and len(tokens) >= 2:
            members = tuple(tokens[2:])
            vertices.update(dict.fromkeys(members))
            parts.append(members)
        elif head == "node" and len(tokens) == 2:
            vertices.setdefault(tokens[1], None)
        elif len(tokens) == 2:
            vertices.setdefault(tokens[0], None)
            vertices.setdefault(tokens[1], None)
            edges.append((tokens[0], tokens[1]))
        else:
            raise GraphFormatError(f"unrecognized source-graph line {' '.join(tokens)!r}", lineno)
    try:
        return SourceGraph(vertices=tuple(vertices), edges=tuple(dict.fromkeys(edges)),
                           parts=tuple(parts), directed=directed)
    except ValueError as e:
        raise GraphFormatError(str(e)) from None


def serialize_source_graph(source: SourceGraph) -> str:
    lines = ["directed"] if source.directed else []
    lines += [f"part P{i} {' '.join(part)}" for i, part in enumerate(source.parts)]
    placed = {v for part in source.parts for v in part}
    lines += [f"node {v}" for v in source.vertices if v not in placed]
    lines += [f"{u} {v}" for u, v in source.edges]
    return "\n".join(lines) + "\n"


def read_source_graph(path: str) -> SourceGraph:
    return parse_source_graph(Path(path).read_text(encoding="utf-8"))


def source_digest(source: SourceGraph) -> str:
    return hashlib.sha256(serialize_source_graph(source).encode("utf-8")).hexdigest()


def parse_matrix(text: str) -> np.ndarray:
    """Square 0/1 matrix, one whitespace-separated row per line."""
    rows = [tokens for _, tokens in _content_lines(text)]
    if any(len(r) != len(rows) for r in rows):
        raise GraphFormatError(f"matrix is not square ({len(rows)} rows)")
    if any(tok not in ("0", "1") for r in rows for tok in r):
        raise GraphFormatError("matrix entries must be 0 or 1")
    return np.array([[tok == "1" for tok in r] for r in rows], dtype=bool).reshape(len(rows), len(rows))


def serialize_matrix(matrix: np.ndarray) -> str:
    return "".join(" ".join("1" if x else "0" for x in row) + "\n" for row in matrix)


# -- instance bundles ------------------------------------------------------------

def write_instance_bundle(instance: ReductionInstance, out_dir: str, grammar_text: str) -> Path:
    """
    Write ``graph.txt``, ``grammar.txt``, ``query.txt``, ``meta.txt`` and, when known,
    ``truth.txt`` and ``decode.txt``. Output is a pure function of the instance.
    """
    root = Path(out_dir)
    root.mkdir(parents=True, exist_ok=True)
    graph_text = serialize_graph(instance.graph)
    (root / "graph.txt").write_text(graph_text, encoding="utf-8")
    (root / "grammar.txt").write_text(grammar_text, encoding="utf-8")
    if instance.mode == "on_demand":
        query = f"{instance.query[0]} {instance.query[1]}\n"
    else:
        sources, targets = instance.pair_filter
        query = f"sources {' '.join(sources)}\ntargets {' '.join(targets)}\n"
    (root / "query.txt").write_text(query, encoding="utf-8")

    meta = {
        "generator": instance.generator,
        "preset": instance.grammar_preset,
        "mode": instance.mode,
        "source_digest": instance.source_digest,
        "graph_digest": hashlib.sha256(graph_text.encode("utf-8")).hexdigest(),
        "n": str(instance.graph.n),
        "m": str(instance.graph.m),
    }
    meta.update({f"param.{k}": v for k, v in sorted(instance.parameters.items())})
    if instance.gadget is not None:
        meta["edge_bound_constant"] = str(instance.gadget.edge_bound_constant)
    (root / "meta.txt").write_text("".join(f"{k} = {v}\n" for k, v in meta.items()), encoding="utf-8")

    if instance.ground_truth is not None:
        if isinstance(instance.ground_truth, bool):
            truth = "true\n" if instance.ground_truth else "false\n"
        else:
            truth = "".join(f"{u} {v}\n" for u, v in instance.ground_truth)
        (root / "truth.txt").write_text(truth, encoding="utf-8")
    if instance.decode:
        (root / "decode.txt").write_text("".join(f"{k} {v}\n" for k, v in instance.decode.items()),
                                         encoding="utf-8")
    return root


def read_instance_bundle(path: str) -> ReductionInstance:
    root = Path(path)
    meta = {}
    for _, tokens in _content_lines((root / "meta.txt").read_text(encoding="utf-8")):
        if len(tokens) >= 2 and tokens[1] == "=":
            meta[tokens[0]] = " ".join(tokens[2:])
    graph = read_graph(str(root / "graph.txt"))
    query_lines = [t for _, t in _content_lines((root / "query.txt").read_text(encoding="utf-8"))]
    fields = {
        "generator": meta.get("generator", "unknown"),
        "parameters": {k[len("param."):]: v for k, v in meta.items() if k.startswith("param.")},
        "source_digest": meta.get("source_digest", ""),
        "graph": graph,
        "grammar_preset": meta["preset"],
        "mode": meta.get("mode", "on_demand"),
    }
    if fields["mode"] == "on_demand":
        fields["query"] = tuple(query_lines[0][:2])
    else:
        found = {line[0]: tuple(line[1:]) for line in query_lines}
        fields["pair_filter"] = (found.get("sources", ()), found.get("targets", ()))
    truth_path = root / "truth.txt"
    if truth_path.is_file():
        lines = [t for _, t in _content_lines(truth_path.read_text(encoding="utf-8"))]
        if lines and lines[0] in (["true"], ["false"]):
            fields["ground_truth"] = lines[0] == ["true"]
        else:
            fields["ground_truth"] = tuple((a, b) for a, b in lines)
    decode_path = root / "decode.txt"
    if decode_path.is_file():
        fields["decode"] = {a: b for _, (a, b) in _content_lines(decode_path.read_text(encoding="utf-8"))}
    return ReductionInstance(**fields)
