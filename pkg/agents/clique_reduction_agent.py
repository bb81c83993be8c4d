"""
Graph gadgets encoding triangle, k-cycle and 3k-clique detection as
CFL-reachability queries.

The triangle family shares one skeleton: a chain ``u -> a1 -> ... -> an`` of
opening labels, the source edges crossing ``A -> B -> C -> A'``, and a chain
``an' -> ... -> a1'`` of closing labels. A word is accepted exactly when the
walk leaves ``A`` at ``a_i`` and re-enters ``A'`` at ``a_i'``.
"""

import itertools
import logging
from typing import Callable, Dict, List, Optional, Sequence, Set, Tuple

from models.graph_models import LabeledGraph, SourceGraph
from models.reduction_models import CliqueGadgetParams, ReductionInstance
from utils.errors import GuardrailExceeded, ReductionInputError, UnknownPresetError
from utils.graph_io import source_digest

logger = logging.getLogger(__name__)

Step = Tuple[str, bool]  # (label, forward)


def _layer_edges(source: SourceGraph, layers: Sequence[Sequence[str]]) -> List[List[Tuple[str, str]]]:
    """Edges from layer i to layer i+1 (mod k); undirected inputs may list either orientation."""
    k = len(layers)
    where = {v: i for i, layer in enumerate(layers) for v in layer}
    crossing: List[List[Tuple[str, str]]] = [[] for _ in range(k)]
    for u, v in source.edges:
        if u not in where or v not in where:
            raise ReductionInputError(f"edge ({u}, {v}) leaves the partition")
        iu, iv = where[u], where[v]
        if iv == (iu + 1) % k:
            crossing[iu].append((u, v))
        elif not source.directed and iu == (iv + 1) % k:
            crossing[iv].append((v, u))
        else:
            kind = "tripartite" if k == 3 and not source.directed else f"{k}-partite with layer order"
            raise ReductionInputError(f"edge ({u}, {v}) violates the {kind} structure")
    return crossing


def _skeleton(source: SourceGraph, crossing_labels: Sequence[str], chain_open: str, chain_close: str,
              with_entry: bool = True, middle_word: Optional[str] = None) -> Tuple[LabeledGraph, Dict[str, str], str]:
    """
    Build the chain/crossing/chain graph.

    Returns the graph, the map ``a -> a'`` and the name of the entry vertex ``u``
    (``a1`` itself when ``with_entry`` is false).
    """
    layers = source.parts
    if len(layers) != len(crossing_labels):
        raise ReductionInputError(f"expected a {len(crossing_labels)}-part partition, got {len(layers)} parts")
    first = list(layers[0])
    if not first:
        raise ReductionInputError("first part is empty")
    crossing = _layer_edges(source, layers)

    graph = LabeledGraph(source.vertices)
    entry = graph.fresh_name("u") if with_entry else first[0]
    primes: Dict[str, str] = {}
    for a in first:
        primes[a] = graph.fresh_name(f"{a}'")
        graph.add_vertex(primes[a])
    chain = ([entry] if with_entry else []) + first
    graph.add_path(chain, [chain_open] * (len(chain) - 1))

    last = len(layers) - 1
    for i, edges in enumerate(crossing):
        for x, y in edges:
            dst = primes[y] if i == last else y
            if middle_word is not None and i == 1:
                interior = [f"s:{x}:{y}:{j}" for j in range(1, len(middle_word))]
                graph.add_path([x] + interior + [dst], list(middle_word))
            else:
                graph.add_edge(x, dst, crossing_labels[i])
    back = [primes[a] for a in reversed(first)]
    graph.add_path(back, [chain_close] * (len(back) - 1))
    return graph, primes, entry


def _crossing_labels(k: int, open_: str, close: str) -> List[str]:
    return [open_] * (k // 2) + [close] * (k - k // 2)


def _target_labels(target: str) -> Tuple[str, str, str]:
    """(preset, open label, close label) for a k-cycle / variant target."""
    name, _, param = target.partition(":")
    if target == "dyck:1":
        return "dyck:1", "(", ")"
    if name in ("anbn", "eqcount"):
        return name, "a", "b"
    if name == "palindrome":
        alphabet = list(dict.fromkeys(param or "ab"))
        if len(alphabet) < 2:
            raise ReductionInputError("palindrome target needs two letters")
        return f"palindrome:{''.join(alphabet)}", alphabet[0], alphabet[1]
    raise UnknownPresetError(f"unsupported reduction target {target!r}")


def triangle_to_dyck1(g3: SourceGraph) -> ReductionInstance:
    """
    Triangle detection in a tripartite graph as one Dyck-1 on-demand query.

    Args:
        g3 (SourceGraph): Parts ``A, B, C`` with edges only between different parts

    Returns:
        ReductionInstance: Query ``(u, a1')``; true iff ``g3`` has a triangle
    """
    if len(g3.parts) != 3:
        raise ReductionInputError("input is not tripartite (need exactly three parts)")
    graph, primes, entry = _skeleton(g3, ["(", ")", ")"], "(", ")")
    a1 = g3.parts[0][0]
    return ReductionInstance(generator="triangle-dyck1", source_digest=source_digest(g3), graph=graph,
                             grammar_preset="dyck:1", query=(entry, primes[a1]))


def kcycle_on_demand(g: SourceGraph, k: int, target: str = "dyck:1") -> ReductionInstance:
    """
    k-cycle detection in a layered k-partite digraph (odd ``k``): the three-edge
    crossing of the triangle skeleton becomes a ``k``-edge crossing with
    ``k // 2`` opening labels followed by closing ones.
    """
    if k < 3 or k % 2 == 0:
        raise ReductionInputError(f"k must be odd and >= 3, got {k}")
    if len(g.parts) != k:
        raise ReductionInputError(f"input needs {k} layers, got {len(g.parts)}")
    preset_name, open_, close = _target_labels(target)
    palindrome = preset_name.startswith("palindrome")
    labels = [close] * k if palindrome else _crossing_labels(k, open_, close)
    graph, primes, entry = _skeleton(g, labels, open_, open_ if palindrome else close)
    a1 = g.parts[0][0]
    query_end = primes[a1]
    if palindrome:
        sink = graph.fresh_name("v")
        graph.add_edge(primes[a1], sink, open_)
        query_end = sink
    return ReductionInstance(generator="kcycle", parameters={"k": str(k), "target": target},
                             source_digest=source_digest(g), graph=graph, grammar_preset=preset_name,
                             query=(entry, query_end))


def variant_reductions(g3: SourceGraph, target: str) -> ReductionInstance:
    """
    The triangle skeleton relabeled for ``a^i s b^i``, equal-count and odd-palindrome languages.

    ``anbn_mid:<s>`` replaces every B-C edge with a fresh path spelling ``s`` (``ab`` when
    ``s`` is empty) and queries ``(a1, a1')``; ``eqcount`` reuses the Dyck-1 labeling over
    ``a``/``b``; ``palindrome`` uses the first letter on both chains, the second letter on
    all crossings, and an extra sink ``v``.
    """
    if len(g3.parts) != 3:
        raise ReductionInputError("input is not tripartite (need exactly three parts)")
    name, _, param = target.partition(":")
    a1 = g3.parts[0][0]
    digest = source_digest(g3)
    if name == "anbn_mid":
        middle = param or "ab"
        graph, primes, entry = _skeleton(g3, ["a", "", "b"], "a", "b", with_entry=False, middle_word=middle)
        return ReductionInstance(generator="variant", parameters={"target": target}, source_digest=digest,
                                 graph=graph, grammar_preset=f"anbn_mid:{middle}", query=(entry, primes[a1]))
    if name == "eqcount":
        graph, primes, entry = _skeleton(g3, ["a", "b", "b"], "a", "b")
        return ReductionInstance(generator="variant", parameters={"target": target}, source_digest=digest,
                                 graph=graph, grammar_preset="eqcount", query=(entry, primes[a1]))
    if name == "palindrome":
        preset_name, outer, inner = _target_labels(target)
        graph, primes, entry = _skeleton(g3, [inner] * 3, outer, outer)
        sink = graph.fresh_name("v")
        graph.add_edge(primes[a1], sink, outer)
        return ReductionInstance(generator="variant", parameters={"target": target}, source_digest=digest,
                                 graph=graph, grammar_preset=preset_name, query=(entry, sink))
    raise UnknownPresetError(f"unknown variant target {target!r}")


# -- clique gadgets -------------------------------------------------------------------

def bit_width(n: int) -> int:
    """``ceil(log2(n + 1))``: enough bits for every vertex id ``1..n``."""
    return max(1, n.bit_length())


def binary_line(vid: int, bits: int) -> List[str]:
    """Vertex expansion, most significant bit first: 0 -> ``lb``, 1 -> ``lp``."""
    return ["lp" if (vid >> i) & 1 else "lb" for i in reversed(range(bits))]


def binary_line_reversed(vid: int, bits: int) -> List[str]:
    """Mirror image closing :func:`binary_line`: least significant bit first, 0 -> ``rb``, 1 -> ``rp``."""
    return ["rp" if (vid >> i) & 1 else "rb" for i in range(bits)]


def unary_line(vid: int, weight: int = 1) -> List[str]:
    """``alpha^(vid * weight)``: one pointer level per unit of the digit ``vid`` at place ``weight``."""
    return ["alpha"] * (vid * weight)


def unary_line_reversed(vid: int, weight: int = 1) -> List[str]:
    """``beta^(vid * weight)``: the loads that take back :func:`unary_line`."""
    return ["beta"] * (vid * weight)


def clique_code(t: Sequence[int], n: int) -> int:
    """The clique's ids as base-``(n + 1)`` digits, smallest id in the lowest place."""
    return sum(v * (n + 1) ** j for j, v in enumerate(t))


def place_values(n: int, k: int) -> Dict[str, int]:
    """
    Pointer levels per unit of clique code in each stage of the points-to gadget.

    Codes stay below ``B = (n + 1)^k``. The second clique is counted in units of 1,
    the third in units of ``B`` and the first in units of ``B^2``, so a walk that
    ends at depth one has balanced every stage separately.
    """
    bound = (n + 1) ** k
    return {"CL1": bound ** 2, "CNG1": 1, "CL2": 1, "CNG2": bound, "CL3": bound, "CNG3": bound ** 2}


def _forward(labels: Sequence[str]) -> List[Step]:
    return [(label, True) for label in labels]


def _line_nodes(start: str, end: str, prefix: str, length: int) -> List[str]:
    return [start] + [f"{prefix}:{i}" for i in range(1, length)] + [end]


def _add_line(graph: LabeledGraph, start: str, end: str, prefix: str, steps: Sequence[Step]) -> None:
    nodes = _line_nodes(start, end, prefix, len(steps))
    for (label, forward), x, y in zip(steps, nodes, nodes[1:]):
        if forward:
            graph.add_edge(x, y, label)
        else:
            graph.add_edge(y, x, label)


def _boundary(prefix: str, tag: str, j: int, k: int, end: str) -> str:
    return end if j == k else f"{prefix}:{tag}:c{j}"


def _add_neighbor_gadget(graph: LabeledGraph, prefix: str, tag: str, k: int, neighbors: Sequence[int],
                         encode: Callable[[int], List[Step]], end: str) -> None:
    """``k`` copies in series; copy ``j`` holds one line per common neighbor, all sharing its boundary nodes."""
    for j in range(1, k + 1):
        src, dst = _boundary(prefix, tag, j - 1, k, end), _boundary(prefix, tag, j, k, end)
        for w in neighbors:
            _add_line(graph, src, dst, f"{prefix}:{tag}:c{j}:w{w}", encode(w))


def _cliques_and_neighbors(g: SourceGraph, k: int) -> Tuple[List[Tuple[int, ...]], List[Tuple[int, ...]]]:
    ids = {v: i + 1 for i, v in enumerate(g.vertices)}
    adj: Dict[int, Set[int]] = {ids[v]: {ids[w] for w in ws} for v, ws in g.adjacency().items()}
    everyone = set(range(1, g.n + 1))
    cliques, neighbors = [], []
    for group in itertools.combinations(range(1, g.n + 1), k):
        if all(b in adj[a] for a, b in itertools.combinations(group, 2)):
            common = set(everyone)
            for v in group:
                common &= adj[v]
            cliques.append(group)
            neighbors.append(tuple(sorted(common)))
    return cliques, neighbors


def _check_k(g: SourceGraph, k: int) -> None:
    if k < 1 or 3 * k > g.n:
        raise ReductionInputError(f"k must satisfy 1 <= k and 3k <= n (k={k}, n={g.n})")
    if g.directed:
        raise ReductionInputError("clique reductions take an undirected graph")


def kclique_to_dyck2(g: SourceGraph, k: int) -> ReductionInstance:
    """
    3k-clique detection as one Dyck-2 on-demand query ``(p, q)``.

    Every k-clique ``t`` gets a clique list and a clique-neighbor gadget in each of
    three stages (joined at ``A`` and ``B``). A p-to-q walk spells a Dyck-2 word iff it
    picks cliques ``t1, t2, t3`` with each one inside the common neighborhood of the
    previous (and ``t1`` inside that of ``t3``).
    """
    _check_k(g, k)
    bits = bit_width(g.n)
    cliques, neighbors = _cliques_and_neighbors(g, k)
    graph = LabeledGraph(["p", "q", "A", "B"])

    def fwd(v: int) -> List[Step]:
        return _forward(binary_line(v, bits))

    def rev(v: int) -> List[Step]:
        return _forward(binary_line_reversed(v, bits))

    for idx, (t, nt) in enumerate(zip(cliques, neighbors)):
        tag = f"t{idx}"
        listing = [s for v in t for s in fwd(v)]
        closing = [s for v in reversed(t) for s in rev(v)]
        graph.add_edge("p", f"CL1:{tag}:s", "lb")
        _add_line(graph, f"CL1:{tag}:s", f"CNG1:{tag}:c0", f"CL1:{tag}", listing)
        _add_neighbor_gadget(graph, "CNG1", tag, k, nt, fwd, "A")
        _add_line(graph, "A", f"CNG2:{tag}:c0", f"CL2:{tag}", closing)
        _add_neighbor_gadget(graph, "CNG2", tag, k, nt, fwd, "B")
        _add_line(graph, "B", f"CNG3:{tag}:c0", f"CL3:{tag}", closing)
        _add_neighbor_gadget(graph, "CNG3", tag, k, nt, rev, f"END:{tag}")
        graph.add_edge(f"END:{tag}", "q", "rb")

    params = CliqueGadgetParams(k=k, bits=bits, vertex_names=g.vertices, cliques=tuple(cliques),
                                neighbors=tuple(neighbors), edge_bound_constant=6 * k + 2)
    instance = ReductionInstance(generator="kclique-dyck2", parameters={"k": str(k)},
                                 source_digest=source_digest(g), graph=graph, grammar_preset="dyck:2",
                                 query=("p", "q"), gadget=params)
    if not check_clique_neighbor_gadgets(instance):
        raise AssertionError("a clique-neighbor gadget encodes a vertex of its own clique")
    logger.debug("dyck-2 gadget: %d cliques, n=%d m=%d", len(cliques), graph.n, graph.m)
    return instance


MAX_POINTS_TO_EDGES = 400_000

PUSH_STAGES = ("CNG1", "CNG2")
COUNTING_STAGES = (("CNG1", "A"), ("CNG2", "B"), ("CNG3", "END"))


def _ladder_name(stage: str, tag: str, j: int, k: int) -> str:
    """Copies before the last are private to their clique; the last copy of each stage is shared."""
    return f"{stage}:lad{j}" if j == k else f"{stage}:{tag}:lad{j}"


def _ladder(graph: LabeledGraph, name: str, labels: Sequence[str]) -> List[str]:
    rungs = [f"{name}:{i}" for i in range(len(labels) + 1)]
    if not graph.has_vertex(rungs[0]):
        graph.add_path(rungs, list(labels))
    return rungs


def _add_counting_gadget(graph: LabeledGraph, stage: str, tag: str, k: int, neighbors: Sequence[int],
                         n: int, unit: int, end: str) -> None:
    """
    ``k`` copies in series. Copy ``j`` is a ladder of ``n`` digit steps at place
    ``unit * (n + 1)^(j - 1)``; neighbor ``w`` enters it ``w`` steps before the top.
    """
    for j in range(1, k + 1):
        weight = unit * (n + 1) ** (j - 1)
        line = unary_line(n, weight) if stage in PUSH_STAGES else unary_line_reversed(n, weight)
        rungs = _ladder(graph, _ladder_name(stage, tag, j, k), line)
        graph.add_edge(rungs[-1], _boundary(stage, tag, j, k, end), "e")
        for w in neighbors:
            graph.add_edge(f"{stage}:{tag}:c{j - 1}", rungs[(n - w) * weight], "e")


def points_to_size(n: int, k: int, clique_count: int) -> int:
    """Upper bound on the ladder edges :func:`apa_clique_gadget` lays down."""
    scale = place_values(n, k)
    bound = (n + 1) ** k
    total = 1 + scale["CL1"] * bound + scale["CL2"] * bound + scale["CL3"] * bound
    for stage, _ in COUNTING_STAGES:
        for j in range(1, k + 1):
            copies = 1 if j == k else clique_count
            total += copies * n * scale[stage] * (n + 1) ** (j - 1)
    return total


def apa_clique_gadget(g: SourceGraph, k: int) -> ReductionInstance:
    """
    3k-clique detection as the points-to query ``T(p, q)``.

    The walk from ``p`` keeps one pointer-depth counter: ``alpha`` edges push a
    level and ``beta`` loads pop one. Stage one pushes the first clique's code
    (:func:`clique_code`) and its neighbor gadget pushes a second clique digit by
    digit; stage two pops a listed clique and pushes a third, stage three pops it
    and then pops the first clique through the neighbors of the third. The stages
    count in different place values (:func:`place_values`), so ``q`` points to ``p``
    only when every push is matched by a pop of the same code. The store into
    ``CL3:<tag>:x`` followed by the backward ``alpha`` into the last gadget acts as
    a copy edge: ``x`` points to nothing but that gadget's entry.

    Args:
        g (SourceGraph): Undirected source graph
        k (int): Clique block size, ``3k <= n``

    Returns:
        ReductionInstance: Query ``(p, q)`` against the ``apa`` preset
    """
    _check_k(g, k)
    cliques, neighbors = _cliques_and_neighbors(g, k)
    n = g.n
    size = points_to_size(n, k, len(cliques))
    if size > MAX_POINTS_TO_EDGES:
        raise GuardrailExceeded(f"points-to gadget would need about {size} edges (limit {MAX_POINTS_TO_EDGES})")
    scale = place_values(n, k)
    graph = LabeledGraph(["p", "q", "A", "B", "END"])
    graph.add_edge("END", "q", "beta")
    codes = [clique_code(t, n) for t in cliques]
    if codes:
        top = max(codes)
        # one extra level for the load into q
        cl1 = _ladder(graph, "CL1:list", unary_line(top, scale["CL1"]) + ["alpha"])
        cl2 = _ladder(graph, "CL2:list", unary_line_reversed(top, scale["CL2"]))
        cl3 = _ladder(graph, "CL3:list", unary_line_reversed(top, scale["CL3"]))
        graph.add_edge("p", cl1[0], "alpha")
        graph.add_edge("A", cl2[0], "e")
        graph.add_edge("B", cl3[0], "e")
        for idx, (code, nt) in enumerate(zip(codes, neighbors)):
            tag = f"t{idx}"
            graph.add_edge(cl1[1 + scale["CL1"] * code], f"CNG1:{tag}:c0", "e")
            graph.add_edge(cl2[scale["CL2"] * code], f"CNG2:{tag}:c0", "e")
            graph.add_edge(cl3[scale["CL3"] * code], f"CL3:{tag}:x", "gamma")
            graph.add_edge(f"CNG3:{tag}:c0", f"CL3:{tag}:x", "alpha")
            if not nt:
                continue
            for stage, end in COUNTING_STAGES:
                _add_counting_gadget(graph, stage, tag, k, nt, n, scale[stage], end)

    params = CliqueGadgetParams(k=k, bits=bit_width(n), encoding="unary", open_labels=("alpha", "alpha"),
                                close_labels=("beta", "beta"), vertex_names=g.vertices,
                                cliques=tuple(cliques), neighbors=tuple(neighbors), edge_bound_constant=24)
    instance = ReductionInstance(generator="apa-clique", parameters={"k": str(k)},
                                 source_digest=source_digest(g), graph=graph, grammar_preset="apa",
                                 query=("p", "q"), gadget=params)
    if not check_clique_neighbor_gadgets(instance):
        raise AssertionError("a clique-neighbor gadget encodes a vertex of its own clique")
    logger.debug("points-to gadget: %d cliques, n=%d m=%d", len(cliques), graph.n, graph.m)
    return instance


# -- structural checks and planted routes ----------------------------------------------

def _decode(labels: List[Tuple[str, bool]], reversed_line: bool) -> int:
    bits = [label in ("lp", "rp") for label, _ in labels]
    if reversed_line:
        bits = bits[::-1]
    value = 0
    for bit in bits:
        value = 2 * value + int(bit)
    return value


def _stage_end(stage: str, tag: str) -> str:
    return {"CNG1": "A", "CNG2": "B"}.get(stage, f"END:{tag}")


def _line_owners(graph: LabeledGraph) -> Dict[Tuple[str, str, int], Set[int]]:
    """``(stage, tag, copy) -> neighbor ids`` read off interior node names ``stage:tag:c<j>:w<id>:<i>``."""
    owners: Dict[Tuple[str, str, int], Set[int]] = {}
    for name in graph.vertices:
        if name.startswith("CNG"):
            parts = name.split(":")
            if len(parts) == 5:
                stage, tag, copy, owner, _ = parts
                owners.setdefault((stage, tag, int(copy[1:])), set()).add(int(owner[1:]))
    return owners


def _line_steps(graph: LabeledGraph, stage: str, tag: str, j: int, k: int, w: int) -> List[Step]:
    base = f"{stage}:{tag}:c{j}:w{w}"
    length = 1
    while graph.has_vertex(f"{base}:{length}"):
        length += 1
    end = _stage_end(stage, tag)
    nodes = _line_nodes(_boundary(stage, tag, j - 1, k, end), _boundary(stage, tag, j, k, end), base, length)
    return route_steps(graph, nodes)


def _ladder_entries(graph: LabeledGraph, params: CliqueGadgetParams, stage: str, tag: str, j: int) -> List[int]:
    """Digits read off the entry edges of copy ``j``; an entry off the digit grid reads as ``-1``."""
    src = f"{stage}:{tag}:c{j - 1}"
    if not graph.has_vertex(src):
        return []
    n = len(params.vertex_names)
    weight = place_values(n, params.k)[stage] * (n + 1) ** (j - 1)
    prefix = _ladder_name(stage, tag, j, params.k) + ":"
    digits = []
    for dst, label in graph.out_edges(graph.vertex_id(src)):
        rung = graph.name_of(dst)
        if label != "e" or not rung.startswith(prefix):
            continue
        offset = n * weight - int(rung[len(prefix):])
        digits.append(offset // weight if offset % weight == 0 else -1)
    return digits


def check_clique_neighbor_gadgets(instance: ReductionInstance) -> bool:
    """
    Every line of every clique-neighbor gadget decodes to a vertex id outside its own
    clique, and each copy holds exactly the clique's common neighbors.
    """
    params = instance.gadget
    if params is None:
        return True
    graph = instance.graph
    owners = _line_owners(graph) if params.encoding == "binary" else {}
    for idx, (t, nt) in enumerate(zip(params.cliques, params.neighbors)):
        tag = f"t{idx}"
        if set(nt) & set(t):
            return False
        for stage in ("CNG1", "CNG2", "CNG3"):
            for j in range(1, params.k + 1):
                if params.encoding == "unary":
                    if sorted(_ladder_entries(graph, params, stage, tag, j)) != sorted(nt):
                        return False
                    continue
                ids = sorted(owners.get((stage, tag, j), ()))
                if ids != sorted(nt):
                    return False
                for w in ids:
                    steps = _line_steps(graph, stage, tag, j, params.k, w)
                    decoded = _decode(steps, reversed_line=stage == "CNG3")
                    if decoded != w or decoded in t:
                        return False
    return True


def route_steps(graph: LabeledGraph, route: Sequence[str]) -> List[Tuple[str, bool]]:
    """Labels along consecutive route nodes; an edge traversed against its direction is marked backward."""
    steps = []
    for x, y in zip(route, route[1:]):
        xi, yi = graph.vertex_id(x), graph.vertex_id(y)
        forward = [a for w, a in graph.out_edges(xi) if w == yi]
        if forward:
            steps.append((forward[0], True))
            continue
        backward = [a for w, a in graph.out_edges(yi) if w == xi]
        if not backward:
            raise ReductionInputError(f"route has no edge between {x} and {y}")
        steps.append((backward[0], False))
    return steps


def route_word(graph: LabeledGraph, route: Sequence[str]) -> List[str]:
    """Path word of a route, backward edges written as ``<label>_bar``."""
    return [label if forward else f"{label}_bar" for label, forward in route_steps(graph, route)]


def _points_to_route(params: CliqueGadgetParams, tags: Sequence[str],
                     blocks: Sequence[Tuple[int, ...]]) -> List[str]:
    n, k = len(params.vertex_names), params.k
    scale = place_values(n, k)
    a, b, c = tags
    t1, t2, t3 = blocks

    def listing(stage: str, t: Sequence[int], extra: int = 0) -> List[str]:
        top = extra + scale[stage] * clique_code(t, n)
        return [f"{stage}:list:{i}" for i in range(top + 1)]

    def counting(stage: str, tag: str, chosen: Sequence[int], end: str) -> List[str]:
        route = [f"{stage}:{tag}:c0"]
        for j, w in enumerate(chosen, start=1):
            weight = scale[stage] * (n + 1) ** (j - 1)
            name = _ladder_name(stage, tag, j, k)
            route += [f"{name}:{i}" for i in range((n - w) * weight, n * weight + 1)]
            route.append(_boundary(stage, tag, j, k, end))
        return route

    route = ["p"] + listing("CL1", t1, extra=1) + counting("CNG1", a, t2, "A")
    route += listing("CL2", t2) + counting("CNG2", b, t3, "B")
    route += listing("CL3", t3) + [f"CL3:{c}:x"] + counting("CNG3", c, t1, "END")
    return route + ["q"]


def planted_route(instance: ReductionInstance, clique: Sequence[str]) -> List[str]:
    """
    Node sequence of the p-to-q walk selected by a 3k-clique of the source graph.

    The clique's ids are sorted and split into ``t1, t2, t3`` (k each); the walk lists
    ``t1``, crosses to ``t2`` through ``t1``'s neighbor gadget, and so on back to ``t1``.
    """
    params = instance.gadget
    if params is None:
        raise ReductionInputError("instance carries no clique gadget")
    k = params.k
    ids = sorted(params.vertex_names.index(v) + 1 for v in clique)
    if len(ids) != 3 * k:
        raise ReductionInputError(f"expected {3 * k} clique vertices, got {len(ids)}")
    t1, t2, t3 = (tuple(ids[i * k:(i + 1) * k]) for i in range(3))
    index = {t: i for i, t in enumerate(params.cliques)}
    tags = [f"t{index[t]}" for t in (t1, t2, t3)]
    if params.encoding == "unary":
        return _points_to_route(params, tags, (t1, t2, t3))

    def gadget_route(stage: str, tag: str, chosen: Sequence[int], end: str) -> List[str]:
        route = [f"{stage}:{tag}:c0"]
        for j, w in enumerate(chosen, start=1):
            nodes = _line_nodes(route[-1], _boundary(stage, tag, j, k, end), f"{stage}:{tag}:c{j}:w{w}",
                                params.bits)
            route += nodes[1:]
        return route

    def clique_line(stage: str, tag: str, t: Sequence[int], start: str, end: str) -> List[str]:
        return _line_nodes(start, end, f"{stage}:{tag}", params.bits * len(t))

    a, b, c = tags
    route = ["p"]
    route += clique_line("CL1", a, t1, f"CL1:{a}:s", f"CNG1:{a}:c0")
    route += gadget_route("CNG1", a, t2, "A")[1:]
    route += clique_line("CL2", b, t2, "A", f"CNG2:{b}:c0")[1:]
    route += gadget_route("CNG2", b, t3, "B")[1:]
    route += clique_line("CL3", c, t3, "B", f"CNG3:{c}:c0")[1:]
    route += gadget_route("CNG3", c, tuple(reversed(t1)), f"END:{c}")[1:]
    route += ["q"]
    return route
