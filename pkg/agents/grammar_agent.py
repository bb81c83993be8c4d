"""
Grammar presets, normalization (proper form, CNF) and classification.

Normalization follows the textbook order: prune useless symbols, isolate the
start symbol, remove epsilon rules, remove unit rules, then split long bodies.
Generated symbols are named ``<base>#<i>`` by :class:`FreshNames`, so the
output of every step is reproducible byte-for-byte.
"""

import itertools
import logging
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from models.grammar_models import (
    ClassificationReport,
    CnfGrammar,
    Grammar,
    Production,
    Symbol,
)
from utils.errors import PresetParameterError, UnknownPresetError
from utils.grammar_dsl import parse_grammar

logger = logging.getLogger(__name__)

Word = Tuple[str, ...]

# Bracket pairs of dyck:k for k >= 2; the first two match the clique gadget labels.
_BRACKETS = [("lp", "rp"), ("lb", "rb")]

GEQ_TEXT = """\
S  -> T1 T2
T1 -> eps | 'a' T1
T2 -> eps | 'a' T2 'b'
"""

EQCOUNT_TEXT = """\
S -> 'a' S 'b' S | 'b' S 'a' S | 'a' 'b' | 'b' 'a'
S -> 'a' 'a' 'b' 'b' | 'a' 'b' 'a' 'b' | 'a' 'b' 'b' 'a' | 'b' 'a' 'a' 'b' | 'b' 'a' 'b' 'a' | 'b' 'b' 'a' 'a'
S -> 'a' S 'b' | 'b' S 'a' | 'a' 'b' S | 'b' 'a' S
"""

APA_TERMINALS = ("alpha", "e", "beta", "gamma")


class FreshNames:
    """Deterministic ``base#i`` names that avoid every name already taken."""

    def __init__(self, taken: Iterable[str]):
        self._taken: Set[str] = set(taken)

    def __call__(self, base: str) -> str:
        for i in itertools.count(1):
            name = f"{base}#{i}"
            if name not in self._taken:
                self._taken.add(name)
                return name
        raise AssertionError("unreachable")


def bar(label: str) -> str:
    """Swap the bar of a terminal or nonterminal name (``x`` <-> ``x_bar``)."""
    return label[:-4] if label.endswith("_bar") else label + "_bar"


def _bracket_pairs(k: int) -> List[Tuple[str, str]]:
    if k == 1:
        return [("(", ")")]
    return (_BRACKETS + [(f"l{i}", f"r{i}") for i in range(3, k + 1)])[:k]


def dyck_labels(k: int) -> List[Tuple[str, str]]:
    """Open/close terminal names used by the ``dyck:k`` presets."""
    return _bracket_pairs(k)


def _dyck(k: int, concatenation: bool) -> Grammar:
    s = Symbol.nt("S")
    rules = [Production(head="S")]
    if concatenation:
        rules.append(Production(head="S", body=(s, s)))
    for open_, close in _bracket_pairs(k):
        rules.append(Production(head="S", body=(Symbol.t(open_), s, Symbol.t(close))))
    return Grammar.build("S", rules)


def _apa() -> Grammar:
    """``T <- alpha | T e | T T beta | T gamma Tbar`` and its mechanically mirrored ``Tbar``."""
    t, tb = Symbol.nt("T"), Symbol.nt("T_bar")
    forward = [
        (Symbol.t("alpha"),),
        (t, Symbol.t("e")),
        (t, t, Symbol.t("beta")),
        (t, Symbol.t("gamma"), tb),
    ]
    rules = [Production(head="T", body=body) for body in forward]
    for body in forward:
        mirrored = tuple(Symbol(kind=s.kind, name=bar(s.name)) for s in reversed(body))
        rules.append(Production(head="T_bar", body=mirrored))
    return Grammar.build("T", rules)


def _parse_k(param: Optional[str], name: str) -> int:
    try:
        k = int(param) if param is not None else 1
    except ValueError:
        raise PresetParameterError(f"{name}: k must be an integer, got {param!r}") from None
    if k < 1:
        raise PresetParameterError(f"{name}: k must be >= 1")
    return k


def preset(key: str) -> Grammar:
    """
    Build a catalogued grammar.

    Args:
        key (str): ``dyck:<k>``, ``dyck_nested:<k>``, ``geq``, ``anbn``, ``anbn_mid:<s>``,
            ``eqcount``, ``palindrome:<alphabet>`` or ``apa``

    Returns:
        Grammar: The grammar, with ``name`` set to ``key``

    Raises:
        UnknownPresetError: Unknown preset name
        PresetParameterError: Malformed parameter
    """
    name, sep, param = key.partition(":")
    param_or_none = param if sep else None
    if name == "dyck":
        g = _dyck(_parse_k(param_or_none, name), concatenation=True)
    elif name == "dyck_nested":
        g = _dyck(_parse_k(param_or_none, name), concatenation=False)
    elif name == "geq":
        g = parse_grammar(GEQ_TEXT)
    elif name == "anbn":
        g = parse_grammar("S -> eps | 'a' S 'b'\n")
    elif name == "anbn_mid":
        middle = param or ""
        if any(c.isspace() or c in "'|" for c in middle):
            raise PresetParameterError(f"anbn_mid: {middle!r} is not a terminal string")
        s = Symbol.nt("S")
        rules = [
            Production(head="S", body=(Symbol.t("a"), s, Symbol.t("b"))),
            Production(head="S", body=tuple(Symbol.t(c) for c in middle)),
        ]
        g = Grammar.build("S", rules)
    elif name == "eqcount":
        g = parse_grammar(EQCOUNT_TEXT)
    elif name == "palindrome":
        alphabet = list(dict.fromkeys(param or "ab"))
        if len(alphabet) < 2 or any(c.isspace() or c in "'|" for c in alphabet):
            raise PresetParameterError(f"palindrome: need at least 2 distinct letters, got {param!r}")
        s = Symbol.nt("S")
        rules = [Production(head="S", body=(Symbol.t(c),)) for c in alphabet]
        rules += [Production(head="S", body=(Symbol.t(c), s, Symbol.t(c))) for c in alphabet]
        g = Grammar.build("S", rules)
    elif name == "apa":
        g = _apa()
    else:
        raise UnknownPresetError(f"unknown grammar preset {key!r}")
    return g.model_copy(update={"name": key})


def load_grammar(source: str) -> Grammar:
    """Resolve a CLI ``--grammar`` argument: an existing file path, otherwise a preset name."""
    path = Path(source)
    if path.is_file():
        return parse_grammar(path.read_text(encoding="utf-8")).model_copy(update={"name": source})
    return preset(source)


# -- normalization ---------------------------------------------------------------

def _productive(rules: Sequence[Production]) -> Set[str]:
    productive: Set[str] = set()
    changed = True
    while changed:
        changed = False
        for p in rules:
            if p.head not in productive and all(s.is_terminal or s.name in productive for s in p.body):
                productive.add(p.head)
                changed = True
    return productive


def _reachable(start: str, rules: Sequence[Production]) -> Set[str]:
    seen = {start}
    stack = [start]
    while stack:
        head = stack.pop()
        for p in rules:
            if p.head == head:
                for s in p.body:
                    if not s.is_terminal and s.name not in seen:
                        seen.add(s.name)
                        stack.append(s.name)
    return seen


def _nullable(rules: Sequence[Production]) -> Set[str]:
    nullable: Set[str] = set()
    changed = True
    while changed:
        changed = False
        for p in rules:
            if p.head not in nullable and all(not s.is_terminal and s.name in nullable for s in p.body):
                nullable.add(p.head)
                changed = True
    return nullable


def _prune(start: str, rules: Sequence[Production]) -> List[Production]:
    productive = _productive(rules)
    rules = [p for p in rules if p.head in productive
             and all(s.is_terminal or s.name in productive for s in p.body)]
    reachable = _reachable(start, rules)
    return [p for p in rules if p.head in reachable]


def _canonical(start: str, rules: Iterable[Production]) -> List[Production]:
    def key(p: Production):
        return (p.head != start, p.head, len(p.body), [(s.kind, s.name) for s in p.body])
    return sorted(dict.fromkeys(rules), key=key)


def _empty_language(g: Grammar) -> Grammar:
    return Grammar.build(g.start, [], name=g.name)


def to_proper(g: Grammar) -> Grammar:
    """
    Weakly equivalent proper grammar: no epsilon rules except ``S -> eps``,
    no unit rules, every nonterminal productive and reachable.

    An empty language yields the degenerate grammar with no productions.
    """
    start = g.start
    if start not in _productive(g.productions):
        logger.debug("start symbol %s is unproductive; language is empty", start)
        return _empty_language(g)
    rules = _prune(start, g.productions)
    fresh = FreshNames(list(g.nonterminals) + list(g.terminals))

    if any(s.name == start for p in rules for s in p.body if not s.is_terminal):
        new_start = fresh(start)
        rules.append(Production(head=new_start, body=(Symbol.nt(start),)))
        start = new_start

    nullable = _nullable(rules)
    expanded: List[Production] = []
    for p in rules:
        optional = [i for i, s in enumerate(p.body) if not s.is_terminal and s.name in nullable]
        for drop_count in range(len(optional) + 1):
            for dropped in itertools.combinations(optional, drop_count):
                body = tuple(s for i, s in enumerate(p.body) if i not in dropped)
                if body:
                    expanded.append(Production(head=p.head, body=body))
    if start in nullable:
        expanded.append(Production(head=start))

    def is_unit(p: Production) -> bool:
        return len(p.body) == 1 and not p.body[0].is_terminal

    heads = list(dict.fromkeys(p.head for p in expanded))
    unit_edges: Dict[str, Set[str]] = {h: set() for h in heads}
    for p in expanded:
        if is_unit(p):
            unit_edges[p.head].add(p.body[0].name)
    result: List[Production] = []
    for head in heads:
        closure = {head}
        stack = [head]
        while stack:
            for nxt in unit_edges.get(stack.pop(), ()):
                if nxt not in closure:
                    closure.add(nxt)
                    stack.append(nxt)
        for p in expanded:
            if p.head in closure and not is_unit(p):
                result.append(Production(head=head, body=p.body))

    result = _canonical(start, _prune(start, result))
    if not result:
        return _empty_language(g)
    return Grammar.build(start, result, name=g.name)


def to_cnf(g: Grammar) -> CnfGrammar:
    """
    Chomsky Normal Form of ``to_proper(g)``.

    Terminals inside long bodies get one wrapper nonterminal each; bodies longer
    than two are split into a right-leaning chain.
    """
    proper = to_proper(g)
    if not proper.productions:
        return CnfGrammar.build(proper.start, [], name=g.name)
    fresh = FreshNames(list(proper.nonterminals) + list(proper.terminals))
    wrappers: Dict[str, str] = {}
    rules: List[Production] = []

    def wrap(s: Symbol) -> Symbol:
        if not s.is_terminal:
            return s
        if s.name not in wrappers:
            wrappers[s.name] = fresh("X")
            rules.append(Production(head=wrappers[s.name], body=(s,)))
        return Symbol.nt(wrappers[s.name])

    for p in proper.productions:
        if len(p.body) <= 1:
            rules.append(p)
            continue
        body = [wrap(s) for s in p.body]
        head = p.head
        while len(body) > 2:
            link = fresh(p.head)
            rules.append(Production(head=head, body=(body[0], Symbol.nt(link))))
            head, body = link, body[1:]
        rules.append(Production(head=head, body=tuple(body)))

    accepts_empty = any(p.is_epsilon for p in proper.productions)
    cnf = CnfGrammar.build(proper.start, rules, name=g.name, accepts_empty=accepts_empty)
    logger.debug("CNF of %s: %d nonterminals, %d rules", g.name or g.start,
                 len(cnf.nonterminals), len(cnf.productions))
    return cnf


def shortest_word(g: CnfGrammar, start: Optional[str] = None, nonempty: bool = False) -> Optional[Word]:
    """
    Minimum-length word derivable from ``start`` (ties: lexicographic on terminal names).

    Args:
        g (CnfGrammar): Grammar in CNF
        start (Optional[str]): Nonterminal to derive from; the start symbol by default
        nonempty (bool): Ignore the ``S -> eps`` rule

    Returns:
        Optional[Word]: The word, or None when ``start`` derives nothing
    """
    start = start or g.start
    best: Dict[str, Tuple[int, Word]] = {}

    def offer(head: str, word: Word) -> bool:
        cand = (len(word), word)
        if head not in best or cand < best[head]:
            best[head] = cand
            return True
        return False

    for p in g.productions:
        if len(p.body) == 1:
            offer(p.head, (p.body[0].name,))
        elif p.is_epsilon and not nonempty:
            offer(p.head, ())
    binary = g.binary_rules
    changed = True
    while changed:
        changed = False
        for head, left, right in binary:
            if left in best and right in best:
                changed |= offer(head, best[left][1] + best[right][1])
    return best[start][1] if start in best else None


def is_geq(g: Grammar) -> bool:
    """True for the ``S -> T1 T2`` grammar of ``a^i b^j, i >= j`` (by name or by rules)."""
    if g.name == "geq":
        return True
    return to_proper(g).structurally_equal(to_proper(parse_grammar(GEQ_TEXT)))


def is_linear(g: Grammar) -> bool:
    return all(p.nonterminal_count <= 1 for p in g.productions)


def is_regular(g: Grammar, side: str) -> bool:
    for p in g.productions:
        body = p.body
        if len(body) == 0 or (len(body) == 1 and body[0].is_terminal):
            continue
        if len(body) != 2:
            return False
        terminal, nonterminal = (body[0], body[1]) if side == "right" else (body[1], body[0])
        if not terminal.is_terminal or nonterminal.is_terminal:
            return False
    return True


def classify(g: Grammar) -> ClassificationReport:
    """
    Decide the join-inducing dichotomy and the structural grammar classes.

    A proper CNF grammar is join-inducing exactly when it has a rule ``A -> B C``; the
    witness is the shortest (then lexicographically least) word of length >= 2 of the
    start symbol, assembled from shortest yields of each ``S -> B C`` rule.
    """
    cnf = to_cnf(g)
    witness: Optional[Word] = None
    if cnf.binary_rules:
        candidates = []
        for head, left, right in cnf.binary_rules:
            if head != cnf.start:
                continue
            lw, rw = shortest_word(cnf, left), shortest_word(cnf, right)
            candidates.append((len(lw) + len(rw), lw + rw))
        witness = min(candidates)[1]
    linear = is_linear(g)
    right, left = is_regular(g, "right"), is_regular(g, "left")
    geq = witness is not None and is_geq(g)

    if witness is None:
        strategy, on_demand = "joinfree", "joinfree"
    else:
        strategy = "geq-dom" if geq else ("linear" if linear else "generic")
        if right or left:
            on_demand = "regular"
        elif geq:
            on_demand = "geq-od"
        else:
            on_demand = "linear" if linear else "generic"

    return ClassificationReport(
        join_inducing=witness is not None,
        witness=witness,
        linear=linear,
        right_regular=right,
        left_regular=left,
        accepts_empty=cnf.accepts_empty,
        empty_language=cnf.is_empty_language,
        strategy=strategy,
        on_demand_strategy=on_demand,
    )


def right_quotient_grammar(g: Grammar, symbol: str) -> Grammar:
    """Grammar of ``{w | w symbol in L(g)}``: one copy ``A#i`` of each nonterminal derives ``L(A)/symbol``."""
    cnf = to_cnf(g)
    fresh = FreshNames(list(cnf.nonterminals) + list(cnf.terminals))
    quotient = {a: fresh(a) for a in cnf.nonterminals}
    rules = list(cnf.productions)
    for p in cnf.productions:
        if len(p.body) == 1 and p.body[0].name == symbol:
            rules.append(Production(head=quotient[p.head]))
        elif len(p.body) == 2:
            left, right = p.body
            rules.append(Production(head=quotient[p.head], body=(left, Symbol.nt(quotient[right.name]))))
    return Grammar.build(quotient[cnf.start], rules, extra_nonterminals=[quotient[cnf.start]])
