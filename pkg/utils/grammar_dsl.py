"""
Text format for grammars.

One rule per line::

    S  -> eps | S S | '(' S ')'     # Dyck-1
    T1 ->                           # declared, no productions

Terminals are single-quoted, ``eps`` is the empty word, ``#`` starts a comment at
the beginning of a line or after whitespace (so generated names such as ``S#1`` stay
legal identifiers). The head of the first rule is the start symbol.
"""

import re
from typing import Dict, List, Tuple

from pydantic import ValidationError

from models.grammar_models import Grammar, Production, Symbol
from utils.errors import EmptyInputError, GrammarSyntaxError, UndeclaredSymbolError

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<comment>\#.*)
  | (?P<arrow>->)
  | (?P<bar>\|)
  | (?P<term>'[^'\s]+')
  | (?P<ident>[A-Za-z_][A-Za-z0-9_#]*)
""", re.VERBOSE)

EPS = "eps"


def _tokenize(line: str, lineno: int) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(line):
        match = _TOKEN.match(line, pos)
        if match is None:
            raise GrammarSyntaxError(f"unexpected character {line[pos]!r}", lineno, pos + 1)
        kind = match.lastgroup
        if kind == "comment":
            break
        if kind != "ws":
            tokens.append((kind, match.group(), pos + 1))
        pos = match.end()
    return tokens


def parse_grammar(text: str) -> Grammar:
    """
    Parse grammar DSL text.

    Args:
        text (str): Grammar source

    Returns:
        Grammar: The grammar; the first rule's head is its start symbol

    Raises:
        GrammarSyntaxError: Malformed line (with line and column)
        UndeclaredSymbolError: A body nonterminal never heads a rule
        EmptyInputError: No rules at all
    """
    heads: Dict[str, None] = {}
    productions: List[Production] = []
    used_at: Dict[str, Tuple[int, int]] = {}
    terminal_at: Dict[str, Tuple[int, int]] = {}

    for lineno, line in enumerate(text.splitlines(), start=1):
        tokens = _tokenize(line, lineno)
        if not tokens:
            continue
        if len(tokens) < 2 or tokens[0][0] != "ident" or tokens[1][0] != "arrow":
            raise GrammarSyntaxError("expected 'Head ->'", lineno, tokens[0][2])
        head = tokens[0][1]
        if head == EPS:
            raise GrammarSyntaxError("'eps' cannot head a rule", lineno, tokens[0][2])
        heads.setdefault(head, None)
        rest = tokens[2:]
        if not rest:
            continue

        alternatives: List[List[Tuple[str, str, int]]] = [[]]
        for tok in rest:
            if tok[0] == "bar":
                alternatives.append([])
            elif tok[0] == "arrow":
                raise GrammarSyntaxError("unexpected '->'", lineno, tok[2])
            else:
                alternatives[-1].append(tok)

        for alt in alternatives:
            if not alt:
                raise GrammarSyntaxError("empty alternative (write 'eps')", lineno, rest[0][2])
            if any(t[1] == EPS and t[0] == "ident" for t in alt):
                if len(alt) != 1:
                    raise GrammarSyntaxError("'eps' must stand alone", lineno, alt[0][2])
                productions.append(Production(head=head))
                continue
            body = []
            for kind, value, col in alt:
                try:
                    if kind == "term":
                        name = value[1:-1]
                        terminal_at.setdefault(name, (lineno, col))
                        body.append(Symbol.t(name))
                    else:
                        used_at.setdefault(value, (lineno, col))
                        body.append(Symbol.nt(value))
                except ValidationError:
                    raise GrammarSyntaxError(f"invalid symbol {value}", lineno, col) from None
            productions.append(Production(head=head, body=tuple(body)))

    if not heads:
        raise EmptyInputError("grammar text contains no rules")
    for name, (lineno, col) in used_at.items():
        if name not in heads:
            raise UndeclaredSymbolError(f"line {lineno}, column {col}: nonterminal {name!r} has no rule")
    for name, (lineno, col) in terminal_at.items():
        if name in heads:
            raise GrammarSyntaxError(f"{name!r} is both a terminal and a nonterminal", lineno, col)

    start = next(iter(heads))
    return Grammar.build(start, productions, extra_nonterminals=heads)


def serialize_grammar(g: Grammar) -> str:
    """Render ``g`` in the DSL; ``parse_grammar`` of the result is structurally equal to ``g``."""
    lines = []
    for head in g.nonterminals:
        alts = [" ".join(str(s) for s in p.body) if p.body else EPS for p in g.rules_for(head)]
        lines.append(f"{head} -> {' | '.join(alts)}".rstrip())
    return "\n".join(lines) + "\n"
