import re
from typing import Dict, Iterable, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

# Characters the grammar DSL and the graph file format reserve.
_RESERVED = re.compile(r"[\s'|]")


class Symbol(BaseModel):
    """A grammar symbol. Terminal names double as graph edge labels."""
    model_config = ConfigDict(frozen=True)

    kind: Literal["terminal", "nonterminal"]
    name: str

    @field_validator("name")
    @classmethod
    def _valid_name(cls, value: str) -> str:
        if not value or _RESERVED.search(value) or value == "->":
            raise ValueError(f"invalid symbol name {value!r}")
        return value

    @classmethod
    def t(cls, name: str) -> "Symbol":
        return cls(kind="terminal", name=name)

    @classmethod
    def nt(cls, name: str) -> "Symbol":
        return cls(kind="nonterminal", name=name)

    @property
    def is_terminal(self) -> bool:
        return self.kind == "terminal"

    def __str__(self) -> str:
        return f"'{self.name}'" if self.is_terminal else self.name


class Production(BaseModel):
    """``head -> body``; an empty body is an epsilon rule."""
    model_config = ConfigDict(frozen=True)

    head: str
    body: Tuple[Symbol, ...] = ()

    @property
    def is_epsilon(self) -> bool:
        return not self.body

    @property
    def nonterminal_count(self) -> int:
        return sum(1 for s in self.body if not s.is_terminal)

    def __str__(self) -> str:
        rhs = " ".join(str(s) for s in self.body) if self.body else "eps"
        return f"{self.head} -> {rhs}"


def dedupe(productions: Iterable[Production]) -> Tuple[Production, ...]:
    return tuple(dict.fromkeys(productions))


class Grammar(BaseModel):
    """
    A context-free grammar ``(V, Sigma, R, S)``.

    Attributes:
        nonterminals (Tuple[str, ...]): Nonterminal names, start symbol first
        terminals (Tuple[str, ...]): Terminal names, sorted
        productions (Tuple[Production, ...]): Rules, no duplicates
        start (str): Start symbol
        name (Optional[str]): Preset name the grammar was built from, if any
    """
    model_config = ConfigDict(frozen=True)

    nonterminals: Tuple[str, ...]
    terminals: Tuple[str, ...]
    productions: Tuple[Production, ...]
    start: str
    name: Optional[str] = None

    @model_validator(mode="after")
    def _check_symbols(self) -> "Grammar":
        nts = set(self.nonterminals)
        ts = set(self.terminals)
        if self.start not in nts:
            raise ValueError(f"start symbol {self.start!r} is not a nonterminal")
        if nts & ts:
            raise ValueError(f"names used as terminal and nonterminal: {sorted(nts & ts)}")
        if len(set(self.productions)) != len(self.productions):
            raise ValueError("duplicate productions")
        for p in self.productions:
            if p.head not in nts:
                raise ValueError(f"production head {p.head!r} is not a nonterminal")
            for s in p.body:
                if s.name not in (ts if s.is_terminal else nts):
                    raise ValueError(f"undeclared symbol {s.name!r} in {p}")
        return self

    @classmethod
    def build(cls, start: str, productions: Iterable[Production],
              extra_nonterminals: Iterable[str] = (), name: Optional[str] = None,
              **kwargs) -> "Grammar":
        """Derive the symbol sets from ``productions`` and construct a validated grammar."""
        rules = dedupe(productions)
        order: Dict[str, None] = {start: None}
        for p in rules:
            order.setdefault(p.head, None)
        for extra in extra_nonterminals:
            order.setdefault(extra, None)
        for p in rules:
            for s in p.body:
                if not s.is_terminal:
                    order.setdefault(s.name, None)
        terminals = sorted({s.name for p in rules for s in p.body if s.is_terminal})
        return cls(nonterminals=tuple(order), terminals=tuple(terminals),
                   productions=rules, start=start, name=name, **kwargs)

    def rules_for(self, head: str) -> List[Production]:
        return [p for p in self.productions if p.head == head]

    def structurally_equal(self, other: "Grammar") -> bool:
        return (self.start == other.start
                and set(self.nonterminals) == set(other.nonterminals)
                and set(self.terminals) == set(other.terminals)
                and set(self.productions) == set(other.productions))


class CnfGrammar(Grammar):
    """
    A proper grammar in Chomsky Normal Form.

    Every rule is ``S -> eps`` (start only, when ``accepts_empty``), ``A -> B C`` or
    ``A -> a``; the start symbol never occurs in a body. A grammar with no productions
    at all is the degenerate grammar of the empty language.
    """
    accepts_empty: bool = False

    @model_validator(mode="after")
    def _check_cnf(self) -> "CnfGrammar":
        for p in self.productions:
            if p.is_epsilon:
                if p.head != self.start or not self.accepts_empty:
                    raise ValueError(f"epsilon rule outside the start symbol: {p}")
            elif len(p.body) == 1:
                if not p.body[0].is_terminal:
                    raise ValueError(f"unit rule in CNF: {p}")
            elif len(p.body) == 2:
                if any(s.is_terminal for s in p.body):
                    raise ValueError(f"mixed binary rule in CNF: {p}")
            else:
                raise ValueError(f"body longer than 2 in CNF: {p}")
            if any(s.name == self.start for s in p.body if not s.is_terminal):
                raise ValueError(f"start symbol in body: {p}")
        has_eps = any(p.is_epsilon for p in self.productions)
        if has_eps != self.accepts_empty:
            raise ValueError("accepts_empty disagrees with the epsilon rule")
        return self

    @property
    def unary_rules(self) -> List[Tuple[str, str]]:
        """``(A, a)`` for every ``A -> a``."""
        return [(p.head, p.body[0].name) for p in self.productions if len(p.body) == 1]

    @property
    def binary_rules(self) -> List[Tuple[str, str, str]]:
        """``(A, B, C)`` for every ``A -> B C``."""
        return [(p.head, p.body[0].name, p.body[1].name)
                for p in self.productions if len(p.body) == 2]

    @property
    def is_empty_language(self) -> bool:
        return not self.productions


OnDemandStrategy = Literal["joinfree", "regular", "geq-od", "linear", "generic"]
AllPairsStrategy = Literal["joinfree", "geq-dom", "linear", "generic"]


class ClassificationReport(BaseModel):
    """
    Decidable properties of a grammar and the solver choice they imply.

    Attributes:
        join_inducing (bool): Some word of length >= 2 is derivable
        witness (Optional[Tuple[str, ...]]): Shortest such word (terminal names)
        linear (bool): Every body has at most one nonterminal
        right_regular (bool): Bodies are eps, ``a`` or ``a B``
        left_regular (bool): Bodies are eps, ``a`` or ``B a``
        accepts_empty (bool): eps is in the language
        empty_language (bool): The language is empty
        strategy (str): All-Pairs algorithm selected by the dichotomy
        on_demand_strategy (str): On-Demand algorithm selected
    """
    model_config = ConfigDict(frozen=True)

    join_inducing: bool
    witness: Optional[Tuple[str, ...]] = None
    linear: bool
    right_regular: bool
    left_regular: bool
    accepts_empty: bool
    empty_language: bool = False
    strategy: AllPairsStrategy = "generic"
    on_demand_strategy: OnDemandStrategy = "generic"

    @model_validator(mode="after")
    def _witness_matches_flag(self) -> "ClassificationReport":
        if self.join_inducing != (self.witness is not None):
            raise ValueError("witness must be present exactly when join_inducing")
        if self.witness is not None and len(self.witness) < 2:
            raise ValueError("witness shorter than 2")
        return self

    @property
    def witness_text(self) -> str:
        return render_word(self.witness or ())


def render_word(word: Iterable[str]) -> str:
    """Concatenate single-character terminals, space-join anything longer."""
    word = tuple(word)
    if all(len(w) == 1 for w in word):
        return "".join(word)
    return " ".join(word)
