"""Error types raised by the CFL lab.

Every error derives from :class:`CflLabError` so the CLI can map the whole
family to exit status 2 with a single ``except`` clause.
"""

from typing import Optional


class CflLabError(Exception):
    """Base class for every failure the lab reports to its caller."""


class GrammarSyntaxError(CflLabError):
    """Malformed grammar DSL text."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UndeclaredSymbolError(CflLabError):
    """A body references a nonterminal that never appears as a rule head."""


class EmptyInputError(CflLabError):
    """Grammar text contains no rules."""


class UnknownPresetError(CflLabError):
    pass


class PresetParameterError(CflLabError):
    pass


class GraphFormatError(CflLabError):
    """Malformed graph or source-graph file."""

    def __init__(self, message: str, line: Optional[int] = None):
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)
        self.line = line


class UnknownVertexError(CflLabError):
    pass


class ArityError(CflLabError):
    """Vertex and label sequences of a path do not line up."""


class AlphabetError(CflLabError):
    """Edge labels outside the alphabet an algorithm is defined for."""


class NotLinearError(CflLabError):
    pass


class JoinInducingError(CflLabError):
    """The linear-scan solver was asked to handle a join-inducing grammar."""


class JoinFreeError(CflLabError):
    """A construction needs a witness string of length at least 2."""


class GuardrailExceeded(CflLabError):
    """An exhaustive oracle was asked to work beyond its size limits."""


class ReductionInputError(CflLabError):
    """Source instance does not satisfy a generator's precondition."""


class InsufficientRowsError(CflLabError):
    pass


class PlanError(CflLabError):
    """Benchmark plan text could not be parsed or validated."""


class NotRegularError(NotLinearError):
    """Grammar is neither right- nor left-regular."""
