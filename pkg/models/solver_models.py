from typing import Dict, Iterable, Iterator, List, Literal, Set, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator


class ExtremalPathMatrix(BaseModel):
    """
    Longest or shortest single-label path lengths between every vertex pair.

    Entries are floats so that ``-inf`` (no path, longest mode), ``+inf`` (no path,
    shortest mode; or unbounded length, longest mode) sit next to ordinary lengths.

    Attributes:
        values (np.ndarray): ``n x n`` matrix, row = source vertex id
        mode (str): ``longest`` or ``shortest``
        label (str): Edge label the paths are restricted to
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    values: np.ndarray
    mode: Literal["longest", "shortest"]
    label: str

    @field_validator("values")
    @classmethod
    def _square(cls, value: np.ndarray) -> np.ndarray:
        if value.ndim != 2 or value.shape[0] != value.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {value.shape}")
        return value

    @property
    def meaningful(self) -> np.ndarray:
        """Mask of entries that describe an existing path."""
        return self.values > -np.inf if self.mode == "longest" else self.values < np.inf


class TRelation:
    """Inverse points-to relation ``T(x, y)``: variable ``y`` may point to ``x``."""

    __slots__ = ("_pairs", "by_first", "by_second")

    def __init__(self, pairs: Iterable[Tuple[int, int]] = ()):
        self._pairs: Dict[Tuple[int, int], None] = {}
        self.by_first: Dict[int, Dict[int, None]] = {}
        self.by_second: Dict[int, Dict[int, None]] = {}
        for x, y in pairs:
            self.add(x, y)

    def add(self, x: int, y: int) -> bool:
        if (x, y) in self._pairs:
            return False
        self._pairs[(x, y)] = None
        self.by_first.setdefault(x, {})[y] = None
        self.by_second.setdefault(y, {})[x] = None
        return True

    def seconds(self, x: int) -> List[int]:
        return list(self.by_first.get(x, ()))

    def firsts(self, y: int) -> List[int]:
        return list(self.by_second.get(y, ()))

    def inverse(self) -> "TRelation":
        return TRelation((y, x) for x, y in self._pairs)

    def as_set(self) -> Set[Tuple[int, int]]:
        return set(self._pairs)

    def __contains__(self, pair: object) -> bool:
        return pair in self._pairs

    def __iter__(self) -> Iterator[Tuple[int, int]]:
        return iter(sorted(self._pairs))

    def __len__(self) -> int:
        return len(self._pairs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, TRelation):
            return self.as_set() == other.as_set()
        if isinstance(other, (set, frozenset)):
            return self.as_set() == other
        return NotImplemented
