from typing import FrozenSet, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, model_validator

OracleMethod = Literal["bar_hillel", "path_enum", "cyk", "naive_fixpoint", "exhaustive_search"]


class OracleReport(BaseModel):
    """
    Answer of a brute-force reference check.

    Attributes:
        method (str): Which oracle produced the answer
        verdict (Optional[bool]): Yes/no answer, when the question was a decision
        pairs (Optional[Tuple[Tuple[int, int], ...]]): Pair answer, when one was computed
        words (Optional[FrozenSet[Tuple[str, ...]]]): Enumerated label words
        work_bound (Optional[int]): Length or size bound the oracle ran under
        bounded (bool): Verdict is sound but may miss answers beyond ``work_bound``
    """
    model_config = ConfigDict(frozen=True)

    method: OracleMethod
    verdict: Optional[bool] = None
    pairs: Optional[Tuple[Tuple[int, int], ...]] = None
    words: Optional[FrozenSet[Tuple[str, ...]]] = None
    work_bound: Optional[int] = None
    bounded: bool = False

    @model_validator(mode="after")
    def _path_enum_is_bounded(self) -> "OracleReport":
        if self.method == "path_enum" and not self.bounded:
            raise ValueError("path enumeration reports are always bounded")
        return self
