from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

BenchFamily = Literal["dense_random", "sparse_random", "worst_case_output",
                      "dyck2_clique_gadget", "apa_gadget"]


class BenchPlan(BaseModel):
    """
    One scaling experiment.

    Attributes:
        family (str): Instance family generated at each ladder size
        preset (str): Grammar preset the solver runs against
        ladder (Tuple[int, ...]): Strictly increasing instance sizes (vertex counts)
        repetitions (int): Timed runs per size, after one discarded warm-up
        seed (int): Seed for instance generation
        timeout_s (float): Per-run wall-clock budget; the ladder stops after the first overrun
        mode (str): ``all_pairs``, ``on_demand`` or ``both`` (two series)
        density (float): Edge probability for ``dense_random`` and the gadget source graphs
        k (int): Clique block size for the gadget families
    """
    model_config = ConfigDict(frozen=True)

    family: BenchFamily
    preset: str = "dyck:1"
    ladder: Tuple[int, ...]
    repetitions: int = Field(default=3, ge=3)
    seed: int = Field(default=0, ge=0)
    timeout_s: float = Field(default=60.0, gt=0)
    mode: Literal["all_pairs", "on_demand", "both"] = "all_pairs"
    density: float = Field(default=0.5, gt=0, le=1)
    k: int = Field(default=1, ge=1)

    @field_validator("ladder")
    @classmethod
    def _strictly_increasing(cls, value: Tuple[int, ...]) -> Tuple[int, ...]:
        if not value:
            raise ValueError("ladder is empty")
        if any(x <= 0 for x in value):
            raise ValueError("ladder sizes must be positive")
        if any(b <= a for a, b in zip(value, value[1:])):
            raise ValueError("ladder must be strictly increasing")
        return value


class BenchRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    family: str
    preset: str
    n: int
    m: int
    output_size: int
    median_ms: Optional[float] = None
    min_ms: Optional[float] = None
    facts: int = 0
    timed_out: bool = False
    digest: str = ""


class BenchResult(BaseModel):
    """
    Rows of one plan plus the log-log fit of median time against ``n``.

    Attributes:
        plan (BenchPlan): The plan that produced the rows
        rows (List[BenchRow]): One row per (series, ladder size)
        slope (Optional[float]): Fitted exponent, absent with fewer than 4 completed rows
        residual (Optional[float]): Root-mean-square residual of the fit
    """
    plan: BenchPlan
    rows: List[BenchRow]
    slope: Optional[float] = None
    residual: Optional[float] = None

    def completed(self, family: Optional[str] = None) -> List[BenchRow]:
        return [r for r in self.rows if not r.timed_out and (family is None or r.family == family)]
