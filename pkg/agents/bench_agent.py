"""
Scaling experiments: generate a family of instances along a size ladder, time the
solver on each, and fit the growth exponent on a log-log scale.
"""

import csv
import logging
import random
import statistics
import time
from pathlib import Path
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np
from prettytable import PrettyTable
from pydantic import ValidationError

from agents.andersen_agent import apa_on_demand
from agents.clique_reduction_agent import apa_clique_gadget, kclique_to_dyck2
from agents.grammar_agent import load_grammar, to_cnf
from agents.matrix_reduction_agent import worst_case_family
from agents.solver_agent import SolverAgent, SolverConfig
from models.bench_models import BenchPlan, BenchResult, BenchRow
from models.graph_models import LabeledGraph
from utils.errors import GuardrailExceeded, InsufficientRowsError, PlanError, ReductionInputError
from utils.graph_io import graph_digest
from utils.random_graphs import random_graph, random_labeled_graph, sparse_labeled_graph

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["family", "preset", "n", "m", "output_size", "median_ms", "min_ms", "facts", "timed_out"]

# A prepared run: the graph (for n, m and the digest) and a zero-argument job returning the output size.
Prepared = Tuple[LabeledGraph, Callable[[], int]]


def _prepare(plan: BenchPlan, n: int, rng: random.Random, mode: str, solver: SolverAgent) -> Prepared:
    family = plan.family
    if family in ("dense_random", "sparse_random"):
        g = load_grammar(plan.preset)
        labels = sorted(to_cnf(g).terminals) or ["a"]
        if family == "dense_random":
            graph = random_labeled_graph(rng, n, labels, plan.density)
        else:
            graph = sparse_labeled_graph(rng, n, labels)
        if mode == "on_demand":
            s, t = graph.vertices[0], graph.vertices[-1]
            return graph, lambda: int(solver.on_demand(g, graph, s, t))
        return graph, lambda: len(solver.all_pairs(g, graph))

    if family == "worst_case_output":
        g = load_grammar(plan.preset)
        instance = worst_case_family(g, n)
        sources, targets = (set(side) for side in instance.pair_filter)

        def filtered_output() -> int:
            pairs = solver.all_pairs(g, instance.graph).named(instance.graph)
            return sum(1 for u, v in pairs if u in sources and v in targets)

        return instance.graph, filtered_output

    source = random_graph(rng, n, plan.density)
    if family == "dyck2_clique_gadget":
        instance = kclique_to_dyck2(source, plan.k)
        g = load_grammar(instance.grammar_preset)
        return instance.graph, lambda: int(solver.on_demand(g, instance.graph, *instance.query))
    instance = apa_clique_gadget(source, plan.k)
    return instance.graph, lambda: int(apa_on_demand(instance.graph, *instance.query))


def _series(plan: BenchPlan) -> List[str]:
    if plan.family in ("dyck2_clique_gadget", "apa_gadget"):
        return ["on_demand"]
    if plan.family == "worst_case_output":
        return ["all_pairs"]
    return ["all_pairs", "on_demand"] if plan.mode == "both" else [plan.mode]


def _run_series(plan: BenchPlan, mode: str, label: str) -> List[BenchRow]:
    rows: List[BenchRow] = []
    rng = random.Random(plan.seed)
    solver = SolverAgent(SolverConfig())
    for n in plan.ladder:
        try:
            graph, job = _prepare(plan, n, rng, mode, solver)
        except (GuardrailExceeded, ReductionInputError) as e:
            logger.error("aborting %s at n=%d: %s", label, n, e)
            break

        output = job()  # warm-up, not timed
        timings: List[float] = []
        timed_out = False
        for _ in range(plan.repetitions):
            start = time.perf_counter()
            job()
            elapsed = time.perf_counter() - start
            timings.append(elapsed * 1000.0)
            if elapsed > plan.timeout_s:
                timed_out = True
                break

        rows.append(BenchRow(
            family=label,
            preset=plan.preset,
            n=n,
            m=graph.m,
            output_size=output,
            median_ms=None if timed_out else statistics.median(timings),
            min_ms=None if timed_out else min(timings),
            facts=solver.last_fact_count,
            timed_out=timed_out,
            digest=graph_digest(graph),
        ))
        logger.info("%s n=%d m=%d output=%d median=%s ms", label, n, graph.m, output, rows[-1].median_ms)
        if timed_out:
            logger.warning("%s: run at n=%d exceeded %.1f s, stopping the ladder", label, n, plan.timeout_s)
            break
    return rows


def run_bench(plan: BenchPlan) -> BenchResult:
    """
    Run every series of a plan and fit the exponent of the first one.

    Args:
        plan (BenchPlan): Family, ladder, repetitions, seed and timeout

    Returns:
        BenchResult: One row per completed (or timed-out) size; ``slope`` is None
            when fewer than four sizes completed
    """
    series = _series(plan)
    rows: List[BenchRow] = []
    for mode in series:
        label = plan.family if len(series) == 1 else f"{plan.family}/{mode}"
        rows += _run_series(plan, mode, label)

    first = series[0] if len(series) == 1 else f"{plan.family}/{series[0]}"
    result = BenchResult(plan=plan, rows=rows)
    try:
        slope, residual = fit_slope(result.completed(first))
    except InsufficientRowsError as e:
        logger.info("no slope: %s", e)
        return result
    return result.model_copy(update={"slope": slope, "residual": residual})


def fit_slope(rows: Sequence[BenchRow], value: str = "median_ms") -> Tuple[float, float]:
    """
    Least-squares slope of ``log(value)`` against ``log(n)``.

    Args:
        rows (Sequence[BenchRow]): Completed rows
        value (str): Row field on the vertical axis (``median_ms`` or ``output_size``)

    Returns:
        Tuple[float, float]: Slope and root-mean-square residual of the fit
    """
    points = [(r.n, getattr(r, value)) for r in rows if not r.timed_out]
    points = [(x, y) for x, y in points if y is not None and y > 0]
    if len(points) < 4:
        raise InsufficientRowsError(f"need at least 4 completed rows to fit a slope, got {len(points)}")
    xs = np.log(np.array([p[0] for p in points], dtype=float))
    ys = np.log(np.array([p[1] for p in points], dtype=float))
    slope, intercept = np.polyfit(xs, ys, 1)
    residual = float(np.sqrt(np.mean((ys - (slope * xs + intercept)) ** 2)))
    return float(slope), residual


_PLAN_KEYS = {"family", "preset", "ladder", "repetitions", "seed", "timeout_s", "timeout", "mode", "density", "k"}


def parse_plan(text: str) -> BenchPlan:
    """
    Read a ``key = value`` plan; ``#`` starts a comment and ``ladder`` takes a comma-
    or space-separated list.
    """
    fields: Dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (part.strip() for part in line.partition("="))
        if not sep:
            raise PlanError(f"line {lineno}: expected 'key = value'")
        if key not in _PLAN_KEYS:
            raise PlanError(f"line {lineno}: unknown plan key {key!r}")
        if key == "ladder":
            try:
                fields["ladder"] = tuple(int(tok) for tok in value.replace(",", " ").split())
            except ValueError:
                raise PlanError(f"line {lineno}: ladder must list integers") from None
        else:
            fields["timeout_s" if key == "timeout" else key] = value
    try:
        return BenchPlan(**fields)
    except ValidationError as e:
        raise PlanError(f"invalid plan: {e.errors()[0]['loc'][0]}: {e.errors()[0]['msg']}") from None


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.3f}"
    return str(value)


def write_csv(result: BenchResult, path: str) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with target.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for row in result.rows:
            writer.writerow([_cell(getattr(row, col)) for col in CSV_COLUMNS])
    return target


def write_gnuplot(result: BenchResult, out_dir: str) -> List[Path]:
    """One whitespace-separated ``<family>.dat`` per series; timed-out sizes are left out."""
    root = Path(out_dir)
    root.mkdir(parents=True, exist_ok=True)
    written = []
    for family in dict.fromkeys(r.family for r in result.rows):
        path = root / f"{family.replace('/', '_')}.dat"
        lines = ["# n m output_size median_ms min_ms"]
        lines += [f"{r.n} {r.m} {r.output_size} {r.median_ms:.3f} {r.min_ms:.3f}" for r in result.completed(family)]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        written.append(path)
    return written


def summary_table(result: BenchResult) -> PrettyTable:
    table = PrettyTable(CSV_COLUMNS)
    for row in result.rows:
        table.add_row([_cell(getattr(row, col)) for col in CSV_COLUMNS])
    return table
