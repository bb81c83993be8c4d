import csv

import pytest

from agents.bench_agent import CSV_COLUMNS, fit_slope, parse_plan, run_bench, summary_table, write_csv, write_gnuplot
from models.bench_models import BenchPlan, BenchRow
from utils.errors import InsufficientRowsError, PlanError


def _row(n: int, median: float, timed_out: bool = False) -> BenchRow:
    return BenchRow(family="f", preset="dyck:1", n=n, m=n, output_size=n * n,
                    median_ms=None if timed_out else median, min_ms=None if timed_out else median,
                    timed_out=timed_out)


def test_slope_of_a_quadratic_series():
    rows = [_row(n, 0.5 * n ** 2) for n in (2, 4, 8, 16)]
    slope, residual = fit_slope(rows)
    assert slope == pytest.approx(2.0)
    assert residual == pytest.approx(0.0, abs=1e-9)
    assert fit_slope(rows, "output_size")[0] == pytest.approx(2.0)


def test_slope_needs_four_completed_rows():
    rows = [_row(n, float(n)) for n in (2, 4, 8)] + [_row(16, 0.0, timed_out=True)]
    with pytest.raises(InsufficientRowsError):
        fit_slope(rows)


def test_parse_plan():
    plan = parse_plan("""
        # quadratic output
        family = worst_case_output
        preset = dyck:1
        ladder = 2, 4 8
        timeout = 5
    """)
    assert plan.family == "worst_case_output"
    assert plan.ladder == (2, 4, 8)
    assert plan.timeout_s == 5.0
    assert plan.repetitions == 3


@pytest.mark.parametrize("text", [
    "family = dense_random\nladder = 4\ncolour = red\n",
    "family = dense_random\nladder 4\n",
    "family = dense_random\nladder = 4, x\n",
    "family = dense_random\nladder = 8, 4\n",
    "family = dense_random\nladder = 4\nrepetitions = 2\n",
    "family = everything\nladder = 4\n",
])
def test_bad_plans(text):
    with pytest.raises(PlanError):
        parse_plan(text)


def test_worst_case_output_law():
    result = run_bench(BenchPlan(family="worst_case_output", preset="dyck:1", ladder=(2, 4, 8, 16)))
    assert [r.n for r in result.rows] == [2, 4, 8, 16]
    for row in result.rows:
        assert row.output_size == row.n ** 2
        assert row.m == 2 * row.n
        assert not row.timed_out
        assert row.median_ms is not None and row.min_ms <= row.median_ms
    assert fit_slope(result.rows, "output_size")[0] == pytest.approx(2.0)
    assert len({r.digest for r in result.rows}) == 4


def test_both_modes_give_two_series():
    plan = BenchPlan(family="dense_random", preset="dyck:1", ladder=(3, 5), mode="both", density=0.4, seed=7)
    result = run_bench(plan)
    assert [r.family for r in result.rows] == ["dense_random/all_pairs"] * 2 + ["dense_random/on_demand"] * 2
    assert result.slope is None
    assert all(r.output_size in (0, 1) for r in result.rows[2:])


def test_runs_are_reproducible_from_the_seed():
    plan = BenchPlan(family="sparse_random", preset="anbn", ladder=(4, 6), seed=3)
    first, second = run_bench(plan), run_bench(plan)
    assert [r.digest for r in first.rows] == [r.digest for r in second.rows]
    assert [r.output_size for r in first.rows] == [r.output_size for r in second.rows]


def test_generation_errors_abort_the_family():
    result = run_bench(BenchPlan(family="dyck2_clique_gadget", preset="dyck:2", ladder=(3, 6), k=2))
    assert result.rows == []


def test_outputs(tmp_path):
    result = run_bench(BenchPlan(family="dense_random", preset="dyck:1", ladder=(3, 4), mode="both"))
    path = write_csv(result, str(tmp_path / "runs" / "bench.csv"))
    with path.open(encoding="utf-8") as fh:
        lines = list(csv.reader(fh))
    assert lines[0] == CSV_COLUMNS
    assert len(lines) == 5

    written = write_gnuplot(result, str(tmp_path / "plots"))
    assert sorted(p.name for p in written) == ["dense_random_all_pairs.dat", "dense_random_on_demand.dat"]
    assert written[0].read_text(encoding="utf-8").startswith("# n m output_size")

    table = summary_table(result)
    assert table.field_names == CSV_COLUMNS
    assert len(table.rows) == 4
