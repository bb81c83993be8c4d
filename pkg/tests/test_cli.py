from pathlib import Path

import pytest

from main import EXIT_ERROR, EXIT_OK, EXIT_UNREACHABLE, main
from utils.settings import LabSettings, load_settings

DYCK_GRAPH = "node lonely\nv0 v1 (\nv1 v2 )\nv2 v3 (\n"


@pytest.fixture
def dyck_graph(tmp_path) -> str:
    path = tmp_path / "graph.txt"
    path.write_text(DYCK_GRAPH, encoding="utf-8")
    return str(path)


def test_classify(capsys):
    assert main(["classify", "--grammar", "anbn"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "join_inducing=true" in out
    assert "witness=ab" in out
    assert "strategy=linear" in out


def test_classify_explain_prints_the_cnf(capsys):
    assert main(["classify", "--grammar", "dyck:1", "--explain"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "head" in out and "body" in out


def test_normalize_round_trips_through_a_file(capsys, tmp_path):
    assert main(["normalize", "--grammar", "eqcount", "--form", "cnf"]) == EXIT_OK
    cnf_text = capsys.readouterr().out
    assert "->" in cnf_text
    path = tmp_path / "eq.cfg"
    path.write_text(cnf_text, encoding="utf-8")
    assert main(["oracle", "cyk", "--grammar", str(path), "--word", "abba"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "accepted"


def test_solve_all_pairs(capsys, dyck_graph):
    assert main(["solve", "--grammar", "dyck:1", "--graph", dyck_graph]) == EXIT_OK
    captured = capsys.readouterr()
    pairs = set(captured.out.splitlines())
    assert "v0 v2" in pairs
    assert "lonely lonely" in pairs
    assert "v0 v3" not in pairs
    assert "strategy" in captured.err


def test_solve_on_demand_exit_codes(capsys, dyck_graph):
    assert main(["solve", "--grammar", "dyck:1", "--graph", dyck_graph, "--pair", "v0", "v2"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "reachable"
    assert main(["solve", "--grammar", "dyck:1", "--graph", dyck_graph, "--pair", "v0", "v3",
                 "--strategy", "generic"]) == EXIT_UNREACHABLE
    assert capsys.readouterr().out.strip() == "unreachable"


def test_solve_writes_pairs_to_a_file(dyck_graph, tmp_path):
    out = tmp_path / "pairs.txt"
    assert main(["solve", "--grammar", "dyck:1", "--graph", dyck_graph, "--out", str(out)]) == EXIT_OK
    assert "v0 v2" in out.read_text(encoding="utf-8").splitlines()


def test_reduce_then_verify_the_bundle(capsys, tmp_path):
    bundle = tmp_path / "tri"
    code = main(["reduce", "triangle-dyck1", "--random", "3", "--plant", "--seed", "4", "--out", str(bundle)])
    assert code == EXIT_OK
    captured = capsys.readouterr()
    assert captured.out.strip() == str(bundle)
    assert "agrees" in captured.err
    assert (bundle / "graph.txt").is_file()
    assert (bundle / "truth.txt").read_text(encoding="utf-8").strip() == "true"

    assert main(["oracle", "verify", "--bundle", str(bundle)]) == EXIT_OK
    assert "true" in capsys.readouterr().out


def test_reduce_defaults_to_the_output_directory(monkeypatch, tmp_path, capsys):
    monkeypatch.setenv("CFL_LAB_OUT_DIR", str(tmp_path / "runs"))
    assert main(["reduce", "worst-case", "--n", "3"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == str(tmp_path / "runs" / "worst-case")


def test_reduce_input_errors(capsys, tmp_path):
    source = tmp_path / "source.txt"
    source.write_text("part A a1\npart B b1\npart C c1\na1 b1\nb1 c1\nc1 a1\n", encoding="utf-8")
    assert main(["reduce", "triangle-dyck1", "--in", str(source), "--random", "3"]) == EXIT_ERROR
    assert main(["reduce", "triangle-dyck1"]) == EXIT_ERROR
    assert main(["reduce", "bmm", "--matrix-a", str(source)]) == EXIT_ERROR
    assert "❌" in capsys.readouterr().err


def test_reduce_from_a_source_file(tmp_path):
    source = tmp_path / "source.txt"
    source.write_text("part A a1\npart B b1\npart C c1\na1 b1\nb1 c1\nc1 a1\n", encoding="utf-8")
    assert main(["reduce", "triangle-dyck1", "--in", str(source), "--out", str(tmp_path / "b")]) == EXIT_OK


def test_oracle_checks(capsys, tmp_path, dyck_graph):
    assert main(["oracle", "cyk", "--grammar", "anbn", "--word", "aabb"]) == EXIT_OK
    assert main(["oracle", "cyk", "--grammar", "anbn", "--word", "aab"]) == EXIT_UNREACHABLE
    assert main(["oracle", "bar-hillel", "--grammar", "dyck:1", "--graph", dyck_graph,
                 "--pair", "v0", "v2"]) == EXIT_OK
    capsys.readouterr()

    assert main(["oracle", "paths", "--graph", dyck_graph, "--pair", "v0", "v2", "--maxlen", "4"]) == EXIT_OK
    assert capsys.readouterr().out.splitlines() == ["()"]

    triangle = tmp_path / "k3.txt"
    triangle.write_text("a b\nb c\nc a\n", encoding="utf-8")
    assert main(["oracle", "triangle", "--in", str(triangle)]) == EXIT_OK
    assert main(["oracle", "clique", "--in", str(triangle), "--size", "3"]) == EXIT_OK
    assert main(["oracle", "cycle", "--in", str(triangle), "--k", "3"]) == EXIT_OK
    assert main(["oracle", "clique", "--in", str(triangle), "--size", "4"]) == EXIT_UNREACHABLE


def test_oracle_guardrails_and_missing_inputs(dyck_graph):
    assert main(["oracle", "paths", "--graph", dyck_graph, "--pair", "v0", "v2", "--maxlen", "20"]) == EXIT_ERROR
    assert main(["oracle", "bar-hillel", "--grammar", "dyck:1"]) == EXIT_ERROR
    assert main(["oracle", "verify"]) == EXIT_ERROR


def test_apa(capsys, tmp_path):
    assert main(["apa", "--word", "α e"]) == EXIT_OK
    assert main(["apa", "--word", "e alpha"]) == EXIT_UNREACHABLE
    capsys.readouterr()

    graph = tmp_path / "pointers.txt"
    graph.write_text("x y alpha\ny z e\n", encoding="utf-8")
    assert main(["apa", "--graph", str(graph), "--pair", "x", "z"]) == EXIT_OK
    assert main(["apa", "--graph", str(graph)]) == EXIT_OK
    assert capsys.readouterr().out.splitlines()[-2:] == ["x y", "x z"]

    graph.write_text("x y delta\n", encoding="utf-8")
    assert main(["apa", "--graph", str(graph)]) == EXIT_ERROR


def test_bench(capsys, tmp_path):
    plan = tmp_path / "plan.txt"
    plan.write_text("family = worst_case_output\npreset = dyck:1\nladder = 1, 2, 3, 4\n", encoding="utf-8")
    assert main(["bench", "--plan", str(plan), "--out", str(tmp_path / "bench")]) == EXIT_OK
    assert "slope=" in capsys.readouterr().out
    assert (tmp_path / "bench" / "worst_case_output.csv").is_file()
    assert (tmp_path / "bench" / "worst_case_output.dat").is_file()

    plan.write_text("family = worst_case_output\nladder = 4, 2\n", encoding="utf-8")
    assert main(["bench", "--plan", str(plan)]) == EXIT_ERROR


def test_usage_errors(capsys):
    assert main([]) == EXIT_ERROR
    assert main(["solve", "--grammar", "dyck:1"]) == EXIT_ERROR
    assert main(["classify", "--help"]) == EXIT_OK
    assert main(["solve", "--grammar", "dyck:1", "--graph", "missing.txt"]) == EXIT_ERROR
    assert main(["classify", "--grammar", "nonsense"]) == EXIT_ERROR


def test_bad_log_level_in_the_environment(monkeypatch, capsys):
    monkeypatch.setenv("CFL_LAB_LOG_LEVEL", "LOUD")
    assert main(["classify", "--grammar", "anbn"]) == EXIT_ERROR
    assert "invalid environment settings" in capsys.readouterr().err


def test_settings_defaults_and_overrides(monkeypatch, tmp_path):
    assert load_settings(str(tmp_path / "absent.env")) == LabSettings()
    for name in ("CFL_LAB_OUT_DIR", "CFL_LAB_SEED", "CFL_LAB_LOG_LEVEL"):
        # registered so the values the dotenv file sets are removed afterwards
        monkeypatch.setenv(name, "")
        monkeypatch.delenv(name)
    env = tmp_path / ".env"
    env.write_text("CFL_LAB_OUT_DIR=runs\nCFL_LAB_SEED=5\nCFL_LAB_LOG_LEVEL=info\n", encoding="utf-8")
    settings = load_settings(str(env))
    assert settings == LabSettings(out_dir="runs", seed=5, log_level="INFO")
    assert Path(settings.out_dir).name == "runs"
