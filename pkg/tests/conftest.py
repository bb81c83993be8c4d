import random

import pytest

from agents.solver_agent import SolverAgent, SolverConfig


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)


@pytest.fixture
def solver() -> SolverAgent:
    return SolverAgent(SolverConfig())


@pytest.fixture(autouse=True)
def isolated_env(monkeypatch, tmp_path):
    """Keep a developer's .env and CFL_LAB_* variables out of the tests."""
    for name in ("CFL_LAB_OUT_DIR", "CFL_LAB_LOG_LEVEL", "CFL_LAB_SEED"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.chdir(tmp_path)
