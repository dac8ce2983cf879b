import io

import numpy as np
import pytest

from kregret import Dataset, load_csv, normalize
from oracles import NBA_CSV

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def nba_raw() -> Dataset:
    return load_csv(io.BytesIO(NBA_CSV), id_col="player name",
                    cols=["points", "rebs", "steals", "fouls"])


@pytest.fixture(scope="session")
def nba_pr(nba_raw) -> Dataset:
    """Normalized (points, rebs): x = points."""
    return normalize(nba_raw).select([0, 1])


@pytest.fixture(scope="session")
def nba_rp(nba_raw) -> Dataset:
    """Normalized (rebs, points): rebounds on the x-axis."""
    return normalize(nba_raw).select([1, 0])


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def nba_csv_path(tmp_path):
    path = tmp_path / "nba.csv"
    path.write_bytes(NBA_CSV)
    return path


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
