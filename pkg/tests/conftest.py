from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from climatlas.ingest import CALENDAR_DAYS, DailyNormalsSeries, DayNormal, TimeWindow

DATA_DIR = Path(__file__).parent / "data"
FIXTURE_DIR = DATA_DIR / "fixture"
GOLDEN_DIR = DATA_DIR / "golden"

WINDOW = TimeWindow.parse("1991-2020")


def make_series(
    tavg,
    tmax=None,
    tmin=None,
    prcp=None,
    station_id: str = "X",
    window: TimeWindow = WINDOW,
) -> DailyNormalsSeries:
    """Build a 365-day series from per-day arrays (scalars broadcast)."""
    tavg = np.broadcast_to(np.asarray(tavg, dtype=float), (365,))
    tmax = tavg + 10.0 if tmax is None else np.broadcast_to(np.asarray(tmax, dtype=float), (365,))
    tmin = tavg - 10.0 if tmin is None else np.broadcast_to(np.asarray(tmin, dtype=float), (365,))
    prcp = (
        np.full(365, 0.1) if prcp is None else np.broadcast_to(np.asarray(prcp, dtype=float), (365,))
    )
    days = tuple(
        DayNormal(m, d, float(tmax[i]), float(tmin[i]), float(tavg[i]), float(prcp[i]))
        for i, (m, d) in enumerate(CALENDAR_DAYS)
    )
    return DailyNormalsSeries(station_id=station_id, window=window, days=days)


def random_series(rng: np.random.Generator, station_id: str = "X") -> DailyNormalsSeries:
    """A random series spanning freezing and warm days, honoring the day invariants."""
    tavg = rng.uniform(-20.0, 90.0, 365)
    tmax = tavg + rng.uniform(0.0, 25.0, 365)
    tmin = tavg - rng.uniform(0.0, 25.0, 365)
    prcp = rng.uniform(0.0, 0.5, 365)
    return make_series(tavg, tmax, tmin, prcp, station_id=station_id)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260810)


def pytest_addoption(parser):
    parser.addoption(
        "--real-data-dir",
        default=None,
        help="directory holding converted NOAA normals (stations.csv, "
        "normals_1991-2020.csv) for the optional real-data smoke test",
    )


@pytest.fixture
def real_data_dir(request) -> Path:
    path = request.config.getoption("--real-data-dir")
    if not path:
        pytest.skip("real-data smoke test needs --real-data-dir")
    return Path(path)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion at the end of every run."""
    lines = {}
    for status in ("passed", "failed", "skipped"):
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance" in nodeid and getattr(report, "when", "call") in ("call", "setup"):
                lines.setdefault(nodeid, status.upper())
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for nodeid, status in sorted(lines.items()):
            terminalreporter.write_line(f"{status}: {nodeid}")
