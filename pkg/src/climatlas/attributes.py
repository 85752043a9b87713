"""Climate-severity attributes computed from one complete normals series.

Freeze index: degree-days (tavg - 32) are accumulated over a freeze-year
(Jul 1 -> Jun 30, so one winter is contiguous) and the FI is the maximum
drawdown of that cumulative curve, floored at 0. A warm-only series scores 0.

Freeze-thaw cycles: days whose max is strictly above 32 F and whose min is
strictly below 32 F.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .errors import MalformedRowError
from .ingest import DailyNormalsSeries, TimeWindow

FREEZE_POINT_F = 32.0

# Index of Jul 1 in the Jan-1-first 365-day calendar (Feb 29 excluded).
FREEZE_YEAR_START = 181

ATTRIBUTES_HEADER = [
    "station_id", "window", "freeze_index_fdays", "ftc_count", "mean_temp_f", "annual_precip_in",
]


@dataclass(frozen=True)
class ClimateAttributes:
    station_id: str
    window: TimeWindow
    freeze_index_fdays: float
    ftc_count: int
    mean_temp_f: float
    annual_precip_in: float


def degree_day(tavg_f: float) -> float:
    """Degree-day of one day: average temperature minus 32 F (negative = freezing)."""
    return tavg_f - FREEZE_POINT_F


def cumulative_curve(series: DailyNormalsSeries) -> np.ndarray:
    """Cumulative degree-day sums over the freeze-year ordering, length 365."""
    tavg = np.array([d.tavg_f for d in series.days], dtype=np.float64)
    rotated = np.concatenate([tavg[FREEZE_YEAR_START:], tavg[:FREEZE_YEAR_START]])
    return np.cumsum(rotated - FREEZE_POINT_F)


def max_drawdown(curve: np.ndarray) -> float:
    """Largest peak-to-trough descent of a cumulative curve, with S_0 = 0 prepended.

    Equals max over i <= j of (S_i - S_j); never negative because i = j is allowed.
    """
    s = np.concatenate([[0.0], np.asarray(curve, dtype=np.float64)])
    running_peak = np.maximum.accumulate(s)
    return float(np.max(running_peak - s))


def freeze_index(series: DailyNormalsSeries) -> float:
    """Freeze index in F-days: maximum drawdown of the cumulative degree-day curve."""
    return max_drawdown(cumulative_curve(series))


def freeze_thaw_cycles(series: DailyNormalsSeries) -> int:
    """Days straddling freezing: tmax strictly above and tmin strictly below 32 F."""
    return sum(
        1 for d in series.days if d.tmax_f > FREEZE_POINT_F and d.tmin_f < FREEZE_POINT_F
    )


def mean_annual_temperature(series: DailyNormalsSeries) -> float:
    return sum(d.tavg_f for d in series.days) / len(series.days)


def annual_precipitation(series: DailyNormalsSeries) -> float:
    """Annual precipitation total in inches (not a daily mean)."""
    return sum(d.prcp_in for d in series.days)


def compute_attributes(series: DailyNormalsSeries) -> ClimateAttributes:
    return ClimateAttributes(
        station_id=series.station_id,
        window=series.window,
        freeze_index_fdays=freeze_index(series),
        ftc_count=freeze_thaw_cycles(series),
        mean_temp_f=mean_annual_temperature(series),
        annual_precip_in=annual_precipitation(series),
    )


def attributes_to_csv(attrs: list[ClimateAttributes]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(ATTRIBUTES_HEADER)
    for a in attrs:
        writer.writerow(
            [
                a.station_id,
                a.window.label,
                f"{a.freeze_index_fdays:.4f}",
                a.ftc_count,
                f"{a.mean_temp_f:.4f}",
                f"{a.annual_precip_in:.4f}",
            ]
        )
    return out.getvalue()


def attributes_from_csv(text: str, source: str = "attributes.csv") -> list[ClimateAttributes]:
    reader = csv.reader(io.StringIO(text))
    rows = list(reader)
    if not rows or [h.strip() for h in rows[0]] != ATTRIBUTES_HEADER:
        raise MalformedRowError(source, 1, ATTRIBUTES_HEADER[0], "bad or missing header")
    attrs = []
    for line_no, row in enumerate(rows[1:], start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(ATTRIBUTES_HEADER):
            raise MalformedRowError(
                source, line_no, "*", f"expected {len(ATTRIBUTES_HEADER)} fields, got {len(row)}"
            )
        try:
            attrs.append(
                ClimateAttributes(
                    station_id=row[0].strip(),
                    window=TimeWindow.parse(row[1].strip()),
                    freeze_index_fdays=float(row[2]),
                    ftc_count=int(row[3]),
                    mean_temp_f=float(row[4]),
                    annual_precip_in=float(row[5]),
                )
            )
        except ValueError as exc:
            raise MalformedRowError(source, line_no, "*", str(exc)) from None
    return attrs
