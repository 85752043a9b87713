"""Station metadata and daily climate-normals ingestion.

Input files are plain CSV (see README for the schemas):

    stations.csv          station_id,name,latitude,longitude,state,elevation_m
    normals_<window>.csv  station_id,month,day,tmax_f,tmin_f,tavg_f,prcp_in

A station's normals series is kept only when all 365 calendar days
(Feb 29 excluded) are present and pass the per-day sanity checks; anything
else drops the station with an exclusion record rather than an error.
Temperatures are Fahrenheit and stay Fahrenheit throughout the package.
"""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass

from .errors import (
    CoordinateBoundsError,
    DuplicateStationIdError,
    MalformedRowError,
    UnknownMonthDayError,
)
from .regions import CONTIGUOUS_STATES

logger = logging.getLogger(__name__)

STATIONS_HEADER = ["station_id", "name", "latitude", "longitude", "state", "elevation_m"]
NORMALS_HEADER = ["station_id", "month", "day", "tmax_f", "tmin_f", "tavg_f", "prcp_in"]
EXCLUSIONS_HEADER = ["station_id", "reason", "detail"]

# Soft CONUS box: stations outside it are kept but logged.
CONUS_LON = (-125.0, -66.5)
CONUS_LAT = (24.0, 49.5)

TEMP_SANITY_F = (-80.0, 140.0)

MONTH_LENGTHS = (31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31)

# The 365 (month, day) pairs in calendar order, Feb 29 excluded.
CALENDAR_DAYS: tuple[tuple[int, int], ...] = tuple(
    (month, day)
    for month, length in enumerate(MONTH_LENGTHS, start=1)
    for day in range(1, length + 1)
)
_DAY_INDEX = {md: i for i, md in enumerate(CALENDAR_DAYS)}

CANONICAL_WINDOW_LABELS = ("1971-2000", "1981-2010", "1991-2020")


@dataclass(frozen=True, order=True)
class TimeWindow:
    """A 30-year climate-normals window such as 1991-2020."""

    start_year: int
    end_year: int

    def __post_init__(self):
        if self.end_year - self.start_year != 29:
            raise ValueError(
                f"window must span 30 years: {self.start_year}-{self.end_year}"
            )

    @property
    def label(self) -> str:
        return f"{self.start_year}-{self.end_year}"

    @classmethod
    def parse(cls, label: str) -> "TimeWindow":
        try:
            start, end = label.split("-")
            return cls(int(start), int(end))
        except ValueError as exc:
            raise ValueError(f"bad time window label '{label}': {exc}") from None

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class StationRecord:
    station_id: str
    name: str
    latitude: float
    longitude: float
    state: str
    elevation_m: float | None = None


@dataclass(frozen=True)
class DayNormal:
    month: int
    day: int
    tmax_f: float
    tmin_f: float
    tavg_f: float
    prcp_in: float


@dataclass(frozen=True)
class DailyNormalsSeries:
    """One station's complete 365-day normals for one window, Jan 1 -> Dec 31."""

    station_id: str
    window: TimeWindow
    days: tuple[DayNormal, ...]


@dataclass(frozen=True)
class Exclusion:
    """A station dropped at ingest, with the reason it was dropped."""

    station_id: str
    reason: str
    detail: str


def _parse_float(raw: str, source: str, line_no: int, column: str) -> float:
    # Tolerate the U+2212 minus some spreadsheet exports produce.
    text = raw.strip().replace("−", "-")
    try:
        return float(text)
    except ValueError:
        raise MalformedRowError(source, line_no, column, f"not a number: '{raw}'") from None


def _check_header(header: list[str] | None, expected: list[str], source: str):
    if header is None:
        raise MalformedRowError(source, 1, expected[0], "empty file, header row required")
    got = [h.strip() for h in header]
    if got != expected:
        raise MalformedRowError(
            source, 1, expected[0], f"bad header {got!r}, expected {expected!r}"
        )


def parse_stations(text: str, source: str = "stations.csv") -> list[StationRecord]:
    """Parse the station metadata CSV, preserving row order.

    Raises MalformedRowError / DuplicateStationIdError / CoordinateBoundsError;
    stations outside the soft CONUS box are kept with a logged warning.
    """
    reader = csv.reader(io.StringIO(text))
    rows = list(reader)
    _check_header(rows[0] if rows else None, STATIONS_HEADER, source)

    stations: list[StationRecord] = []
    seen: set[str] = set()
    for line_no, row in enumerate(rows[1:], start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(STATIONS_HEADER):
            raise MalformedRowError(
                source, line_no, "*", f"expected {len(STATIONS_HEADER)} fields, got {len(row)}"
            )
        station_id = row[0].strip()
        if not station_id:
            raise MalformedRowError(source, line_no, "station_id", "must be non-empty")
        if station_id in seen:
            raise DuplicateStationIdError(station_id, source, line_no)
        seen.add(station_id)

        lat = _parse_float(row[2], source, line_no, "latitude")
        lon = _parse_float(row[3], source, line_no, "longitude")
        if not -90.0 <= lat <= 90.0:
            raise CoordinateBoundsError(station_id, f"latitude {lat} outside [-90, 90]")
        if not -180.0 <= lon <= 180.0:
            raise CoordinateBoundsError(station_id, f"longitude {lon} outside [-180, 180]")
        if not (CONUS_LAT[0] <= lat <= CONUS_LAT[1] and CONUS_LON[0] <= lon <= CONUS_LON[1]):
            logger.warning(
                "station %s at (%.4f, %.4f) lies outside the nominal CONUS box",
                station_id, lon, lat,
            )

        elevation = row[5].strip()
        stations.append(
            StationRecord(
                station_id=station_id,
                name=row[1].strip(),
                latitude=lat,
                longitude=lon,
                state=row[4].strip().upper(),
                elevation_m=_parse_float(row[5], source, line_no, "elevation_m")
                if elevation
                else None,
            )
        )
    return stations


def write_stations_csv(stations: list[StationRecord]) -> str:
    """Serialize stations so that re-parsing yields an identical list."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(STATIONS_HEADER)
    for s in stations:
        writer.writerow(
            [
                s.station_id,
                s.name,
                repr(s.latitude),
                repr(s.longitude),
                s.state,
                "" if s.elevation_m is None else repr(s.elevation_m),
            ]
        )
    return out.getvalue()


def filter_contiguous(stations: list[StationRecord]) -> list[StationRecord]:
    """Keep only stations in one of the 48 contiguous states."""
    return [s for s in stations if s.state in CONTIGUOUS_STATES]


def _day_valid(day: DayNormal) -> str | None:
    """Return a human-readable defect for an invalid day, or None if fine."""
    lo, hi = TEMP_SANITY_F
    for column, value in (("tmax_f", day.tmax_f), ("tmin_f", day.tmin_f), ("tavg_f", day.tavg_f)):
        if not lo <= value <= hi:
            return f"{column}={value} outside sanity band [{lo}, {hi}]"
    if not day.tmin_f <= day.tavg_f <= day.tmax_f:
        return f"tavg_f={day.tavg_f} outside [tmin_f={day.tmin_f}, tmax_f={day.tmax_f}]"
    if day.prcp_in < 0:
        return f"prcp_in={day.prcp_in} is negative"
    return None


def parse_normals(
    text: str, window: TimeWindow, source: str = "normals.csv"
) -> tuple[list[DailyNormalsSeries], list[Exclusion]]:
    """Parse a daily-normals CSV into complete 365-day series.

    Stations missing any calendar day, or with any day failing the sanity
    checks, are dropped and reported as exclusions (one per station).
    Feb 29 rows are ignored. An empty tavg_f falls back to the
    (tmax_f + tmin_f) / 2 midpoint.
    """
    reader = csv.reader(io.StringIO(text))
    rows = list(reader)
    _check_header(rows[0] if rows else None, NORMALS_HEADER, source)

    # station_id -> day index -> DayNormal
    per_station: dict[str, dict[int, DayNormal]] = {}
    defects: dict[str, tuple[str, str]] = {}  # first defect wins: id -> (reason, detail)

    for line_no, row in enumerate(rows[1:], start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(NORMALS_HEADER):
            raise MalformedRowError(
                source, line_no, "*", f"expected {len(NORMALS_HEADER)} fields, got {len(row)}"
            )
        station_id = row[0].strip()
        if not station_id:
            raise MalformedRowError(source, line_no, "station_id", "must be non-empty")
        try:
            month = int(row[1])
            day = int(row[2])
        except ValueError:
            raise MalformedRowError(
                source, line_no, "month/day", f"not integers: '{row[1]}', '{row[2]}'"
            ) from None
        days = per_station.setdefault(station_id, {})
        if (month, day) == (2, 29):
            continue  # normals are 365-day; leap day is dropped silently
        if (month, day) not in _DAY_INDEX:
            raise UnknownMonthDayError(source, line_no, month, day)

        tmax = _parse_float(row[3], source, line_no, "tmax_f")
        tmin = _parse_float(row[4], source, line_no, "tmin_f")
        tavg = (
            _parse_float(row[5], source, line_no, "tavg_f")
            if row[5].strip()
            else (tmax + tmin) / 2.0
        )
        prcp = _parse_float(row[6], source, line_no, "prcp_in")

        normal = DayNormal(month=month, day=day, tmax_f=tmax, tmin_f=tmin, tavg_f=tavg, prcp_in=prcp)
        index = _DAY_INDEX[(month, day)]
        if index in days:
            defects.setdefault(station_id, ("duplicate_day", f"day {month}-{day} appears twice"))
            continue
        defect = _day_valid(normal)
        if defect is not None:
            defects.setdefault(station_id, ("invalid_day", f"day {month}-{day}: {defect}"))
            continue
        days[index] = normal

    series: list[DailyNormalsSeries] = []
    exclusions: list[Exclusion] = []
    for station_id, days in per_station.items():
        if station_id in defects:
            reason, detail = defects[station_id]
            exclusions.append(Exclusion(station_id, reason, detail))
            continue
        if len(days) != len(CALENDAR_DAYS):
            missing = [CALENDAR_DAYS[i] for i in range(len(CALENDAR_DAYS)) if i not in days]
            first = f"{missing[0][0]}-{missing[0][1]}"
            extra = f" and {len(missing) - 1} more" if len(missing) > 1 else ""
            exclusions.append(
                Exclusion(station_id, "incomplete", f"missing day {first}{extra}")
            )
            continue
        series.append(
            DailyNormalsSeries(
                station_id=station_id,
                window=window,
                days=tuple(days[i] for i in range(len(CALENDAR_DAYS))),
            )
        )
    return series, exclusions


def write_exclusions_csv(exclusions: list[Exclusion]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(EXCLUSIONS_HEADER)
    for e in exclusions:
        writer.writerow([e.station_id, e.reason, e.detail])
    return out.getvalue()
