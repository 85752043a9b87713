"""NOAA climate regions and cross-window significance statistics.

The nine regions partition the 48 contiguous states. Station-level attribute
values, grouped by region, are compared across two normals windows with a
one-factor ANOVA; with two groups this is equivalent to the pooled t-test
(F = t^2), which the test suite exploits as a cross-check.
"""

from __future__ import annotations

import io
import csv
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, NamedTuple, Sequence

from scipy.special import betainc

from .errors import (
    DegenerateGroupError,
    EmptyValuesError,
    NonContiguousStateError,
    UnjoinableStationError,
    ZeroWithinVarianceError,
)

if TYPE_CHECKING:
    from .attributes import ClimateAttributes
    from .ingest import StationRecord, TimeWindow

REGIONS: dict[str, frozenset[str]] = {
    "Northwest": frozenset({"ID", "OR", "WA"}),
    "West": frozenset({"CA", "NV"}),
    "Northern Rockies and Plains": frozenset({"MT", "NE", "ND", "SD", "WY"}),
    "Southwest": frozenset({"AZ", "CO", "NM", "UT"}),
    "Upper Midwest": frozenset({"IA", "MI", "MN", "WI"}),
    "Ohio Valley": frozenset({"IL", "IN", "KY", "MO", "OH", "TN", "WV"}),
    "South": frozenset({"AR", "KS", "LA", "MS", "OK", "TX"}),
    "Southeast": frozenset({"AL", "FL", "GA", "NC", "SC", "VA"}),
    "Northeast": frozenset(
        {"CT", "DE", "ME", "MD", "MA", "NH", "NJ", "NY", "PA", "RI", "VT"}
    ),
}

REGION_ORDER: tuple[str, ...] = tuple(REGIONS)

# Report column order: FI, FTC, precipitation, temperature.
ATTRIBUTE_ORDER: tuple[str, ...] = (
    "freeze_index",
    "freeze_thaw_cycles",
    "precipitation",
    "temperature",
)

CONTIGUOUS_STATES: frozenset[str] = frozenset().union(*REGIONS.values())

_STATE_TO_REGION: dict[str, str] = {
    state: region for region, states in REGIONS.items() for state in states
}

DEFAULT_ALPHA = 0.05

SIGNIFICANCE_HEADER = [
    "region", "attribute", "f_stat", "df_between", "df_within", "p_value", "significant",
]
SUMMARY_HEADER = ["region", "window", "attribute", "mean", "count", "std_dev"]
HISTOGRAM_HEADER = ["attribute", "window", "bin_lo", "bin_hi", "count", "share"]


def assign_region(state: str) -> str:
    """Map a contiguous-state USPS code to its NOAA climate region."""
    try:
        return _STATE_TO_REGION[state]
    except KeyError:
        raise NonContiguousStateError(state) from None


@dataclass(frozen=True)
class RegionSummary:
    region: str
    window: "TimeWindow"
    attribute: str
    mean: float
    count: int
    std_dev: float


class AnovaCore(NamedTuple):
    """F statistic, degrees of freedom, and p-value of a two-group ANOVA."""

    f_stat: float
    df_between: int
    df_within: int
    p_value: float


@dataclass(frozen=True)
class AnovaResult:
    """One region x attribute comparison row.

    Rows for regions with fewer than two stations in either window carry
    None statistics and are never significant.
    """

    region: str
    attribute: str
    f_stat: float | None
    df_between: int | None
    df_within: int | None
    p_value: float | None
    significant: bool


@dataclass(frozen=True)
class Histogram:
    bin_edges: tuple[float, ...]
    counts: tuple[int, ...]

    @property
    def shares(self) -> tuple[float, ...]:
        total = sum(self.counts)
        return tuple(c / total for c in self.counts)


def f_upper_tail(f_stat: float, df_between: int, df_within: int) -> float:
    """P(F > f) for the F(df_between, df_within) distribution.

    Evaluated through the regularized incomplete beta function:
    I_x(d2/2, d1/2) at x = d2 / (d2 + d1 * f).
    """
    if f_stat <= 0.0:
        return 1.0
    d1, d2 = float(df_between), float(df_within)
    x = d2 / (d2 + d1 * f_stat)
    return float(betainc(d2 / 2.0, d1 / 2.0, x))


def one_way_anova(
    group_a: Sequence[float], group_b: Sequence[float]
) -> AnovaCore:
    """One-factor ANOVA for exactly two groups.

    Groups with all values identical across both groups (zero within-group
    variance, equal means) yield F = 0, p = 1; zero within-group variance
    with unequal means is rejected as degenerate input.
    """
    n_a, n_b = len(group_a), len(group_b)
    if n_a < 2 or n_b < 2:
        raise DegenerateGroupError(f"each group needs >= 2 values, got {n_a} and {n_b}")

    mean_a = sum(group_a) / n_a
    mean_b = sum(group_b) / n_b
    n = n_a + n_b
    grand = (sum(group_a) + sum(group_b)) / n

    ss_between = n_a * (mean_a - grand) ** 2 + n_b * (mean_b - grand) ** 2
    ss_within = sum((v - mean_a) ** 2 for v in group_a) + sum(
        (v - mean_b) ** 2 for v in group_b
    )
    df_between = 1
    df_within = n - 2

    if ss_within == 0.0:
        if mean_a == mean_b:
            return AnovaCore(0.0, df_between, df_within, 1.0)
        raise ZeroWithinVarianceError(
            "zero within-group variance with unequal group means"
        )

    f_stat = (ss_between / df_between) / (ss_within / df_within)
    return AnovaCore(f_stat, df_between, df_within, f_upper_tail(f_stat, df_between, df_within))


def attribute_value(attrs: "ClimateAttributes", attribute: str) -> float:
    fields = {
        "freeze_index": "freeze_index_fdays",
        "freeze_thaw_cycles": "ftc_count",
        "temperature": "mean_temp_f",
        "precipitation": "annual_precip_in",
    }
    try:
        return float(getattr(attrs, fields[attribute]))
    except KeyError:
        raise ValueError(
            f"unknown attribute '{attribute}', expected one of {sorted(fields)}"
        ) from None


def _region_of(station_index: dict[str, "StationRecord"], station_id: str) -> str:
    try:
        station = station_index[station_id]
    except KeyError:
        raise UnjoinableStationError(station_id) from None
    return assign_region(station.state)


def region_summary(
    attrs: Iterable["ClimateAttributes"],
    stations: Sequence["StationRecord"],
    window: "TimeWindow",
    attribute: str,
) -> list[RegionSummary]:
    """Per-region mean / count / sample std-dev of one attribute.

    std_dev uses the n-1 denominator and is defined as 0 for singletons.
    """
    station_index = {s.station_id: s for s in stations}
    groups: dict[str, list[float]] = {}
    for a in attrs:
        region = _region_of(station_index, a.station_id)
        groups.setdefault(region, []).append(attribute_value(a, attribute))

    rows = []
    for region in REGION_ORDER:
        if region not in groups:
            continue
        values = groups[region]
        n = len(values)
        mean = sum(values) / n
        std = math.sqrt(sum((v - mean) ** 2 for v in values) / (n - 1)) if n > 1 else 0.0
        rows.append(RegionSummary(region, window, attribute, mean, n, std))
    return rows


def significance_table(
    paired_attrs_old: Sequence["ClimateAttributes"],
    paired_attrs_new: Sequence["ClimateAttributes"],
    stations: Sequence["StationRecord"],
    alpha: float = DEFAULT_ALPHA,
) -> list[AnovaResult]:
    """Compare the two windows per region per attribute: 9 x 4 = 36 rows.

    Regions with fewer than two stations in either window become
    insufficient-data rows (None statistics) rather than being omitted.
    """
    station_index = {s.station_id: s for s in stations}
    old_groups: dict[str, list["ClimateAttributes"]] = {}
    new_groups: dict[str, list["ClimateAttributes"]] = {}
    for bucket, attrs in ((old_groups, paired_attrs_old), (new_groups, paired_attrs_new)):
        for a in attrs:
            bucket.setdefault(_region_of(station_index, a.station_id), []).append(a)

    rows: list[AnovaResult] = []
    for region in REGION_ORDER:
        old_attrs = old_groups.get(region, [])
        new_attrs = new_groups.get(region, [])
        for attribute in ATTRIBUTE_ORDER:
            if len(old_attrs) < 2 or len(new_attrs) < 2:
                rows.append(AnovaResult(region, attribute, None, None, None, None, False))
                continue
            core = one_way_anova(
                [attribute_value(a, attribute) for a in old_attrs],
                [attribute_value(a, attribute) for a in new_attrs],
            )
            rows.append(
                AnovaResult(
                    region,
                    attribute,
                    core.f_stat,
                    core.df_between,
                    core.df_within,
                    core.p_value,
                    core.p_value < alpha,
                )
            )
    return rows


def histogram(values: Sequence[float], bin_width: float, origin: float = 0.0) -> Histogram:
    """Half-open bins [edge_k, edge_k+1) anchored at origin, covering all values."""
    if not values:
        raise EmptyValuesError("cannot histogram an empty value list")
    if bin_width <= 0:
        raise ValueError(f"bin_width must be > 0, got {bin_width}")
    lo = min(values)
    hi = max(values)
    first = math.floor((lo - origin) / bin_width)
    last = math.floor((hi - origin) / bin_width)
    edges = [origin + k * bin_width for k in range(first, last + 2)]
    counts = [0] * (len(edges) - 1)
    for v in values:
        counts[math.floor((v - origin) / bin_width) - first] += 1
    return Histogram(tuple(edges), tuple(counts))


def format_p_value(p: float) -> str:
    # Matches the report precision; very small values render as a floor.
    return "<0.0001" if p < 0.00005 else f"{p:.4f}"


def significance_to_csv(rows: Sequence[AnovaResult]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(SIGNIFICANCE_HEADER)
    for r in rows:
        if r.f_stat is None:
            writer.writerow([r.region, r.attribute, "NA", "NA", "NA", "NA", "false"])
        else:
            writer.writerow(
                [
                    r.region,
                    r.attribute,
                    f"{r.f_stat:.4f}",
                    r.df_between,
                    r.df_within,
                    format_p_value(r.p_value),
                    "true" if r.significant else "false",
                ]
            )
    return out.getvalue()


def summaries_to_csv(rows: Sequence[RegionSummary]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(SUMMARY_HEADER)
    for r in rows:
        writer.writerow(
            [r.region, r.window.label, r.attribute, f"{r.mean:.4f}", r.count, f"{r.std_dev:.4f}"]
        )
    return out.getvalue()


def histograms_to_csv(
    labelled: Sequence[tuple[str, "TimeWindow", Histogram]]
) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(HISTOGRAM_HEADER)
    for attribute, window, hist in labelled:
        shares = hist.shares
        for k, count in enumerate(hist.counts):
            writer.writerow(
                [
                    attribute,
                    window.label,
                    f"{hist.bin_edges[k]:.4f}",
                    f"{hist.bin_edges[k + 1]:.4f}",
                    count,
                    f"{shares[k]:.6f}",
                ]
            )
    return out.getvalue()
