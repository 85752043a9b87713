"""End-to-end pipeline steps, each mapping input file texts to output artifacts.

These functions are the substance behind the service endpoints (and through
them, the CLI): ingest -> attribute tables, attribute tables -> IDW raster,
raster -> contour GeoJSON, and two attribute tables -> cross-window
comparison reports. They never touch the filesystem; callers decide where
artifact payloads land.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import attributes as attr_mod
from . import ingest as ingest_mod
from .errors import ConfigError, EmptySamplesError, UnjoinableStationError
from .ingest import StationRecord, TimeWindow
from .interpolate import SamplePoint, idw_grid, nearest_neighbor_match, pairings_to_csv
from .isarithm import contours_to_geojson, extract_contours, levels_for
from .raster import GridSpec, load_mask, parse_esri_ascii, to_esri_ascii
from .regions import (
    ATTRIBUTE_ORDER,
    AnovaResult,
    attribute_value,
    histogram,
    histograms_to_csv,
    region_summary,
    significance_table,
    significance_to_csv,
    summaries_to_csv,
)

DEFAULT_HIST_WIDTHS = {
    "freeze_index": 100.0,
    "freeze_thaw_cycles": 10.0,
    "temperature": 2.0,
    "precipitation": 5.0,
}


@dataclass(frozen=True)
class Artifact:
    """One output file: a path relative to the output directory, plus content."""

    path: str
    content: str


@dataclass(frozen=True)
class WindowIngest:
    window: str
    series_retained: int
    series_excluded: int


def _check_attribute(attribute: str):
    if attribute not in ATTRIBUTE_ORDER:
        raise ConfigError(
            f"unknown attribute '{attribute}', expected one of {sorted(ATTRIBUTE_ORDER)}"
        )


def attributes_artifact_path(window: str) -> str:
    return f"attributes/attributes_{window}.csv"


def exclusions_artifact_path(window: str) -> str:
    return f"attributes/exclusions_{window}.csv"


def raster_artifact_path(attribute: str, window: str) -> str:
    return f"rasters/{attribute}_{window}.asc"


def contour_artifact_path(stem: str) -> str:
    return f"contours/{stem}.geojson"


def run_ingest(
    stations_csv: str,
    normals_by_window: dict[str, str],
    stations_name: str = "stations.csv",
    normals_names: dict[str, str] | None = None,
) -> tuple[list[Artifact], list[WindowIngest]]:
    """Parse stations + per-window normals into attribute tables and exclusion reports.

    Series without a matching contiguous-US station record are excluded (the
    interpolation and regional statistics need coordinates and a state).
    """
    stations = ingest_mod.parse_stations(stations_csv, stations_name)
    conus_ids = {s.station_id for s in ingest_mod.filter_contiguous(stations)}
    known_ids = {s.station_id for s in stations}

    artifacts: list[Artifact] = []
    counts: list[WindowIngest] = []
    for label in sorted(normals_by_window, key=lambda lb: TimeWindow.parse(lb)):
        window = TimeWindow.parse(label)
        name = (normals_names or {}).get(label, f"normals_{label}.csv")
        series, exclusions = ingest_mod.parse_normals(normals_by_window[label], window, name)

        kept = []
        for s in series:
            if s.station_id in conus_ids:
                kept.append(s)
            elif s.station_id in known_ids:
                exclusions.append(
                    ingest_mod.Exclusion(s.station_id, "not_contiguous", "station outside the 48 contiguous states")
                )
            else:
                exclusions.append(
                    ingest_mod.Exclusion(s.station_id, "unknown_station", f"no row in {stations_name}")
                )
        computed = [attr_mod.compute_attributes(s) for s in kept]
        artifacts.append(
            Artifact(attributes_artifact_path(label), attr_mod.attributes_to_csv(computed))
        )
        artifacts.append(
            Artifact(exclusions_artifact_path(label), ingest_mod.write_exclusions_csv(exclusions))
        )
        counts.append(WindowIngest(label, len(computed), len(exclusions)))
    return artifacts, counts


def _join_stations(
    attrs: list, stations: list[StationRecord]
) -> list[StationRecord]:
    index = {s.station_id: s for s in stations}
    joined = []
    for a in attrs:
        if a.station_id not in index:
            raise UnjoinableStationError(a.station_id)
        joined.append(index[a.station_id])
    return joined


def run_grid(
    stations_csv: str,
    attributes_csv: str,
    window: str,
    attribute: str,
    spec: GridSpec,
    power: float = 2.0,
    mask_geojson: str | None = None,
    parallel: int = 1,
    stations_name: str = "stations.csv",
    attributes_name: str = "attributes.csv",
    mask_name: str = "mask.geojson",
) -> tuple[Artifact, int]:
    """Interpolate one window x attribute onto the grid; returns (raster, #stations)."""
    _check_attribute(attribute)
    stations = ingest_mod.parse_stations(stations_csv, stations_name)
    attrs = [
        a
        for a in attr_mod.attributes_from_csv(attributes_csv, attributes_name)
        if a.window.label == window
    ]
    if not attrs:
        raise EmptySamplesError(f"{attributes_name} holds no rows for window {window}")
    joined = _join_stations(attrs, stations)
    samples = [
        SamplePoint(s.longitude, s.latitude, attribute_value(a, attribute))
        for a, s in zip(attrs, joined)
    ]
    mask = load_mask(mask_geojson, mask_name) if mask_geojson is not None else None
    grid = idw_grid(samples, spec, power=power, mask=mask, parallel=parallel)
    return Artifact(raster_artifact_path(attribute, window), to_esri_ascii(grid)), len(samples)


def run_contour(
    raster_asc: str,
    attribute: str,
    levels: list[float] | None = None,
    out_stem: str | None = None,
    raster_name: str = "raster.asc",
) -> tuple[Artifact, int]:
    """Contour a raster at the given (or default per-attribute) levels."""
    _check_attribute(attribute)
    grid = parse_esri_ascii(raster_asc, raster_name)
    if levels is None:
        levels = levels_for(attribute, grid)
    contour_sets = extract_contours(grid, levels, attribute)
    feature_count = sum(len(cs.lines) for cs in contour_sets)
    stem = out_stem or attribute
    return Artifact(contour_artifact_path(stem), contours_to_geojson(contour_sets)), feature_count


def run_compare(
    stations_csv: str,
    attributes_old_csv: str,
    attributes_new_csv: str,
    window_old: str,
    window_new: str,
    alpha: float = 0.05,
    hist_widths: dict[str, float] | None = None,
    stations_name: str = "stations.csv",
) -> tuple[list[Artifact], list[AnovaResult]]:
    """Cross-window comparison: pairing, 36-row significance table, summaries, histograms.

    Old-window stations are each matched to their nearest new-window station,
    and the matched new values (repeats allowed) form the new-window group.
    """
    stations = ingest_mod.parse_stations(stations_csv, stations_name)
    old_win, new_win = TimeWindow.parse(window_old), TimeWindow.parse(window_new)

    def load(text: str, label: str) -> list:
        rows = [
            a
            for a in attr_mod.attributes_from_csv(text, f"attributes_{label}.csv")
            if a.window.label == label
        ]
        if not rows:
            raise EmptySamplesError(f"no attribute rows for window {label}")
        return rows

    old_attrs = load(attributes_old_csv, window_old)
    new_attrs = load(attributes_new_csv, window_new)

    pairings = nearest_neighbor_match(
        _join_stations(new_attrs, stations), _join_stations(old_attrs, stations)
    )
    new_by_id = {a.station_id: a for a in new_attrs}
    paired_new = [new_by_id[p.new_station_id] for p in pairings]

    table = significance_table(old_attrs, paired_new, stations, alpha=alpha)

    widths = dict(DEFAULT_HIST_WIDTHS)
    widths.update(hist_widths or {})

    artifacts = [
        Artifact(f"reports/pairing_{window_old}_{window_new}.csv", pairings_to_csv(pairings)),
        Artifact(
            f"reports/significance_{window_old}_{window_new}.csv", significance_to_csv(table)
        ),
    ]
    for win, attrs in ((old_win, old_attrs), (new_win, paired_new)):
        summaries = []
        hists = []
        for attribute in ATTRIBUTE_ORDER:
            summaries.extend(region_summary(attrs, stations, win, attribute))
            values = [attribute_value(a, attribute) for a in attrs]
            hists.append((attribute, win, histogram(values, widths[attribute])))
        artifacts.append(
            Artifact(f"reports/summary_{win.label}.csv", summaries_to_csv(summaries))
        )
        artifacts.append(
            Artifact(f"reports/histograms_{win.label}.csv", histograms_to_csv(hists))
        )

    flagged = [r for r in table if r.significant]
    return artifacts, flagged
