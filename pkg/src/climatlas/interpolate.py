"""Inverse-distance-weighted interpolation and station matching.

Distances are great-circle kilometers on a sphere (haversine). Every sample
participates in every prediction -- there is no search radius or k-nearest
cutoff -- so a prediction is a convex combination of all sample values.
A target closer than 1e-9 km to a sample takes that sample's value exactly.

Grid fill is data-parallel over fixed-size cell chunks; the chunking is
independent of the worker count, so serial and parallel runs produce
bit-identical rasters.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import EmptySamplesError, EmptyStationListError
from .ingest import StationRecord
from .raster import NODATA, GridSpec, RasterGrid, mask_contains

EARTH_RADIUS_KM = 6371.0088
COINCIDENT_KM = 1e-9

# Cells per work unit in idw_grid; fixed so the parallel degree cannot
# influence per-cell arithmetic. Sized to keep the per-chunk distance
# matrix modest even against a ~6,000-station network.
_CHUNK_CELLS = 1024

PAIRING_HEADER = ["new_station_id", "old_station_id", "separation_km"]


@dataclass(frozen=True)
class SamplePoint:
    longitude: float
    latitude: float
    value: float


@dataclass(frozen=True)
class StationPairing:
    new_station_id: str
    old_station_id: str
    separation_km: float


def haversine_km(lon_a: float, lat_a: float, lon_b: float, lat_b: float) -> float:
    """Great-circle distance in km between two lon/lat points."""
    phi_a, phi_b = math.radians(lat_a), math.radians(lat_b)
    dphi = phi_b - phi_a
    dlam = math.radians(lon_b - lon_a)
    h = math.sin(dphi / 2.0) ** 2 + math.cos(phi_a) * math.cos(phi_b) * math.sin(dlam / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_KM * math.asin(min(1.0, math.sqrt(h)))


def _haversine_matrix(
    lons: np.ndarray, lats: np.ndarray, sample_lons: np.ndarray, sample_lats: np.ndarray
) -> np.ndarray:
    """Distances (km) from each target point (rows) to each sample (columns)."""
    phi_t = np.radians(lats)[:, None]
    phi_s = np.radians(sample_lats)[None, :]
    dphi = phi_s - phi_t
    dlam = np.radians(sample_lons)[None, :] - np.radians(lons)[:, None]
    h = np.sin(dphi / 2.0) ** 2 + np.cos(phi_t) * np.cos(phi_s) * np.sin(dlam / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_KM * np.arcsin(np.minimum(1.0, np.sqrt(h)))


def _idw_values(
    lons: np.ndarray,
    lats: np.ndarray,
    sample_lons: np.ndarray,
    sample_lats: np.ndarray,
    sample_values: np.ndarray,
    power: float,
) -> np.ndarray:
    """IDW predictions for an array of target points against shared samples."""
    d = np.ascontiguousarray(_haversine_matrix(lons, lats, sample_lons, sample_lats))
    coincident = d < COINCIDENT_KM
    with np.errstate(divide="ignore", invalid="ignore"):
        w = d ** (-power)
        # normalize by the row max: better conditioned, and a lone sample
        # (weight exactly 1) comes back bit-exact
        w /= w.max(axis=1, keepdims=True)
        out = np.sum(w * sample_values[None, :], axis=1) / np.sum(w, axis=1)
    hits = np.nonzero(coincident.any(axis=1))[0]
    for i in hits:
        out[i] = sample_values[np.argmax(coincident[i])]
    return out


def _sample_arrays(samples: Sequence[SamplePoint]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    if not samples:
        raise EmptySamplesError("at least one sample point is required")
    lons = np.array([s.longitude for s in samples], dtype=np.float64)
    lats = np.array([s.latitude for s in samples], dtype=np.float64)
    values = np.array([s.value for s in samples], dtype=np.float64)
    return lons, lats, values


def idw_predict(
    longitude: float, latitude: float, samples: Sequence[SamplePoint], power: float = 2.0
) -> float:
    """Inverse-distance-weighted prediction at one point.

    weight_j = 1 / d_j^power; the result is sum(w_j * v_j) / sum(w_j) and
    always lies within the sample value range.
    """
    if power <= 0:
        raise ValueError(f"power must be > 0, got {power}")
    s_lons, s_lats, s_values = _sample_arrays(samples)
    out = _idw_values(
        np.array([longitude], dtype=np.float64),
        np.array([latitude], dtype=np.float64),
        s_lons, s_lats, s_values, power,
    )
    return float(out[0])


def idw_grid(
    samples: Sequence[SamplePoint],
    spec: GridSpec,
    power: float = 2.0,
    mask: list[list[np.ndarray]] | None = None,
    parallel: int = 1,
) -> RasterGrid:
    """Fill a raster with per-cell-center IDW predictions.

    Cells whose centers fall outside the mask (when given) hold NODATA.
    parallel <= 1 runs serially; any worker count yields bit-identical output.
    """
    if power <= 0:
        raise ValueError(f"power must be > 0, got {power}")
    s_lons, s_lats, s_values = _sample_arrays(samples)

    lon_centers = spec.center_lons()
    lat_centers = spec.center_lats()
    grid_lons = np.tile(lon_centers, spec.nrows)
    grid_lats = np.repeat(lat_centers, spec.ncols)

    flat = np.full(spec.nrows * spec.ncols, NODATA, dtype=np.float64)
    if mask is None:
        active = np.arange(flat.size)
    else:
        active = np.nonzero(mask_contains(mask, grid_lons, grid_lats))[0]

    chunks = [active[i : i + _CHUNK_CELLS] for i in range(0, active.size, _CHUNK_CELLS)]

    def fill(chunk: np.ndarray):
        flat[chunk] = _idw_values(
            grid_lons[chunk], grid_lats[chunk], s_lons, s_lats, s_values, power
        )

    if parallel <= 1 or len(chunks) <= 1:
        for chunk in chunks:
            fill(chunk)
    else:
        with ThreadPoolExecutor(max_workers=parallel) as pool:
            list(pool.map(fill, chunks))

    return RasterGrid(spec=spec, values=flat.reshape(spec.nrows, spec.ncols))


def nearest_neighbor_match(
    new_stations: Sequence[StationRecord], old_stations: Sequence[StationRecord]
) -> list[StationPairing]:
    """Pair every old station with its geographically nearest new station.

    Distance ties break to the lexicographically smallest new station_id.
    A new station may serve several old stations.
    """
    if not new_stations or not old_stations:
        raise EmptyStationListError("both station lists must be non-empty")
    new_lons = np.array([s.longitude for s in new_stations], dtype=np.float64)
    new_lats = np.array([s.latitude for s in new_stations], dtype=np.float64)
    old_lons = np.array([s.longitude for s in old_stations], dtype=np.float64)
    old_lats = np.array([s.latitude for s in old_stations], dtype=np.float64)

    d = _haversine_matrix(old_lons, old_lats, new_lons, new_lats)
    pairings = []
    for i, old in enumerate(old_stations):
        row = d[i]
        best = row.min()
        candidates = np.nonzero(row == best)[0]
        j = min(candidates, key=lambda k: new_stations[k].station_id)
        pairings.append(
            StationPairing(
                new_station_id=new_stations[j].station_id,
                old_station_id=old.station_id,
                separation_km=float(best),
            )
        )
    return pairings


def pairings_to_csv(pairings: Sequence[StationPairing]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(PAIRING_HEADER)
    for p in pairings:
        writer.writerow([p.new_station_id, p.old_station_id, f"{p.separation_km:.4f}"])
    return out.getvalue()
