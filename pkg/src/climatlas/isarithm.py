"""Isopleth extraction from rasters via marching squares.

Grid values are treated as samples at cell centers; each 2x2 block of
neighboring centers forms a marching cell. Crossings are linearly
interpolated along cell edges, segments are stitched into maximal polylines,
and closed loops repeat their first vertex. Cells touching nodata emit
nothing. Saddle cells are disambiguated by comparing the cell-center average
against the level.

Output is canonicalized (polyline orientation and ordering) so results do not
depend on traversal order, and contouring -G at level -L reproduces the
contours of G at L vertex-for-vertex.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import GridTooSmallError, NonMonotoneLevelsError
from .raster import RasterGrid

# Per-attribute default levels; anchors follow the reported value bands.
DEFAULT_CONTOUR_LEVELS: dict[str, tuple[float, ...]] = {
    "freeze_index": (100.0, 250.0, 500.0, 1000.0, 1500.0, 2000.0, 2500.0),
    "freeze_thaw_cycles": (50.0, 100.0, 118.0, 150.0, 200.0),
}
DEFAULT_CONTOUR_STEPS: dict[str, float] = {
    "temperature": 5.0,
    "precipitation": 10.0,
}

Vertex = tuple[float, float]
EdgeKey = tuple[int, int, int, int]  # (i0, j0, i1, j1) with (i0, j0) < (i1, j1)

# case bits: TL=8, TR=4, BR=2, BL=1 (corner strictly above the level).
# Values are pairs of crossed cell edges named t/r/b/l; None marks saddles.
_CASE_SEGMENTS: dict[int, tuple[tuple[str, str], ...] | None] = {
    0: (),
    1: (("l", "b"),),
    2: (("b", "r"),),
    3: (("l", "r"),),
    4: (("t", "r"),),
    5: None,
    6: (("t", "b"),),
    7: (("t", "l"),),
    8: (("t", "l"),),
    9: (("t", "b"),),
    10: None,
    11: (("t", "r"),),
    12: (("l", "r"),),
    13: (("b", "r"),),
    14: (("l", "b"),),
    15: (),
}


@dataclass
class ContourSet:
    """All polylines of one attribute at one level, vertices as (lon, lat)."""

    attribute: str
    level: float
    lines: list[list[Vertex]]


def levels_for(attribute: str, grid: RasterGrid) -> list[float]:
    """Default contour levels for an attribute, possibly derived from the data range."""
    if attribute in DEFAULT_CONTOUR_LEVELS:
        return list(DEFAULT_CONTOUR_LEVELS[attribute])
    if attribute in DEFAULT_CONTOUR_STEPS:
        step = DEFAULT_CONTOUR_STEPS[attribute]
        valid = grid.values[_valid_mask(grid)]
        if valid.size == 0:
            return []
        lo = math.floor(float(valid.min()) / step) + 1
        hi = math.ceil(float(valid.max()) / step) - 1
        return [k * step for k in range(lo, hi + 1)]
    raise ValueError(f"no default contour levels for attribute '{attribute}'")


def _valid_mask(grid: RasterGrid) -> np.ndarray:
    return np.isfinite(grid.values) & (grid.values != grid.nodata)


def extract_contours(
    grid: RasterGrid, levels: Sequence[float], attribute: str = "value"
) -> list[ContourSet]:
    """Marching-squares contours of the raster at each level."""
    if grid.spec.nrows < 2 or grid.spec.ncols < 2:
        raise GridTooSmallError(
            f"contouring needs >= 2 rows and columns, grid is "
            f"{grid.spec.nrows}x{grid.spec.ncols}"
        )
    for level in levels:
        if not math.isfinite(level):
            raise NonMonotoneLevelsError(f"level {level} is not finite")
    if any(b <= a for a, b in zip(levels, levels[1:])):
        raise NonMonotoneLevelsError(f"levels must be strictly increasing: {list(levels)}")

    values = grid.values
    valid = _valid_mask(grid)
    lons = grid.spec.center_lons()
    lats = grid.spec.center_lats()
    return [
        ContourSet(attribute, float(level), _contour_level(values, valid, lons, lats, float(level)))
        for level in levels
    ]


def _contour_level(
    values: np.ndarray,
    valid: np.ndarray,
    lons: np.ndarray,
    lats: np.ndarray,
    level: float,
) -> list[list[Vertex]]:
    nrows, ncols = values.shape
    inside = values > level

    vertices: dict[EdgeKey, Vertex] = {}

    def crossing(i0: int, j0: int, i1: int, j1: int) -> EdgeKey:
        key = (i0, j0, i1, j1)
        if key not in vertices:
            v0, v1 = values[i0, j0], values[i1, j1]
            t = (level - v0) / (v1 - v0)
            lon = lons[j0] + t * (lons[j1] - lons[j0])
            lat = lats[i0] + t * (lats[i1] - lats[i0])
            vertices[key] = (lon, lat)
        return key

    segments: list[tuple[EdgeKey, EdgeKey]] = []
    for i in range(nrows - 1):
        for j in range(ncols - 1):
            if not (valid[i, j] and valid[i, j + 1] and valid[i + 1, j] and valid[i + 1, j + 1]):
                continue
            case = (
                (8 if inside[i, j] else 0)
                | (4 if inside[i, j + 1] else 0)
                | (2 if inside[i + 1, j + 1] else 0)
                | (1 if inside[i + 1, j] else 0)
            )
            pairs = _CASE_SEGMENTS[case]
            if pairs is None:  # saddle: join the high corners iff the center is high
                center = (
                    values[i, j] + values[i, j + 1] + values[i + 1, j] + values[i + 1, j + 1]
                ) / 4.0
                if case == 5:
                    pairs = (("t", "l"), ("r", "b")) if center > level else (("t", "r"), ("l", "b"))
                else:  # case 10
                    pairs = (("t", "r"), ("l", "b")) if center > level else (("t", "l"), ("r", "b"))
            if not pairs:
                continue
            edge_keys = {
                "t": lambda: crossing(i, j, i, j + 1),
                "r": lambda: crossing(i, j + 1, i + 1, j + 1),
                "b": lambda: crossing(i + 1, j, i + 1, j + 1),
                "l": lambda: crossing(i, j, i + 1, j),
            }
            for a, b in pairs:
                ka, kb = edge_keys[a](), edge_keys[b]()
                if vertices[ka] != vertices[kb]:  # drop zero-length degenerates
                    segments.append((ka, kb))

    return _stitch(segments, vertices)


def _stitch(
    segments: list[tuple[EdgeKey, EdgeKey]], vertices: dict[EdgeKey, Vertex]
) -> list[list[Vertex]]:
    """Join segments into maximal open chains and closed loops, canonicalized."""
    adjacency: dict[EdgeKey, list[int]] = {}
    for idx, (a, b) in enumerate(segments):
        adjacency.setdefault(a, []).append(idx)
        adjacency.setdefault(b, []).append(idx)

    used = [False] * len(segments)

    def walk(start: EdgeKey) -> list[EdgeKey]:
        path = [start]
        node = start
        while True:
            next_idx = next((k for k in adjacency[node] if not used[k]), None)
            if next_idx is None:
                return path
            used[next_idx] = True
            a, b = segments[next_idx]
            node = b if a == node else a
            path.append(node)

    lines: list[list[Vertex]] = []
    endpoints = sorted(k for k, inc in adjacency.items() if len(inc) == 1)
    for key in endpoints:
        if all(used[k] for k in adjacency[key]):
            continue
        lines.append([vertices[k] for k in walk(key)])
    # whatever remains sits on closed loops; walk() re-reaches its start vertex
    for key in sorted(adjacency):
        if all(used[k] for k in adjacency[key]):
            continue
        lines.append([vertices[k] for k in walk(key)])

    return sorted(_canonical(line) for line in lines)


def _canonical(line: list[Vertex]) -> list[Vertex]:
    if line[0] != line[-1]:
        return line if line[0] <= line[-1] else line[::-1]
    ring = line[:-1]
    pivot = min(range(len(ring)), key=lambda k: ring[k])
    forward = ring[pivot:] + ring[:pivot]
    backward = [forward[0]] + forward[1:][::-1]
    best = min(forward, backward)
    return best + [best[0]]


def contours_to_geojson(contour_sets: Sequence[ContourSet]) -> str:
    """GeoJSON FeatureCollection: one LineString per polyline, lon-first, 6 decimals."""
    features = []
    for cs in contour_sets:
        for line in cs.lines:
            features.append(
                {
                    "type": "Feature",
                    "geometry": {
                        "type": "LineString",
                        "coordinates": [[round(lon, 6), round(lat, 6)] for lon, lat in line],
                    },
                    "properties": {"attribute": cs.attribute, "level": cs.level},
                }
            )
    return json.dumps({"type": "FeatureCollection", "features": features}, indent=2) + "\n"
