"""Regular lon/lat raster grids, ESRI ASCII serialization, and polygon masks.

Row 0 of a RasterGrid is the northernmost row; the nodata sentinel is -9999.
The optional mask is a GeoJSON (Multi)Polygon in lon/lat; a cell survives
masking iff its center falls inside some polygon under the even-odd rule.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import MaskFormatError, RasterFormatError

NODATA = -9999.0


@dataclass(frozen=True)
class GridSpec:
    """A lon/lat box divided into square cells of cell_deg degrees."""

    lon_min: float
    lon_max: float
    lat_min: float
    lat_max: float
    cell_deg: float

    def __post_init__(self):
        if self.cell_deg <= 0:
            raise ValueError(f"cell_deg must be > 0, got {self.cell_deg}")
        if not (self.lon_min < self.lon_max and self.lat_min < self.lat_max):
            raise ValueError("grid box must have positive extent")
        if self.ncols < 1 or self.nrows < 1:
            raise ValueError("grid must be at least one cell in each direction")

    @property
    def ncols(self) -> int:
        return int(round((self.lon_max - self.lon_min) / self.cell_deg))

    @property
    def nrows(self) -> int:
        return int(round((self.lat_max - self.lat_min) / self.cell_deg))

    def center_lons(self) -> np.ndarray:
        return self.lon_min + (np.arange(self.ncols) + 0.5) * self.cell_deg

    def center_lats(self) -> np.ndarray:
        """Cell-center latitudes, north row first."""
        return self.lat_max - (np.arange(self.nrows) + 0.5) * self.cell_deg


# Default CONUS box at 0.1 degrees: 585 x 255 cells.
CONUS_GRID = GridSpec(lon_min=-125.0, lon_max=-66.5, lat_min=24.0, lat_max=49.5, cell_deg=0.1)


@dataclass
class RasterGrid:
    """Raster values, shape (nrows, ncols), north row first; NODATA marks holes."""

    spec: GridSpec
    values: np.ndarray
    nodata: float = field(default=NODATA)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != (self.spec.nrows, self.spec.ncols):
            raise ValueError(
                f"values shape {self.values.shape} != grid "
                f"({self.spec.nrows}, {self.spec.ncols})"
            )


def to_esri_ascii(grid: RasterGrid) -> str:
    """Serialize to ESRI ASCII with 4-decimal cell values."""
    spec = grid.spec
    lines = [
        f"ncols {spec.ncols}",
        f"nrows {spec.nrows}",
        f"xllcorner {spec.lon_min!r}",
        f"yllcorner {spec.lat_min!r}",
        f"cellsize {spec.cell_deg!r}",
        f"NODATA_value {int(grid.nodata)}",
    ]
    for row in grid.values:
        lines.append(" ".join(f"{v:.4f}" for v in row))
    return "\n".join(lines) + "\n"


def parse_esri_ascii(text: str, source: str = "raster.asc") -> RasterGrid:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) < 7:
        raise RasterFormatError(f"{source}: too short to hold a header and data")
    header: dict[str, float] = {}
    expected = ["ncols", "nrows", "xllcorner", "yllcorner", "cellsize", "nodata_value"]
    for i, key in enumerate(expected):
        parts = lines[i].split()
        if len(parts) != 2 or parts[0].lower() != key:
            raise RasterFormatError(
                f"{source}:{i + 1}: expected '{key} <value>', got '{lines[i]}'"
            )
        try:
            header[key] = float(parts[1])
        except ValueError:
            raise RasterFormatError(f"{source}:{i + 1}: bad number '{parts[1]}'") from None

    ncols, nrows = int(header["ncols"]), int(header["nrows"])
    cell = header["cellsize"]
    spec = GridSpec(
        lon_min=header["xllcorner"],
        lon_max=header["xllcorner"] + ncols * cell,
        lat_min=header["yllcorner"],
        lat_max=header["yllcorner"] + nrows * cell,
        cell_deg=cell,
    )
    data_lines = lines[6:]
    if len(data_lines) != nrows:
        raise RasterFormatError(f"{source}: expected {nrows} data rows, got {len(data_lines)}")
    values = np.empty((nrows, ncols), dtype=np.float64)
    for i, line in enumerate(data_lines):
        row = line.split()
        if len(row) != ncols:
            raise RasterFormatError(
                f"{source}:{7 + i}: expected {ncols} values, got {len(row)}"
            )
        values[i] = [float(v) for v in row]
    return RasterGrid(spec=spec, values=values, nodata=header["nodata_value"])


def load_mask(text: str, source: str = "mask.geojson") -> list[list[np.ndarray]]:
    """Parse a GeoJSON mask into a list of polygons (each a list of ring arrays).

    Accepts a bare MultiPolygon/Polygon geometry, a Feature wrapping one, or a
    FeatureCollection of such features.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MaskFormatError(f"{source}: not valid JSON: {exc}") from None

    geometries: list[dict] = []

    def collect(node: dict):
        kind = node.get("type")
        if kind == "FeatureCollection":
            for feature in node.get("features", []):
                collect(feature)
        elif kind == "Feature":
            geometry = node.get("geometry")
            if geometry:
                collect(geometry)
        elif kind in ("Polygon", "MultiPolygon"):
            geometries.append(node)
        else:
            raise MaskFormatError(f"{source}: unsupported GeoJSON type '{kind}'")

    collect(doc)
    if not geometries:
        raise MaskFormatError(f"{source}: no Polygon/MultiPolygon geometry found")

    polygons: list[list[np.ndarray]] = []
    for geometry in geometries:
        coords = geometry["coordinates"]
        if geometry["type"] == "Polygon":
            coords = [coords]
        for polygon in coords:
            rings = []
            for ring in polygon:
                arr = np.asarray(ring, dtype=np.float64)
                if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 4:
                    raise MaskFormatError(f"{source}: ring must be a closed list of [lon, lat]")
                rings.append(arr)
            polygons.append(rings)
    return polygons


def _in_rings_even_odd(rings: list[np.ndarray], lons: np.ndarray, lats: np.ndarray) -> np.ndarray:
    """Ray-cast even-odd containment for points against one polygon's rings."""
    inside = np.zeros(lons.shape, dtype=bool)
    for ring in rings:
        x1, y1 = ring[:-1, 0], ring[:-1, 1]
        x2, y2 = ring[1:, 0], ring[1:, 1]
        for ex1, ey1, ex2, ey2 in zip(x1, y1, x2, y2):
            if ey1 == ey2:
                continue
            crosses = (ey1 > lats) != (ey2 > lats)
            x_at = (ex2 - ex1) * (lats - ey1) / (ey2 - ey1) + ex1
            inside ^= crosses & (lons < x_at)
    return inside


def mask_contains(
    polygons: list[list[np.ndarray]], lons: np.ndarray, lats: np.ndarray
) -> np.ndarray:
    """True where a point is inside at least one polygon (even-odd per polygon)."""
    lons = np.asarray(lons, dtype=np.float64)
    lats = np.asarray(lats, dtype=np.float64)
    result = np.zeros(lons.shape, dtype=bool)
    for rings in polygons:
        result |= _in_rings_even_odd(rings, lons, lats)
    return result
