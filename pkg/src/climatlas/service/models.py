"""Request/response schemas for the climatlas service.

Endpoints exchange file payloads as text: clients post input CSV/GeoJSON
content and receive output artifacts (relative path + content) to write
wherever they like. The service itself is stateless.
"""

from __future__ import annotations

from pydantic import BaseModel, Field


class ArtifactPayload(BaseModel):
    path: str
    content: str


class NormalsFile(BaseModel):
    window: str
    csv: str
    name: str = "normals.csv"


class IngestRequest(BaseModel):
    stations_csv: str
    normals: list[NormalsFile] = Field(min_length=1)
    stations_name: str = "stations.csv"


class WindowCounts(BaseModel):
    window: str
    series_retained: int
    series_excluded: int


class IngestResponse(BaseModel):
    artifacts: list[ArtifactPayload]
    counts: list[WindowCounts]


class GridBox(BaseModel):
    lon_min: float = -125.0
    lon_max: float = -66.5
    lat_min: float = 24.0
    lat_max: float = 49.5
    cell_deg: float = 0.1


class GridRequest(BaseModel):
    stations_csv: str
    attributes_csv: str
    window: str
    attribute: str
    power: float = 2.0
    grid: GridBox = GridBox()
    mask_geojson: str | None = None
    parallel: int = 0
    stations_name: str = "stations.csv"
    attributes_name: str = "attributes.csv"
    mask_name: str = "mask.geojson"


class GridResponse(BaseModel):
    artifact: ArtifactPayload
    stations_used: int
    nrows: int
    ncols: int


class ContourRequest(BaseModel):
    raster_asc: str
    attribute: str
    levels: list[float] | None = None
    out_stem: str | None = None
    raster_name: str = "raster.asc"


class ContourResponse(BaseModel):
    artifact: ArtifactPayload
    feature_count: int


class CompareRequest(BaseModel):
    stations_csv: str
    attributes_old_csv: str
    attributes_new_csv: str
    window_old: str
    window_new: str
    alpha: float = 0.05
    hist_widths: dict[str, float] | None = None
    stations_name: str = "stations.csv"


class SignificantCell(BaseModel):
    region: str
    attribute: str
    p_value: float


class CompareResponse(BaseModel):
    artifacts: list[ArtifactPayload]
    significant: list[SignificantCell]


class HealthResponse(BaseModel):
    status: str
    version: str
