"""FastAPI service exposing the climatlas pipeline as stateless compute endpoints.

Run standalone with e.g. `uvicorn climatlas.service.app:app`; the bundled CLI
drives the same app in-process by default.
"""

from __future__ import annotations

import os

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__, pipeline
from ..errors import ClimatlasError
from ..raster import GridSpec
from .models import (
    CompareRequest,
    CompareResponse,
    ContourRequest,
    ContourResponse,
    GridRequest,
    GridResponse,
    HealthResponse,
    IngestRequest,
    IngestResponse,
    SignificantCell,
    WindowCounts,
)


def create_app() -> FastAPI:
    app = FastAPI(
        title="climatlas",
        version=__version__,
        description="Climate-severity attributes, IDW surfaces, contours, and regional statistics",
    )

    @app.exception_handler(ClimatlasError)
    async def domain_error(request: Request, exc: ClimatlasError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.exception_handler(ValueError)
    async def value_error(request: Request, exc: ValueError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.get("/v1/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.post("/v1/ingest", response_model=IngestResponse)
    def ingest(request: IngestRequest) -> IngestResponse:
        artifacts, counts = pipeline.run_ingest(
            request.stations_csv,
            {n.window: n.csv for n in request.normals},
            stations_name=request.stations_name,
            normals_names={n.window: n.name for n in request.normals},
        )
        return IngestResponse(
            artifacts=[a.__dict__ for a in artifacts],
            counts=[WindowCounts(**c.__dict__) for c in counts],
        )

    @app.post("/v1/grid", response_model=GridResponse)
    def grid(request: GridRequest) -> GridResponse:
        spec = GridSpec(
            lon_min=request.grid.lon_min,
            lon_max=request.grid.lon_max,
            lat_min=request.grid.lat_min,
            lat_max=request.grid.lat_max,
            cell_deg=request.grid.cell_deg,
        )
        parallel = request.parallel if request.parallel > 0 else (os.cpu_count() or 1)
        artifact, used = pipeline.run_grid(
            request.stations_csv,
            request.attributes_csv,
            request.window,
            request.attribute,
            spec,
            power=request.power,
            mask_geojson=request.mask_geojson,
            parallel=parallel,
            stations_name=request.stations_name,
            attributes_name=request.attributes_name,
            mask_name=request.mask_name,
        )
        return GridResponse(
            artifact=artifact.__dict__,
            stations_used=used,
            nrows=spec.nrows,
            ncols=spec.ncols,
        )

    @app.post("/v1/contour", response_model=ContourResponse)
    def contour(request: ContourRequest) -> ContourResponse:
        artifact, count = pipeline.run_contour(
            request.raster_asc,
            request.attribute,
            levels=request.levels,
            out_stem=request.out_stem,
            raster_name=request.raster_name,
        )
        return ContourResponse(artifact=artifact.__dict__, feature_count=count)

    @app.post("/v1/compare", response_model=CompareResponse)
    def compare(request: CompareRequest) -> CompareResponse:
        artifacts, flagged = pipeline.run_compare(
            request.stations_csv,
            request.attributes_old_csv,
            request.attributes_new_csv,
            request.window_old,
            request.window_new,
            alpha=request.alpha,
            hist_widths=request.hist_widths,
            stations_name=request.stations_name,
        )
        return CompareResponse(
            artifacts=[a.__dict__ for a in artifacts],
            significant=[
                SignificantCell(region=r.region, attribute=r.attribute, p_value=r.p_value)
                for r in flagged
            ],
        )

    return app


app = create_app()
