"""Command-line pipeline driver.

The CLI is a thin client of the climatlas service: it reads the local input
files named in the config, posts them to the service endpoints, and writes
the returned artifacts under the output directory. By default the service
app runs in-process (no daemon, no socket); pass --server to target a
running instance instead.

Subcommands: ingest, grid, contour, compare, all.
"""

from __future__ import annotations

import asyncio
from pathlib import Path

import click
import httpx

from .config import RunConfig, load_config, read_input
from .errors import ClimatlasError
from .ingest import TimeWindow
from .regions import ATTRIBUTE_ORDER


class ServiceClient:
    """POSTs to a remote service when given a URL, otherwise to the app in-process."""

    def __init__(self, server: str | None = None):
        self._server = server
        self._app = None

    def post(self, path: str, payload: dict) -> dict:
        if self._server is not None:
            with httpx.Client(base_url=self._server, timeout=None) as client:
                response = client.post(path, json=payload)
        else:
            if self._app is None:
                from .service.app import create_app

                self._app = create_app()

            async def go():
                transport = httpx.ASGITransport(app=self._app)
                async with httpx.AsyncClient(
                    transport=transport, base_url="http://climatlas.internal", timeout=None
                ) as client:
                    return await client.post(path, json=payload)

            response = asyncio.run(go())
        if response.status_code >= 400:
            detail = response.json().get("detail", response.text)
            raise click.ClickException(f"{path}: {detail}")
        return response.json()


def _write_artifacts(out_dir: Path, artifacts: list[dict]) -> list[Path]:
    written = []
    for artifact in artifacts:
        target = out_dir / artifact["path"]
        target.parent.mkdir(parents=True, exist_ok=True)
        with open(target, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(artifact["content"])
        written.append(target)
    return written


def _grid_payload(config: RunConfig) -> dict:
    return {
        "lon_min": config.lon_min,
        "lon_max": config.lon_max,
        "lat_min": config.lat_min,
        "lat_max": config.lat_max,
        "cell_deg": config.cell_deg,
    }


def _pick_windows(config: RunConfig) -> tuple[str, str]:
    """Comparison windows: explicit config keys, else oldest/newest configured."""
    if config.window_old and config.window_new:
        return config.window_old, config.window_new
    labels = sorted(config.normals, key=TimeWindow.parse)
    if len(labels) < 2:
        raise click.ClickException(
            "comparison needs two windows: set window_old/window_new or configure two normals files"
        )
    return config.window_old or labels[0], config.window_new or labels[-1]


def _attributes_csv(config: RunConfig, window: str) -> str:
    path = config.out / "attributes" / f"attributes_{window}.csv"
    return read_input(path, f"attribute table for window {window}")


@click.group()
@click.option("--config", "config_path", type=click.Path(path_type=Path), help="Run config file.")
@click.option("--out", type=click.Path(path_type=Path), help="Output directory (default: out).")
@click.option("--parallel", type=int, help="Worker count for grid fill; 0 = auto.")
@click.option("--server", help="URL of a running climatlas service; default runs in-process.")
@click.pass_context
def main(ctx, config_path: Path | None, out: Path | None, parallel: int | None, server: str | None):
    """Climate-severity pipeline: normals -> attributes -> rasters -> contours -> reports."""
    try:
        config = load_config(config_path) if config_path else RunConfig()
    except ClimatlasError as exc:
        raise click.ClickException(str(exc))
    ctx.obj = {
        "config": config.with_overrides(out=out, parallel=parallel),
        "client": ServiceClient(server),
    }


@main.command()
@click.pass_context
def ingest(ctx):
    """Parse stations and normals; write attribute tables and exclusion reports."""
    config: RunConfig = ctx.obj["config"]
    if not config.normals:
        raise click.ClickException("no normals files configured (normals.<window> keys)")
    try:
        payload = {
            "stations_csv": read_input(config.stations, "stations"),
            "stations_name": str(config.stations),
            "normals": [
                {"window": label, "csv": read_input(path, f"normals for {label}"), "name": str(path)}
                for label, path in sorted(config.normals.items())
            ],
        }
    except ClimatlasError as exc:
        raise click.ClickException(str(exc))
    result = ctx.obj["client"].post("/v1/ingest", payload)
    _write_artifacts(config.out, result["artifacts"])
    for counts in result["counts"]:
        click.echo(
            f"window {counts['window']}: {counts['series_retained']} stations retained, "
            f"{counts['series_excluded']} excluded"
        )


def _run_grid(ctx, window: str, attribute: str, attributes_csv: str) -> dict:
    config: RunConfig = ctx.obj["config"]
    payload = {
        "stations_csv": read_input(config.stations, "stations"),
        "stations_name": str(config.stations),
        "attributes_csv": attributes_csv,
        "attributes_name": f"attributes_{window}.csv",
        "window": window,
        "attribute": attribute,
        "power": config.power,
        "grid": _grid_payload(config),
        "parallel": config.parallel,
    }
    if config.mask is not None:
        payload["mask_geojson"] = read_input(config.mask, "mask")
        payload["mask_name"] = str(config.mask)
    result = ctx.obj["client"].post("/v1/grid", payload)
    _write_artifacts(config.out, [result["artifact"]])
    click.echo(
        f"wrote {result['artifact']['path']} "
        f"({result['stations_used']} stations, {result['nrows']}x{result['ncols']} cells)"
    )
    return result


@main.command()
@click.option("--window", required=True, help="Normals window label, e.g. 1991-2020.")
@click.option("--attribute", required=True, type=click.Choice(ATTRIBUTE_ORDER))
@click.option("--power", type=float, help="IDW power (default 2).")
@click.option("--cell-deg", type=float, help="Grid cell size in degrees.")
@click.option("--mask", type=click.Path(path_type=Path), help="GeoJSON polygon mask.")
@click.pass_context
def grid(ctx, window: str, attribute: str, power: float | None, cell_deg: float | None, mask: Path | None):
    """Interpolate one window x attribute onto the raster grid."""
    config = ctx.obj["config"].with_overrides(power=power, cell_deg=cell_deg, mask=mask)
    ctx.obj["config"] = config
    try:
        _run_grid(ctx, window, attribute, _attributes_csv(config, window))
    except ClimatlasError as exc:
        raise click.ClickException(str(exc))


@main.command()
@click.argument("raster", type=click.Path(path_type=Path))
@click.option("--attribute", required=True, type=click.Choice(ATTRIBUTE_ORDER))
@click.option("--levels", help="Comma-separated contour levels, e.g. 100,250,500.")
@click.pass_context
def contour(ctx, raster: Path, attribute: str, levels: str | None):
    """Extract contour lines from a raster into GeoJSON."""
    config: RunConfig = ctx.obj["config"]
    try:
        parsed = [float(v) for v in levels.split(",")] if levels else config.levels.get(attribute)
    except ValueError:
        raise click.BadParameter(f"--levels must be comma-separated numbers, got '{levels}'")
    try:
        raster_text = read_input(raster, "raster")
    except ClimatlasError as exc:
        raise click.ClickException(str(exc))
    payload = {
        "raster_asc": raster_text,
        "raster_name": str(raster),
        "attribute": attribute,
        "levels": parsed,
        "out_stem": raster.stem,
    }
    result = ctx.obj["client"].post("/v1/contour", payload)
    _write_artifacts(config.out, [result["artifact"]])
    click.echo(f"wrote {result['artifact']['path']} ({result['feature_count']} features)")


def _run_compare(ctx, window_old: str, window_new: str, old_csv: str, new_csv: str):
    config: RunConfig = ctx.obj["config"]
    payload = {
        "stations_csv": read_input(config.stations, "stations"),
        "stations_name": str(config.stations),
        "attributes_old_csv": old_csv,
        "attributes_new_csv": new_csv,
        "window_old": window_old,
        "window_new": window_new,
        "alpha": config.alpha,
        "hist_widths": config.hist_widths or None,
    }
    result = ctx.obj["client"].post("/v1/compare", payload)
    _write_artifacts(config.out, result["artifacts"])
    click.echo(f"compared {window_old} vs {window_new}: {len(result['artifacts'])} report files")
    if result["significant"]:
        for cell in result["significant"]:
            click.echo(
                f"significant: {cell['region']} {cell['attribute']} p={cell['p_value']:.4f}"
            )
    else:
        click.echo("no significant region/attribute cells")


@main.command()
@click.option("--window-old", help="Earlier window label (default from config).")
@click.option("--window-new", help="Later window label (default from config).")
@click.pass_context
def compare(ctx, window_old: str | None, window_new: str | None):
    """Pair stations across two windows and test per-region attribute changes."""
    config: RunConfig = ctx.obj["config"].with_overrides(
        window_old=window_old, window_new=window_new
    )
    ctx.obj["config"] = config
    try:
        old_label, new_label = _pick_windows(config)
        _run_compare(
            ctx,
            old_label,
            new_label,
            _attributes_csv(config, old_label),
            _attributes_csv(config, new_label),
        )
    except ClimatlasError as exc:
        raise click.ClickException(str(exc))


@main.command(name="all")
@click.option("--power", type=float, help="IDW power (default 2).")
@click.option("--cell-deg", type=float, help="Grid cell size in degrees.")
@click.option("--mask", type=click.Path(path_type=Path), help="GeoJSON polygon mask.")
@click.pass_context
def run_all(ctx, power: float | None, cell_deg: float | None, mask: Path | None):
    """Full pipeline: ingest, grid + contour every window x attribute, compare."""
    config = ctx.obj["config"].with_overrides(power=power, cell_deg=cell_deg, mask=mask)
    ctx.obj["config"] = config
    if not config.normals:
        raise click.ClickException("no normals files configured (normals.<window> keys)")

    ctx.invoke(ingest)
    try:
        for window in sorted(config.normals, key=TimeWindow.parse):
            attributes_csv = _attributes_csv(config, window)
            for attribute in ATTRIBUTE_ORDER:
                grid_result = _run_grid(ctx, window, attribute, attributes_csv)
                contour_payload = {
                    "raster_asc": grid_result["artifact"]["content"],
                    "raster_name": grid_result["artifact"]["path"],
                    "attribute": attribute,
                    "levels": config.levels.get(attribute),
                    "out_stem": f"{attribute}_{window}",
                }
                result = ctx.obj["client"].post("/v1/contour", contour_payload)
                _write_artifacts(config.out, [result["artifact"]])
                click.echo(
                    f"wrote {result['artifact']['path']} ({result['feature_count']} features)"
                )
        if len(config.normals) >= 2 or (config.window_old and config.window_new):
            old_label, new_label = _pick_windows(config)
            _run_compare(
                ctx,
                old_label,
                new_label,
                _attributes_csv(config, old_label),
                _attributes_csv(config, new_label),
            )
        else:
            click.echo("single window configured; skipping comparison")
    except ClimatlasError as exc:
        raise click.ClickException(str(exc))


if __name__ == "__main__":
    main()
