"""Run configuration: a flat key = value text file, overridable by CLI flags.

Recognized keys (all optional unless a command needs them):

    stations = data/stations.csv
    normals.1981-2010 = data/normals_1981-2010.csv
    out = out
    power = 2.0
    lon_min = -125.0        lon_max = -66.5
    lat_min = 24.0          lat_max = 49.5
    cell_deg = 0.1
    mask = conus.geojson
    alpha = 0.05
    parallel = 0            # 0 = auto
    window_old = 1981-2010
    window_new = 1991-2020
    levels.freeze_index = 100,250,500,1000,1500,2000,2500
    hist_width.freeze_index = 100

Lines starting with '#' are comments.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import ConfigError
from .raster import CONUS_GRID, GridSpec

_FLOAT_KEYS = {"power", "alpha", "lon_min", "lon_max", "lat_min", "lat_max", "cell_deg"}
_INT_KEYS = {"parallel"}
_PATH_KEYS = {"stations", "out", "mask"}
_STR_KEYS = {"window_old", "window_new"}


@dataclass
class RunConfig:
    stations: Path | None = None
    normals: dict[str, Path] = field(default_factory=dict)
    out: Path = Path("out")
    power: float = 2.0
    lon_min: float = CONUS_GRID.lon_min
    lon_max: float = CONUS_GRID.lon_max
    lat_min: float = CONUS_GRID.lat_min
    lat_max: float = CONUS_GRID.lat_max
    cell_deg: float = CONUS_GRID.cell_deg
    mask: Path | None = None
    alpha: float = 0.05
    parallel: int = 0
    window_old: str | None = None
    window_new: str | None = None
    levels: dict[str, list[float]] = field(default_factory=dict)
    hist_widths: dict[str, float] = field(default_factory=dict)

    def grid_spec(self) -> GridSpec:
        return GridSpec(
            lon_min=self.lon_min,
            lon_max=self.lon_max,
            lat_min=self.lat_min,
            lat_max=self.lat_max,
            cell_deg=self.cell_deg,
        )

    def with_overrides(self, **overrides) -> "RunConfig":
        """Apply non-None CLI flag values over the file-derived config."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


def parse_config(text: str, source: str = "config") -> RunConfig:
    config = RunConfig()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{line_no}: expected 'key = value', got '{raw}'")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        try:
            _apply(config, key, value)
        except ValueError as exc:
            raise ConfigError(f"{source}:{line_no}: bad value for '{key}': {exc}") from None
    return config


def _apply(config: RunConfig, key: str, value: str):
    if key in _FLOAT_KEYS:
        setattr(config, key, float(value))
    elif key in _INT_KEYS:
        setattr(config, key, int(value))
    elif key in _PATH_KEYS:
        setattr(config, key, Path(value))
    elif key in _STR_KEYS:
        setattr(config, key, value)
    elif key.startswith("normals."):
        config.normals[key.removeprefix("normals.")] = Path(value)
    elif key.startswith("levels."):
        config.levels[key.removeprefix("levels.")] = [
            float(v) for v in value.split(",") if v.strip()
        ]
    elif key.startswith("hist_width."):
        config.hist_widths[key.removeprefix("hist_width.")] = float(value)
    else:
        raise ConfigError(f"unknown config key '{key}'")


def load_config(path: Path) -> RunConfig:
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    return parse_config(path.read_text(encoding="utf-8"), source=str(path))


def read_input(path: Path | None, what: str) -> str:
    """Read a referenced input file, with a pointed error when it is missing."""
    if path is None:
        raise ConfigError(f"no {what} configured (set it in the config file or via flags)")
    if not path.exists():
        raise ConfigError(f"{what} file not found: {path}")
    return path.read_text(encoding="utf-8")
