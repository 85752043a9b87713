"""climatlas: climate-severity attributes, surfaces, and regional statistics.

Computes freeze index, freeze-thaw cycles, mean temperature, and annual
precipitation from station-level 30-year daily normals; interpolates them
onto a lon/lat raster with inverse-distance weighting; extracts contour
lines; and tests attribute changes across normals windows by NOAA climate
region.
"""

__version__ = "0.1.0"

from .attributes import ClimateAttributes, compute_attributes
from .ingest import (
    DailyNormalsSeries,
    DayNormal,
    StationRecord,
    TimeWindow,
    filter_contiguous,
    parse_normals,
    parse_stations,
)
from .interpolate import (
    SamplePoint,
    StationPairing,
    haversine_km,
    idw_grid,
    idw_predict,
    nearest_neighbor_match,
)
from .isarithm import ContourSet, extract_contours
from .raster import GridSpec, RasterGrid, parse_esri_ascii, to_esri_ascii
from .regions import (
    AnovaResult,
    Histogram,
    RegionSummary,
    assign_region,
    histogram,
    one_way_anova,
    region_summary,
    significance_table,
)

__all__ = [
    "__version__",
    "ClimateAttributes",
    "compute_attributes",
    "DailyNormalsSeries",
    "DayNormal",
    "StationRecord",
    "TimeWindow",
    "filter_contiguous",
    "parse_normals",
    "parse_stations",
    "SamplePoint",
    "StationPairing",
    "haversine_km",
    "idw_grid",
    "idw_predict",
    "nearest_neighbor_match",
    "ContourSet",
    "extract_contours",
    "GridSpec",
    "RasterGrid",
    "parse_esri_ascii",
    "to_esri_ascii",
    "AnovaResult",
    "Histogram",
    "RegionSummary",
    "assign_region",
    "histogram",
    "one_way_anova",
    "region_summary",
    "significance_table",
]
