import json

import numpy as np
import pytest

from climatlas.errors import GridTooSmallError, NonMonotoneLevelsError
from climatlas.isarithm import contours_to_geojson, extract_contours, levels_for
from climatlas.raster import NODATA, GridSpec, RasterGrid

from oracles import contour_edge_crossings


def grid_from(values, lon_min=-100.0, lat_max=42.0, cell=1.0):
    values = np.asarray(values, dtype=float)
    nrows, ncols = values.shape
    spec = GridSpec(
        lon_min=lon_min,
        lon_max=lon_min + ncols * cell,
        lat_min=lat_max - nrows * cell,
        lat_max=lat_max,
        cell_deg=cell,
    )
    return RasterGrid(spec=spec, values=values)


def all_vertices(contour_sets):
    return [v for cs in contour_sets for line in cs.lines for v in line]


class TestExtractContours:
    def test_constant_grid_has_no_contours(self):
        (cs,) = extract_contours(grid_from(np.full((3, 3), 5.0)), [10.0])
        assert cs.lines == [] and cs.level == 10.0

    def test_two_by_two_gradient_crosses_midway(self):
        # north row 0, south row 10: the level-5 crossing sits halfway between
        # the two row centers, spanning the cell west to east
        grid = grid_from([[0.0, 0.0], [10.0, 10.0]])
        (cs,) = extract_contours(grid, [5.0])
        (line,) = cs.lines
        lats = grid.spec.center_lats()
        expected_lat = (lats[0] + lats[1]) / 2.0
        assert len(line) == 2
        for lon, lat in line:
            assert lat == pytest.approx(expected_lat, abs=1e-9)
        lons = sorted(lon for lon, _ in line)
        centers = grid.spec.center_lons()
        assert lons[0] == pytest.approx(centers[0], abs=1e-9)
        assert lons[1] == pytest.approx(centers[1], abs=1e-9)

    def test_crossing_position_solves_linear_interpolation(self):
        grid = grid_from([[0.0, 0.0], [8.0, 8.0]])
        (cs,) = extract_contours(grid, [2.0])
        lats = grid.spec.center_lats()
        expected = lats[0] + 0.25 * (lats[1] - lats[0])  # (2-0)/(8-0) of the way south
        for _, lat in cs.lines[0]:
            assert lat == pytest.approx(expected, abs=1e-9)

    def test_radial_bump_gives_single_closed_loop(self):
        values = np.zeros((3, 3))
        values[1, 1] = 10.0
        (cs,) = extract_contours(grid_from(values), [5.0])
        (line,) = cs.lines
        assert line[0] == line[-1]
        assert len(line) >= 5
        # the loop surrounds the center: its vertices straddle the center cell
        lons = [v[0] for v in line]
        lats = [v[1] for v in line]
        center_lon = grid_from(values).spec.center_lons()[1]
        center_lat = grid_from(values).spec.center_lats()[1]
        assert min(lons) < center_lon < max(lons)
        assert min(lats) < center_lat < max(lats)

    def test_segment_count_matches_edge_crossing_oracle(self, rng):
        # each crossed edge hosts exactly one vertex; count vertices per level
        for _ in range(25):
            values = rng.uniform(0.0, 10.0, (6, 7))
            level = float(rng.uniform(2.0, 8.0))
            (cs,) = extract_contours(grid_from(values), [level])
            unique = {v for line in cs.lines for v in line}
            assert len(unique) == contour_edge_crossings(values, level)

    def test_vertices_stay_inside_grid_extent(self, rng):
        values = rng.uniform(0.0, 10.0, (5, 5))
        grid = grid_from(values)
        contour_sets = extract_contours(grid, [3.0, 5.0, 7.0])
        for lon, lat in all_vertices(contour_sets):
            assert grid.spec.lon_min <= lon <= grid.spec.lon_max
            assert grid.spec.lat_min <= lat <= grid.spec.lat_max

    def test_negation_symmetry(self, rng):
        for _ in range(100):
            values = rng.uniform(0.0, 10.0, (6, 6))
            level = float(rng.uniform(2.0, 8.0))
            forward = extract_contours(grid_from(values), [level])
            mirrored = extract_contours(grid_from(-values), [-level])
            assert forward[0].lines == mirrored[0].lines

    def test_saddle_cell_produces_two_segments(self):
        grid = grid_from([[10.0, 1.0], [0.0, 11.0]])
        (cs,) = extract_contours(grid, [5.0])
        assert len(cs.lines) == 2

    def test_cells_touching_nodata_are_skipped(self):
        values = np.array([[0.0, 0.0], [10.0, NODATA]])
        (cs,) = extract_contours(grid_from(values), [5.0])
        assert cs.lines == []

    def test_multiple_levels_sorted_output(self, rng):
        values = rng.uniform(0.0, 10.0, (8, 8))
        contour_sets = extract_contours(grid_from(values), [2.5, 5.0, 7.5])
        assert [cs.level for cs in contour_sets] == [2.5, 5.0, 7.5]
        for cs in contour_sets:
            assert cs.lines == sorted(cs.lines)

    def test_grid_too_small(self):
        spec = GridSpec(lon_min=-100.0, lon_max=-98.0, lat_min=40.0, lat_max=41.0, cell_deg=1.0)
        grid = RasterGrid(spec=spec, values=np.zeros((1, 2)))
        with pytest.raises(GridTooSmallError):
            extract_contours(grid, [5.0])

    def test_non_monotone_levels(self):
        grid = grid_from(np.zeros((3, 3)))
        with pytest.raises(NonMonotoneLevelsError):
            extract_contours(grid, [5.0, 5.0])
        with pytest.raises(NonMonotoneLevelsError):
            extract_contours(grid, [7.0, 5.0])
        with pytest.raises(NonMonotoneLevelsError):
            extract_contours(grid, [float("nan")])


class TestDefaultLevels:
    def test_explicit_level_sets(self):
        grid = grid_from(np.zeros((2, 2)))
        assert levels_for("freeze_index", grid) == [100.0, 250.0, 500.0, 1000.0, 1500.0, 2000.0, 2500.0]
        assert levels_for("freeze_thaw_cycles", grid) == [50.0, 100.0, 118.0, 150.0, 200.0]

    def test_stepped_levels_follow_data_range(self):
        grid = grid_from(np.array([[12.0, 30.0], [47.0, 68.0]]))
        assert levels_for("temperature", grid) == [15.0, 20.0, 25.0, 30.0, 35.0, 40.0, 45.0, 50.0, 55.0, 60.0, 65.0]
        assert levels_for("precipitation", grid) == [20.0, 30.0, 40.0, 50.0, 60.0]

    def test_unknown_attribute(self):
        with pytest.raises(ValueError):
            levels_for("snow_depth", grid_from(np.zeros((2, 2))))


class TestGeoJson:
    def test_feature_collection_shape(self):
        grid = grid_from([[0.0, 0.0], [10.0, 10.0]])
        contour_sets = extract_contours(grid, [5.0], attribute="freeze_index")
        doc = json.loads(contours_to_geojson(contour_sets))
        assert doc["type"] == "FeatureCollection"
        (feature,) = doc["features"]
        assert feature["geometry"]["type"] == "LineString"
        assert feature["properties"] == {"attribute": "freeze_index", "level": 5.0}
        for lon, lat in feature["geometry"]["coordinates"]:
            assert -100.0 <= lon <= -98.0  # lon first
            assert 40.0 <= lat <= 42.0

    def test_coordinates_rounded_to_6_decimals(self):
        grid = grid_from([[0.0, 0.0], [9.0, 9.0]])
        doc = json.loads(contours_to_geojson(extract_contours(grid, [5.0])))
        for lon, lat in doc["features"][0]["geometry"]["coordinates"]:
            assert lon == round(lon, 6)
            assert lat == round(lat, 6)

    def test_empty_sets_give_zero_features(self):
        grid = grid_from(np.full((3, 3), 5.0))
        doc = json.loads(contours_to_geojson(extract_contours(grid, [10.0])))
        assert doc["features"] == []
