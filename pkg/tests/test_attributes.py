import numpy as np
import pytest

from climatlas.attributes import (
    FREEZE_YEAR_START,
    annual_precipitation,
    attributes_from_csv,
    attributes_to_csv,
    compute_attributes,
    cumulative_curve,
    degree_day,
    freeze_index,
    freeze_thaw_cycles,
    max_drawdown,
    mean_annual_temperature,
)

from conftest import make_series, random_series
from oracles import drawdown_bruteforce, ftc_loop


def freeze_year_tavg(pattern_dd):
    """Calendar-order tavg array whose freeze-year degree-day sequence is pattern_dd."""
    tavg = np.empty(365)
    for k, dd in enumerate(pattern_dd):
        tavg[(FREEZE_YEAR_START + k) % 365] = 32.0 + dd
    return tavg


class TestDegreeDay:
    def test_threshold(self):
        assert degree_day(32.0) == 0.0

    def test_below(self):
        assert degree_day(22.0) == -10.0

    def test_above(self):
        assert degree_day(50.0) == 18.0


class TestCumulativeCurve:
    def test_all_at_freezing_gives_zeros(self):
        curve = cumulative_curve(make_series(32.0))
        assert curve.shape == (365,)
        assert np.all(curve == 0.0)

    def test_unit_increments(self):
        curve = cumulative_curve(make_series(33.0))
        assert np.allclose(curve, np.arange(1, 366))

    def test_final_sum_matches_plain_summation(self, rng):
        for _ in range(20):
            series = random_series(rng)
            total = sum(d.tavg_f - 32.0 for d in series.days)
            assert cumulative_curve(series)[-1] == pytest.approx(total, abs=1e-9)

    def test_starts_at_july_first(self):
        tavg = np.full(365, 32.0)
        tavg[FREEZE_YEAR_START] = 42.0  # Jul 1
        curve = cumulative_curve(make_series(tavg))
        assert curve[0] == pytest.approx(10.0)


class TestFreezeIndex:
    def test_warm_series_is_zero(self):
        assert freeze_index(make_series(50.0)) == 0.0

    def test_single_cold_snap(self):
        # 5 consecutive days at 22 F (-10 degree-days), everything else 50 F
        tavg = np.full(365, 50.0)
        tavg[10:15] = 22.0
        series = make_series(tavg)
        assert freeze_index(series) == pytest.approx(50.0, abs=1e-9)
        assert freeze_index(series) == pytest.approx(
            drawdown_bruteforce(cumulative_curve(series)), abs=1e-9
        )

    def test_multi_trough_takes_largest_drawdown(self):
        pattern = [-10.0] * 5 + [5.0] * 20 + [-10.0] * 8 + [0.0] * (365 - 33)
        series = make_series(freeze_year_tavg(pattern))
        assert freeze_index(series) == pytest.approx(80.0, abs=1e-9)
        assert drawdown_bruteforce(np.cumsum(pattern)) == pytest.approx(80.0, abs=1e-9)

    def test_matches_bruteforce_on_random_series(self, rng):
        for _ in range(50):
            series = random_series(rng)
            assert freeze_index(series) == pytest.approx(
                drawdown_bruteforce(cumulative_curve(series)), abs=1e-9
            )

    def test_never_negative_and_zero_iff_no_descent(self, rng):
        for _ in range(20):
            series = random_series(rng)
            fi = freeze_index(series)
            assert fi >= 0.0
            curve = np.concatenate([[0.0], cumulative_curve(series)])
            descends = bool(np.any(np.maximum.accumulate(curve) - curve > 0))
            assert (fi > 0) == descends

    def test_warm_shift_forces_zero(self, rng):
        series = random_series(rng)
        shift = 33.0 - min(d.tavg_f for d in series.days)
        warmed = make_series(
            [d.tavg_f + shift for d in series.days],
            [d.tmax_f + shift for d in series.days],
            [d.tmin_f + shift for d in series.days],
        )
        assert min(d.tavg_f for d in warmed.days) > 32.0
        assert freeze_index(warmed) == 0.0

    def test_invariant_to_rotation_start_given_warm_summer(self, rng):
        # one cold mid-winter stretch, warm around Jul 1 (indices 151..211)
        tavg = np.full(365, 45.0)
        tavg[0:40] = 20.0
        tavg[330:365] = 25.0
        series = make_series(tavg)
        expected = freeze_index(series)
        cal = np.array([d.tavg_f for d in series.days])
        for start in (FREEZE_YEAR_START - 15, FREEZE_YEAR_START, FREEZE_YEAR_START + 15):
            rotated = np.concatenate([cal[start:], cal[:start]])
            assert max_drawdown(np.cumsum(rotated - 32.0)) == pytest.approx(expected, abs=1e-9)

    def test_descent_at_series_start_counts(self):
        # the prepended S_0 = 0 registers a drawdown even when day 1 is the peak
        pattern = [-10.0] * 3 + [0.0] * 362
        series = make_series(freeze_year_tavg(pattern))
        assert freeze_index(series) == pytest.approx(30.0)


class TestFreezeThawCycles:
    def test_single_qualifying_day(self):
        tmax = np.full(365, 50.0)
        tmin = np.full(365, 40.0)
        tmax[100], tmin[100] = 40.0, 20.0
        tavg = (tmax + tmin) / 2
        assert freeze_thaw_cycles(make_series(tavg, tmax, tmin)) == 1

    def test_max_not_above_freezing(self):
        assert freeze_thaw_cycles(make_series(25.0, 30.0, 20.0)) == 0

    def test_exactly_32_does_not_count(self):
        assert freeze_thaw_cycles(make_series(26.0, 32.0, 20.0)) == 0
        assert freeze_thaw_cycles(make_series(36.0, 40.0, 32.0)) == 0

    def test_matches_loop_oracle_on_random_series(self, rng):
        for _ in range(50):
            series = random_series(rng)
            assert freeze_thaw_cycles(series) == ftc_loop(series)

    def test_permutation_invariant(self, rng):
        series = random_series(rng)
        perm = rng.permutation(365)
        shuffled = make_series(
            np.array([d.tavg_f for d in series.days])[perm],
            np.array([d.tmax_f for d in series.days])[perm],
            np.array([d.tmin_f for d in series.days])[perm],
        )
        assert freeze_thaw_cycles(shuffled) == freeze_thaw_cycles(series)


class TestMeansAndTotals:
    def test_constant_mean(self):
        assert mean_annual_temperature(make_series(50.0)) == pytest.approx(50.0)

    def test_weighted_split(self):
        tavg = np.concatenate([np.full(183, 40.0), np.full(182, 60.0)])
        expected = (183 * 40.0 + 182 * 60.0) / 365
        assert mean_annual_temperature(make_series(tavg)) == pytest.approx(expected, abs=1e-9)

    def test_constant_precip_total(self):
        assert annual_precipitation(make_series(50.0, prcp=0.1)) == pytest.approx(36.5, abs=1e-9)

    def test_zero_precip(self):
        assert annual_precipitation(make_series(50.0, prcp=0.0)) == 0.0

    def test_order_independent_summation(self, rng):
        series = random_series(rng)
        tavg = [d.tavg_f for d in series.days]
        prcp = [d.prcp_in for d in series.days]
        assert mean_annual_temperature(series) == pytest.approx(
            sum(reversed(tavg)) / 365, abs=1e-9
        )
        assert annual_precipitation(series) == pytest.approx(sum(reversed(prcp)), abs=1e-9)


class TestComputeAttributes:
    def test_warm_constant(self):
        attrs = compute_attributes(make_series(50.0, 60.0, 40.0, 0.1))
        assert attrs.freeze_index_fdays == 0.0
        assert attrs.ftc_count == 0
        assert attrs.mean_temp_f == pytest.approx(50.0)
        assert attrs.annual_precip_in == pytest.approx(36.5)

    def test_cold_constant(self):
        attrs = compute_attributes(make_series(22.0, 30.0, 14.0, 0.0))
        assert attrs.freeze_index_fdays == pytest.approx(3650.0, abs=1e-9)
        assert attrs.ftc_count == 0
        assert attrs.mean_temp_f == pytest.approx(22.0)
        assert attrs.annual_precip_in == 0.0

    def test_straddling_constant(self):
        attrs = compute_attributes(make_series(32.0, 40.0, 24.0))
        assert attrs.freeze_index_fdays == 0.0
        assert attrs.ftc_count == 365


class TestAttributesCsv:
    def test_round_trip_at_4_decimals(self, rng):
        attrs = [compute_attributes(random_series(rng, station_id=f"S{i}")) for i in range(5)]
        text = attributes_to_csv(attrs)
        parsed = attributes_from_csv(text)
        assert [a.station_id for a in parsed] == [a.station_id for a in attrs]
        for new, old in zip(parsed, attrs):
            assert new.freeze_index_fdays == pytest.approx(old.freeze_index_fdays, abs=5e-5)
            assert new.ftc_count == old.ftc_count
            assert new.window == old.window

    def test_header_and_integer_counts(self):
        attrs = [compute_attributes(make_series(32.0, 40.0, 24.0, 0.1))]
        lines = attributes_to_csv(attrs).splitlines()
        assert lines[0] == "station_id,window,freeze_index_fdays,ftc_count,mean_temp_f,annual_precip_in"
        assert lines[1] == "X,1991-2020,0.0000,365,32.0000,36.5000"
