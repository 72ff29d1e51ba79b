import numpy as np
import pytest

from subseasonal.series import ForecastBundle, MultiSeasonalSeries, SeasonalSeries, season_of, validate_series


def make_series(n=12, m=4, phase=1):
    return SeasonalSeries(values=np.arange(1.0, n + 1.0), frequency=m, start_phase=phase, id="s")


def test_season_of_first_observation_is_own_phase():
    assert season_of(make_series(), 1) == 1


def test_season_of_restarts_after_three_full_years():
    assert season_of(make_series(), 13) == 1


def test_season_of_modular_formula():
    # direct evaluation: ((3-1) + (2-1)) mod 4 + 1 = 4
    s = make_series(phase=3)
    assert season_of(s, 2) == 4


@pytest.mark.parametrize("m", [1, 2, 4, 7, 12, 24])
@pytest.mark.parametrize("phase", [1, 2])
def test_season_of_periodicity(m, phase):
    if phase > m:
        pytest.skip("phase out of range for this m")
    s = SeasonalSeries(values=np.zeros(5), frequency=m, start_phase=phase)
    for t in range(1, 3 * m + 1):
        assert season_of(s, t) == season_of(s, t + m)


@pytest.mark.parametrize("m", [2, 4, 12])
def test_each_season_once_per_cycle(m):
    s = SeasonalSeries(values=np.zeros(m), frequency=m, start_phase=2 if m > 1 else 1)
    for start in range(1, 2 * m):
        window = {season_of(s, t) for t in range(start, start + m)}
        assert window == set(range(1, m + 1))


def test_season_of_rejects_nonpositive_index():
    with pytest.raises(ValueError):
        season_of(make_series(), 0)


def test_validate_flags_non_finite():
    s = SeasonalSeries(values=[1.0, np.nan, 3.0, 4.0], frequency=4)
    problems = validate_series(s)
    assert any("non-finite" in p and "index 2" in p for p in problems)


def test_validate_accepts_clean_series():
    assert validate_series(make_series()) == []


def test_validate_flags_phase_out_of_range():
    s = SeasonalSeries(values=np.ones(8), frequency=4, start_phase=0)
    assert any("phase out of range" in p for p in validate_series(s))


def test_validate_flags_empty_series():
    assert "empty series" in validate_series(SeasonalSeries(values=[], frequency=4))


def test_series_values_are_immutable():
    s = make_series()
    with pytest.raises(ValueError):
        s.values[0] = 99.0


def test_multiseasonal_requires_nested_periods():
    with pytest.raises(ValueError):
        MultiSeasonalSeries(values=np.ones(400), periods=(24, 100))
    with pytest.raises(ValueError):
        MultiSeasonalSeries(values=np.ones(400), periods=(1, 7))
    ok = MultiSeasonalSeries(values=np.ones(400), periods=(24, 168))
    assert ok.periods == (24, 168)


def test_bundle_rejects_crossed_bounds():
    with pytest.raises(ValueError):
        ForecastBundle(points=[1.0], lower=[2.0], upper=[1.0], level=0.95)


def test_bundle_point_outside_interval_is_allowed():
    b = ForecastBundle(points=[5.0], lower=[1.0], upper=[2.0], level=0.95)
    assert b.points[0] == 5.0


def test_bundle_alignment_must_increase():
    with pytest.raises(ValueError):
        ForecastBundle(points=[1.0, 2.0], lower=[0.0, 0.0], upper=[2.0, 3.0],
                       level=0.9, alignment=(3, 2))
