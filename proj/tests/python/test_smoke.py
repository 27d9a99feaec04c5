"""End-to-end smoke tests for the python module against the built extension."""

import math

import numpy as np
import pytest

import growthcast as gc


def richards_reference(t, theta1, theta2, theta3, xi):
    return theta1 * (1.0 + xi * math.exp(-theta2 * (t - theta3))) ** (-1.0 / xi)


def test_curve_matches_reference():
    assert gc.richards(40.0, 10000.0, 0.2, 40.0, 1.0) == pytest.approx(
        5000.0, rel=1e-12
    )
    ts = np.linspace(0.0, 80.0, 41)
    got = gc.richards(ts, 10000.0, 0.2, 40.0, 0.7)
    want = [richards_reference(t, 10000.0, 0.2, 40.0, 0.7) for t in ts]
    np.testing.assert_allclose(got, want, rtol=1e-12)
    assert gc.gompertz(40.0, 10000.0, 0.2, 40.0) == pytest.approx(
        10000.0 / math.e, rel=1e-12
    )


def test_flat_time_round_trip():
    params = gc.RichardsParams(theta1=25000.0, theta2=0.15, theta3=30.0, xi=0.8)
    t = gc.flat_time_point(params, 0.95)
    value = gc.richards(t, params.theta1, params.theta2, params.theta3, params.xi)
    assert value == pytest.approx(0.95 * 25000.0, rel=1e-9)


@pytest.fixture(scope="module")
def panel():
    rng = np.random.default_rng(20260822)
    truths = [(900.0, 0.25, 7.0), (1500.0, 0.2, 9.0), (2400.0, 0.18, 8.0)]
    trajectories = []
    for i, (theta1, theta2, theta3) in enumerate(truths):
        ts = np.arange(1, 19, dtype=float)
        counts = gc.richards(ts, theta1, theta2, theta3, 1.0)
        counts = np.maximum(counts + rng.normal(0.0, 3.0, ts.size), 0.0)
        trajectories.append(gc.Trajectory(f"u{i}", "2020-01-22", counts))
    raw = gc.CovariateTable(
        ["u0", "u1", "u2"],
        ["dens", "mob"],
        np.array([[12.0, 210.0], [25.0, 150.0], [41.0, 90.0]]),
    )
    return gc.make_panel(trajectories, gc.standardize(raw))


@pytest.fixture(scope="module")
def draws(panel):
    config = gc.SamplerConfig()
    config.sweeps = 60
    config.burn_in = 30
    config.thin = 3
    config.chains = 2
    config.seed = 5
    return gc.run_chains(panel, gc.ModelSpec(gc.Variant.M3), config)


def test_fit_produces_labeled_draws(draws):
    names = draws.parameter_names()
    matrix = draws.matrix()
    assert matrix.shape == (draws.draw_count, len(names))
    assert draws.draw_count == 20
    assert "theta1[u0]" in names
    assert "sigma2_obs" in names
    assert draws.unit_ids == ["u0", "u1", "u2"]
    assert draws.covariate_names == ["dens", "mob"]
    assert np.isfinite(matrix).all()
    assert {d.name for d in draws.diagnostics} == set(names)
    assert 0.0 <= draws.acceptance_rates["theta2"] <= 1.0


def test_forecasts_and_summaries(draws):
    band = gc.extrapolate(draws, unit=0, horizon=6, level=0.9)
    assert len(band.days) == draws.observed_days + 6
    assert band.days[0] == 1
    assert band.dates[0] == draws.start_date
    assert all(lo <= hi for lo, hi in zip(band.lower, band.upper))

    flat = gc.flat_time_summary(draws, unit=0, gamma=0.99)
    assert flat.lower <= flat.upper

    average = gc.grand_average_curve(draws, horizon=4)
    assert len(average.mean) == draws.observed_days + 4

    assert gc.classify_unit(draws, 0) in (1, 2, 3)
    assert gc.classify(10000.0) == 1
    assert gc.classify(10000.5) == 2
    assert gc.classify(100000.5) == 3


def test_rank_covariates(draws):
    ranked = gc.rank_covariates(draws, block=0, top_k=2)
    assert [r.rank for r in ranked] == [1, 2]
    assert {r.name for r in ranked} == {"dens", "mob"}


def test_draws_roundtrip(draws, tmp_path):
    path = tmp_path / "draws.csv"
    gc.write_draws_csv(draws, str(path))
    restored = gc.read_draws_csv(str(path))
    assert restored.parameter_names() == draws.parameter_names()
    np.testing.assert_array_equal(restored.matrix(), draws.matrix())


def test_mse_and_box_oracles():
    actual = np.array([[1.0, 2.0], [3.0, 4.0]])
    forecast = np.array([[2.0, 4.0], [6.0, 8.0]])
    assert gc.mse_horizon(actual, forecast) == 7.5

    box = gc.box_stats([float(v) for v in range(1, 10)])
    assert (box.q1, box.median, box.q3) == (3.0, 5.0, 7.0)
    assert (box.whisker_low, box.whisker_high) == (1.0, 9.0)
    assert box.outliers == []


def test_compare_models_smoke(panel):
    config = gc.SamplerConfig()
    config.sweeps = 16
    config.burn_in = 8
    config.thin = 1
    config.chains = 1
    report = gc.compare_models(
        panel, [gc.Variant.M2], test_days=[3], replicates=1, base_seed=3, config=config
    )
    assert len(report.cells) == 1
    assert report.cells[0].error == ""
    assert report.cells[0].mse is not None
    assert gc.cell_values(report, gc.Variant.M2, 3) == [report.cells[0].mse]


def test_errors_surface_as_python_exceptions(tmp_path):
    with pytest.raises(gc.ConfigError):
        gc.load_trajectories(str(tmp_path / "missing.csv"))
    with pytest.raises(ValueError):
        gc.load_trajectories(str(tmp_path / "missing.csv"), format="excel")
    with pytest.raises(ValueError):
        gc.richards(0.0, 100.0, 0.1, 5.0, -1.0)
