import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import simulate_arma
from hybridcast.arima import ArimaOrder, rolling_forecast
from hybridcast.errors import InvalidArgumentError, ModelFitError
from hybridcast.hybrid import (
    IN_SAMPLE,
    VALIDATION_TAIL,
    combine,
    fit_hybrid,
    optimal_omega,
    rolling_forecast_components,
    rolling_forecast_hybrid,
)
from hybridcast.metrics import rmse
from hybridcast.polycls import rolling_forecast_pc
from hybridcast.series import train_test_split


def blend_sse(y, a, p, w):
    """The blend objective written out term by term."""
    return sum((yi - (w * ai + (1 - w) * pi)) ** 2 for yi, ai, pi in zip(y, a, p))


def assert_constrained_optimal(model):
    win = model.omega_window
    best = win.mse(model.omega)
    ends = min(win.mse(0.0), win.mse(1.0))
    assert best <= ends + 1e-9 * max(ends, 1.0)


class TestOptimalOmega:
    def test_symmetric_midpoint(self):
        fit = optimal_omega([0.5, 0.5], [1, 1], [0, 0])
        assert fit.omega_unclipped == pytest.approx(0.5)
        assert fit.omega == pytest.approx(0.5)

    def test_clipped_above(self):
        omega, raw = optimal_omega([2], [1], [0])
        assert raw == pytest.approx(2.0) and omega == 1.0

    def test_clipped_below(self):
        omega, raw = optimal_omega([-1], [1], [0])
        assert raw == pytest.approx(-1.0) and omega == 0.0

    def test_degenerate(self):
        fit = optimal_omega([1, 2, 3], [4, 5, 6], [4, 5, 6])
        assert fit.degenerate and fit.omega == 0.5

    def test_degenerate_all_zero(self):
        assert optimal_omega([1, 2], [0, 0], [0, 0]).degenerate

    def test_grid_oracle(self):
        rng = np.random.default_rng(99)
        grid = np.linspace(0.0, 1.0, 10001)
        for _ in range(50):
            y, a, p = rng.normal(size=(3, 20))
            sse = [blend_sse(y, a, p, w) for w in grid]
            assert abs(optimal_omega(y, a, p).omega - grid[int(np.argmin(sse))]) <= 1e-4

    @settings(max_examples=60, deadline=None)
    @given(seed=st.integers(0, 10**6), s=st.floats(1e-3, 1e3), sign=st.sampled_from([-1, 1]))
    def test_scale_equivariance(self, seed, s, sign):
        y, a, p = np.random.default_rng(seed).normal(size=(3, 15))
        base = optimal_omega(y, a, p)
        scaled = optimal_omega(sign * s * y, sign * s * a, sign * s * p)
        assert scaled.omega_unclipped == pytest.approx(base.omega_unclipped, rel=1e-9, abs=1e-12)

    def test_length_checks(self):
        with pytest.raises(InvalidArgumentError):
            optimal_omega([1, 2], [1], [1, 2])
        with pytest.raises(InvalidArgumentError):
            optimal_omega([], [], [])


class TestCombine:
    def test_endpoints_exact(self, rng):
        a, p = rng.normal(size=(2, 30))
        assert combine(a, p, 1.0).tobytes() == a.tobytes()
        assert combine(a, p, 0.0).tobytes() == p.tobytes()

    def test_arithmetic(self):
        assert combine([4], [0], 0.25).tolist() == [1.0]

    def test_checks(self):
        with pytest.raises(InvalidArgumentError):
            combine([1, 2], [1], 0.5)
        with pytest.raises(InvalidArgumentError):
            combine([1], [1], 1.5)


@pytest.fixture(scope="module")
def ar2_data():
    x = 30 + simulate_arma(phi=(0.2, 0.7), n=700, seed=4)
    return train_test_split(x, 0.8)


class TestFitHybrid:
    def test_arima_favoured_when_pc_is_handicapped(self):
        # lag-two dynamics are invisible to a window of one
        x = 30 + simulate_arma(phi=(0.0, 0.95), n=700, seed=1)
        train, _ = train_test_split(x, 0.8)
        model = fit_hybrid(train, ArimaOrder(2, 0, 0), (1, 1))
        assert model.omega >= 0.9
        assert_constrained_optimal(model)

    def test_window_and_refit(self, ar2_data):
        train, _ = ar2_data
        model = fit_hybrid(train, ArimaOrder(2, 0, 0), (3, 1))
        win = model.omega_window
        assert win.mode == VALIDATION_TAIL
        assert win.start == int(0.8 * len(train)) and win.stop == len(train)
        assert win.y_true.size == win.y_arima.size == win.y_pc.size == len(train) - win.start
        # components are refitted on the full training set
        assert model.arima.n_effective == len(train) - 2
        assert 0.0 <= model.omega <= 1.0
        assert model.omega == min(1.0, max(0.0, model.omega_unclipped))
        assert_constrained_optimal(model)

    def test_in_sample_mode(self, ar2_data):
        train, _ = ar2_data
        model = fit_hybrid(train, ArimaOrder(2, 0, 1), (4, 2), omega_mode=IN_SAMPLE)
        win = model.omega_window
        assert win.mode == IN_SAMPLE and win.start == 5
        assert_constrained_optimal(model)

    def test_fixed_omega(self, ar2_data):
        train, _ = ar2_data
        model = fit_hybrid(train, ArimaOrder(1, 0, 0), (2, 1), omega=0.3)
        assert model.omega == 0.3 and model.omega_fixed and model.omega_window is None

    def test_failure_names_component(self, ar2_data):
        train, _ = ar2_data
        with pytest.raises(ModelFitError) as err:
            fit_hybrid(train.slice(0, 60), ArimaOrder(1, 0, 0), (12, 3))
        assert err.value.component == "PC"
        with pytest.raises(ModelFitError) as err:
            fit_hybrid(np.arange(100.0) * 3, ArimaOrder(1, 1, 0), (2, 1))
        assert err.value.component == "ARIMA"

    def test_bad_mode(self, ar2_data):
        with pytest.raises(InvalidArgumentError):
            fit_hybrid(ar2_data[0], ArimaOrder(1, 0, 0), (2, 1), omega_mode="test-set")

    def test_model_is_immutable(self, ar2_data):
        model = fit_hybrid(ar2_data[0], ArimaOrder(1, 0, 0), (2, 1))
        with pytest.raises(dataclasses.FrozenInstanceError):
            model.omega = 0.1


class TestRollingHybrid:
    def test_endpoints(self, ar2_data):
        train, test = ar2_data
        m1 = fit_hybrid(train, ArimaOrder(2, 0, 0), (3, 1), omega=1.0)
        m0 = fit_hybrid(train, ArimaOrder(2, 0, 0), (3, 1), omega=0.0)
        a = rolling_forecast(m1.arima, train, test)
        p = rolling_forecast_pc(m0.pc, train, test)
        assert rolling_forecast_hybrid(m1, train, test).tobytes() == a.tobytes()
        assert rolling_forecast_hybrid(m0, train, test).tobytes() == p.tobytes()

    @pytest.mark.parametrize("seed", range(6))
    def test_norm_convexity(self, seed):
        x = 10 + simulate_arma(phi=(0.5,), theta=(0.4,), n=500, seed=50 + seed) ** 2 / 4
        train, test = train_test_split(x, 0.8)
        model = fit_hybrid(train, ArimaOrder(1, 0, 1), (2 + seed % 3, 1 + seed % 2))
        assert_constrained_optimal(model)
        f = rolling_forecast_components(model, train, test)
        assert f.hybrid.size == len(test)
        y = test.values
        assert rmse(y, f.hybrid) <= max(rmse(y, f.arima), rmse(y, f.pc)) + 1e-9
