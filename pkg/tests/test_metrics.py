import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hybridcast.errors import DegenerateInputError, InvalidArgumentError
from hybridcast.metrics import MetricsReport, cv_rmse, evaluate, mae, rmse

finite = st.floats(-1e4, 1e4, allow_nan=False)


def test_hand_values():
    obs, pred = [2, 4, 6], [1, 4, 8]
    assert mae(obs, pred) == pytest.approx(1.0)
    assert rmse(obs, pred) == pytest.approx(math.sqrt(5 / 3))
    assert rmse(obs, pred) == pytest.approx(1.290994, abs=1e-6)
    assert cv_rmse(obs, pred) == pytest.approx(32.2749, abs=1e-3)


def test_perfect_forecast():
    assert mae([1, 2, 3], [1, 2, 3]) == 0
    assert rmse([1, 2, 3], [1, 2, 3]) == 0
    assert cv_rmse([1, 2, 3], [1, 2, 3]) == 0


def test_small_cases():
    assert mae([0], [-3]) == 3
    assert rmse([0, 0], [3, 4]) == pytest.approx(math.sqrt(12.5))


def test_cv_rmse_of_constant_offset():
    c = 2.5
    obs = np.full(7, c)
    assert cv_rmse(obs, obs + c) == pytest.approx(100.0)


def test_cv_rmse_zero_mean():
    with pytest.raises(DegenerateInputError):
        cv_rmse([-1, 1], [0, 0])


@pytest.mark.parametrize("fn", [mae, rmse, cv_rmse])
def test_shape_errors(fn):
    with pytest.raises(InvalidArgumentError):
        fn([1, 2], [1])
    with pytest.raises(InvalidArgumentError):
        fn([], [])


def test_evaluate_report():
    rep = evaluate([2, 4, 6], [1, 4, 8], 0.5)
    assert rep.mae == pytest.approx(1.0)
    assert rep.rmse == pytest.approx(1.290994, abs=1e-6)
    assert rep.cv_rmse_percent == pytest.approx(32.2749, abs=1e-3)
    assert rep.n == 3 and rep.wall_seconds == 0.5
    zero = evaluate([1, 2], [1, 2])
    assert (zero.mae, zero.rmse, zero.cv_rmse_percent) == (0, 0, 0)


def test_report_columns_follow_published_layout():
    assert MetricsReport.COLUMNS == ("Time (s)", "MAE", "RMSE", "CV(RMSE)%")
    rep = evaluate([2, 4, 6], [1, 4, 8], 1.25)
    assert rep.row() == (1.25, rep.mae, rep.rmse, rep.cv_rmse_percent)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(finite, finite), min_size=1, max_size=50))
def test_mae_never_exceeds_rmse(pairs):
    obs, pred = zip(*pairs)
    assert mae(obs, pred) <= rmse(obs, pred) * (1 + 1e-12) + 1e-12


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(finite, finite), min_size=1, max_size=30), st.floats(-100, 100))
def test_translation_invariance(pairs, shift):
    obs, pred = map(np.array, zip(*pairs))
    assert mae(obs + shift, pred + shift) == pytest.approx(mae(obs, pred), abs=1e-8)
    assert rmse(obs + shift, pred + shift) == pytest.approx(rmse(obs, pred), abs=1e-8)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.floats(1, 100), finite), min_size=1, max_size=30), st.floats(0.01, 100))
def test_scaling(pairs, s):
    obs, pred = map(np.array, zip(*pairs))
    assert mae(s * obs, s * pred) == pytest.approx(s * mae(obs, pred), rel=1e-9)
    assert rmse(s * obs, s * pred) == pytest.approx(s * rmse(obs, pred), rel=1e-9)
    assert cv_rmse(s * obs, s * pred) == pytest.approx(cv_rmse(obs, pred), rel=1e-9)
