"""ARIMA, polynomial-classifier and parallel hybrid forecasting."""

from .arima import ArimaModel, ArimaOrder, auto_order, choose_d, fit_arima, rolling_forecast
from .errors import (
    CorruptStructureError,
    DegenerateInputError,
    ForecastError,
    InvalidArgumentError,
    ModelFitError,
    SingularMatrixError,
)
from .hybrid import (
    HybridModel,
    combine,
    fit_hybrid,
    optimal_omega,
    rolling_forecast_components,
    rolling_forecast_hybrid,
)
from .metrics import MetricsReport, cv_rmse, evaluate, mae, rmse
from .polycls import PolyModel, build_basis, expand, fit_pc, forecast_pc, rolling_forecast_pc, select_pc_config
from .series import TimeSeries, build_windows, difference, integrate, train_test_split

__version__ = "0.1.0"
