"""Detrended cross-correlation of long-range correlated series at varying lag and scale."""
from __future__ import annotations

__version__ = "0.1.0"

from .analytic import (
    AnalyticParams,
    asymptotic_xcorr_theta0,
    case_formula,
    coefficient_D,
    fbm_cross_covariance,
    master_integral_quadrature,
)
from .fbm import FbmPairSpec, calibrate_scale, generate_pair, generate_single
from .finance import leverage_curve, return_vol_xcorr
from .hurst import ScalingFit, fit_scaling, hurst_exponent
from .moving_average import WindowSpec, moving_average
from .series import IngestSpec, Series, load_series, log_returns, mean_subtract_integrate, rolling_volatility
from .xcorr import (
    XcorrResult,
    auto_scaling_curve,
    collapse_transform,
    cross_correlation,
    cross_correlation_fft,
    ensemble_cross_correlation,
    lag_grid,
)

__all__ = [
    "AnalyticParams",
    "asymptotic_xcorr_theta0",
    "auto_scaling_curve",
    "calibrate_scale",
    "case_formula",
    "coefficient_D",
    "collapse_transform",
    "cross_correlation",
    "cross_correlation_fft",
    "ensemble_cross_correlation",
    "fbm_cross_covariance",
    "FbmPairSpec",
    "fit_scaling",
    "generate_pair",
    "generate_single",
    "hurst_exponent",
    "IngestSpec",
    "lag_grid",
    "leverage_curve",
    "load_series",
    "log_returns",
    "master_integral_quadrature",
    "mean_subtract_integrate",
    "moving_average",
    "return_vol_xcorr",
    "rolling_volatility",
    "ScalingFit",
    "Series",
    "WindowSpec",
    "XcorrResult",
]
