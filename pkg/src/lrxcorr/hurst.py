"""Power-law fits of detrended variance and covariance profiles."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .moving_average import WindowSpec
from .series import Series
from .xcorr import DEFAULT_MIN_COUNT, cross_correlation, geometric_windows

__all__ = ["ScalingFit", "fit_scaling", "default_windows", "hurst_exponent", "cross_exponent"]


@dataclass(frozen=True)
class ScalingFit:
    """OLS line through ``(ln n, ln value)``.

    ``exponent`` is half the slope, i.e. ``H`` for an auto profile and the
    mean of the two exponents for a cross profile.
    """

    exponent: float
    slope: float
    intercept: float
    r_squared: float
    n_range: tuple[int, int]
    points: int

    def predict(self, n) -> np.ndarray:
        return np.exp(self.intercept) * np.asarray(n, dtype=float) ** self.slope


def fit_scaling(curve: Sequence[tuple[float, float]]) -> ScalingFit:
    pts = [(float(n), float(v)) for n, v in curve]
    if len(pts) < 4:
        raise ValueError(f"need at least 4 points for a scaling fit, got {len(pts)}")
    for n, v in pts:
        if not (np.isfinite(v) and v > 0):
            raise ValueError(f"non-positive or missing value {v!r} at n={n:g}")
        if n <= 0:
            raise ValueError(f"window sizes must be positive, got {n:g}")
    ln_n = np.log([p[0] for p in pts])
    ln_v = np.log([p[1] for p in pts])
    slope, intercept = np.polyfit(ln_n, ln_v, 1)
    resid = ln_v - (slope * ln_n + intercept)
    ss_tot = np.sum((ln_v - ln_v.mean()) ** 2)
    r2 = 1.0 - np.sum(resid**2) / ss_tot if ss_tot > 0 else 1.0
    ns = [int(round(p[0])) for p in pts]
    return ScalingFit(
        exponent=float(slope) / 2.0,
        slope=float(slope),
        intercept=float(intercept),
        r_squared=float(min(max(r2, 0.0), 1.0)),
        n_range=(min(ns), max(ns)),
        points=len(pts),
    )


def default_windows(length: int, lo: int = 16, ratio: float = 1.3) -> list[WindowSpec]:
    """Geometric windows from ``lo`` up to ``length // 50``."""
    hi = length // 50
    if hi < lo:
        raise ValueError(f"series of length {length} too short for windows from {lo} to N/50")
    return geometric_windows(lo, hi, ratio)


def hurst_exponent(
    x: Series,
    windows: Sequence[WindowSpec] | None = None,
    min_count: int = DEFAULT_MIN_COUNT,
) -> tuple[ScalingFit, list[tuple[int, float]]]:
    """Fit ``C_xx(0; n) ~ n^(2H)``; returns the fit and the profile it used."""
    return cross_exponent(x, x, windows, min_count)


def cross_exponent(
    x: Series,
    y: Series,
    windows: Sequence[WindowSpec] | None = None,
    min_count: int = DEFAULT_MIN_COUNT,
) -> tuple[ScalingFit, list[tuple[int, float]]]:
    """Fit ``C_xy(0; n) ~ n^(H1 + H2)``; the exponent reported is the half slope."""
    if windows is None:
        windows = default_windows(min(len(x), len(y)))
    res = cross_correlation(x, y, windows, [0], min_count)
    curve = [(w.n, float(v)) for w, v in zip(res.windows, res.values[:, 0])]
    return fit_scaling(curve), curve
