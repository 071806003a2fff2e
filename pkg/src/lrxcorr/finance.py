"""Return/volatility cross-correlation and the leverage function.

Index conventions (all in samples):

* ``r(t) = ln P(t + t') - ln P(t)`` is stamped with ``t``.
* ``sigma_T(t)`` is the sample std of ``r(t - T + 1), ..., r(t)``.
* ``C(tau)`` pairs ``r(t)`` with ``sigma_T(t + tau)``; for ``0 <= tau < T``
  the volatility window still contains ``r(t)`` itself.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.signal import lfilter

from .moving_average import WindowSpec
from .series import Series, log_returns, rolling_volatility
from .xcorr import DEFAULT_MIN_COUNT, XcorrResult, cross_correlation

__all__ = [
    "LeverageCurve",
    "ensemble_leverage_curve",
    "leverage_curve",
    "return_vol_xcorr",
    "return_and_volatility",
    "simulate_leverage_prices",
    "simulate_random_walk_prices",
]


@dataclass(frozen=True)
class LeverageCurve:
    lags: np.ndarray
    values: np.ndarray
    numerator: np.ndarray
    counts: np.ndarray
    denominator: float
    horizon: int
    vol_window: int
    window: WindowSpec
    stderr: np.ndarray | None = None
    realizations: int = 1

    def rows(self):
        for tau, v, num, c in zip(self.lags, self.values, self.numerator, self.counts):
            if np.isfinite(v):
                yield int(tau), float(v), float(num), int(c)


def return_and_volatility(prices: Series, horizon: int, vol_window: int, power: int = 1):
    """``(r, sigma_T ** power)`` aligned on absolute sample indices."""
    if power not in (1, 2):
        raise ValueError(f"power must be 1 or 2, got {power!r}")
    r = log_returns(prices, horizon)
    vol = rolling_volatility(r, vol_window)
    if power == 2:
        vol = vol.with_values(vol.values**2)
    return r, vol


def return_vol_xcorr(
    prices: Series,
    horizon: int,
    vol_window: int,
    power: int,
    windows: Sequence[WindowSpec] | WindowSpec,
    lags,
    min_count: int = DEFAULT_MIN_COUNT,
) -> XcorrResult:
    """Detrended cross-correlation of returns with volatility (``power=1``) or its square."""
    r, vol = return_and_volatility(prices, horizon, vol_window, power)
    return cross_correlation(r, vol, windows, lags, min_count)


def leverage_curve(
    prices: Series,
    horizon: int,
    vol_window: int,
    window: WindowSpec,
    lags,
    min_count: int = DEFAULT_MIN_COUNT,
) -> LeverageCurve:
    """``L(tau) = C_{r, sigma^2}(tau) / <r^2>^2``.

    The numerator is the detrended estimator with one window shared by both
    legs; the denominator is the plain time average of squared returns.
    """
    r, vol2 = return_and_volatility(prices, horizon, vol_window, power=2)
    denom = float(np.mean(r.values**2)) ** 2
    if denom == 0.0:
        raise ValueError("leverage denominator is zero (returns are identically 0)")
    res = cross_correlation(r, vol2, window, lags, min_count)
    num = res.values[0]
    return LeverageCurve(
        lags=res.lags,
        values=num / denom,
        numerator=num,
        counts=res.counts[0],
        denominator=denom,
        horizon=int(horizon),
        vol_window=int(vol_window),
        window=window,
    )


def ensemble_leverage_curve(
    price_paths: Sequence[Series],
    horizon: int,
    vol_window: int,
    window: WindowSpec,
    lags,
    min_count: int = DEFAULT_MIN_COUNT,
) -> LeverageCurve:
    """Mean of per-path leverage curves, with standard errors across paths."""
    curves = [leverage_curve(p, horizon, vol_window, window, lags, min_count) for p in price_paths]
    if len(curves) < 2:
        raise ValueError("ensemble mode needs at least two price paths")
    vals = np.stack([c.values for c in curves])
    nums = np.stack([c.numerator for c in curves])
    first = curves[0]
    return LeverageCurve(
        lags=first.lags,
        values=vals.mean(axis=0),
        numerator=nums.mean(axis=0),
        counts=np.sum([c.counts for c in curves], axis=0),
        denominator=float(np.mean([c.denominator for c in curves])),
        horizon=first.horizon,
        vol_window=first.vol_window,
        window=window,
        stderr=vals.std(axis=0, ddof=1) / np.sqrt(len(curves)),
        realizations=len(curves),
    )


def simulate_random_walk_prices(length: int, sigma: float = 0.01, seed: int = 0, p0: float = 100.0) -> Series:
    """Geometric random walk with i.i.d. Gaussian log-returns (no leverage)."""
    rng = np.random.default_rng(seed)
    steps = sigma * rng.standard_normal(length - 1)
    return Series(p0 * np.exp(np.concatenate(([0.0], np.cumsum(steps)))))


def simulate_leverage_prices(
    length: int,
    sigma: float = 0.01,
    coupling: float = 1.0,
    memory: float = 0.95,
    seed: int = 0,
    p0: float = 100.0,
) -> Series:
    """Prices whose volatility rises after down moves only.

    ``sigma_t = sigma * (1 + coupling * sum_j memory^(j-1) 1[eps_{t-j} < 0] * (1 - memory))``
    and ``r_t = sigma_t * eps_t``. Up moves leave volatility unchanged, so the
    return/future-volatility coupling is negative and one-sided.
    """
    if not 0.0 <= memory < 1.0:
        raise ValueError("memory must lie in [0, 1)")
    rng = np.random.default_rng(seed)
    eps = rng.standard_normal(length - 1)
    down = (eps < 0).astype(float)
    # exponentially weighted count of past down moves, excluding the current one
    ewma = lfilter([0.0, 1.0 - memory], [1.0, -memory], down)
    vol = sigma * (1.0 + coupling * ewma)
    r = vol * eps
    return Series(p0 * np.exp(np.concatenate(([0.0], np.cumsum(r)))))
