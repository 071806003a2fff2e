"""Lag- and scale-dependent cross-correlation of moving-average detrended series.

For each window ``n`` and lag ``tau`` the estimator is the time average

    C(tau; n) = mean_t [x(t) - MA_n x(t)] * [y(t + tau) - MA_n y(t + tau)]

over every ``t`` for which both residuals exist. Times are absolute indices
(``Series.origin_index`` plus position), so the two inputs may start at
different offsets or have different lengths.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np
from scipy import signal

from .moving_average import WindowSpec, detrend
from .series import Series

__all__ = [
    "DEFAULT_MIN_COUNT",
    "XcorrResult",
    "arithmetic_windows",
    "auto_scaling_curve",
    "collapse_transform",
    "cross_correlation",
    "cross_correlation_fft",
    "ensemble_cross_correlation",
    "geometric_windows",
    "lag_grid",
]

DEFAULT_MIN_COUNT = 100
THREADS_ENV = "LRXCORR_THREADS"


@dataclass(frozen=True)
class XcorrResult:
    """Grid of estimates indexed by ``(window, lag)``.

    ``values`` holds NaN where fewer than ``min_count`` positions were
    available. ``stderr`` is only filled in ensemble mode, where ``count`` is
    the total number of positions over all realizations.
    """

    windows: tuple[WindowSpec, ...]
    lags: np.ndarray
    values: np.ndarray
    counts: np.ndarray
    min_count: int = DEFAULT_MIN_COUNT
    stderr: np.ndarray | None = None
    realizations: int = 1
    collapse_exponent: float | None = None

    @property
    def ns(self) -> np.ndarray:
        return np.array([w.n for w in self.windows])

    @property
    def tau_hat(self) -> np.ndarray:
        return self.lags[None, :] / self.ns[:, None]

    def row(self, n: int) -> np.ndarray:
        return self.values[self._window_index(n)]

    def value(self, n: int, tau: int) -> float:
        j = np.flatnonzero(self.lags == tau)
        if j.size == 0:
            raise KeyError(f"lag {tau} not in grid")
        return float(self.values[self._window_index(n), j[0]])

    def curves(self, scaled_lags: bool = False):
        """Yield ``(n, lag_axis, values)`` per window, lag axis in ``tau`` or ``tau/n``."""
        for i, w in enumerate(self.windows):
            axis = self.lags / w.n if scaled_lags else self.lags.astype(float)
            yield w.n, axis, self.values[i]

    def rows(self):
        """Table rows ``(n, tau, tau_hat, value, count)`` for present values."""
        for i, w in enumerate(self.windows):
            for j, tau in enumerate(self.lags):
                v = self.values[i, j]
                if np.isfinite(v):
                    yield (w.n, int(tau), tau / w.n, float(v), int(self.counts[i, j]))

    def _window_index(self, n: int) -> int:
        for i, w in enumerate(self.windows):
            if w.n == n:
                return i
        raise KeyError(f"window n={n} not in result")


def lag_grid(lo: int, hi: int, step: int = 1) -> np.ndarray:
    """Inclusive integer lag range."""
    if step < 1:
        raise ValueError("lag step must be positive")
    return np.arange(int(lo), int(hi) + 1, int(step))


def arithmetic_windows(start: int, stop: int, step: int, theta: float = 0.0) -> list[WindowSpec]:
    """``start, start + step, ..., stop`` (inclusive), e.g. 100..500 step 100."""
    return [WindowSpec(int(n), theta) for n in range(start, stop + 1, step)]


def geometric_windows(lo: int, hi: int, ratio: float = 1.3, theta: float = 0.0) -> list[WindowSpec]:
    """Roughly geometric progression of distinct integer windows in ``[lo, hi]``."""
    if lo < 2 or hi < lo or ratio <= 1.0:
        raise ValueError("need 2 <= lo <= hi and ratio > 1")
    count = int(np.floor(np.log(hi / lo) / np.log(ratio))) + 1
    ns = np.unique(np.round(lo * ratio ** np.arange(count)).astype(int))
    return [WindowSpec(int(n), theta) for n in ns if n <= hi]


def _check_lags(lags) -> np.ndarray:
    lags = np.atleast_1d(np.asarray(lags))
    if lags.ndim != 1 or lags.size == 0:
        raise ValueError("lag grid must be a non-empty 1-D sequence")
    if not np.issubdtype(lags.dtype, np.integer):
        if not np.all(lags == np.round(lags)):
            raise ValueError("lags must be integers")
        lags = lags.astype(np.int64)
    if lags.size > 1 and np.any(np.diff(lags) <= 0):
        raise ValueError("lags must be strictly increasing")
    return lags.astype(np.int64)


def _workers(workers: int | None) -> int:
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get(THREADS_ENV)
    return max(1, int(env)) if env else 1


def _overlap(ax: int, lx: int, ay: int, ly: int, tau: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """First absolute ``t`` and number of ``t`` with ``t`` in x-block and ``t + tau`` in y-block."""
    lo = np.maximum(ax, ay - tau)
    hi = np.minimum(ax + lx, ay + ly - tau)
    return lo, np.maximum(hi - lo, 0)


def _raise_empty(w: WindowSpec, lags: np.ndarray, counts: np.ndarray) -> None:
    empty = np.flatnonzero(counts == 0)
    if empty.size:
        raise ValueError(
            f"empty valid range for n={w.n}, theta={w.theta}, tau={int(lags[empty[0]])}"
        )


def _direct_row(x: Series, y: Series, w: WindowSpec, lags: np.ndarray, min_count: int):
    rx, ax = detrend(x, w)
    ry, ay = detrend(y, w)
    lo, counts = _overlap(ax, rx.size, ay, ry.size, lags)
    _raise_empty(w, lags, counts)
    values = np.empty(lags.size)
    for j, (t0, c, tau) in enumerate(zip(lo, counts, lags)):
        i0 = t0 - ax
        k0 = t0 + tau - ay
        values[j] = np.dot(rx[i0:i0 + c], ry[k0:k0 + c]) / c
    values[counts < min_count] = np.nan
    return values, counts


def cross_correlation(
    x: Series,
    y: Series,
    windows: Sequence[WindowSpec] | WindowSpec,
    lags,
    min_count: int = DEFAULT_MIN_COUNT,
    workers: int | None = None,
) -> XcorrResult:
    """Time-averaged detrended cross-correlation on a ``windows x lags`` grid.

    Positive ``tau`` pairs ``x(t)`` with the later sample ``y(t + tau)``.
    Raises ``ValueError`` when some ``(n, tau)`` has no jointly valid
    position at all; cells with fewer than ``min_count`` positions are NaN.
    """
    windows = (windows,) if isinstance(windows, WindowSpec) else tuple(windows)
    if not windows:
        raise ValueError("at least one window is required")
    lags = _check_lags(lags)

    def one(w):
        return _direct_row(x, y, w, lags, min_count)

    nworkers = _workers(workers)
    if nworkers > 1 and len(windows) > 1:
        with ThreadPoolExecutor(nworkers) as pool:
            rows = list(pool.map(one, windows))
    else:
        rows = [one(w) for w in windows]
    values = np.vstack([r[0] for r in rows])
    counts = np.vstack([r[1] for r in rows])
    return XcorrResult(windows, lags, values, counts, min_count)


def cross_correlation_fft(
    x: Series,
    y: Series,
    window: WindowSpec,
    max_lag: int | None = None,
    lags=None,
    min_count: int = DEFAULT_MIN_COUNT,
) -> XcorrResult:
    """All lags at once through one FFT correlation of the residual blocks.

    Lags default to ``-max_lag .. max_lag``. Counts are exact overlap lengths
    of the two residual blocks, so only the sums carry FFT rounding.
    """
    if lags is None:
        if max_lag is None:
            raise ValueError("give max_lag or an explicit lag grid")
        lags = lag_grid(-abs(int(max_lag)), abs(int(max_lag)))
    lags = _check_lags(lags)

    rx, ax = detrend(x, window)
    ry, ay = detrend(y, window)
    lo, counts = _overlap(ax, rx.size, ay, ry.size, lags)
    _raise_empty(window, lags, counts)

    # full[k] = sum_i ry[i + k - (lx - 1)] * rx[i]  ->  tau = ay - ax + k - (lx - 1)
    full = signal.correlate(ry, rx, mode="full", method="fft")
    k = lags - (ay - ax) + rx.size - 1
    values = full[k] / counts
    values[counts < min_count] = np.nan
    return XcorrResult((window,), lags, values[None, :], counts[None, :], min_count)


def ensemble_cross_correlation(
    pairs: Iterable[tuple[Series, Series]],
    windows: Sequence[WindowSpec] | WindowSpec,
    lags,
    min_count: int = DEFAULT_MIN_COUNT,
    workers: int | None = None,
) -> XcorrResult:
    """Average of per-realization time averages, with standard errors.

    Each realization must yield a present value on every cell; the mean is
    unweighted across realizations.
    """
    results = [cross_correlation(x, y, windows, lags, min_count, workers) for x, y in pairs]
    if not results:
        raise ValueError("ensemble is empty")
    stack = np.stack([r.values for r in results])
    counts = np.sum([r.counts for r in results], axis=0)
    mean = stack.mean(axis=0)
    if len(results) > 1:
        stderr = stack.std(axis=0, ddof=1) / np.sqrt(len(results))
    else:
        stderr = np.full_like(mean, np.nan)
    first = results[0]
    return XcorrResult(first.windows, first.lags, mean, counts, min_count, stderr, len(results))


def auto_scaling_curve(
    x: Series,
    windows: Sequence[WindowSpec],
    min_count: int = DEFAULT_MIN_COUNT,
) -> list[tuple[int, float]]:
    """``(n, C_xx(0; n))`` for each window: the detrended variance profile."""
    res = cross_correlation(x, x, windows, [0], min_count)
    return [(w.n, float(v)) for w, v in zip(res.windows, res.values[:, 0])]


def collapse_transform(r: XcorrResult, H1: float, H2: float) -> XcorrResult:
    """Multiply each window's curve by ``n ** -(H1 + H2)``.

    Plot the result against ``r.tau_hat`` (or ``curves(scaled_lags=True)``)
    to check that curves for different ``n`` coincide.
    """
    s = float(H1) + float(H2)
    scale = r.ns.astype(float) ** -s
    stderr = None if r.stderr is None else r.stderr * scale[:, None]
    return replace(r, values=r.values * scale[:, None], stderr=stderr, collapse_exponent=s)
