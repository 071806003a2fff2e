"""Windowed moving averages anchored at an adjustable point of the window."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .series import Series

__all__ = ["WindowSpec", "MovingAverage", "moving_average", "moving_average_naive", "detrend"]

# above this length the prefix sums are accumulated in extended precision
COMPENSATED_THRESHOLD = 10_000_000


@dataclass(frozen=True)
class WindowSpec:
    """Window of ``n + 1`` samples ``t - k`` for ``k`` in ``[-floor(theta*n), n - floor(theta*n)]``.

    ``theta = 0`` is the trailing window, ``theta = 0.5`` the centred one.
    """

    n: int
    theta: float = 0.0

    def __post_init__(self) -> None:
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"window n must be an integer >= 2, got {self.n!r}")
        if not 0.0 <= self.theta <= 1.0:
            raise ValueError(f"theta must lie in [0, 1], got {self.theta!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "theta", float(self.theta))

    @property
    def forward(self) -> int:
        """Number of samples after ``t`` that enter the window."""
        return math.floor(self.theta * self.n)

    @property
    def backward(self) -> int:
        """Number of samples before ``t`` that enter the window."""
        return self.n - self.forward

    @property
    def size(self) -> int:
        return self.n + 1


@dataclass(frozen=True)
class MovingAverage:
    """Moving average over the full index range of its source series.

    Positions whose window would leave the series hold NaN; ``start`` and
    ``stop`` delimit the valid block (local indices, ``stop`` exclusive).
    """

    values: np.ndarray
    start: int
    stop: int
    origin_index: int = 0

    @property
    def valid(self) -> np.ndarray:
        return self.values[self.start:self.stop]


def _valid_bounds(length: int, w: WindowSpec) -> tuple[int, int]:
    if length < w.size:
        raise ValueError(f"series of length {length} shorter than window of {w.size} samples")
    return w.backward, length - w.forward


def moving_average(s: Series, w: WindowSpec, compensated: bool | None = None) -> MovingAverage:
    """O(N) moving average via prefix sums.

    ``compensated`` switches the prefix sums to extended precision; by default
    it is enabled for series longer than ``COMPENSATED_THRESHOLD``.
    """
    x = s.values
    start, stop = _valid_bounds(x.size, w)
    if compensated is None:
        compensated = x.size > COMPENSATED_THRESHOLD
    dtype = np.longdouble if compensated else np.float64
    csum = np.zeros(x.size + 1, dtype=dtype)
    np.cumsum(x, dtype=dtype, out=csum[1:])
    # window for t covers [t - backward, t + forward]
    t = np.arange(start, stop)
    sums = csum[t + w.forward + 1] - csum[t - w.backward]
    out = np.full(x.size, np.nan)
    out[start:stop] = (sums / w.size).astype(np.float64)
    return MovingAverage(out, start, stop, s.origin_index)


def moving_average_naive(s: Series, w: WindowSpec) -> MovingAverage:
    """Direct O(N*n) summation; kept as a reference for the prefix-sum path."""
    x = s.values
    start, stop = _valid_bounds(x.size, w)
    out = np.full(x.size, np.nan)
    ks = range(-w.forward, w.backward + 1)
    for t in range(start, stop):
        acc = 0.0
        for k in ks:
            acc += x[t - k]
        out[t] = acc / w.size
    return MovingAverage(out, start, stop, s.origin_index)


def detrend(s: Series, w: WindowSpec) -> tuple[np.ndarray, int]:
    """Residual ``x(t) - MA(t)`` on the valid block.

    Returns the residual array and the absolute index of its first sample.
    """
    ma = moving_average(s, w)
    resid = s.values[ma.start:ma.stop] - ma.valid
    return resid, s.origin_index + ma.start
