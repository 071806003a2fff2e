"""Coupled fractional Brownian motion paths by spectral synthesis.

One white-noise vector is drawn per seed and filtered in the frequency
domain by the fractional-Gaussian-noise amplitude of each Hurst exponent;
paths are the running sums of the filtered noise. Driving both paths with
the same draws is what couples them.

The filter is the square root of the fGn spectral density obtained by
sampling the harmonizable integral at integer times (a sum over aliases of
``|xi|^-(2H+1)`` times ``|e^{i xi} - 1|^2``), scaled so ``Var B_H(1) = 1``
and averaged over each frequency bin.
For ``H = 1/2`` it is identically one and the increments are the raw draws.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .analytic import coefficient_D
from .series import Series

__all__ = [
    "FbmPair",
    "FbmPairSpec",
    "calibrate_scale",
    "fgn_amplitude",
    "generate_pair",
    "generate_single",
    "generator_cross_covariance",
]

METHOD = "spectral-shared-noise"
OVERSAMPLE = 4
_ALIAS_TERMS = 32


@dataclass(frozen=True)
class FbmPairSpec:
    H1: float
    H2: float
    length: int
    seed: int = 0
    method: str = METHOD

    def __post_init__(self) -> None:
        for name in ("H1", "H2"):
            h = getattr(self, name)
            if not 0.0 < h < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {h!r}")
        if int(self.length) != self.length or self.length < 2:
            raise ValueError(f"length must be an integer >= 2, got {self.length!r}")
        if self.method != METHOD:
            raise ValueError(f"unknown method {self.method!r}")
        object.__setattr__(self, "length", int(self.length))
        object.__setattr__(self, "seed", int(self.seed))


@dataclass(frozen=True)
class FbmPair:
    spec: FbmPairSpec
    x: Series
    y: Series


def _alias_sum(lam: np.ndarray, alpha: float) -> np.ndarray:
    """``sum_j |lam + 2 pi j|^-alpha`` for ``lam`` in ``(0, pi]``, tails by the midpoint rule."""
    two_pi = 2.0 * math.pi
    j = np.arange(1, _ALIAS_TERMS + 1)[:, None]
    total = lam**-alpha + np.sum((two_pi * j + lam) ** -alpha + (two_pi * j - lam) ** -alpha, axis=0)
    edge = two_pi * (_ALIAS_TERMS + 0.5)
    total += ((edge + lam) ** (1 - alpha) + (edge - lam) ** (1 - alpha)) / (two_pi * (alpha - 1))
    return total


@lru_cache(maxsize=32)
def fgn_amplitude(H: float, size: int) -> np.ndarray:
    """Filter on the ``rfft`` grid of a length-``size`` noise vector.

    ``amp**2 / (2 pi)`` is the unit-variance fGn spectral density averaged
    over each frequency bin. The low-frequency power law ``|lam|^(1-2H)`` is
    integrated exactly across the bin, which matters for the zero bin and its
    neighbours where the density is singular (``H > 1/2``) or vanishing.
    """
    if H == 0.5:
        amp = np.ones(size // 2 + 1)
        amp.setflags(write=False)
        return amp
    beta = 1.0 - 2.0 * H
    half = math.pi / size
    c = math.gamma(2 * H + 1) * math.sin(math.pi * H)
    lam = 2.0 * math.pi * np.arange(1, size // 2 + 1) / size
    dens = c * 2.0 * (1.0 - np.cos(lam)) * _alias_sum(lam, 2 * H + 1)
    # bin average of lam^beta relative to its midpoint value
    lo, hi = lam - half, lam + half
    ratio = (hi ** (beta + 1) - lo ** (beta + 1)) / ((beta + 1) * 2 * half * lam**beta)
    dens = dens * ratio
    dens0 = c * half**beta / (beta + 1)
    amp = np.sqrt(np.concatenate(([dens0], dens)))
    amp.setflags(write=False)
    return amp


def _increments(spectrum: np.ndarray, H: float, size: int) -> np.ndarray:
    if H == 0.5:
        return None
    return np.fft.irfft(spectrum * fgn_amplitude(H, size), n=size)


def _path(noise: np.ndarray, inc: np.ndarray | None, length: int) -> np.ndarray:
    steps = noise[: length - 1] if inc is None else inc[: length - 1]
    return np.concatenate(([0.0], np.cumsum(steps)))


def generate_pair(spec: FbmPairSpec) -> FbmPair:
    """Two paths of ``spec.length`` samples from one shared noise realization.

    Noise is drawn for ``OVERSAMPLE`` times the needed length and only the
    head is kept, which keeps the circular wrap of the FFT away from the
    returned samples. Both paths start at zero.
    """
    size = OVERSAMPLE * spec.length
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    noise = rng.standard_normal(size)
    spectrum = np.fft.rfft(noise) if (spec.H1 != 0.5 or spec.H2 != 0.5) else None

    inc1 = _increments(spectrum, spec.H1, size)
    inc2 = inc1 if spec.H2 == spec.H1 else _increments(spectrum, spec.H2, size)
    x = _path(noise, inc1, spec.length)
    y = x if spec.H2 == spec.H1 else _path(noise, inc2, spec.length)
    return FbmPair(spec, Series(x), Series(y))


def generate_single(H: float, length: int, seed: int = 0) -> Series:
    return generate_pair(FbmPairSpec(H, H, length, seed)).x


def generator_cross_covariance(H1: float, H2: float, length: int, t, u) -> np.ndarray:
    """Exact ``E[B_H1(t) B_H2(u)]`` of :func:`generate_pair` output at integer times.

    Evaluated in the frequency domain from the two filters, so it carries the
    generator's discretization and truncation exactly.
    """
    size = OVERSAMPLE * int(length)
    a1 = fgn_amplitude(H1, size)
    a2 = fgn_amplitude(H2, size)
    # full-spectrum weights: interior rfft bins stand for two conjugate bins
    weight = np.full(a1.size, 2.0)
    weight[0] = 1.0
    if size % 2 == 0:
        weight[-1] = 1.0
    lam = 2.0 * math.pi * np.arange(a1.size) / size
    prod = weight * a1 * a2 / size

    t = np.atleast_1d(np.asarray(t, dtype=float))
    u = np.atleast_1d(np.asarray(u, dtype=float))
    t, u = np.broadcast_arrays(t, u)
    out = np.empty(t.shape)
    e = np.exp(1j * lam)
    denom = e - 1.0
    for idx in np.ndindex(t.shape):
        # partial geometric sums sum_{a<t} e^{i a lam}; value t at lam = 0
        gt = np.empty(lam.size, dtype=complex)
        gu = np.empty(lam.size, dtype=complex)
        gt[0], gu[0] = t[idx], u[idx]
        gt[1:] = (np.exp(1j * t[idx] * lam[1:]) - 1.0) / denom[1:]
        gu[1:] = (np.exp(1j * u[idx] * lam[1:]) - 1.0) / denom[1:]
        out[idx] = np.sum(prod * (np.conj(gt) * gu).real)
    return out


def _calibration_grid(length: int) -> tuple[np.ndarray, np.ndarray]:
    # mid scales: large t is dominated by the shared zero-frequency bin,
    # which couples the paths more tightly than the continuum spectrum does
    ts = np.unique(np.round(np.linspace(length / 64, length / 8, 4)).astype(int))
    taus = np.unique(np.round(np.linspace(-length / 128, length / 16, 6)).astype(int))
    t, tau = np.meshgrid(ts, taus, indexing="ij")
    keep = (t > 0) & (t + tau > 0)
    return t[keep].astype(float), tau[keep].astype(float)


@lru_cache(maxsize=64)
def calibrate_scale(H1: float, H2: float, length: int) -> float:
    """Least-squares constant ``c`` with generator covariance ~= ``c * D * (t^s + (t+tau)^s - |tau|^s)``.

    The fit runs over a fixed ``(t, tau)`` grid at scales ``N/64 .. N/8``
    and uses the exact generator covariance, not Monte Carlo.
    """
    t, tau = _calibration_grid(int(length))
    s = H1 + H2
    model = coefficient_D(s) * (t**s + (t + tau) ** s - np.abs(tau) ** s)
    gen = generator_cross_covariance(H1, H2, length, t, t + tau)
    return float(np.dot(model, gen) / np.dot(model, model))
