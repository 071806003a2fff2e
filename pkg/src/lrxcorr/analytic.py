"""Large-window asymptotics of the detrended cross-correlation of two fBm paths.

Everything is written in the scaled lag ``tau_hat = tau / n`` with
``s = H1 + H2``. The bracket

    B(tau_hat, theta) = -|tau_hat|^s + I1 + I2 - I12

collects the single integrals ``I1 = int |tau_hat - h|^s dh`` and
``I2 = int |tau_hat + k|^s dk`` and the double integral
``I12 = int int |tau_hat - h + k|^s dh dk`` over the window
``[-theta, 1 - theta]``; the cross-correlation is ``n^s * D(s) * B``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

__all__ = [
    "AnalyticParams",
    "asymptotic_xcorr_theta0",
    "bracket",
    "case_formula",
    "case_id",
    "coefficient_D",
    "coefficient_D_literal",
    "fbm_cross_covariance",
    "master_integral_quadrature",
]


def _check_s(s: float) -> float:
    if not 0.0 < s < 2.0:
        raise ValueError(f"H1 + H2 must lie in (0, 2), got {s!r}")
    return s


def _check_h(H: float, name: str = "H") -> float:
    if not 0.0 < H < 1.0:
        raise ValueError(f"{name} must lie in (0, 1), got {H!r}")
    return float(H)


def coefficient_D(H1: float, H2: float | None = None) -> float:
    """Cross-covariance coefficient of the harmonizable representation.

    With one argument it is read as ``s = H1 + H2`` directly. Uses
    ``1 / (Gamma(s + 1) * sin(pi s / 2))``, equal to
    ``-(2/pi) cos(pi s / 2) Gamma(-s)`` but free of the 0 * inf at ``s = 1``.
    """
    s = _check_s(float(H1) if H2 is None else float(H1) + float(H2))
    return 1.0 / (math.gamma(s + 1.0) * math.sin(0.5 * math.pi * s))


def coefficient_D_literal(s: float) -> float:
    """``-(2/pi) cos(pi s / 2) Gamma(-s)``; undefined at ``s = 1``."""
    s = _check_s(float(s))
    if s == 1.0:
        raise ValueError("literal form is indeterminate at s = 1")
    return -(2.0 / math.pi) * math.cos(0.5 * math.pi * s) * math.gamma(-s)


@dataclass(frozen=True)
class AnalyticParams:
    H1: float
    H2: float
    theta: float = 0.0

    def __post_init__(self) -> None:
        _check_h(self.H1, "H1")
        _check_h(self.H2, "H2")
        if not 0.0 <= self.theta <= 1.0:
            raise ValueError(f"theta must lie in [0, 1], got {self.theta!r}")

    @property
    def s(self) -> float:
        return self.H1 + self.H2

    @property
    def D(self) -> float:
        return coefficient_D(self.H1, self.H2)


def fbm_cross_covariance(t, tau, H1: float, H2: float):
    """``<B_H1(t) B_H2(t + tau)> = D (t^s + (t + tau)^s - |tau|^s)`` for ``t > 0``, ``t + tau > 0``."""
    t = np.asarray(t, dtype=float)
    tau = np.asarray(tau, dtype=float)
    if np.any(t <= 0) or np.any(t + tau <= 0):
        raise ValueError("need t > 0 and t + tau > 0")
    s = H1 + H2
    out = coefficient_D(H1, H2) * (t**s + (t + tau) ** s - np.abs(tau) ** s)
    return float(out) if out.ndim == 0 else out


def _check_tau_hat(tau_hat: float) -> float:
    tau_hat = float(tau_hat)
    if not 0.0 <= tau_hat < 1.0:
        raise ValueError(f"closed forms need 0 <= tau_hat < 1, got {tau_hat!r}")
    return tau_hat


def _double_part(tau_hat: float, s: float) -> float:
    return ((1 - tau_hat) ** (2 + s) - 2 * tau_hat ** (2 + s) + (1 + tau_hat) ** (2 + s)) / (
        (1 + s) * (2 + s)
    )


def asymptotic_xcorr_theta0(tau_hat: float, H1: float, H2: float, n: float = 1.0) -> float:
    """Trailing-window (``theta = 0``) closed form, ``n^s D [...]``."""
    tau_hat = _check_tau_hat(tau_hat)
    s = _check_h(H1, "H1") + _check_h(H2, "H2")
    b = (
        -(tau_hat**s)
        + ((1 + tau_hat) ** (1 + s) + (1 - tau_hat) ** (1 + s)) / (1 + s)
        - _double_part(tau_hat, s)
    )
    return n**s * coefficient_D(s) * b


def case_id(tau_hat: float, theta: float) -> int:
    """Region of ``(tau_hat, theta)``; ties go to the lower-numbered case (formulas agree there)."""
    below = tau_hat <= theta
    inside = tau_hat + theta <= 1.0
    if below:
        return 1 if inside else 2
    return 3 if inside else 4


_REGIONS = {
    1: (True, True),
    2: (True, False),
    3: (False, True),
    4: (False, False),
}


def _in_region(case: int, tau_hat: float, theta: float, tol: float = 1e-12) -> bool:
    below, inside = _REGIONS[case]
    ok_b = tau_hat <= theta + tol if below else tau_hat >= theta - tol
    ok_i = tau_hat + theta <= 1 + tol if inside else tau_hat + theta >= 1 - tol
    return ok_b and ok_i


def case_formula(
    case: int | None,
    tau_hat: float,
    theta: float,
    H1: float,
    H2: float,
    n: float = 1.0,
    D: float | None = None,
) -> float:
    """Closed form of the bracket for one of the four ``(tau_hat, theta)`` regions.

    ``case=None`` selects the region automatically. ``D`` overrides the
    coefficient (pass 1.0 for the bare bracket).
    """
    tau_hat = _check_tau_hat(tau_hat)
    if not 0.0 <= theta <= 1.0:
        raise ValueError(f"theta must lie in [0, 1], got {theta!r}")
    s = _check_h(H1, "H1") + _check_h(H2, "H2")
    if case is None:
        case = case_id(tau_hat, theta)
    if case not in _REGIONS:
        raise ValueError(f"case must be 1..4, got {case!r}")
    if not _in_region(case, tau_hat, theta):
        raise ValueError(f"(tau_hat={tau_hat}, theta={theta}) is outside case {case}")

    p = 1 + s
    below, inside = _REGIONS[case]
    # I2 over [-theta, 1 - theta]; the kink at k = -tau_hat is inside iff tau_hat < theta
    back = max(theta - tau_hat, 0.0) ** p if below else -(max(tau_hat - theta, 0.0) ** p)
    # I1; the kink at h = tau_hat is inside iff tau_hat + theta < 1
    fwd = max(1 - tau_hat - theta, 0.0) ** p if inside else -(max(tau_hat + theta - 1, 0.0) ** p)
    # pair the terms that cancel at theta = 0 so that case 3 reproduces the trailing form bit for bit
    single = (((1 + tau_hat - theta) ** p + fwd) + ((tau_hat + theta) ** p + back)) / p

    b = -(tau_hat**s) + single - _double_part(tau_hat, s)
    coef = coefficient_D(s) if D is None else D
    return n**s * coef * b


def bracket(tau_hat: float, theta: float, H1: float, H2: float) -> float:
    """Bracket with unit ``n`` and ``D``: closed form for ``tau_hat >= 0``, quadrature below."""
    if tau_hat < 0:
        return master_integral_quadrature(tau_hat, theta, H1, H2)
    return case_formula(None, tau_hat, theta, H1, H2, n=1.0, D=1.0)


def _quad(f, a: float, b: float, breaks=(), tol: float = 1e-13) -> float:
    """Integrate ``f`` on ``[a, b]`` split at interior ``breaks`` so kinks sit at endpoints."""
    edges = [a, *sorted(p for p in set(breaks) if a < p < b), b]
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        total += integrate.quad(f, lo, hi, epsabs=tol, epsrel=tol, limit=200)[0]
    return total


def master_integral_quadrature(
    tau_hat: float, theta: float, H1: float, H2: float, tol: float = 1e-12
) -> float:
    """Bracket evaluated by adaptive quadrature straight from its integral form.

    Unlike the closed forms this accepts ``-1 < tau_hat < 1``. Every
    integral is split along the loci where its ``|.|^s`` integrand has a kink.
    """
    tau_hat = float(tau_hat)
    if not -1.0 < tau_hat < 1.0:
        raise ValueError(f"need -1 < tau_hat < 1, got {tau_hat!r}")
    if not 0.0 <= theta <= 1.0:
        raise ValueError(f"theta must lie in [0, 1], got {theta!r}")
    s = _check_s(float(H1) + float(H2))
    lo, hi = -float(theta), 1.0 - float(theta)

    i1 = _quad(lambda h: abs(tau_hat - h) ** s, lo, hi, (tau_hat,), tol)
    i2 = _quad(lambda k: abs(tau_hat + k) ** s, lo, hi, (-tau_hat,), tol)

    def inner(h: float) -> float:
        return _quad(lambda k: abs(tau_hat - h + k) ** s, lo, hi, (h - tau_hat,), tol * 0.1)

    # the inner kink k = h - tau_hat enters/leaves the window at these h
    i12 = _quad(inner, lo, hi, (tau_hat - theta, tau_hat + 1.0 - theta), tol)
    return -(abs(tau_hat) ** s) + i1 + i2 - i12
