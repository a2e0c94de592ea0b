"""Kantorovich-type scalar constants and their maximization oracle.

Every closed-form constant in this module is defined by a univariate
maximum over a spectral window.  ``grid_max_1d`` (dense scan plus
golden-section refinement) is the brute-force route each closed form is
validated against; the two routes must agree to 1e-6 relative on the
supported exponent grids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DegenerateExponentError, DomainError, ParameterError
from .hermitian import SpectralWindow, eval_scalar

GRID_RESOLUTION = 20_000
GOLDEN_ITERS = 60
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_BRANCH_EPS = 1e-12
_DEGENERATE_EPS = 1e-12

BRANCH_INTERIOR = "interior"
BRANCH_ENDPOINT_M = "endpoint_m"
BRANCH_ENDPOINT_MAX = "endpoint_M"


def power_fun(p: float) -> Callable:
    """The scalar map t -> t^p, usable on floats and numpy arrays."""
    p = float(p)
    return lambda t: t ** p


@dataclass(frozen=True)
class ChordCoefficients:
    """Slope and intercept of the chord of f over a window."""

    slope: float
    intercept: float

    def at(self, t):
        return self.slope * t + self.intercept


def chord_coefficients(f, window: SpectralWindow) -> ChordCoefficients:
    """Chord of f over [m, M]: slope (f(M)-f(m))/(M-m), matching endpoints."""
    fm = float(f(window.m))
    fM = float(f(window.M))
    if not (math.isfinite(fm) and math.isfinite(fM)):
        raise DomainError(f"f must be finite at the window endpoints, got f(m)={fm}, f(M)={fM}")
    slope = (fM - fm) / window.width
    intercept = (window.M * fm - window.m * fM) / window.width
    return ChordCoefficients(slope, intercept)


@dataclass(frozen=True)
class ExtremumResult:
    """Location, value and branch of a univariate maximum over a window."""

    t_star: float
    value: float
    branch: str


def _eval_one(h, t: float) -> float:
    try:
        y = float(h(float(t)))
    except (ArithmeticError, ValueError, TypeError) as exc:
        raise DomainError(f"objective undefined at t={t!r}: {exc}") from exc
    if not math.isfinite(y):
        raise DomainError(f"objective non-finite at t={t!r}")
    return y


def _golden_max(h, a: float, b: float, iters: int) -> tuple[float, float]:
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    hc = _eval_one(h, c)
    hd = _eval_one(h, d)
    for _ in range(iters):
        if hc >= hd:
            b, d, hd = d, c, hc
            c = b - _INV_PHI * (b - a)
            hc = _eval_one(h, c)
        else:
            a, c, hc = c, d, hd
            d = a + _INV_PHI * (b - a)
            hd = _eval_one(h, d)
    return (c, hc) if hc >= hd else (d, hd)


def grid_max_1d(h, window: SpectralWindow, resolution: int = GRID_RESOLUTION,
                refinement_iters: int = GOLDEN_ITERS) -> ExtremumResult:
    """Maximize a scalar function over [m, M].

    Dense grid scan at the given resolution, then golden-section refinement
    around the best cell.  Accurate to ~1e-9 in value for C^2 objectives.
    """
    m, M = window.m, window.M
    ts = np.linspace(m, M, resolution + 1)
    ys = eval_scalar(h, ts)
    i = int(np.argmax(ys))
    lo = float(ts[i - 1]) if i > 0 else m
    hi = float(ts[i + 1]) if i < resolution else M
    t_ref, y_ref = _golden_max(h, lo, hi, refinement_iters)
    candidates = [
        (y_ref, t_ref),
        (float(ys[i]), float(ts[i])),
        (float(ys[0]), m),
        (float(ys[-1]), M),
    ]
    value, t_star = max(candidates, key=lambda c: c[0])
    edge = 1e-9 * window.width
    if t_star <= m + edge:
        branch = BRANCH_ENDPOINT_M
    elif t_star >= M - edge:
        branch = BRANCH_ENDPOINT_MAX
    else:
        branch = BRANCH_INTERIOR
    return ExtremumResult(t_star=float(t_star), value=float(value), branch=branch)


def beta_generic(f, g, alpha: float, window: SpectralWindow,
                 resolution: int = GRID_RESOLUTION) -> ExtremumResult:
    """Oracle gap: max over [m, M] of chord_of_f(t) - alpha * g(t)."""
    if not (float(f(window.m)) > 0.0 and float(f(window.M)) > 0.0):
        raise DomainError("f must be positive at the window endpoints")
    chord = chord_coefficients(f, window)
    alpha = float(alpha)

    def h(t):
        return chord.at(t) - alpha * g(t)

    return grid_max_1d(h, window, resolution=resolution)


def alpha_ratio(f, g, window: SpectralWindow,
                resolution: int = GRID_RESOLUTION) -> ExtremumResult:
    """Oracle ratio: max over [m, M] of chord_of_f(t) / g(t); needs g > 0."""
    chord = chord_coefficients(f, window)
    probe = eval_scalar(g, np.linspace(window.m, window.M, 2001))
    if float(np.min(probe)) <= 0.0:
        raise DomainError("g must be positive on the window")

    def h(t):
        return chord.at(t) / g(t)

    return grid_max_1d(h, window, resolution=resolution)


def _require_nondegenerate(e: float, name: str) -> float:
    e = float(e)
    if abs(e) < _DEGENERATE_EPS or abs(e - 1.0) < _DEGENERATE_EPS:
        raise DegenerateExponentError(f"{name}={e} lies in the degenerate set {{0, 1}}")
    return e


def _branch_slack(window: SpectralWindow) -> float:
    return _BRANCH_EPS * max(1.0, abs(window.m), abs(window.M))


def kantorovich_K(window: SpectralWindow, p: float) -> float:
    """Ratio constant K(m, M, p): closed form of max{chord(t^p)/t^p}.

    Defined for p outside {0, 1}; the closed form has no branch test.
    """
    w = window.require_positive()
    p = _require_nondegenerate(p, "p")
    m, M = w.m, w.M
    num = m * M ** p - M * m ** p
    base = (p - 1.0) / p * (M ** p - m ** p) / num
    return float(num / ((p - 1.0) * w.width) * base ** p)


def kantorovich_K2(window: SpectralWindow, p: float, q: float) -> float:
    """Two-exponent ratio constant K(m, M, p, q) = max{chord(t^p)/t^q}.

    Piecewise closed form: the interior expression applies when the chord
    touch point lies inside the window, otherwise the larger endpoint ratio
    max{m^(p-q), M^(p-q)} is returned.  The supported regime is p <= 0 and
    -1 <= q < 0; evaluation outside it is permitted for fuzzing and the
    callers record the regime breach.
    """
    w = window.require_positive()
    p = float(p)
    q = _require_nondegenerate(q, "q")
    m, M = w.m, w.M
    num = m * M ** p - M * m ** p
    dpow = M ** p - m ** p
    den = (q - 1.0) * dpow
    if den == 0.0:  # p == 0: the chord is the constant 1
        return float(max(m ** (p - q), M ** (p - q)))
    t0 = q * num / den
    eps = _branch_slack(w)
    if m - eps <= t0 <= M + eps:
        return float(num / ((q - 1.0) * w.width) * ((q - 1.0) / q * dpow / num) ** q)
    return float(max(m ** (p - q), M ** (p - q)))


def k2_touch_point_forms(window: SpectralWindow, p: float, q: float) -> tuple[float, float]:
    """The interior maximizer of chord(t^p)/t^q in two equivalent arrangements.

    Both are kept so tests can confirm numerically that they never disagree;
    p = 0 has no touch point and is refused.
    """
    w = window.require_positive()
    p = _require_nondegenerate(p, "p")
    q = _require_nondegenerate(q, "q")
    m, M = w.m, w.M
    num = m * M ** p - M * m ** p
    dpow = M ** p - m ** p
    direct = q * num / ((q - 1.0) * dpow)
    chord = chord_coefficients(power_fun(p), w)
    via_chord = q * chord.intercept / ((1.0 - q) * chord.slope)
    return float(direct), float(via_chord)


def kantorovich_C2(window: SpectralWindow, p: float, q: float) -> float:
    """Two-exponent difference constant C(m, M, p, q) = max{chord(t^p) - t^q}.

    Requires p <= 0 and q < 0 (q outside {0, 1}); returns the larger
    endpoint difference when the interior touch point leaves the window.
    """
    w = window.require_positive()
    p = float(p)
    q = _require_nondegenerate(q, "q")
    if p > 0.0:
        raise ParameterError(f"difference constant needs p <= 0, got p={p}")
    if q > 0.0:
        raise ParameterError(f"difference constant needs q < 0, got q={q}")
    m, M = w.m, w.M
    ratio = (M ** p - m ** p) / (q * w.width)
    if ratio > 0.0:
        t0 = ratio ** (1.0 / (q - 1.0))
        eps = _branch_slack(w)
        if m - eps <= t0 <= M + eps:
            return float((M * m ** p - m * M ** p) / w.width
                         + (q - 1.0) * ratio ** (q / (q - 1.0)))
    return float(max(M ** p - M ** q, m ** p - m ** q))


def kantorovich_C(window: SpectralWindow, p: float) -> float:
    """One-exponent difference constant C(m, M, p); 0 on the endpoint branch."""
    w = window.require_positive()
    p = _require_nondegenerate(p, "p")
    if p > 0.0:
        raise ParameterError(f"difference constant needs p < 0, got p={p}")
    m, M = w.m, w.M
    ratio = (M ** p - m ** p) / (p * w.width)
    if ratio > 0.0:
        t0 = ratio ** (1.0 / (p - 1.0))
        eps = _branch_slack(w)
        if m - eps <= t0 <= M + eps:
            return float((M * m ** p - m * M ** p) / w.width
                         + (p - 1.0) * ratio ** (p / (p - 1.0)))
    return 0.0


def beta_power_closed(window: SpectralWindow, p: float, q: float, alpha: float) -> float:
    """Closed-form gap max{chord(t^p) - alpha * t^q} for p <= 0, q < 0, alpha > 0."""
    w = window.require_positive()
    p = float(p)
    q = _require_nondegenerate(q, "q")
    alpha = float(alpha)
    if alpha <= 0.0:
        raise ParameterError(f"gap constant needs alpha > 0, got alpha={alpha}")
    if p > 0.0:
        raise ParameterError(f"gap constant needs p <= 0, got p={p}")
    if q > 0.0:
        raise ParameterError(f"gap constant needs q < 0, got q={q}")
    m, M = w.m, w.M
    ratio = (M ** p - m ** p) / (alpha * q * w.width)
    if ratio > 0.0:
        t0 = ratio ** (1.0 / (q - 1.0))
        eps = _branch_slack(w)
        if m - eps <= t0 <= M + eps:
            return float(alpha * (q - 1.0) * ratio ** (q / (q - 1.0))
                         + (M * m ** p - m * M ** p) / w.width)
    return float(max(m ** p - alpha * m ** q, M ** p - alpha * M ** q))
