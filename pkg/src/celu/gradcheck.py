"""Finite-difference oracle for the analytic derivatives.

Central differences are an independent route to d/dx and d/dalpha: they
never touch the analytic formulas, so agreement between the two is
evidence both are right. The randomized check excludes a small band
around x = 0 where a central stencil straddles the branch point and the
O(h^2) error model breaks down (a statement about the test, not about
the function), and uses the standard step rule h = eps^(1/3) * max(1, |v|)
balancing truncation against rounding.

This module also quantifies the property that motivates the CELU
parametrization: the ELU derivative jump |alpha - 1| at x = 0, versus
CELU's vanishing gap.
"""

from dataclasses import dataclass
from typing import Callable

import math

import numpy as np

from .core import ShapeParam, _alpha_of, celu, celu_dalpha, celu_dx, elu_dx

__all__ = [
    "GradCheckReport",
    "DiscontinuityReport",
    "central_difference",
    "check_celu_gradients",
    "measure_elu_discontinuity",
    "measure_celu_discontinuity",
]

# |x| below this is excluded from randomized sampling: the stencil would
# straddle the x=0 branch point (ELU kink; CELU second-derivative jump).
KINK_BAND = 1e-3

# Offset used to estimate the one-sided derivative limit at 0^-.
_LEFT_PROBE = -1e-9

_CBRT_EPS = float(np.finfo(np.float64).eps) ** (1.0 / 3.0)


@dataclass(frozen=True)
class GradCheckReport:
    """Analytic-vs-numeric comparison over randomized (x, alpha) samples.

    ``passed`` is true iff both max relative errors are within ``tol``,
    where relative error is |analytic - numeric| / max(1, |analytic|).
    """

    samples: int
    max_rel_err_dx: float
    max_rel_err_dalpha: float
    worst_input: tuple[float, float]
    tol: float
    passed: bool


@dataclass(frozen=True)
class DiscontinuityReport:
    """Estimated derivative jump of an activation at x = 0."""

    alpha: float
    left_limit_estimate: float
    right_value: float
    gap: float


def central_difference(f: Callable[[float], float], x: float, h: float) -> float:
    """Second-order derivative estimate (f(x+h) - f(x-h)) / (2h)."""
    if not (h > 0.0):
        raise ValueError(f"step h must be positive, got {h!r}")
    f_plus = f(x + h)
    f_minus = f(x - h)
    if not (math.isfinite(f_plus) and math.isfinite(f_minus)):
        raise ValueError(
            f"oracle failure: non-finite stencil values f({x}+{h})={f_plus!r}, "
            f"f({x}-{h})={f_minus!r}")
    return (f_plus - f_minus) / (2.0 * h)


def _step(v: float) -> float:
    return _CBRT_EPS * max(1.0, abs(v))


def check_celu_gradients(n_samples: int = 1000, seed: int = 1, tol: float = 1e-6,
                         x_range: tuple[float, float] = (-6.0, 6.0)) -> GradCheckReport:
    """Compare analytic CELU derivatives against central differences.

    Draws x uniform on ``x_range`` excluding |x| < KINK_BAND, alpha
    log-uniform on [2^-4, 2^4]; differences d/dx in x and d/dalpha in
    alpha with x held fixed. Failures are encoded in ``passed``, never
    raised.
    """
    if n_samples < 1:
        raise ValueError(f"n_samples must be >= 1, got {n_samples}")
    if tol < 0.0 or math.isnan(tol):
        raise ValueError(f"tol must be >= 0, got {tol!r}")
    rng = np.random.default_rng(seed)
    lo, hi = x_range

    max_err_dx = 0.0
    max_err_da = 0.0
    worst = (math.nan, math.nan)
    worst_err = -1.0
    for _ in range(n_samples):
        x = float(rng.uniform(lo, hi))
        while abs(x) < KINK_BAND:
            x = float(rng.uniform(lo, hi))
        a = float(np.exp2(rng.uniform(-4.0, 4.0)))
        sp = ShapeParam(a)

        numeric_dx = central_difference(lambda v: celu(v, sp), x, _step(x))
        analytic_dx = celu_dx(x, sp)
        err_dx = abs(analytic_dx - numeric_dx) / max(1.0, abs(analytic_dx))

        numeric_da = central_difference(lambda v: celu(x, ShapeParam(v)), a, _step(a))
        analytic_da = celu_dalpha(x, sp)
        err_da = abs(analytic_da - numeric_da) / max(1.0, abs(analytic_da))

        max_err_dx = max(max_err_dx, err_dx)
        max_err_da = max(max_err_da, err_da)
        if max(err_dx, err_da) > worst_err:
            worst_err = max(err_dx, err_da)
            worst = (x, a)

    return GradCheckReport(
        samples=n_samples,
        max_rel_err_dx=max_err_dx,
        max_rel_err_dalpha=max_err_da,
        worst_input=worst,
        tol=tol,
        passed=(max_err_dx <= tol and max_err_da <= tol),
    )


def measure_elu_discontinuity(alpha) -> DiscontinuityReport:
    """Estimate the ELU derivative jump at 0: |alpha - 1| for shape alpha."""
    left = elu_dx(_LEFT_PROBE, alpha)
    right = elu_dx(0.0, alpha)
    return DiscontinuityReport(
        alpha=_alpha_of(alpha),
        left_limit_estimate=left,
        right_value=right,
        gap=abs(left - right),
    )


def measure_celu_discontinuity(alpha) -> DiscontinuityReport:
    """Same construction with the CELU derivative: the gap vanishes for
    every alpha (bounded by |probe|/alpha)."""
    left = celu_dx(_LEFT_PROBE, alpha)
    right = celu_dx(0.0, alpha)
    return DiscontinuityReport(
        alpha=_alpha_of(alpha),
        left_limit_estimate=left,
        right_value=right,
        gap=abs(left - right),
    )
