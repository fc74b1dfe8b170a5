"""Scalar definitions of ELU, CELU, their derivatives, and related checks.

All functions operate on IEEE double precision. ELU is the classic
exponential linear unit,

    ELU(x, alpha)  = x                       if x >= 0
                     alpha * (e^x - 1)       otherwise

and CELU is the reparametrization whose derivative at x = 0 equals 1 for
every alpha,

    CELU(x, alpha) = x                       if x >= 0
                     alpha * (e^(x/alpha) - 1)  otherwise.

The negative branch is evaluated with expm1 to avoid the cancellation in
``exp(u) - 1`` near u = 0. exp/expm1 are routed through numpy's
implementations so that scalar results are bit-identical to the batch
kernels in :mod:`celu.kernels` (the platform libm does not bit-match
numpy's vectorized exp).

Totality: NaN propagates through every function, infinities follow the
IEEE limits (``celu(-inf, alpha) == -alpha`` exactly), and no function
raises on any float input. Validity of alpha is enforced once, at
:class:`ShapeParam` construction.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "ShapeParam",
    "ActivationEval",
    "Shift",
    "elu",
    "elu_dx",
    "elu_dalpha",
    "celu",
    "celu_dx",
    "celu_dalpha",
    "celu_eval",
    "celu_shifted",
    "relu",
    "check_scale_similarity",
]

# Shared transcendentals; see module docstring for why these are numpy's.
_exp = np.exp
_expm1 = np.expm1


@dataclass(frozen=True)
class ShapeParam:
    """Validated shape parameter: a strictly positive, finite alpha.

    The negative-branch asymptote of ELU/CELU is ``-alpha``; alpha <= 0,
    NaN, or infinity is rejected at construction so the activation
    functions themselves never need to branch on validity.
    """

    alpha: float

    def __post_init__(self):
        a = float(self.alpha)
        if not (math.isfinite(a) and a > 0.0):
            raise ValueError(f"alpha must be a finite positive real, got {self.alpha!r}")
        object.__setattr__(self, "alpha", a)


def _alpha_of(alpha) -> float:
    """Accept a ShapeParam or a bare number; validate bare numbers."""
    if isinstance(alpha, ShapeParam):
        return alpha.alpha
    return ShapeParam(float(alpha)).alpha


class ActivationEval(NamedTuple):
    """One fused evaluation: activation value and both partial derivatives."""

    value: float
    dx: float
    dalpha: float


@dataclass(frozen=True)
class Shift:
    """Horizontal/vertical offset applied to an activation curve."""

    dx_shift: float
    dy_shift: float

    def __post_init__(self):
        for name in ("dx_shift", "dy_shift"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v!r}")
            object.__setattr__(self, name, v)


def elu(x: float, alpha) -> float:
    """ELU(x, alpha) = x for x >= 0, else alpha * (e^x - 1)."""
    a = _alpha_of(alpha)
    if x >= 0.0:
        return x
    return a * float(_expm1(x))


def elu_dx(x: float, alpha) -> float:
    """d/dx ELU: 1 for x >= 0, else alpha * e^x.

    Discontinuous at 0 when alpha != 1 (left limit alpha, right value 1),
    and exceeds 1 for small negative x whenever alpha > 1.
    """
    a = _alpha_of(alpha)
    if x >= 0.0:
        return 1.0
    return a * float(_exp(x))


def elu_dalpha(x: float, alpha) -> float:
    """d/dalpha ELU: 0 for x >= 0, else e^x - 1."""
    _alpha_of(alpha)
    if x >= 0.0:
        return 0.0
    return float(_expm1(x))


def celu(x: float, alpha) -> float:
    """CELU(x, alpha) = x for x >= 0, else alpha * (e^(x/alpha) - 1).

    The quotient x/alpha is computed as a single division, so
    ``celu(x, 1.0)`` is bit-identical to ``elu(x, 1.0)`` for every
    representable x. For x/alpha below about -37 the result saturates to
    exactly ``-alpha`` (expm1 rounds to -1); this is the IEEE image of the
    mathematical limit and is deliberately not special-cased.
    """
    a = _alpha_of(alpha)
    if x >= 0.0:
        return x
    return a * float(_expm1(x / a))


def celu_dx(x: float, alpha) -> float:
    """d/dx CELU: 1 for x >= 0, else e^(x/alpha).

    Lies in (0, 1] for every finite input until x/alpha < ~-745, where
    exp underflows to 0 (again the natural IEEE limit, not clamped).
    """
    a = _alpha_of(alpha)
    if x >= 0.0:
        return 1.0
    return float(_exp(x / a))


def celu_dalpha(x: float, alpha) -> float:
    """d/dalpha CELU: 0 for x >= 0, else e^u * (1 - u) - 1 with u = x/alpha.

    Strictly negative for x < 0; tends to -1 as u -> -inf with no
    special-casing (exp decays faster than (1 - u) grows). At x = -inf
    itself the defining product is 0*inf and the result is NaN.
    """
    a = _alpha_of(alpha)
    if x >= 0.0:
        return 0.0
    u = x / a
    return float(_exp(u)) * (1.0 - u) - 1.0


def celu_eval(x: float, alpha) -> ActivationEval:
    """Fused CELU evaluation: (value, d/dx, d/dalpha) from one pass.

    exp(x/alpha) is computed once and shared by both derivatives (plus one
    expm1 for the value); every field is bit-identical to the
    corresponding standalone function.
    """
    a = _alpha_of(alpha)
    if x >= 0.0:
        return ActivationEval(x, 1.0, 0.0)
    u = x / a
    t = float(_exp(u))
    return ActivationEval(a * float(_expm1(u)), t, t * (1.0 - u) - 1.0)


def celu_shifted(x: float, alpha, shift: Shift) -> float:
    """CELU translated by a fixed offset: celu(x - dx_shift) + dy_shift.

    Lets the curve saturate to an arbitrary shifted ReLU instead of one
    through the origin.
    """
    return celu(x - shift.dx_shift, alpha) + shift.dy_shift


def relu(x: float) -> float:
    """max(0, x), with NaN propagated."""
    if math.isnan(x):
        return x
    return x if x > 0.0 else 0.0


def check_scale_similarity(x: float, alpha, scale: float) -> float:
    """Absolute discrepancy of the scale-similarity identity.

    CELU satisfies ``celu(x, alpha) == celu(c*x, c*alpha) / c`` for every
    c > 0 in exact arithmetic; this returns the floating-point
    ``|celu(x, alpha) - celu(c*x, c*alpha)/c|``, a few ulp of
    |celu(x, alpha)| at most (exactly 0 when c is a power of two or
    x >= 0 with exact rescaling).
    """
    a = _alpha_of(alpha)
    c = float(scale)
    if not (math.isfinite(c) and c > 0.0):
        raise ValueError(f"scale must be a finite positive real, got {scale!r}")
    return abs(celu(x, a) - celu(c * x, ShapeParam(c * a)) / c)
