"""Vectorized elementwise kernels over contiguous float64 buffers.

Every kernel agrees bitwise, element for element, with the scalar
functions in :mod:`celu.core` (both sides share numpy's exp/expm1).
exp is evaluated only for negative elements, once per element, and the
fused kernel derives all gradient fields from that shared evaluation.

Out-of-place kernels are thread-safe; in-place kernels require exclusive
access to the buffer for the duration of the call.
"""

import enum
import time
from dataclasses import dataclass
from statistics import median
from typing import NamedTuple

import numpy as np

from .core import _alpha_of

__all__ = [
    "Activation",
    "EvalBuffers",
    "BenchReport",
    "map_activation",
    "map_activation_inplace",
    "map_celu_eval",
    "throughput_bench",
]

# Benchmark inputs are uniform on [-4, 4] (the plotting range, exercising
# both branches about equally) from a fixed seed so buffers are identical
# across runs.
_BENCH_SEED = 0x5EED
_BENCH_RANGE = (-4.0, 4.0)


class Activation(enum.Enum):
    """Elementwise activation selector."""

    ELU = "elu"
    CELU = "celu"
    RELU = "relu"
    LINEAR = "linear"

    @classmethod
    def from_name(cls, name: str) -> "Activation":
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise ValueError(f"unknown activation {name!r}; expected one of "
                             f"{[k.value for k in cls]}") from None


class EvalBuffers(NamedTuple):
    """Batched fused evaluation: three equal-length buffers, element i of
    each corresponding to input element i."""

    value: np.ndarray
    dx: np.ndarray
    dalpha: np.ndarray


@dataclass(frozen=True)
class BenchReport:
    """Wall-time statistics for repeated timed kernel passes."""

    kind: Activation
    alpha: float
    n: int
    repeats: int
    median_ns_per_element: float
    min_ns_per_element: float
    max_ns_per_element: float
    checksum: float


def _as_buffer(values) -> np.ndarray:
    buf = np.ascontiguousarray(values, dtype=np.float64)
    if buf.ndim != 1:
        raise ValueError(f"expected a 1-D buffer, got shape {buf.shape}")
    return buf


def map_activation(values, alpha, kind: Activation) -> np.ndarray:
    """Apply the scalar activation to every element of a buffer.

    Returns a new buffer; ``out[i]`` is bit-identical to the scalar
    function applied to ``values[i]``.
    """
    a = _alpha_of(alpha)
    x = _as_buffer(values)
    if kind is Activation.RELU:
        return np.maximum(x, 0.0)
    if kind is Activation.LINEAR:
        return x.copy()
    out = x.copy()
    neg = x < 0.0
    if kind is Activation.ELU:
        out[neg] = a * np.expm1(x[neg])
    elif kind is Activation.CELU:
        out[neg] = a * np.expm1(x[neg] / a)
    else:
        raise ValueError(f"unsupported activation kind: {kind!r}")
    return out


def map_activation_inplace(buffer: np.ndarray, alpha, kind: Activation) -> None:
    """Overwrite ``buffer`` with the activation of its elements.

    The result is bitwise equal to :func:`map_activation` on the same
    input. Requires a contiguous float64 ndarray.
    """
    a = _alpha_of(alpha)
    if not (isinstance(buffer, np.ndarray) and buffer.dtype == np.float64
            and buffer.ndim == 1 and buffer.flags.c_contiguous):
        raise TypeError("in-place kernels require a contiguous 1-D float64 ndarray")
    if kind is Activation.RELU:
        np.maximum(buffer, 0.0, out=buffer)
    elif kind is Activation.LINEAR:
        pass
    elif kind is Activation.ELU:
        neg = buffer < 0.0
        buffer[neg] = a * np.expm1(buffer[neg])
    elif kind is Activation.CELU:
        neg = buffer < 0.0
        buffer[neg] = a * np.expm1(buffer[neg] / a)
    else:
        raise ValueError(f"unsupported activation kind: {kind!r}")


def map_celu_eval(values, alpha) -> EvalBuffers:
    """Fused batched CELU: value, d/dx, and d/dalpha in one pass.

    exp(x/alpha) is evaluated once per negative element and shared by both
    derivative buffers; every element of every buffer is bit-identical to
    the corresponding :func:`celu.core.celu_eval` field.
    """
    a = _alpha_of(alpha)
    x = _as_buffer(values)
    neg = x < 0.0
    u = x[neg] / a
    t = np.exp(u)

    value = x.copy()
    value[neg] = a * np.expm1(u)
    dx = np.ones_like(x)
    dx[neg] = t
    dalpha = np.zeros_like(x)
    dalpha[neg] = t * (1.0 - u) - 1.0

    nans = np.isnan(x)
    if nans.any():
        dx[nans] = x[nans]
        dalpha[nans] = x[nans]
    return EvalBuffers(value, dx, dalpha)


def throughput_bench(kind: Activation, alpha, n: int, repeats: int) -> BenchReport:
    """Time ``repeats`` passes of :func:`map_activation` over an n-element
    pseudorandom buffer and report ns/element statistics.

    The input buffer is regenerated identically on every call (fixed
    seed); the output is summed after each pass so the work cannot be
    discarded, and that sum is reported as the checksum.
    """
    a = _alpha_of(alpha)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if repeats < 1:
        raise ValueError(f"repeats must be >= 1, got {repeats}")
    rng = np.random.default_rng(_BENCH_SEED)
    buf = rng.uniform(*_BENCH_RANGE, n)
    per_element = []
    checksum = 0.0
    for _ in range(repeats):
        start = time.perf_counter_ns()
        out = map_activation(buf, a, kind)
        elapsed = time.perf_counter_ns() - start
        per_element.append(elapsed / n)
        checksum = float(out.sum())
    return BenchReport(
        kind=kind,
        alpha=a,
        n=n,
        repeats=repeats,
        median_ns_per_element=float(median(per_element)),
        min_ns_per_element=float(min(per_element)),
        max_ns_per_element=float(max(per_element)),
        checksum=checksum,
    )
