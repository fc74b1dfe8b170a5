"""Tiny dense network with a trainable shape parameter per layer.

Not a framework: a mechanically transparent backpropagation loop whose
job is to demonstrate two things about the CELU parametrization.
First, the analytic d/dalpha path really does drive alpha during plain
gradient descent. Second, the activation's local input gradient stays
in (0, 1] at every step of training, whereas an ELU layer with alpha > 1
amplifies backpropagated signal by up to alpha just left of zero.

Conventions: inputs are rows, so a layer computes z = x @ W.T + b with
W of shape (fan_out, fan_in). One alpha per layer, not per unit. Plain
full-batch gradient descent on mean squared error -- no momentum, no
schedules -- which keeps every trace bitwise reproducible.
"""

import math

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .core import ShapeParam, _alpha_of
from .kernels import Activation, map_activation, map_celu_eval

__all__ = [
    "ALPHA_BOUNDS",
    "Layer",
    "MlpModel",
    "ForwardCache",
    "Gradients",
    "TrainConfig",
    "TrainTrace",
    "GainComparison",
    "init_model",
    "forward",
    "backward",
    "train",
    "toy_task",
    "gradient_magnitude_comparison",
]

# Projection interval keeping every alpha a valid ShapeParam under
# unconstrained gradient steps. Far outside the region descent visits.
ALPHA_BOUNDS = (1e-3, 1e3)


@dataclass
class Layer:
    """One dense layer: affine map followed by an elementwise activation."""

    weights: np.ndarray  # (fan_out, fan_in)
    bias: np.ndarray  # (fan_out,)
    kind: Activation
    alpha: ShapeParam
    alpha_trainable: bool

    @property
    def fan_in(self) -> int:
        return self.weights.shape[1]

    @property
    def fan_out(self) -> int:
        return self.weights.shape[0]


@dataclass
class MlpModel:
    """Ordered dense layers; the final layer is LINEAR by construction."""

    layers: list[Layer]

    @property
    def layer_sizes(self) -> tuple[int, ...]:
        return (self.layers[0].fan_in,) + tuple(l.fan_out for l in self.layers)


@dataclass
class ForwardCache:
    """Intermediates retained for the backward pass.

    ``inputs[i]`` is the batch entering layer i, ``pre_activations[i]``
    the affine output z of layer i before the activation.
    """

    inputs: list[np.ndarray]
    pre_activations: list[np.ndarray]


@dataclass
class Gradients:
    """Loss gradients for every parameter, in layer order."""

    weights: list[np.ndarray]
    biases: list[np.ndarray]
    alphas: list[float]


@dataclass(frozen=True)
class TrainConfig:
    steps: int
    learning_rate: float = 0.05
    seed: int = 0
    full_batch: bool = True
    task: str = "sin2x"

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")
        lr = self.learning_rate
        if not (isinstance(lr, (int, float)) and math.isfinite(lr) and lr > 0):
            raise ValueError(f"learning_rate must be positive and finite, got {lr!r}")
        if not self.full_batch:
            raise ValueError("only full-batch training is supported")
        if self.task != "sin2x":
            raise ValueError(f"unknown task {self.task!r}; the only task is 'sin2x'")


@dataclass(frozen=True)
class TrainTrace:
    """Per-step records from one training run.

    ``loss[k]`` and ``max_activation_gain[k]`` are measured at the
    parameters *entering* step k, before that step's update.
    """

    loss: np.ndarray
    max_activation_gain: np.ndarray
    final_alphas: tuple[float, ...]


class GainComparison(NamedTuple):
    elu_max_gain: float
    celu_max_gain: float


def init_model(layer_sizes: Sequence[int], activation=Activation.CELU,
               alpha0=1.0, alpha_trainable: bool = True, seed: int = 0) -> MlpModel:
    """Build a dense net with uniform(-s, s) weights, s = sqrt(6/(fan_in+fan_out)).

    Biases start at zero. Hidden layers use ``activation``; the final
    layer is always LINEAR (its alpha is inert and never trained).
    Deterministic under ``seed``.
    """
    sizes = [int(s) for s in layer_sizes]
    if len(sizes) < 2:
        raise ValueError(f"need at least an input and an output size, got {sizes}")
    if any(s < 1 for s in sizes):
        raise ValueError(f"layer sizes must be >= 1, got {sizes}")
    kind = activation if isinstance(activation, Activation) else Activation.from_name(activation)
    a0 = alpha0 if isinstance(alpha0, ShapeParam) else ShapeParam(_alpha_of(alpha0))

    rng = np.random.default_rng(seed)
    layers = []
    n_layers = len(sizes) - 1
    for i, (fan_in, fan_out) in enumerate(zip(sizes[:-1], sizes[1:])):
        bound = math.sqrt(6.0 / (fan_in + fan_out))
        weights = rng.uniform(-bound, bound, size=(fan_out, fan_in))
        last = i == n_layers - 1
        layers.append(Layer(
            weights=weights,
            bias=np.zeros(fan_out),
            kind=Activation.LINEAR if last else kind,
            alpha=a0,
            alpha_trainable=alpha_trainable and not last,
        ))
    return MlpModel(layers)


def _activation_grads(z: np.ndarray, layer: Layer) -> tuple[np.ndarray, np.ndarray]:
    """(d activation / d z, d activation / d alpha), elementwise at z."""
    if layer.kind is Activation.LINEAR:
        return np.ones_like(z), np.zeros_like(z)
    if layer.kind is Activation.RELU:
        return (z > 0.0).astype(np.float64), np.zeros_like(z)
    if layer.kind is Activation.CELU:
        ev = map_celu_eval(z.ravel(), layer.alpha)
        return ev.dx.reshape(z.shape), ev.dalpha.reshape(z.shape)
    a = layer.alpha.alpha
    neg = z < 0.0
    dx = np.ones_like(z)
    dx[neg] = a * np.exp(z[neg])
    dalpha = np.zeros_like(z)
    dalpha[neg] = np.expm1(z[neg])
    return dx, dalpha


def forward(model: MlpModel, inputs) -> tuple[np.ndarray, ForwardCache]:
    """Evaluate the net on a (batch, fan_in) array of rows.

    Returns (outputs, cache); the cache holds exactly what backward needs.
    """
    x = np.ascontiguousarray(inputs, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError(f"inputs must be 2-D (batch, features), got shape {x.shape}")
    if x.shape[1] != model.layers[0].fan_in:
        raise ValueError(
            f"input dimension {x.shape[1]} does not match first layer fan_in "
            f"{model.layers[0].fan_in}")
    cache = ForwardCache(inputs=[], pre_activations=[])
    a = x
    for layer in model.layers:
        cache.inputs.append(a)
        z = a @ layer.weights.T + layer.bias
        cache.pre_activations.append(z)
        a = map_activation(z.ravel(), layer.alpha, layer.kind).reshape(z.shape)
    return a, cache


def _backward(model: MlpModel, cache: ForwardCache,
              loss_grad: np.ndarray) -> tuple[Gradients, float]:
    """Reverse-mode pass; also returns the max |activation local gradient|
    seen anywhere in the net (the quantity traced during training)."""
    n = len(model.layers)
    if len(cache.inputs) != n or len(cache.pre_activations) != n:
        raise ValueError("cache does not match model: wrong number of layers")
    g = np.asarray(loss_grad, dtype=np.float64)
    if g.shape != cache.pre_activations[-1].shape:
        raise ValueError(
            f"loss_grad shape {g.shape} does not match output shape "
            f"{cache.pre_activations[-1].shape}")

    grad_w: list = [None] * n
    grad_b: list = [None] * n
    grad_a = [0.0] * n
    max_gain = 0.0
    for i in reversed(range(n)):
        layer = model.layers[i]
        z = cache.pre_activations[i]
        if z.shape != (cache.inputs[i].shape[0], layer.fan_out):
            raise ValueError("cache does not match model: layer shape mismatch")
        dx, dalpha = _activation_grads(z, layer)
        if dx.size:
            max_gain = max(max_gain, float(np.max(np.abs(dx))))
        delta = g * dx
        if layer.alpha_trainable:
            grad_a[i] = float(np.sum(g * dalpha))
        grad_w[i] = delta.T @ cache.inputs[i]
        grad_b[i] = delta.sum(axis=0)
        g = delta @ layer.weights
    return Gradients(weights=grad_w, biases=grad_b, alphas=grad_a), max_gain


def backward(model: MlpModel, cache: ForwardCache, loss_grad) -> Gradients:
    """Gradients of a scalar loss w.r.t. every weight, bias, and alpha.

    ``loss_grad`` is dLoss/dOutputs, same shape as the forward outputs.
    Alpha gradients are summed over all units sharing the layer's alpha
    and are 0 for layers with ``alpha_trainable`` false.
    """
    grads, _ = _backward(model, cache, loss_grad)
    return grads


def toy_task(seed: int, n_points: int = 256) -> tuple[np.ndarray, np.ndarray]:
    """Regression target y = sin(2x) on points uniform over [-3, 3].

    Chosen because roughly half the pre-activations of a fresh net go
    negative, exercising both branches of the activation and its alpha
    derivative.
    """
    rng = np.random.default_rng(seed)
    x = rng.uniform(-3.0, 3.0, size=(int(n_points), 1))
    return x, np.sin(2.0 * x)


def train(model: MlpModel, config: TrainConfig) -> TrainTrace:
    """Full-batch gradient descent on MSE over the toy task.

    Mutates ``model`` in place. After each step every trainable alpha is
    projected onto ALPHA_BOUNDS, so it always remains a valid ShapeParam.
    Never raises on a diverging run: the divergence is visible in the
    loss trace (a non-finite alpha step simply leaves alpha where it was).
    """
    x, y = toy_task(config.seed)
    lo, hi = ALPHA_BOUNDS
    lr = config.learning_rate
    losses = np.empty(config.steps)
    gains = np.empty(config.steps)
    for step in range(config.steps):
        out, cache = forward(model, x)
        resid = out - y
        losses[step] = np.mean(resid * resid)
        grads, gains[step] = _backward(model, cache, (2.0 / resid.size) * resid)
        for layer, dw, db, da in zip(model.layers, grads.weights,
                                     grads.biases, grads.alphas):
            layer.weights -= lr * dw
            layer.bias -= lr * db
            if layer.alpha_trainable:
                stepped = layer.alpha.alpha - lr * da
                if math.isfinite(stepped):
                    layer.alpha = ShapeParam(min(max(stepped, lo), hi))
    return TrainTrace(
        loss=losses,
        max_activation_gain=gains,
        final_alphas=tuple(l.alpha.alpha for l in model.layers),
    )


def gradient_magnitude_comparison(alpha, seed: int = 0) -> GainComparison:
    """Max local input gradient of ELU vs CELU over 1e5 random pre-activations.

    Draws uniform on [-4, 4]. The CELU figure is <= 1 for every alpha;
    the ELU figure approaches alpha from below when alpha > 1.
    """
    a = _alpha_of(alpha)
    rng = np.random.default_rng(seed)
    z = rng.uniform(-4.0, 4.0, size=100_000)
    neg = z < 0.0
    elu_dx = np.ones_like(z)
    elu_dx[neg] = a * np.exp(z[neg])
    celu_dx = np.ones_like(z)
    celu_dx[neg] = np.exp(z[neg] / a)
    return GainComparison(float(elu_dx.max()), float(celu_dx.max()))
