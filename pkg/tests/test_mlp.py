"""Training demo: initialization, forward/backward correctness (against
finite differences), and the dynamics the activation is supposed to have."""

import math

import numpy as np
import pytest

from celu.core import ShapeParam
from celu.kernels import Activation
from celu.mlp import (ALPHA_BOUNDS, Layer, MlpModel, TrainConfig, backward,
                      forward, gradient_magnitude_comparison, init_model,
                      toy_task, train)

EPS_CBRT = float(np.finfo(np.float64).eps) ** (1.0 / 3.0)


def mse(model, x, y):
    out, _ = forward(model, x)
    return float(np.mean((out - y) ** 2))


def numeric_gradients(model, x, y):
    """Central differences over every weight, bias, and trainable alpha."""
    gw, gb, ga = [], [], []
    for layer in model.layers:
        for arr, sink in ((layer.weights, gw), (layer.bias, gb)):
            g = np.zeros_like(arr)
            it = np.nditer(arr, flags=["multi_index"])
            for _ in it:
                idx = it.multi_index
                v = arr[idx]
                h = EPS_CBRT * max(1.0, abs(v))
                arr[idx] = v + h
                up = mse(model, x, y)
                arr[idx] = v - h
                down = mse(model, x, y)
                arr[idx] = v
                g[idx] = (up - down) / (2.0 * h)
            sink.append(g)
        if layer.alpha_trainable:
            a = layer.alpha.alpha
            h = EPS_CBRT * max(1.0, abs(a))
            layer.alpha = ShapeParam(a + h)
            up = mse(model, x, y)
            layer.alpha = ShapeParam(a - h)
            down = mse(model, x, y)
            layer.alpha = ShapeParam(a)
            ga.append((up - down) / (2.0 * h))
        else:
            ga.append(0.0)
    return gw, gb, ga


# ---------------------------------------------------------------------------
# initialization


def test_init_is_deterministic():
    a = init_model([1, 8, 1], seed=7)
    b = init_model([1, 8, 1], seed=7)
    for la, lb in zip(a.layers, b.layers):
        np.testing.assert_array_equal(la.weights, lb.weights)
        np.testing.assert_array_equal(la.bias, lb.bias)


def test_init_shapes_and_defaults():
    model = init_model([2, 5, 3], activation="celu", alpha0=1.0, seed=0)
    assert model.layer_sizes == (2, 5, 3)
    assert [l.weights.shape for l in model.layers] == [(5, 2), (3, 5)]
    assert all(np.all(l.bias == 0.0) for l in model.layers)
    assert all(l.alpha.alpha == 1.0 for l in model.layers)
    assert model.layers[-1].kind is Activation.LINEAR
    assert not model.layers[-1].alpha_trainable


def test_init_weights_respect_fan_bound():
    model = init_model([3, 7, 2], seed=11)
    for layer in model.layers:
        bound = math.sqrt(6.0 / (layer.fan_in + layer.fan_out))
        assert np.all(np.abs(layer.weights) <= bound)


@pytest.mark.parametrize("sizes", [[1], [], [1, 0, 1]])
def test_init_rejects_degenerate_sizes(sizes):
    with pytest.raises(ValueError):
        init_model(sizes)


def test_init_rejects_bad_alpha0():
    with pytest.raises(ValueError):
        init_model([1, 4, 1], alpha0=-1.0)


# ---------------------------------------------------------------------------
# forward


def test_zero_weight_model_outputs_zero():
    model = init_model([1, 4, 1], seed=0)
    for layer in model.layers:
        layer.weights[:] = 0.0
    out, _ = forward(model, np.array([[0.3], [-2.0], [5.0]]))
    np.testing.assert_array_equal(out, np.zeros((3, 1)))


def test_single_linear_layer_is_affine():
    model = init_model([2, 3], activation="linear", seed=1)
    layer = model.layers[0]
    layer.bias[:] = [0.5, -1.0, 0.0]
    x = np.random.default_rng(2).normal(size=(6, 2))
    out, _ = forward(model, x)
    np.testing.assert_array_equal(out, x @ layer.weights.T + layer.bias)


def test_hand_set_single_unit_celu():
    # w=1, b=0, alpha=1 on input -1: the hidden unit emits celu(-1, 1)
    model = init_model([1, 1, 1], activation="celu", alpha0=1.0, seed=0)
    for layer in model.layers:
        layer.weights[:] = 1.0
        layer.bias[:] = 0.0
    out, cache = forward(model, np.array([[-1.0]]))
    assert cache.pre_activations[0][0, 0] == -1.0
    assert out[0, 0] == -0.6321205588285577


def test_forward_rejects_bad_inputs():
    model = init_model([2, 3, 1], seed=0)
    with pytest.raises(ValueError):
        forward(model, np.zeros((4, 3)))  # wrong feature count
    with pytest.raises(ValueError):
        forward(model, np.zeros(4))  # not 2-D


# ---------------------------------------------------------------------------
# backward


def test_alpha_gradients_vanish_on_nonnegative_preactivations():
    model = init_model([1, 4, 1], seed=3)
    for layer in model.layers:
        layer.weights[:] = np.abs(layer.weights)
    x = np.linspace(0.1, 2.0, 12).reshape(-1, 1)  # positive inputs only
    out, cache = forward(model, x)
    assert all(np.all(z >= 0.0) for z in cache.pre_activations)
    grads = backward(model, cache, np.ones_like(out))
    assert grads.alphas == [0.0, 0.0]


def test_whole_model_gradients_match_finite_differences():
    rng = np.random.default_rng(11)
    x = rng.uniform(-2.0, 2.0, size=(8, 1))
    y = np.sin(2.0 * x)
    model = init_model([1, 4, 1], activation="celu", alpha0=1.3, seed=5)
    out, cache = forward(model, x)
    grads = backward(model, cache, (2.0 / (out - y).size) * (out - y))
    num_w, num_b, num_a = numeric_gradients(model, x, y)
    for got, want in zip(grads.weights + grads.biases, num_w + num_b):
        rel = np.abs(got - want) / np.maximum(1.0, np.abs(got))
        assert np.max(rel) <= 1e-5
    for got, want in zip(grads.alphas, num_a):
        assert abs(got - want) / max(1.0, abs(got)) <= 1e-5


def test_linear_network_reduces_to_least_squares():
    # single linear layer: the chain rule must degenerate to the closed form
    model = init_model([1, 1], activation="linear", seed=4)
    rng = np.random.default_rng(6)
    x = rng.normal(size=(32, 1))
    y = 3.0 * x - 1.0
    out, cache = forward(model, x)
    resid = out - y
    grads = backward(model, cache, (2.0 / resid.size) * resid)
    np.testing.assert_allclose(grads.weights[0][0, 0],
                               float(np.mean(2.0 * resid * x)), rtol=1e-12)
    np.testing.assert_allclose(grads.biases[0][0],
                               float(np.mean(2.0 * resid)), rtol=1e-12)
    assert grads.alphas == [0.0]


def test_backward_rejects_mismatched_cache():
    model = init_model([1, 4, 1], seed=0)
    other = init_model([1, 2, 1], seed=0)
    x = np.zeros((3, 1))
    out, cache = forward(other, x)
    with pytest.raises(ValueError):
        backward(model, cache, np.ones_like(out))
    out, cache = forward(model, x)
    with pytest.raises(ValueError):
        backward(model, cache, np.ones((5, 1)))


# ---------------------------------------------------------------------------
# training loop


def test_config_validation():
    with pytest.raises(ValueError):
        TrainConfig(steps=0)
    with pytest.raises(ValueError):
        TrainConfig(steps=10, learning_rate=0.0)
    with pytest.raises(ValueError):
        TrainConfig(steps=10, learning_rate=math.inf)
    with pytest.raises(ValueError):
        TrainConfig(steps=10, full_batch=False)
    with pytest.raises(ValueError):
        TrainConfig(steps=10, task="xor")


def test_toy_task_shape_and_target():
    x, y = toy_task(seed=3)
    assert x.shape == y.shape == (256, 1)
    assert np.all((-3.0 <= x) & (x <= 3.0))
    np.testing.assert_array_equal(y, np.sin(2.0 * x))


def test_training_is_deterministic():
    cfg = TrainConfig(steps=50, learning_rate=0.05, seed=3)
    t1 = train(init_model([1, 8, 1], seed=3), cfg)
    t2 = train(init_model([1, 8, 1], seed=3), cfg)
    np.testing.assert_array_equal(t1.loss, t2.loss)
    np.testing.assert_array_equal(t1.max_activation_gain, t2.max_activation_gain)
    assert t1.final_alphas == t2.final_alphas


def test_trace_lengths_match_steps():
    trace = train(init_model([1, 4, 1], seed=0), TrainConfig(steps=37, seed=0))
    assert trace.loss.shape == (37,)
    assert trace.max_activation_gain.shape == (37,)
    assert len(trace.final_alphas) == 2


def test_short_training_run_halves_the_loss():
    model = init_model([1, 16, 16, 1], activation="celu", alpha0=1.0,
                       alpha_trainable=True, seed=3)
    trace = train(model, TrainConfig(steps=300, learning_rate=0.05, seed=3))
    assert trace.loss[-1] <= 0.5 * trace.loss[0]


def test_celu_activation_gain_never_exceeds_one():
    model = init_model([1, 16, 1], activation="celu", seed=2)
    trace = train(model, TrainConfig(steps=120, learning_rate=0.05, seed=2))
    assert np.all(trace.max_activation_gain <= 1.0)
    assert np.all(trace.max_activation_gain > 0.0)


def test_elu_training_shows_gain_above_one():
    # the contrast case: with alpha fixed at 4, ELU's local gain exceeds 1
    model = init_model([1, 16, 1], activation="elu", alpha0=4.0,
                       alpha_trainable=False, seed=2)
    trace = train(model, TrainConfig(steps=40, learning_rate=0.01, seed=2))
    assert np.max(trace.max_activation_gain) > 1.0


def test_trainable_alpha_actually_moves():
    model = init_model([1, 16, 1], activation="celu", alpha0=1.0,
                       alpha_trainable=True, seed=3)
    trace = train(model, TrainConfig(steps=200, learning_rate=0.05, seed=3))
    assert trace.final_alphas[0] != 1.0


def test_frozen_alpha_stays_put():
    model = init_model([1, 16, 1], activation="celu", alpha0=1.0,
                       alpha_trainable=False, seed=3)
    trace = train(model, TrainConfig(steps=100, learning_rate=0.05, seed=3))
    assert trace.final_alphas == (1.0, 1.0)


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_alphas_stay_in_projection_bounds_even_when_diverging():
    # absurd learning rate: the loss may blow up (that is recorded, not
    # raised) but every alpha remains a valid ShapeParam inside bounds
    model = init_model([1, 8, 1], activation="celu", seed=1)
    trace = train(model, TrainConfig(steps=60, learning_rate=50.0, seed=1))
    lo, hi = ALPHA_BOUNDS
    for layer in model.layers:
        assert lo <= layer.alpha.alpha <= hi
    assert trace.loss.shape == (60,)


# ---------------------------------------------------------------------------
# gain comparison


def test_gain_comparison_alpha_four():
    gains = gradient_magnitude_comparison(ShapeParam(4.0), seed=0)
    assert gains.celu_max_gain <= 1.0
    assert gains.elu_max_gain >= 3.9


@pytest.mark.parametrize("alpha", [1.0, 0.25])
def test_gain_comparison_small_alpha_is_bounded(alpha):
    gains = gradient_magnitude_comparison(ShapeParam(alpha), seed=0)
    assert gains.elu_max_gain <= 1.0
    assert gains.celu_max_gain <= 1.0


def test_gain_comparison_deterministic():
    assert (gradient_magnitude_comparison(2.0, seed=5)
            == gradient_magnitude_comparison(2.0, seed=5))
