"""CELU: a continuously differentiable ELU parametrization.

Scalar core (`celu`, `elu`, derivatives, fused `celu_eval`), vectorized
batch kernels, a finite-difference gradient oracle, a toy MLP with
trainable per-layer alpha, and curve emission to CSV/SVG. The `celu`
console script exposes all of it.
"""

from .core import (ActivationEval, ShapeParam, Shift, celu, celu_dalpha,
                   celu_dx, celu_eval, celu_shifted, check_scale_similarity,
                   elu, elu_dalpha, elu_dx, relu)
from .curves import CurveGrid, render_figure, sample_curves, write_csv, write_svg
from .gradcheck import (DiscontinuityReport, GradCheckReport, central_difference,
                        check_celu_gradients, measure_celu_discontinuity,
                        measure_elu_discontinuity)
from .kernels import (Activation, BenchReport, EvalBuffers, map_activation,
                      map_activation_inplace, map_celu_eval, throughput_bench)
from .mlp import (GainComparison, Gradients, MlpModel, TrainConfig, TrainTrace,
                  backward, forward, gradient_magnitude_comparison, init_model,
                  toy_task, train)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # core
    "ShapeParam", "ActivationEval", "Shift",
    "elu", "elu_dx", "elu_dalpha",
    "celu", "celu_dx", "celu_dalpha", "celu_eval", "celu_shifted",
    "relu", "check_scale_similarity",
    # kernels
    "Activation", "EvalBuffers", "BenchReport",
    "map_activation", "map_activation_inplace", "map_celu_eval",
    "throughput_bench",
    # gradcheck
    "GradCheckReport", "DiscontinuityReport", "central_difference",
    "check_celu_gradients", "measure_elu_discontinuity",
    "measure_celu_discontinuity",
    # mlp
    "MlpModel", "TrainConfig", "TrainTrace", "Gradients", "GainComparison",
    "init_model", "forward", "backward", "train", "toy_task",
    "gradient_magnitude_comparison",
    # curves
    "CurveGrid", "sample_curves", "write_csv", "write_svg", "render_figure",
]
