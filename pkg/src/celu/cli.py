"""Command-line surface: curve emission, gradient checks, derivative-gap
measurement, the training demo, and kernel benchmarks.

Exit code contract (stable): 0 on success, 1 when a requested check
fails (gradcheck tolerance exceeded, training loss not halved), 2 on
usage errors (bad flags, invalid alpha, unwritable output path).
"""

import argparse
import re
import sys

from .curves import (DEFAULT_ALPHAS, DEFAULT_X_RANGE, render_figure,
                     sample_curves, write_csv, write_svg)
from .gradcheck import (check_celu_gradients, measure_celu_discontinuity,
                        measure_elu_discontinuity)
from .kernels import Activation, throughput_bench
from .mlp import TrainConfig, init_model, train

__all__ = ["main"]

# Fixed demo architecture: 1 input, two hidden layers of 16, 1 output.
# Big enough to fit sin(2x), small enough to train full-batch in seconds.
_TRAIN_LAYERS = (1, 16, 16, 1)

_DEFAULT_ALPHAS_TEXT = ",".join(f"{a:g}" for a in DEFAULT_ALPHAS)


def _usage_error(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 2


def _parse_alphas(text: str) -> list[float]:
    items = [t.strip() for t in re.split(r"[;,]", text) if t.strip()]
    if not items:
        raise ValueError(f"no alphas in {text!r}")
    return [float(t) for t in items]


def cmd_plot(args: argparse.Namespace) -> int:
    try:
        alphas = _parse_alphas(args.alphas)
        grid = sample_curves(args.activation, alphas, args.xmin, args.xmax,
                             args.samples)
    except ValueError as exc:
        return _usage_error(str(exc))
    try:
        if args.format == "csv":
            write_csv(grid, args.out)
        else:
            write_svg(grid, args.out)
        if args.figure:
            render_figure(grid, args.figure)
    except OSError as exc:
        return _usage_error(f"cannot write output: {exc}")
    rows = len(grid.alphas) * grid.xs.size
    print(f"wrote {args.out} ({args.format}, {rows} rows)")
    if args.figure:
        print(f"wrote {args.figure} (figure)")
    return 0


def cmd_gradcheck(args: argparse.Namespace) -> int:
    try:
        report = check_celu_gradients(args.samples, args.seed, args.tol)
    except ValueError as exc:
        return _usage_error(str(exc))
    wx, wa = report.worst_input
    print(f"samples              : {report.samples}")
    print(f"max rel err d/dx     : {report.max_rel_err_dx:.3e}")
    print(f"max rel err d/dalpha : {report.max_rel_err_dalpha:.3e}")
    print(f"worst (x, alpha)     : ({wx!r}, {wa!r})")
    print(f"tolerance            : {report.tol:g}")
    print("result               : " + ("PASS" if report.passed else "FAIL"))
    return 0 if report.passed else 1


def cmd_discontinuity(args: argparse.Namespace) -> int:
    try:
        alphas = _parse_alphas(args.alphas)
        reports = [(measure_elu_discontinuity(a), measure_celu_discontinuity(a))
                   for a in alphas]
    except ValueError as exc:
        return _usage_error(str(exc))
    print(f"{'alpha':>10}  {'elu dx gap at 0':>16}  {'celu dx gap at 0':>17}")
    for elu_rep, celu_rep in reports:
        print(f"{elu_rep.alpha:>10g}  {elu_rep.gap:>16.6e}  {celu_rep.gap:>17.6e}")
    return 0


def cmd_train(args: argparse.Namespace) -> int:
    try:
        model = init_model(_TRAIN_LAYERS, activation=args.activation,
                           alpha0=args.alpha0, alpha_trainable=args.trainable,
                           seed=args.seed)
        config = TrainConfig(steps=args.steps, learning_rate=args.lr,
                             seed=args.seed)
    except ValueError as exc:
        return _usage_error(str(exc))
    trace = train(model, config)
    initial = float(trace.loss[0])
    final = float(trace.loss[-1])
    if args.trace_out:
        try:
            with open(args.trace_out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write("step,loss,max_activation_gain\n")
                for step in range(config.steps):
                    fh.write(f"{step},{float(trace.loss[step])!r},"
                             f"{float(trace.max_activation_gain[step])!r}\n")
        except OSError as exc:
            return _usage_error(f"cannot write trace: {exc}")
    print(f"activation        : {args.activation}")
    print(f"layers            : {list(_TRAIN_LAYERS)}")
    print(f"steps             : {config.steps}")
    print(f"initial loss      : {initial:.6f}")
    print(f"final loss        : {final:.6f}")
    print(f"reduction         : {100.0 * (1.0 - final / initial):.1f}%")
    print(f"max activation gain: {float(trace.max_activation_gain.max()):.6f}")
    print("final alphas      : " + ", ".join(f"{a:.6f}" for a in trace.final_alphas))
    if args.trace_out:
        print(f"wrote {args.trace_out} ({config.steps} rows)")
    halved = final <= 0.5 * initial
    print("result            : " + ("PASS (loss halved)" if halved else
                                    "FAIL (loss not halved)"))
    return 0 if halved else 1


def cmd_bench(args: argparse.Namespace) -> int:
    try:
        kinds = [Activation.from_name(name)
                 for name in re.split(r"[;,]", args.kinds) if name.strip()]
        if not kinds:
            raise ValueError(f"no kinds in {args.kinds!r}")
        reports = [throughput_bench(k, args.alpha, args.n, args.repeats)
                   for k in kinds]
    except ValueError as exc:
        return _usage_error(str(exc))
    print(f"{'kind':>8} {'n':>9} {'reps':>5} {'median ns/el':>13} "
          f"{'min ns/el':>10} {'max ns/el':>10}  checksum")
    for rep in reports:
        print(f"{rep.kind.value:>8} {rep.n:>9} {rep.repeats:>5} "
              f"{rep.median_ns_per_element:>13.3f} {rep.min_ns_per_element:>10.3f} "
              f"{rep.max_ns_per_element:>10.3f}  {rep.checksum!r}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="celu",
        description="CELU/ELU activation curves, gradient checks, and demos.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plot", help="emit value/derivative curves as CSV or SVG")
    p.add_argument("activation", choices=["elu", "celu"])
    p.add_argument("--alphas", default=_DEFAULT_ALPHAS_TEXT,
                   help="comma-separated shape parameters (default %(default)s)")
    p.add_argument("--xmin", type=float, default=DEFAULT_X_RANGE[0])
    p.add_argument("--xmax", type=float, default=DEFAULT_X_RANGE[1])
    p.add_argument("--samples", type=int, default=1000,
                   help="grid points, endpoints included (default %(default)s)")
    p.add_argument("--format", choices=["csv", "svg"], default="csv")
    p.add_argument("--out", required=True, help="output file path")
    p.add_argument("--figure", metavar="PATH",
                   help="also render a matplotlib figure to PATH "
                        "(format from extension)")
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("gradcheck",
                       help="compare analytic derivatives against central differences")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--tol", type=float, default=1e-6,
                   help="max allowed relative error (default %(default)s)")
    p.set_defaults(func=cmd_gradcheck)

    p = sub.add_parser("discontinuity",
                       help="measure the derivative jump at x=0 for ELU vs CELU")
    p.add_argument("--alphas", default=_DEFAULT_ALPHAS_TEXT)
    p.set_defaults(func=cmd_discontinuity)

    p = sub.add_parser("train",
                       help="train a small dense net on y=sin(2x) (full-batch GD)")
    p.add_argument("--activation", choices=["celu", "elu", "relu"], default="celu")
    p.add_argument("--alpha0", type=float, default=1.0)
    p.add_argument("--trainable", action=argparse.BooleanOptionalAction,
                   default=True, help="whether alpha receives gradient updates")
    p.add_argument("--steps", type=int, default=2000)
    p.add_argument("--lr", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=3)
    p.add_argument("--trace-out", metavar="PATH",
                   help="write per-step loss/gain CSV to PATH")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("bench", help="time the elementwise kernels")
    p.add_argument("--kinds", default="relu,celu",
                   help="comma-separated activation kinds (default %(default)s)")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--n", type=int, default=1 << 20)
    p.add_argument("--repeats", type=int, default=5)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    return args.func(args)
