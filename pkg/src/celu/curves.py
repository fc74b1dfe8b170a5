"""Activation curve sampling and file emission (CSV, SVG, matplotlib).

The CSV path is the authoritative one: every number is printed as the
shortest decimal that round-trips to the same double (Python ``repr``),
so downstream checks can re-derive each row from its (x, alpha) pair and
compare for exact equality. The SVG writer is dependency-free by design
-- fixed 800x600 viewport, one polyline per alpha, linear axes -- while
`render_figure` produces the same two panels through matplotlib for
anyone who wants antialiased output or PNG/PDF.
"""

import math

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .core import ShapeParam, _alpha_of
from .kernels import Activation, map_celu_eval

__all__ = [
    "DEFAULT_ALPHAS",
    "DEFAULT_X_RANGE",
    "CurveGrid",
    "sample_curves",
    "write_csv",
    "write_svg",
    "render_figure",
]

DEFAULT_ALPHAS = (0.25, 0.5, 1.0, 2.0, 4.0)
DEFAULT_X_RANGE = (-4.0, 4.0)

CSV_HEADER = "x,alpha,value,dx,dalpha"

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
            "#8c564b", "#e377c2", "#17becf")


@dataclass(frozen=True)
class CurveGrid:
    """Sampled (x, alpha) grid: one row of evaluations per alpha.

    ``value``, ``dx``, ``dalpha`` all have shape (len(alphas), len(xs)).
    """

    kind: Activation
    xs: np.ndarray
    alphas: tuple[ShapeParam, ...]
    value: np.ndarray
    dx: np.ndarray
    dalpha: np.ndarray

    def __post_init__(self):
        if self.xs.ndim != 1 or self.xs.size < 2:
            raise ValueError(f"need a 1-D grid of >= 2 points, got shape {self.xs.shape}")
        if not np.all(np.diff(self.xs) > 0.0):
            raise ValueError("xs must be strictly increasing")
        want = (len(self.alphas), self.xs.size)
        for name in ("value", "dx", "dalpha"):
            arr = getattr(self, name)
            if arr.shape != want:
                raise ValueError(f"{name} has shape {arr.shape}, expected {want}")

    def iter_rows(self) -> Iterator[tuple[float, float, float, float, float]]:
        """Yield (x, alpha, value, dx, dalpha) per row, alphas outermost."""
        for i, sp in enumerate(self.alphas):
            for j in range(self.xs.size):
                yield (float(self.xs[j]), sp.alpha, float(self.value[i, j]),
                       float(self.dx[i, j]), float(self.dalpha[i, j]))


def sample_curves(kind, alphas=DEFAULT_ALPHAS, xmin: float = DEFAULT_X_RANGE[0],
                  xmax: float = DEFAULT_X_RANGE[1], samples: int = 1000) -> CurveGrid:
    """Evaluate value/dx/dalpha on `samples` equally spaced points.

    The grid includes both endpoints. Only ELU and CELU carry curves
    worth plotting here; other kinds are rejected.
    """
    kind = kind if isinstance(kind, Activation) else Activation.from_name(kind)
    if kind not in (Activation.ELU, Activation.CELU):
        raise ValueError(f"can only sample elu or celu curves, got {kind.value}")
    if not (math.isfinite(xmin) and math.isfinite(xmax) and xmin < xmax):
        raise ValueError(f"need finite xmin < xmax, got [{xmin}, {xmax}]")
    if int(samples) < 2:
        raise ValueError(f"samples must be >= 2, got {samples}")
    shape_params = tuple(
        a if isinstance(a, ShapeParam) else ShapeParam(_alpha_of(a)) for a in alphas)
    if not shape_params:
        raise ValueError("need at least one alpha")

    xs = np.linspace(float(xmin), float(xmax), int(samples))
    value = np.empty((len(shape_params), xs.size))
    dx = np.empty_like(value)
    dalpha = np.empty_like(value)
    for i, sp in enumerate(shape_params):
        if kind is Activation.CELU:
            ev = map_celu_eval(xs, sp)
            value[i], dx[i], dalpha[i] = ev.value, ev.dx, ev.dalpha
        else:
            a = sp.alpha
            neg = xs < 0.0
            v = xs.copy()
            v[neg] = a * np.expm1(xs[neg])
            d = np.ones_like(xs)
            d[neg] = a * np.exp(xs[neg])
            da = np.zeros_like(xs)
            da[neg] = np.expm1(xs[neg])
            value[i], dx[i], dalpha[i] = v, d, da
    return CurveGrid(kind=kind, xs=xs, alphas=shape_params,
                     value=value, dx=dx, dalpha=dalpha)


def write_csv(grid: CurveGrid, path) -> None:
    """Write the grid as UTF-8 CSV with LF endings.

    Header ``x,alpha,value,dx,dalpha``; every field is repr-formatted so
    parsing it back yields the identical double.
    """
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(CSV_HEADER + "\n")
        for x, a, v, d, da in grid.iter_rows():
            fh.write(f"{x!r},{a!r},{v!r},{d!r},{da!r}\n")


# ---------------------------------------------------------------------------
# SVG emission. No dependencies: coordinates are mapped by hand and the
# document is assembled from string fragments.

_SVG_W, _SVG_H = 800, 600
_MARGIN_LEFT, _MARGIN_RIGHT, _MARGIN_TOP, _MARGIN_BOTTOM = 55, 15, 30, 42
_PANEL_GAP = 46


class _Panel:
    """Maps data coordinates into one axis-aligned pixel rectangle."""

    def __init__(self, x0, y0, width, height, xlim, ylim):
        self.x0, self.y0, self.width, self.height = x0, y0, width, height
        self.xmin, self.xmax = xlim
        self.ymin, self.ymax = ylim

    def px(self, x: float) -> float:
        return self.x0 + (x - self.xmin) / (self.xmax - self.xmin) * self.width

    def py(self, y: float) -> float:
        return self.y0 + self.height - (y - self.ymin) / (self.ymax - self.ymin) * self.height

    def polyline(self, xs, ys, color: str) -> str:
        pts = " ".join(f"{self.px(x):.2f},{self.py(y):.2f}" for x, y in zip(xs, ys))
        return (f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
                f'points="{pts}"/>')

    def frame(self) -> list[str]:
        parts = [f'<rect x="{self.x0}" y="{self.y0}" width="{self.width}" '
                 f'height="{self.height}" fill="none" stroke="#444444"/>']
        if self.ymin < 0.0 < self.ymax:
            y = self.py(0.0)
            parts.append(f'<line x1="{self.x0}" y1="{y:.2f}" x2="{self.x0 + self.width}" '
                         f'y2="{y:.2f}" stroke="#cccccc" stroke-dasharray="4 3"/>')
        if self.xmin < 0.0 < self.xmax:
            x = self.px(0.0)
            parts.append(f'<line x1="{x:.2f}" y1="{self.y0}" x2="{x:.2f}" '
                         f'y2="{self.y0 + self.height}" stroke="#cccccc" '
                         f'stroke-dasharray="4 3"/>')
        return parts

    def y_ticks(self) -> list[str]:
        return [
            f'<text x="{self.x0 - 6}" y="{self.y0 + self.height}" text-anchor="end" '
            f'font-family="monospace" font-size="11">{self.ymin:g}</text>',
            f'<text x="{self.x0 - 6}" y="{self.y0 + 10}" text-anchor="end" '
            f'font-family="monospace" font-size="11">{self.ymax:g}</text>',
        ]


def _padded_range(arr) -> tuple[float, float]:
    lo = float(np.min(arr))
    hi = float(np.max(arr))
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ValueError("cannot plot non-finite curve data")
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    pad = 0.05 * (hi - lo)
    return lo - pad, hi + pad


def write_svg(grid: CurveGrid, path) -> None:
    """Render value (top panel) and d/dx (bottom panel) curves to SVG.

    Fixed 800x600 viewport, one polyline per alpha per panel, palette
    assigned by alpha index. The document is standalone and valid
    without external resources.
    """
    xlim = (float(grid.xs[0]), float(grid.xs[-1]))
    panel_w = _SVG_W - _MARGIN_LEFT - _MARGIN_RIGHT
    panel_h = (_SVG_H - _MARGIN_TOP - _MARGIN_BOTTOM - _PANEL_GAP) // 2
    top = _Panel(_MARGIN_LEFT, _MARGIN_TOP, panel_w, panel_h,
                 xlim, _padded_range(grid.value))
    bottom = _Panel(_MARGIN_LEFT, _MARGIN_TOP + panel_h + _PANEL_GAP, panel_w, panel_h,
                    xlim, _padded_range(grid.dx))

    name = grid.kind.value
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SVG_W}" height="{_SVG_H}" '
        f'viewBox="0 0 {_SVG_W} {_SVG_H}">',
        f'<rect x="0" y="0" width="{_SVG_W}" height="{_SVG_H}" fill="#ffffff"/>',
        f'<text x="{_MARGIN_LEFT}" y="{_MARGIN_TOP - 10}" font-family="monospace" '
        f'font-size="13">{name}(x, alpha)</text>',
        f'<text x="{_MARGIN_LEFT}" y="{bottom.y0 - 10}" font-family="monospace" '
        f'font-size="13">d/dx {name}(x, alpha)</text>',
    ]
    for panel in (top, bottom):
        out.extend(panel.frame())
        out.extend(panel.y_ticks())
    for i, sp in enumerate(grid.alphas):
        color = _PALETTE[i % len(_PALETTE)]
        out.append(top.polyline(grid.xs, grid.value[i], color))
        out.append(bottom.polyline(grid.xs, grid.dx[i], color))
        out.append(f'<text x="{top.x0 + 10}" y="{top.y0 + 16 + 15 * i}" fill="{color}" '
                   f'font-family="monospace" font-size="11">alpha={sp.alpha:g}</text>')
    baseline = bottom.y0 + bottom.height + 16
    out.append(f'<text x="{bottom.x0}" y="{baseline}" font-family="monospace" '
               f'font-size="11">{xlim[0]:g}</text>')
    if xlim[0] < 0.0 < xlim[1]:
        out.append(f'<text x="{bottom.px(0.0):.2f}" y="{baseline}" text-anchor="middle" '
                   f'font-family="monospace" font-size="11">0</text>')
    out.append(f'<text x="{bottom.x0 + bottom.width}" y="{baseline}" text-anchor="end" '
               f'font-family="monospace" font-size="11">{xlim[1]:g}</text>')
    out.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(out) + "\n")


def render_figure(grid: CurveGrid, path, dpi: int = 120) -> None:
    """Render the same two panels through matplotlib (Agg) to `path`.

    The output format follows the file extension (png, pdf, svg, ...).
    Import is deferred so the CSV/SVG paths never touch matplotlib.
    """
    import matplotlib
    matplotlib.use("Agg", force=True)
    import matplotlib.pyplot as plt

    name = grid.kind.value
    fig, (ax_value, ax_dx) = plt.subplots(2, 1, figsize=(8.0, 6.0), sharex=True)
    for i, sp in enumerate(grid.alphas):
        color = _PALETTE[i % len(_PALETTE)]
        ax_value.plot(grid.xs, grid.value[i], color=color, label=f"alpha={sp.alpha:g}")
        ax_dx.plot(grid.xs, grid.dx[i], color=color)
    ax_value.set_ylabel(f"{name}(x, alpha)")
    ax_value.legend(loc="upper left", fontsize="small")
    ax_dx.set_ylabel(f"d/dx {name}(x, alpha)")
    ax_dx.set_xlabel("x")
    for ax in (ax_value, ax_dx):
        ax.axhline(0.0, color="0.8", lw=0.8, zorder=0)
        ax.axvline(0.0, color="0.8", lw=0.8, zorder=0)
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
    plt.close(fig)
