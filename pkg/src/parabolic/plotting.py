"""SVG figures: horocycle families, orbits, separation profiles, real cobwebs.

Everything renders through an explicit Figure/FigureCanvasSVG pair so no
pyplot global state is touched, and the SVG is byte-stable across runs.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import matplotlib
from matplotlib.backends.backend_svg import FigureCanvasSVG
from matplotlib.figure import Figure
from matplotlib.patches import Circle as CirclePatch

from .horocycle import Circle, ExtendedLine, Horocycle
from .sphere import is_inf

MARGIN = 0.10
STYLE = {
    "svg.hashsalt": "parabolic",
    "svg.fonttype": "none",
    "font.size": 9,
    "axes.grid": False,
}


@dataclass
class HorocycleScene:
    alpha: complex
    horocycles: Sequence[Horocycle]
    line: Optional[ExtendedLine] = None
    center_dir: Optional[complex] = None
    points: Sequence[complex] = ()
    title: str = "Horocycles at the fixed point"


@dataclass
class OrbitScene:
    points: Sequence[Tuple[int, object]]
    alpha: Optional[complex] = None
    horocycle: Optional[Horocycle] = None
    title: str = "Orbit"


@dataclass
class SeparationScene:
    profile: Sequence[Tuple[int, float]]
    threshold: float = 1.0
    marked: Sequence[int] = field(default_factory=tuple)
    title: str = "Separation |a_n - b_n|"


@dataclass
class CobwebScene:
    """Real map g and the staircase of an orbit on the extended real line."""

    coefficients: Tuple[float, float, float, float]
    orbit: Sequence[object]
    alpha: float
    pole: float
    title: str = "Iterated images under a real parabolic map"


def _finish(fig: Figure) -> str:
    buf = io.StringIO()
    FigureCanvasSVG(fig).print_svg(buf, metadata={"Date": None})
    return buf.getvalue()


def _fit(ax, xs: List[float], ys: List[float]) -> None:
    if not xs:
        return
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    span = max(x1 - x0, y1 - y0, 1e-9)
    cx, cy = (x0 + x1) / 2, (y0 + y1) / 2
    half = span * (0.5 + MARGIN)
    ax.set_xlim(cx - half, cx + half)
    ax.set_ylim(cy - half, cy + half)


def _horocycle_scene(ax, scene: HorocycleScene) -> None:
    xs, ys = [scene.alpha.real], [scene.alpha.imag]
    for hc in scene.horocycles:
        if isinstance(hc, Circle):
            ax.add_patch(CirclePatch((hc.center.real, hc.center.imag), hc.radius,
                                     fill=False, lw=1.0, color="tab:blue"))
            xs += [hc.center.real - hc.radius, hc.center.real + hc.radius]
            ys += [hc.center.imag - hc.radius, hc.center.imag + hc.radius]
    for z in scene.points:
        xs.append(z.real)
        ys.append(z.imag)
    _fit(ax, xs, ys)
    lo, hi = ax.get_xlim()
    reach = 4 * (hi - lo)
    if scene.line is not None:
        a, u = scene.line.anchor, scene.line.direction
        ax.plot([(a - reach * u).real, (a + reach * u).real],
                [(a - reach * u).imag, (a + reach * u).imag], color="k", lw=1.2,
                label="extended line")
    if scene.center_dir is not None:
        a, u = scene.alpha, scene.center_dir
        ax.plot([(a - reach * u).real, (a + reach * u).real],
                [(a - reach * u).imag, (a + reach * u).imag], color="0.5", lw=0.8,
                ls="--", label="centre line")
    if scene.points:
        ax.plot([z.real for z in scene.points], [z.imag for z in scene.points], "o",
                ms=3, color="tab:red")
    ax.plot([scene.alpha.real], [scene.alpha.imag], "k*", ms=8, label="fixed point")
    _fit(ax, xs, ys)
    ax.set_aspect("equal")
    ax.set_xlabel("Re z")
    ax.set_ylabel("Im z")


def _orbit_scene(ax, scene: OrbitScene) -> None:
    finite = [(n, z) for n, z in scene.points if not is_inf(z)]
    xs = [complex(z).real for _, z in finite]
    ys = [complex(z).imag for _, z in finite]
    if isinstance(scene.horocycle, Circle):
        hc = scene.horocycle
        ax.add_patch(CirclePatch((hc.center.real, hc.center.imag), hc.radius, fill=False,
                                 lw=0.8, color="0.6"))
        xs += [hc.center.real - hc.radius, hc.center.real + hc.radius]
        ys += [hc.center.imag - hc.radius, hc.center.imag + hc.radius]
    if scene.alpha is not None and not is_inf(scene.alpha):
        ax.plot([scene.alpha.real], [scene.alpha.imag], "k*", ms=8)
        xs.append(scene.alpha.real)
        ys.append(scene.alpha.imag)
    if finite:
        ax.plot([complex(z).real for _, z in finite], [complex(z).imag for _, z in finite],
                "o-", ms=3, lw=0.5, color="tab:red")
        for n, z in finite:
            z = complex(z)
            ax.annotate(str(n), (z.real, z.imag), textcoords="offset points",
                        xytext=(3, 3), fontsize=6)
    _fit(ax, xs, ys)
    ax.set_aspect("equal")
    ax.set_xlabel("Re z")
    ax.set_ylabel("Im z")


def _separation_scene(ax, scene: SeparationScene) -> None:
    ns = [n for n, _ in scene.profile]
    vals = [v if math.isfinite(v) else float("nan") for _, v in scene.profile]
    ax.plot(ns, vals, "-", lw=1.0, color="tab:blue", label="separation")
    ax.axhline(scene.threshold, color="tab:red", lw=0.8, ls="--",
               label=f"threshold {scene.threshold:g}")
    if scene.marked:
        lookup = dict(scene.profile)
        pts = [(n, lookup[n]) for n in scene.marked if n in lookup]
        ax.plot([n for n, _ in pts], [v for _, v in pts], "o", ms=3, color="tab:red")
    ax.set_xlabel("n")
    ax.set_ylabel("|a_n - b_n|")
    ax.set_ylim(bottom=0)


def _cobweb_scene(ax, scene: CobwebScene) -> None:
    a, b, c, d = scene.coefficients
    pts = [float(x) for x in scene.orbit if not is_inf(x)]
    span = max([abs(x - scene.alpha) for x in pts] + [abs(scene.pole - scene.alpha)]) * 1.2
    lo, hi = scene.alpha - span, scene.alpha + span
    grid = [lo + (hi - lo) * k / 800 for k in range(801)]
    ys = []
    for x in grid:
        den = c * x + d
        ys.append((a * x + b) / den if abs(den) > 1e-9 else float("nan"))
    ax.plot(grid, ys, color="tab:blue", lw=1.0, label="g")
    ax.plot([lo, hi], [lo, hi], color="0.5", lw=0.8, ls="--")
    ax.axvline(scene.pole, color="0.7", lw=0.6, ls=":")
    steps_x, steps_y = [], []
    for x0, x1 in zip(scene.orbit, scene.orbit[1:]):
        if is_inf(x0) or is_inf(x1):
            continue
        steps_x += [x0, x0, x1]
        steps_y += [x0, x1, x1]
    if steps_x:
        ax.plot(steps_x, steps_y, color="tab:red", lw=0.7)
    ax.plot([scene.alpha], [scene.alpha], "k*", ms=8)
    ax.set_xlim(lo, hi)
    ax.set_ylim(lo, hi)
    ax.set_xlabel("x")
    ax.set_ylabel("g(x)")


_DRAW = {
    HorocycleScene: _horocycle_scene,
    OrbitScene: _orbit_scene,
    SeparationScene: _separation_scene,
    CobwebScene: _cobweb_scene,
}


def render_svg(scene) -> str:
    """Render one scene to an SVG 1.1 document string."""
    with matplotlib.rc_context(STYLE):
        fig = Figure(figsize=(5.5, 5.0))
        ax = fig.add_subplot(1, 1, 1)
        _DRAW[type(scene)](ax, scene)
        ax.set_title(scene.title)
        handles, _ = ax.get_legend_handles_labels()
        if handles:
            ax.legend(loc="best", fontsize=7, frameon=False)
        fig.tight_layout()
        return _finish(fig)
