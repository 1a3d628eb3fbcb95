"""Horocycles at the fixed point of a parabolic map.

A horocycle is either the extended line through a/c, -d/c and infinity, or a
circle tangent to that line at the fixed point alpha.  Circle centers live on
the perpendicular bisector of [-d/c, a/c].
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Union

from .errors import FixedPointInput, FixesInfinity
from .mobius import MobiusMap, apply, fixed_point, inverse, normal_form, require_parabolic
from .sphere import SpherePoint, is_inf

EQUAL_TOL = 1e-9
LINE_TOL = 1e-12
ANGLE_GAP = 1e-6


def _canonical_unit(u: complex) -> complex:
    u = u / abs(u)
    if u.real < 0 or (u.real == 0 and u.imag < 0):
        u = -u
    return u


@dataclass(frozen=True)
class CenterLine:
    anchor: complex
    direction: complex

    def at(self, t: float) -> complex:
        return self.anchor + t * self.direction

    def distance(self, z: complex) -> float:
        return abs(((z - self.anchor) * self.direction.conjugate()).imag)


@dataclass(frozen=True)
class ExtendedLine:
    """The invariant extended line; ``anchor`` is alpha."""

    anchor: complex
    direction: complex


@dataclass(frozen=True)
class Circle:
    center: complex
    radius: float


Horocycle = Union[ExtendedLine, Circle]


def _parabolic_finite(g: MobiusMap):
    require_parabolic(g)
    if g.fixes_infinity:
        raise FixesInfinity("horocycles need a finite fixed point (c != 0)")
    return fixed_point(g)


def extended_line(g: MobiusMap) -> ExtendedLine:
    alpha = _parabolic_finite(g)
    return ExtendedLine(alpha, _canonical_unit(g.trace / g.c))


def center_line(g: MobiusMap) -> CenterLine:
    """Perpendicular bisector of the segment [-d/c, a/c]."""
    line = extended_line(g)
    return CenterLine(line.anchor, 1j * line.direction)


def horocycle_at(g: MobiusMap, t: float) -> Horocycle:
    """Horocycle whose center is ``alpha + t * direction`` on the center line."""
    ell = center_line(g)
    if t == 0:
        return extended_line(g)
    return Circle(ell.at(t), abs(t))


def horocycle_through(g: MobiusMap, z: SpherePoint, tol: float = LINE_TOL) -> Horocycle:
    nf = normal_form(g)
    if is_inf(z):
        return extended_line(g)
    if abs(z - nf.alpha) <= tol * max(1.0, abs(nf.alpha)):
        raise FixedPointInput("every horocycle passes through the fixed point")
    w = nf.to_normal(z)
    if abs(w.imag) <= tol * max(1.0, abs(w)):
        return extended_line(g)
    # h maps the circle to Im w = 1 / (2 c (p - alpha) i); solve for p
    p = nf.alpha + 1 / (2j * nf.c * w.imag)
    return Circle(p, abs(nf.alpha - p))


def contains(hc: Horocycle, z: SpherePoint, tol: float = EQUAL_TOL) -> bool:
    return residual(hc, z) <= tol


def residual(hc: Horocycle, z: SpherePoint) -> float:
    """Distance-like defect of ``z`` from the horocycle (0 when on it)."""
    if isinstance(hc, ExtendedLine):
        if is_inf(z):
            return 0.0
        return abs(((z - hc.anchor) * hc.direction.conjugate()).imag)
    if is_inf(z):
        return math.inf
    return abs(abs(z - hc.center) - hc.radius)


def same_horocycle(h1: Horocycle, h2: Horocycle, tol: float = EQUAL_TOL) -> bool:
    if isinstance(h1, Circle) and isinstance(h2, Circle):
        return abs(h1.center - h2.center) < tol and abs(h1.radius - h2.radius) < tol
    if isinstance(h1, ExtendedLine) and isinstance(h2, ExtendedLine):
        return (abs(h1.anchor - h2.anchor) < tol
                and abs((h1.direction * h2.direction.conjugate()).imag) < tol)
    return False


def sample(hc: Horocycle, n: int, alpha: complex, scale: float = 1.0):
    """``n`` points on ``hc`` avoiding alpha.

    Circle points are equi-angular in the window (Arg(alpha-p), Arg(alpha-p)+2pi)
    shrunk by ANGLE_GAP at both ends; line points are alpha + tan(phi)*scale*dir.
    """
    if n < 1:
        return []
    if isinstance(hc, Circle):
        base = cmath.phase(alpha - hc.center)
        lo, span = base + ANGLE_GAP, 2 * math.pi - 2 * ANGLE_GAP
        steps = [lo + span * (k + 0.5) / n for k in range(n)]
        return [hc.center + hc.radius * cmath.exp(1j * th) for th in steps]
    phis = [-math.pi / 2 + math.pi * (k + 0.5) / n for k in range(n)]
    return [hc.anchor + math.tan(phi) * scale * hc.direction for phi in phis]


@dataclass(frozen=True)
class InvarianceReport:
    samples: int
    max_residual: float
    tol: float

    @property
    def invariant(self) -> bool:
        return self.max_residual < self.tol


def check_invariance(g: MobiusMap, hc: Horocycle, samples: int = 100,
                     tol: float = EQUAL_TOL) -> InvarianceReport:
    """Push sample points of ``hc`` forward and backward by g and measure drift."""
    alpha = _parabolic_finite(g)
    g_inv = inverse(g)
    scale = 1.0 / abs(g.c)
    worst = 0.0
    for z in sample(hc, samples, alpha, scale):
        worst = max(worst, residual(hc, apply(g, z)), residual(hc, apply(g_inv, z)))
    return InvarianceReport(samples, worst, tol)


def argument_of(z: complex, p: complex, alpha: complex, tol: float = 1e-12) -> float:
    """Angle of z - p lifted into the open window (Arg(alpha-p), Arg(alpha-p) + 2pi)."""
    if abs(z - alpha) <= tol * max(1.0, abs(alpha - p)):
        raise FixedPointInput("alpha sits on both ends of the angular window")
    base = cmath.phase(alpha - p)
    offset = (cmath.phase(z - p) - base) % (2 * math.pi)
    return base + offset


def diametral_point(g: MobiusMap, hc: Circle) -> complex:
    """Second intersection of the center line with ``hc``; opposite alpha."""
    alpha = _parabolic_finite(g)
    return 2 * hc.center - alpha
