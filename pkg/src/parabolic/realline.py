"""Real parabolic maps acting on the extended real line.

With c != 0 the three points -d/c (the pole), alpha and a/c cut the line into
four open intervals, and the map permutes them in a fixed pattern that only
depends on sigma = sign((a+d) c).  In the normal coordinate
w = 1/(c (x - alpha)) the pole, infinity, a/c and alpha sit at -s, 0, s and
infinity (s = sign(a+d)), and the map is w -> w + s, which gives closed forms
for escape times.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

from .errors import (
    FixesInfinity,
    LemmaViolation,
    NoEscape,
    NotParabolic,
    OutOfBasin,
    SingularMatrix,
)
from .mobius import MobiusMap
from .sphere import INF, Infinity, is_inf

ExtendedReal = Union[float, Infinity]

POLE_TOL = 1e-14
BOUNDARY_TOL = 1e-12
TRACE_TOL = 2e-9
ESCAPE_CAP = 10**6


@dataclass(frozen=True)
class RealMobiusMap:
    a: float
    b: float
    c: float
    d: float

    def __call__(self, x: ExtendedReal) -> ExtendedReal:
        return real_apply(self, x)

    @property
    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> float:
        return self.a + self.d

    @property
    def parabolic(self) -> bool:
        return abs(abs(self.trace) - 2) <= TRACE_TOL and not (self.b == 0 and self.c == 0)

    @property
    def sign(self) -> int:
        return 1 if self.trace > 0 else -1

    @property
    def sigma(self) -> int:
        """Orientation class sign((a+d) c); needs c != 0."""
        if self.c == 0:
            raise FixesInfinity("sigma is undefined for c = 0")
        return 1 if self.trace * self.c > 0 else -1

    @property
    def alpha(self) -> float:
        return (self.a - self.d) / (2 * self.c)

    @property
    def pole(self) -> float:
        return -self.d / self.c

    @property
    def a_over_c(self) -> float:
        return self.a / self.c

    def to_complex(self) -> MobiusMap:
        return MobiusMap(complex(self.a), complex(self.b), complex(self.c), complex(self.d))


def real_map(a: float, b: float, c: float, d: float) -> RealMobiusMap:
    """Normalize real coefficients by the positive root of 1/(ad - bc)."""
    a, b, c, d = (float(x) for x in (a, b, c, d))
    det = a * d - b * c
    if abs(det) < 1e-14:
        raise SingularMatrix(f"ad - bc = {det} is (numerically) zero")
    if det < 0:
        raise NotParabolic(f"ad - bc = {det} < 0: orientation reversing, no real parabolic form")
    k = 1 / math.sqrt(det)
    return RealMobiusMap(k * a, k * b, k * c, k * d)


def real_parabolic_from(alpha: float, c: float, sign: int = 1) -> RealMobiusMap:
    if c == 0:
        raise FixesInfinity("c = 0 gives a translation")
    return real_map(sign + c * alpha, -c * alpha * alpha, c, sign - c * alpha)


def real_apply(g: RealMobiusMap, x: ExtendedReal) -> ExtendedReal:
    if is_inf(x):
        return INF if g.c == 0 else g.a / g.c
    den = g.c * x + g.d
    if abs(den) < POLE_TOL:
        return INF
    return (g.a * x + g.b) / den


def real_inverse(g: RealMobiusMap) -> RealMobiusMap:
    return RealMobiusMap(g.d, -g.b, -g.c, g.a)


def _require(g: RealMobiusMap) -> None:
    if not g.parabolic:
        raise NotParabolic(f"not parabolic (trace {g.trace:g})")
    if g.c == 0:
        raise FixesInfinity("c = 0: the map is a translation of the real line")


class IntervalLabel(enum.Enum):
    # sigma = +1 ordering: pole < alpha < a/c
    BELOW_POLE = "BelowPole"
    POLE_TO_ALPHA = "PoleToAlpha"
    ALPHA_TO_AC = "AlphaToAC"
    ABOVE_AC = "AboveAC"
    # sigma = -1 ordering: a/c < alpha < pole
    BELOW_AC = "BelowAC"
    AC_TO_ALPHA = "ACToAlpha"
    ALPHA_TO_POLE = "AlphaToPole"
    ABOVE_POLE = "AbovePole"
    # boundary points
    AT_POLE = "AtPole"
    AT_ALPHA = "AtAlpha"
    AT_AC = "AtAC"
    AT_INFINITY = "AtInfinity"


L = IntervalLabel

# open intervals as (left endpoint, right endpoint); None is the point at infinity
_INTERVALS = {
    1: {
        L.BELOW_POLE: (None, "pole"),
        L.POLE_TO_ALPHA: ("pole", "alpha"),
        L.ALPHA_TO_AC: ("alpha", "ac"),
        L.ABOVE_AC: ("ac", None),
    },
    -1: {
        L.BELOW_AC: (None, "ac"),
        L.AC_TO_ALPHA: ("ac", "alpha"),
        L.ALPHA_TO_POLE: ("alpha", "pole"),
        L.ABOVE_POLE: ("pole", None),
    },
}
_POINTS = {L.AT_POLE: "pole", L.AT_ALPHA: "alpha", L.AT_AC: "ac", L.AT_INFINITY: None}


def _landmarks(g: RealMobiusMap):
    return {"pole": g.pole, "alpha": g.alpha, "ac": g.a_over_c}


def locate(g: RealMobiusMap, x: ExtendedReal, tol: float = BOUNDARY_TOL) -> IntervalLabel:
    _require(g)
    if is_inf(x):
        return L.AT_INFINITY
    marks = _landmarks(g)
    for label, key in _POINTS.items():
        if key is not None and abs(x - marks[key]) <= tol * max(1.0, abs(marks[key])):
            return label
    for label, (lo, hi) in _INTERVALS[g.sigma].items():
        if (lo is None or x > marks[lo]) and (hi is None or x < marks[hi]):
            return label
    raise AssertionError(f"unreachable: {x} not labeled")


def aux_identities(g) -> dict:
    """Residuals of (a+d)/2 = 2/(a+d), c alpha + d = (a+d)/2, alpha = a/c - 2/(c(a+d)).

    Works for real or complex coefficients.
    """
    a, c, d = g.a, g.c, g.d
    tr = a + d
    if isinstance(g, RealMobiusMap):
        _require(g)
    elif abs(abs(tr) - 2) > TRACE_TOL or c == 0:
        raise NotParabolic(f"not parabolic with c != 0 (trace {tr})")
    alpha = (a - d) / (2 * c)
    return {
        "half_trace": abs(tr / 2 - 2 / tr),
        "c_alpha_plus_d": abs(c * alpha + d - tr / 2),
        "alpha_from_a_over_c": abs(alpha - (a / c - 2 / (c * tr))),
        "c_alpha_minus_a": abs(c * alpha - a + tr / 2),
    }


# Interval-image rules: x in A  <=>  g(x) in B.
_RULES = {
    1: [
        ({L.ALPHA_TO_AC, L.AT_AC, L.ABOVE_AC}, {L.ALPHA_TO_AC}),
        ({L.BELOW_POLE}, {L.ABOVE_AC}),
        ({L.POLE_TO_ALPHA}, {L.BELOW_POLE, L.AT_POLE, L.POLE_TO_ALPHA}),
    ],
    -1: [
        ({L.BELOW_AC, L.AT_AC, L.AC_TO_ALPHA}, {L.AC_TO_ALPHA}),
        ({L.ABOVE_POLE}, {L.BELOW_AC}),
        ({L.ALPHA_TO_POLE}, {L.ALPHA_TO_POLE, L.AT_POLE, L.ABOVE_POLE}),
    ],
}


def step_image_lemma(g: RealMobiusMap, x: ExtendedReal) -> Tuple[IntervalLabel, IntervalLabel]:
    """Label x and g(x), checking the interval-image rules for g's sigma class."""
    before = locate(g, x)
    after = locate(g, real_apply(g, x))
    for src, dst in _RULES[g.sigma]:
        if (before in src) != (after in dst):
            raise LemmaViolation(
                f"x={x} ({before.value}) -> g(x)={real_apply(g, x)} ({after.value})")
    return before, after


def _in_open(x: float, lo: float, hi: float) -> bool:
    return lo < x < hi


def monotone_convergence(g: RealMobiusMap, x0: float, N: int) -> Tuple[List[float], int]:
    """Forward orbit x0..x_N inside the basin next to a/c, and the sign of g(x) - x.

    The basin is (alpha, a/c) when sigma = +1 and (a/c, alpha) when sigma = -1.
    The returned sign comes from g(x) - x = -c^2 (x - alpha)^2 / (c (cx + d)).
    """
    _require(g)
    lo, hi = sorted((g.alpha, g.a_over_c))
    if is_inf(x0) or not _in_open(x0, lo, hi):
        raise OutOfBasin(f"{x0} is not in the open interval ({lo}, {hi})")
    drift = -(g.c ** 2) * (x0 - g.alpha) ** 2 / (g.c * (g.c * x0 + g.d))
    xs = [float(x0)]
    x = float(x0)
    for _ in range(N):
        x = real_apply(g, x)
        xs.append(x)
    return xs, (1 if drift > 0 else -1)


def backward_dynamics(g: RealMobiusMap, x0: float, N: int) -> List[float]:
    """x0, g^-1(x0), ..., g^-N(x0), with g^-1(x) = (dx - b)/(-cx + a).

    Admissible starts: (-d/c, alpha) for sigma = +1, (alpha, +inf) for sigma = -1.
    """
    _require(g)
    if g.sigma == 1:
        lo, hi = g.pole, g.alpha
    else:
        lo, hi = g.alpha, math.inf
    if is_inf(x0) or not _in_open(x0, lo, hi):
        raise OutOfBasin(f"{x0} is not in the open interval ({lo}, {hi})")
    a, b, c, d = g.a, g.b, g.c, g.d
    xs = [float(x0)]
    x = float(x0)
    for _ in range(N):
        x = (d * x - b) / (-c * x + a)
        xs.append(x)
    return xs


def escape_time_to(g: RealMobiusMap, x0: ExtendedReal, target: IntervalLabel,
                   cap: int = ESCAPE_CAP) -> int:
    """Least N with g^N(x0) labeled ``target``, by direct iteration."""
    _require(g)
    x = x0
    for n in range(cap + 1):
        if locate(g, x) is target:
            return n
        x = real_apply(g, x)
    raise NoEscape(f"{target.value} not reached from {x0} within {cap} steps")


def to_normal(g: RealMobiusMap, x: ExtendedReal) -> ExtendedReal:
    if is_inf(x):
        return 0.0
    dx = x - g.alpha
    if dx == 0:
        return INF
    return 1.0 / (g.c * dx)


def _w_of(g: RealMobiusMap, key) -> ExtendedReal:
    s = g.sign
    return {"pole": -s, "ac": s, "alpha": INF, None: 0.0}[key]


def _w_interval(g: RealMobiusMap, label: IntervalLabel) -> Tuple[float, float]:
    u, v = (_w_of(g, k) for k in _INTERVALS[g.sigma][label])
    if is_inf(u) or is_inf(v):
        f = v if is_inf(u) else u
        return (f, math.inf) if f > 0 else (-math.inf, f)
    return (min(u, v), max(u, v))


def escape_time_closed_form(g: RealMobiusMap, x0: ExtendedReal,
                            target: IntervalLabel, tol: float = 1e-9) -> Optional[int]:
    """Same as :func:`escape_time_to` but solved in the normal coordinate.

    Returns None when the orbit never reaches ``target``.
    """
    _require(g)
    s = g.sign
    w0 = to_normal(g, x0)
    if is_inf(w0):
        return 0 if target is L.AT_ALPHA else None
    if target in _POINTS:
        v = _w_of(g, _POINTS[target])
        if is_inf(v):
            return None
        n = (v - w0) * s
        k = round(n)
        return k if k >= 0 and abs(n - k) <= tol else None
    if target not in _INTERVALS[g.sigma]:
        return None
    lo, hi = _w_interval(g, target)
    # w_n = w0 + n s must land strictly inside (lo, hi)
    if s == 1:
        start, stop = lo - w0, hi - w0
    else:
        start, stop = w0 - hi, w0 - lo
    n = 0 if start == -math.inf else max(0, math.floor(start) + 1)
    return n if n < stop else None


def convergence_side(g: RealMobiusMap) -> int:
    """Side of alpha (+1 right, -1 left) from which forward orbits approach it."""
    _require(g)
    return g.sigma
