"""Points of the extended complex plane and the two metrics used on them.

Finite points are plain ``complex`` values; the point at infinity is the
singleton :data:`INF`.  Nothing here ever uses a large float as a stand-in
for infinity.
"""

from __future__ import annotations

import math
from typing import Union

DEFAULT_TOL = 1e-9


class Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return (Infinity, ())

    def __hash__(self):
        return hash("parabolic.INF")

    def __eq__(self, other):
        return isinstance(other, Infinity)


INF = Infinity()

SpherePoint = Union[complex, Infinity]


def is_inf(z) -> bool:
    return isinstance(z, Infinity)


def point(z) -> SpherePoint:
    """Coerce ``z`` to a sphere point, rejecting NaN and float overflow."""
    if is_inf(z):
        return INF
    if isinstance(z, str):
        if z.strip().lower() in ("inf", "infinity"):
            return INF
        z = complex(z.replace(" ", ""))
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"finite sphere point required, got {z!r}")
    return z


def chordal_distance(p: SpherePoint, q: SpherePoint) -> float:
    """Chordal distance on the unit sphere; takes values in [0, 2]."""
    if is_inf(p) and is_inf(q):
        return 0.0
    if is_inf(p) or is_inf(q):
        z = q if is_inf(p) else p
        return 2.0 / math.sqrt(1.0 + abs(z) ** 2)
    return 2.0 * abs(p - q) / math.sqrt((1.0 + abs(p) ** 2) * (1.0 + abs(q) ** 2))


def euclid_distance(p: SpherePoint, q: SpherePoint) -> float:
    """|p - q|, or ``math.inf`` when exactly one of the points is infinite."""
    if is_inf(p) and is_inf(q):
        return 0.0
    if is_inf(p) or is_inf(q):
        return math.inf
    return abs(p - q)


def same_point(p: SpherePoint, q: SpherePoint, tol: float = DEFAULT_TOL) -> bool:
    if is_inf(p) or is_inf(q):
        return is_inf(p) and is_inf(q)
    return abs(p - q) <= tol


def to_pair(z: SpherePoint):
    """JSON-friendly form: ``[re, im]`` or the string ``"inf"``."""
    if is_inf(z):
        return "inf"
    return [z.real, z.imag]


def from_pair(obj) -> SpherePoint:
    if isinstance(obj, str):
        return point(obj)
    re, im = obj
    return point(complex(float(re), float(im)))
