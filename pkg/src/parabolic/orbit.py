"""Orbits of a Moebius map, and convergence toward the parabolic fixed point."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .mobius import (
    MobiusMap,
    apply,
    classify,
    inverse,
    normal_form,
    require_off_fixed_point,
)
from .sphere import SpherePoint, euclid_distance, is_inf, point


@dataclass(frozen=True)
class Orbit:
    map: MobiusMap
    start: SpherePoint
    points: Tuple[SpherePoint, ...]
    first_index: int
    direction: Optional[int]

    @property
    def last_index(self) -> int:
        return self.first_index + len(self.points) - 1

    @property
    def indices(self) -> range:
        return range(self.first_index, self.last_index + 1)

    def __getitem__(self, k: int) -> SpherePoint:
        if not self.first_index <= k <= self.last_index:
            raise IndexError(k)
        return self.points[k - self.first_index]

    def __len__(self):
        return len(self.points)


def forward(g: MobiusMap, z0: SpherePoint, n: int) -> List[SpherePoint]:
    """[z0, g(z0), ..., g^n(z0)] by repeated application."""
    z0 = point(z0)
    out = [z0]
    z = z0
    for _ in range(n):
        z = apply(g, z)
        out.append(z)
    return out


def iterate(g: MobiusMap, z0: SpherePoint, n_forward: int, n_backward: int = 0) -> Orbit:
    if n_forward < 0 or n_backward < 0:
        raise ValueError("iteration counts must be nonnegative")
    z0 = point(z0)
    ahead = forward(g, z0, n_forward)
    behind = forward(inverse(g), z0, n_backward)[1:]
    cls = classify(g)
    return Orbit(g, z0, tuple(behind[::-1] + ahead), -n_backward,
                 cls.sign if cls.parabolic else None)


def iterate_normal(g: MobiusMap, z0: SpherePoint, k: int) -> SpherePoint:
    """k-th iterate through the conjugacy: h^-1(h(z0) + k*s)."""
    nf = normal_form(g)
    require_off_fixed_point(nf, z0)
    w0 = nf.to_normal(z0)
    return nf.from_normal(w0 + k * nf.direction)


def predicted_distance(g: MobiusMap, z0: SpherePoint, n: int) -> float:
    """|g^n(z0) - alpha| = 1 / (|c| |w0 + n s|), from the translation normal form."""
    nf = normal_form(g)
    require_off_fixed_point(nf, z0)
    w = nf.to_normal(z0) + n * nf.direction
    if w == 0:
        return math.inf
    return 1.0 / (abs(nf.c) * abs(w))


def convergence_profile(g: MobiusMap, z0: SpherePoint, N: int) -> List[Tuple[int, float]]:
    """(n, |g^n(z0) - alpha|) for n = -N..-1, 1..N, iterated directly."""
    nf = normal_form(g)
    require_off_fixed_point(nf, z0)
    orbit = iterate(g, z0, N, N)
    return [(n, euclid_distance(orbit[n], nf.alpha)) for n in orbit.indices if n != 0]


def escape_entry_time(g: MobiusMap, z0: SpherePoint, radius: float) -> int:
    """Least N >= 0 with |g^n(z0) - alpha| < radius for every n >= N.

    In normal coordinates the distance is 1/(|c| |w0 + n s|), so the orbit is
    outside the ball exactly while |Re(w0) + n s| <= T, T^2 = R^2 - Im(w0)^2,
    R = 1/(|c| radius).  Those n form one integer interval.
    """
    if not radius > 0:
        raise ValueError("radius must be positive")
    nf = normal_form(g)
    require_off_fixed_point(nf, z0)
    w0 = nf.to_normal(z0)
    R = 1.0 / (abs(nf.c) * radius)
    if abs(w0.imag) > R:
        return 0
    T = math.sqrt(R * R - w0.imag * w0.imag)
    x = nf.direction * w0.real
    first_outside = max(0, math.ceil(-T - x))
    last_outside = math.floor(T - x)
    if last_outside < first_outside:
        return 0
    return last_outside + 1


def points_on(orbit: Orbit) -> List[complex]:
    return [z for z in orbit.points if not is_inf(z)]

