"""Pseudo-orbits that defeat Hyers-Ulam stability of b_{n+1} = g(b_n).

Every builder returns an epsilon-pseudo-orbit (one-step defect at most
epsilon) that keeps coming back to distance >= 1 from the exact orbit,
however small epsilon is.  :func:`verify` re-checks both facts numerically
against the exact orbit, independently of how the witness was built.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

from .errors import FixesInfinity, HorizonTooShort, InvalidEpsilon, NoEscape, NotParabolic
from .mobius import MobiusMap, normal_form, require_parabolic
from .orbit import escape_entry_time, forward
from .realline import RealMobiusMap, real_apply
from .sphere import SpherePoint, euclid_distance, from_pair, is_inf, point, to_pair

SEPARATION_THRESHOLD = 1.0
DEFECT_SLACK = 1e-9
SEARCH_CAP = 10**6

AnyMap = Union[MobiusMap, RealMobiusMap]


@dataclass(frozen=True)
class PseudoOrbit:
    epsilon: float
    points: Tuple[SpherePoint, ...]
    preperiod: int
    period: int
    marked: Tuple[int, ...] = field(default=(), compare=False)

    @property
    def horizon(self) -> int:
        return len(self.points) - 1

    def to_json(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "preperiod": self.preperiod,
            "period": self.period,
            "points": [to_pair(_as_complex(z)) for z in self.points],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "PseudoOrbit":
        return cls(
            epsilon=float(obj["epsilon"]),
            points=tuple(from_pair(p) for p in obj["points"]),
            preperiod=int(obj["preperiod"]),
            period=int(obj["period"]),
        )


class Conclusion(enum.Enum):
    NON_STABILITY_WITNESSED = "NonStabilityWitnessed"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class StabilityVerdict:
    epsilon: float
    defect_observed: float
    separation_threshold: float
    exceed_count: int
    exceed_indices: Tuple[int, ...]
    min_exceed: int
    conclusion: Conclusion

    @property
    def witnessed(self) -> bool:
        return self.conclusion is Conclusion.NON_STABILITY_WITNESSED

    def to_json(self) -> dict:
        out = asdict(self)
        out["exceed_indices"] = list(self.exceed_indices)
        out["conclusion"] = self.conclusion.value
        if math.isinf(self.defect_observed):
            out["defect_observed"] = "inf"
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "StabilityVerdict":
        return cls(
            epsilon=float(obj["epsilon"]),
            defect_observed=float(obj["defect_observed"]),
            separation_threshold=float(obj["separation_threshold"]),
            exceed_count=int(obj["exceed_count"]),
            exceed_indices=tuple(int(i) for i in obj["exceed_indices"]),
            min_exceed=int(obj["min_exceed"]),
            conclusion=Conclusion(obj["conclusion"]),
        )


def _as_complex(z) -> SpherePoint:
    return z if is_inf(z) else complex(z)


def _check_epsilon(epsilon: float, allow_zero: bool = False) -> float:
    epsilon = float(epsilon)
    if not math.isfinite(epsilon) or epsilon < 0 or (epsilon == 0 and not allow_zero):
        raise InvalidEpsilon(f"epsilon must be positive, got {epsilon}")
    return epsilon


def _fill(prefix: Sequence, block: Sequence, horizon: int) -> Tuple:
    """prefix followed by ``block`` repeated; entries are shared, not recomputed."""
    out = list(prefix[: horizon + 1])
    k = 0
    while len(out) <= horizon:
        out.append(block[k % len(block)])
        k += 1
    return tuple(out)


def build_complex_witness(g: MobiusMap, b0: SpherePoint, epsilon: float, horizon: int,
                          side: int = 1) -> PseudoOrbit:
    """Pre-periodic pseudo-orbit for a parabolic map with c != 0.

    Built in the normal coordinate w = h(z), where g acts as w -> w + s:

    * N1 = first time the exact orbit of b0 stays inside B(alpha, eps/2), and
      q replaces b_J, J = max(N1, 1);
    * Im w_q = -side / (2|c|(1 + 2 eps)) puts q on the horocycle of radius
      exactly 1 + 2 eps;
    * Re w_q = -s N2, N2 = ceil(2/(|c| eps)); since Im w_q != 0 this gives
      |w_q| > 2/(|c| eps), so q and all its backward iterates lie in
      B(alpha, eps/2), and g^N2(q) is the diametral point;
    * the block q, g(q), ..., g^(2 N2 - 1)(q) then repeats forever.
    """
    epsilon = _check_epsilon(epsilon)
    if side not in (1, -1):
        raise ValueError("side must be +1 or -1")
    require_parabolic(g)
    if g.fixes_infinity:
        raise FixesInfinity("c = 0: use build_translation_witness")
    nf = normal_form(g)
    b0 = point(b0)
    if not is_inf(b0) and b0 == nf.alpha:
        n1 = 0
    else:
        n1 = escape_entry_time(g, b0, epsilon / 2)
    # q takes the place of b_J; b_J is already in the ball, so the jump costs < eps
    jump = max(n1, 1)
    prefix = forward(g, b0, jump - 1)

    absc = abs(nf.c)
    n2 = math.ceil(2 / (absc * epsilon))
    w_q = complex(-nf.direction * n2, -side / (2 * absc * (1 + 2 * epsilon)))
    q = nf.from_normal(w_q)
    block = forward(g, q, 2 * n2 - 1)

    pre, period = jump, 2 * n2
    marked = tuple(range(pre + n2, horizon + 1, period))
    return PseudoOrbit(epsilon, _fill(prefix, block, horizon), pre, period, marked)


def build_translation_witness(q: complex, a0: complex, epsilon: float,
                              horizon: int) -> PseudoOrbit:
    """a_n = a0 + n (eps + q) against the translation z -> z + q.

    q = 0 (the identity) is allowed and gives a0 + n eps against a constant
    orbit; eps = 0 degenerates to the exact orbit.
    """
    epsilon = _check_epsilon(epsilon, allow_zero=True)
    q, a0 = complex(q), complex(a0)
    step = epsilon + q
    pts = tuple(a0 + n * step for n in range(horizon + 1))
    return PseudoOrbit(epsilon, pts, 0, 0)


def _real_forward(g: RealMobiusMap, x0, n: int) -> List:
    out = [x0]
    x = x0
    for _ in range(n):
        x = real_apply(g, x)
        out.append(x)
    return out


def real_launch_point(g: RealMobiusMap, epsilon: float) -> float:
    """Default q: inside (alpha - eps/2, alpha + eps/2) on the side forward orbits leave from.

    In the normal coordinate w_q = -s (M + f) with M = ceil(2/(|c| eps)) + 1 and
    f = K/2, K = min(1, 1/(|c| (1 + eps))).  After M steps |w| = f < K, which
    puts the orbit farther than max(1/|c|, 1 + eps) from alpha.
    """
    absc = abs(g.c)
    big = math.ceil(2 / (absc * epsilon)) + 1
    k = min(1.0, 1.0 / (absc * (1 + epsilon)))
    w_q = -g.sign * (big + k / 2)
    return g.alpha + 1.0 / (g.c * w_q)


def build_real_witness(g: RealMobiusMap, b0: float, epsilon: float, horizon: int,
                       q: Optional[float] = None) -> PseudoOrbit:
    """Pre-periodic pseudo-orbit for a real parabolic map with c != 0.

    The exact orbit creeps into alpha from one side.  q sits just across alpha,
    so its forward orbit runs away through the pole and infinity, passes a point
    farther than max(1/|c|, 1 + eps) from alpha (N1 steps), and comes back into
    (alpha, alpha + eps/2) on the other side (N2 further steps).  The block
    q, ..., g^(N1+N2)(q) repeats with period N1 + N2 + 1.
    """
    epsilon = _check_epsilon(epsilon)
    if not g.parabolic:
        raise NotParabolic(f"not parabolic (trace {g.trace:g})")
    if g.c == 0:
        raise FixesInfinity("c = 0: use build_translation_witness")
    alpha, sigma = g.alpha, g.sigma
    if q is None:
        q = real_launch_point(g, epsilon)
    q = float(q)
    # q must sit strictly on the far side of alpha, within eps/2
    if not 0 < -sigma * (q - alpha) < epsilon / 2:
        raise ValueError(f"q = {q} must lie strictly between alpha and alpha - sigma*eps/2")

    if not is_inf(b0) and b0 == alpha:
        n0 = 0
    else:
        n0 = escape_entry_time(g.to_complex(), complex(b0), epsilon / 2)
    jump = max(n0, 1)
    prefix = _real_forward(g, b0 if is_inf(b0) else float(b0), jump - 1)

    far = max(1 / abs(g.c), 1 + epsilon)
    x, n1 = q, 0
    while is_inf(x) or abs(x - alpha) <= far:
        x = real_apply(g, x)
        n1 += 1
        if n1 > SEARCH_CAP:
            raise NoEscape(f"orbit of q = {q} never gets {far} away from alpha")
    n2 = 0
    while is_inf(x) or not 0 < sigma * (x - alpha) < epsilon / 2:
        x = real_apply(g, x)
        n2 += 1
        if n2 > SEARCH_CAP:
            raise NoEscape("orbit never returns to the eps/2 window")
    block = _real_forward(g, q, n1 + n2)

    pre, period = jump, n1 + n2 + 1
    marked = tuple(range(pre + n1, horizon + 1, period))
    return PseudoOrbit(epsilon, _fill(prefix, block, horizon), pre, period, marked)


def translation_step(g: AnyMap) -> complex:
    """q with g(z) = z + q, for a parabolic map fixing infinity."""
    if g.c != 0:
        raise ValueError("map does not fix infinity")
    return complex(g.b / g.d)


def build_witness(g: AnyMap, b0: SpherePoint, epsilon: float, horizon: int) -> PseudoOrbit:
    """Pick the construction matching the map: complex, real, or translation."""
    if isinstance(g, RealMobiusMap):
        if g.c == 0:
            if not g.parabolic:
                raise NotParabolic(f"not parabolic (trace {g.trace:g})")
            return build_translation_witness(translation_step(g), b0, epsilon, horizon)
        return build_real_witness(g, float(b0.real if isinstance(b0, complex) else b0),
                                  epsilon, horizon)
    require_parabolic(g)
    if g.fixes_infinity:
        return build_translation_witness(translation_step(g), b0, epsilon, horizon)
    return build_complex_witness(g, b0, epsilon, horizon)


def exact_orbit(g: AnyMap, b0: SpherePoint, horizon: int) -> List[SpherePoint]:
    out = [b0]
    b = b0
    for _ in range(horizon):
        b = g(b)
        out.append(b)
    return out


def separation_profile(g: AnyMap, pseudo: PseudoOrbit, b0: SpherePoint) -> List[Tuple[int, float]]:
    exact = exact_orbit(g, b0, pseudo.horizon)
    return [(n, euclid_distance(a, b)) for n, (a, b) in enumerate(zip(pseudo.points, exact))]


def defect(g: AnyMap, pseudo: PseudoOrbit) -> float:
    pts = pseudo.points
    return max((euclid_distance(pts[n + 1], g(pts[n])) for n in range(len(pts) - 1)),
               default=0.0)


def verify(g: AnyMap, pseudo: PseudoOrbit, b0: SpherePoint, min_exceed: int = 1,
           threshold: float = SEPARATION_THRESHOLD) -> StabilityVerdict:
    """Compare ``pseudo`` with the exact orbit from ``b0``.

    Non-stability is witnessed when the defect is within epsilon (up to a
    relative 1e-9) and the separation reaches ``threshold`` at least
    ``min_exceed`` times.  The horizon must contain at least one full period.
    """
    if pseudo.horizon < pseudo.preperiod + pseudo.period:
        raise HorizonTooShort(
            f"horizon {pseudo.horizon} does not cover one period "
            f"(preperiod {pseudo.preperiod}, period {pseudo.period})")
    if isinstance(g, MobiusMap):
        b0 = point(b0)
    worst = defect(g, pseudo)
    exceed = tuple(n for n, sep in separation_profile(g, pseudo, b0) if sep >= threshold)
    ok = worst <= pseudo.epsilon * (1 + DEFECT_SLACK) and len(exceed) >= min_exceed
    return StabilityVerdict(
        epsilon=pseudo.epsilon,
        defect_observed=worst,
        separation_threshold=threshold,
        exceed_count=len(exceed),
        exceed_indices=exceed,
        min_exceed=min_exceed,
        conclusion=Conclusion.NON_STABILITY_WITNESSED if ok else Conclusion.INCONCLUSIVE,
    )

