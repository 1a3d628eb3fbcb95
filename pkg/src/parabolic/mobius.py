"""Moebius maps z -> (az+b)/(cz+d) normalized to determinant one."""

from __future__ import annotations

import cmath
import enum
from dataclasses import dataclass

from .errors import FixedPointInput, FixesInfinity, NotParabolic, SingularMatrix
from .sphere import INF, SpherePoint, is_inf

SINGULAR_TOL = 1e-14
POLE_TOL = 1e-14
TRACE_RTOL = 1e-9


class Kind(enum.Enum):
    IDENTITY = "identity"
    PARABOLIC = "parabolic"
    ELLIPTIC = "elliptic"
    HYPERBOLIC = "hyperbolic"
    LOXODROMIC = "loxodromic"


@dataclass(frozen=True)
class MapClass:
    kind: Kind
    sign: int = 0  # +1 / -1 for parabolic maps, 0 otherwise

    @property
    def parabolic(self) -> bool:
        return self.kind is Kind.PARABOLIC


@dataclass(frozen=True)
class MobiusMap:
    a: complex
    b: complex
    c: complex
    d: complex

    def __call__(self, z: SpherePoint) -> SpherePoint:
        return apply(self, z)

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> complex:
        return self.a + self.d

    @property
    def coefficients(self):
        return (self.a, self.b, self.c, self.d)

    @property
    def fixes_infinity(self) -> bool:
        return abs(self.c) < SINGULAR_TOL

    def __matmul__(self, other: "MobiusMap") -> "MobiusMap":
        return compose(self, other)


def _root(x: complex) -> complex:
    r = cmath.sqrt(x)
    if r.real < 0 or (r.real == 0 and r.imag < 0):
        r = -r
    return r


def normalize(a, b, c, d) -> MobiusMap:
    """Scale (a, b, c, d) so that ad - bc = 1.

    Of the two admissible scalings the one with nonnegative real part (ties
    broken toward nonnegative imaginary part) is used, so a given map always
    gets the same representative.
    """
    a, b, c, d = (complex(x) for x in (a, b, c, d))
    det = a * d - b * c
    if abs(det) < SINGULAR_TOL:
        raise SingularMatrix(f"ad - bc = {det} is (numerically) zero")
    k = _root(1 / det)
    return MobiusMap(k * a, k * b, k * c, k * d)


def parabolic_from(alpha: complex, c: complex, sign: int = 1) -> MobiusMap:
    """The parabolic map with fixed point ``alpha``, lower-left entry ``c`` and trace 2*sign."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    alpha, c = complex(alpha), complex(c)
    if c == 0:
        raise FixesInfinity("c = 0 gives a translation; there is no finite fixed point")
    a = sign + c * alpha
    d = sign - c * alpha
    b = -c * alpha * alpha
    return normalize(a, b, c, d)


def translation(q: complex) -> MobiusMap:
    return MobiusMap(1 + 0j, complex(q), 0j, 1 + 0j)


def apply(g: MobiusMap, z: SpherePoint, pole_tol: float = POLE_TOL) -> SpherePoint:
    if is_inf(z):
        return INF if g.fixes_infinity else g.a / g.c
    den = g.c * z + g.d
    if abs(den) < pole_tol:
        return INF
    return (g.a * z + g.b) / den


def compose(g1: MobiusMap, g2: MobiusMap) -> MobiusMap:
    """g1 after g2."""
    return MobiusMap(
        g1.a * g2.a + g1.b * g2.c,
        g1.a * g2.b + g1.b * g2.d,
        g1.c * g2.a + g1.d * g2.c,
        g1.c * g2.b + g1.d * g2.d,
    )


def inverse(g: MobiusMap) -> MobiusMap:
    return MobiusMap(g.d, -g.b, -g.c, g.a)


def power(g: MobiusMap, n: int) -> MobiusMap:
    if n < 0:
        return power(inverse(g), -n)
    out = MobiusMap(1 + 0j, 0j, 0j, 1 + 0j)
    base = g
    while n:
        if n & 1:
            out = compose(out, base)
        base = compose(base, base)
        n >>= 1
    return out


def _near(x: complex, y: complex, tol: float) -> bool:
    return abs(x - y) <= tol


def classify(g: MobiusMap, rtol: float = TRACE_RTOL) -> MapClass:
    tr = g.trace
    tol = rtol * 2
    if abs(g.b) <= tol and abs(g.c) <= tol and _near(g.a, g.d, tol) and _near(g.a * g.a, 1, tol):
        return MapClass(Kind.IDENTITY)
    if _near(tr, 2, tol):
        return MapClass(Kind.PARABOLIC, 1)
    if _near(tr, -2, tol):
        return MapClass(Kind.PARABOLIC, -1)
    if abs(tr.imag) <= tol:
        return MapClass(Kind.ELLIPTIC if abs(tr.real) < 2 else Kind.HYPERBOLIC)
    return MapClass(Kind.LOXODROMIC)


def require_parabolic(g: MobiusMap) -> MapClass:
    cls = classify(g)
    if not cls.parabolic:
        raise NotParabolic(f"not parabolic (trace {_fmt(g.trace)})")
    return cls


def _fmt(z: complex) -> str:
    if abs(z.imag) < 1e-12:
        return f"{z.real:g}"
    return f"{z.real:g}{z.imag:+g}i"


def trace_direction(g: MobiusMap) -> int:
    return require_parabolic(g).sign


def fixed_point(g: MobiusMap) -> SpherePoint:
    require_parabolic(g)
    if g.fixes_infinity:
        return INF
    return (g.a - g.d) / (2 * g.c)


@dataclass(frozen=True)
class NormalForm:
    """Conjugation of a parabolic map to the unit translation w -> w + s.

    ``h(z) = 1/(c(z - alpha))`` sends alpha to infinity; ``conjugator`` and
    ``inverse_conjugator`` hold h and h^-1 as normalized Moebius maps, while
    :meth:`to_normal` / :meth:`from_normal` evaluate the closed forms directly.
    """

    conjugator: MobiusMap
    inverse_conjugator: MobiusMap
    direction: int
    alpha: complex
    c: complex

    def to_normal(self, z: SpherePoint) -> SpherePoint:
        if is_inf(z):
            return 0j
        dz = z - self.alpha
        if dz == 0:
            return INF
        return 1 / (self.c * dz)

    def from_normal(self, w: SpherePoint) -> SpherePoint:
        if is_inf(w):
            return self.alpha
        if w == 0:
            return INF
        return self.alpha + 1 / (self.c * w)


def normal_form(g: MobiusMap) -> NormalForm:
    s = trace_direction(g)
    if g.fixes_infinity:
        raise FixesInfinity("map fixes infinity; it is already a translation")
    alpha = (g.a - g.d) / (2 * g.c)
    c = g.c
    h = normalize(0, 1, c, -c * alpha)
    h_inv = normalize(c * alpha, 1, c, 0)
    return NormalForm(h, h_inv, s, alpha, c)


def require_off_fixed_point(nf: NormalForm, z: SpherePoint, tol: float = 1e-12) -> None:
    if not is_inf(z) and abs(z - nf.alpha) <= tol * max(1.0, abs(nf.alpha)):
        raise FixedPointInput(f"{z} is the fixed point")

