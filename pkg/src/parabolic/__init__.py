"""Parabolic Moebius maps: normal forms, horocycles, orbits, and pseudo-orbits
showing that b_{n+1} = g(b_n) has no Hyers-Ulam stability."""

__version__ = "0.1.0"

from .errors import (
    FixedPointInput,
    FixesInfinity,
    HorizonTooShort,
    InvalidEpsilon,
    LemmaViolation,
    NoEscape,
    NotParabolic,
    OutOfBasin,
    ParabolicError,
    SingularMatrix,
)
from .horocycle import (
    Circle,
    ExtendedLine,
    center_line,
    check_invariance,
    diametral_point,
    extended_line,
    horocycle_at,
    horocycle_through,
)
from .mobius import (
    Kind,
    MobiusMap,
    apply,
    classify,
    compose,
    fixed_point,
    inverse,
    normal_form,
    normalize,
    parabolic_from,
    power,
)
from .orbit import convergence_profile, escape_entry_time, iterate, iterate_normal
from .realline import RealMobiusMap, real_map, real_parabolic_from
from .sphere import INF, chordal_distance, euclid_distance, is_inf
from .stability import (
    Conclusion,
    PseudoOrbit,
    StabilityVerdict,
    build_complex_witness,
    build_real_witness,
    build_translation_witness,
    build_witness,
    verify,
)
