"""Command-line front end.

    parabolic classify --map 1,0,1,1
    parabolic orbit --map 1,0,1,1 --b0 1,1 --horizon 20 --format csv
    parabolic horocycle --map 1,0,1,1 --family 0.5,1,2 --format svg
    parabolic witness --map 1,0,1,1 --b0 1,0 --epsilon 0.1 --horizon 200 --verify --min-exceed 5
    parabolic verify --map 1,0,1,1 --b0 1,0 --pseudo witness.json
    parabolic plot --scene separation --map 1,0,1,1 --b0 1,0 --epsilon 0.1

Exit status: 0 ok, 2 bad input, 3 singular or non-parabolic map, 4 inconclusive verdict.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from . import __version__
from .errors import NotParabolic, ParabolicError, SingularMatrix
from .horocycle import (
    Circle,
    ExtendedLine,
    center_line,
    diametral_point,
    extended_line,
    horocycle_at,
    horocycle_through,
)
from .mobius import Kind, MobiusMap, classify, fixed_point, normalize, require_parabolic
from .orbit import forward, iterate
from .plotting import CobwebScene, HorocycleScene, OrbitScene, SeparationScene, render_svg
from .realline import RealMobiusMap, real_map
from .sphere import INF, SpherePoint, euclid_distance, is_inf, point, to_pair
from .stability import (
    PseudoOrbit,
    build_witness,
    separation_profile,
    verify,
)

MODES = ("classify", "orbit", "horocycle", "witness", "verify", "plot")
SCENES = {"horocycles": "horocycle", "orbit": "orbit", "cobweb": "orbit",
          "separation": "witness"}
DEFAULT_FAMILY = (0.5, 1.0, 2.0)
DEFAULT_ORBIT_STEPS = 20

EXIT_OK, EXIT_INPUT, EXIT_MAP, EXIT_INCONCLUSIVE = 0, 2, 3, 4


class ConfigError(ValueError):
    """Bad command-line or input-file content."""


@dataclass
class JobConfig:
    mode: str
    coefficients: Tuple[complex, ...]
    real: bool = False
    epsilon: Optional[float] = None
    horizon: Optional[int] = None
    b0: Optional[SpherePoint] = None
    fmt: str = "json"
    out: Optional[str] = None
    figure: Optional[str] = None
    backward: int = 0
    family: Tuple[float, ...] = ()
    verify: bool = False
    min_exceed: int = 1
    threshold: float = 1.0
    pseudo: Optional[str] = None
    scene: Optional[str] = None
    sweep: Tuple[float, ...] = ()
    jobs: int = 1
    trace_rtol: float = 1e-9


@dataclass
class Result:
    data: object
    csv: Optional[Tuple[Sequence[str], List[Sequence]]] = None
    scene: object = None
    status: int = EXIT_OK


# ---------------------------------------------------------------- parsing

def _floats(text: str, name: str) -> List[float]:
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError:
        raise ConfigError(f"{name}: expected comma-separated numbers, got {text!r}") from None
    if not all(math.isfinite(v) for v in vals):
        raise ConfigError(f"{name}: values must be finite")
    return vals


def parse_map(text: str, real: bool = False) -> Tuple[complex, ...]:
    vals = _floats(text, "--map")
    if len(vals) == 4:
        return tuple(complex(v) for v in vals)
    if len(vals) == 8 and not real:
        return tuple(complex(vals[k], vals[k + 1]) for k in range(0, 8, 2))
    want = "4 values" if real else "4 (real) or 8 (re,im pairs) values"
    raise ConfigError(f"--map: expected {want}, got {len(vals)}")


def parse_point(text: str, name: str = "--b0") -> SpherePoint:
    if text.strip().lower() in ("inf", "infinity"):
        return INF
    vals = _floats(text, name)
    if len(vals) == 1:
        return complex(vals[0])
    if len(vals) == 2:
        return complex(vals[0], vals[1])
    raise ConfigError(f"{name}: expected re,im or a single real number")


def parse_sweep(text: str) -> Tuple[float, ...]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError("--sweep-epsilon: expected a:b:n")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigError(f"--sweep-epsilon: cannot parse {text!r}") from None
    if n < 1:
        raise ConfigError("--sweep-epsilon: n must be at least 1")
    if n == 1:
        return (lo,)
    # weighted form keeps both endpoints exact
    return tuple((lo * (n - 1 - k) + hi * k) / (n - 1) for k in range(n))


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="parabolic", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("mode", choices=MODES)
    p.add_argument("--map", required=True, help="a,b,c,d real or 8 values for complex re,im pairs")
    p.add_argument("--real", action="store_true", help="treat the map as acting on the real line")
    p.add_argument("--b0", help="start point re,im (or 'inf')")
    p.add_argument("--epsilon", type=float)
    p.add_argument("--horizon", type=int, help="number of steps (default: automatic)")
    p.add_argument("--backward", type=int, default=0, help="orbit: backward steps")
    p.add_argument("--family", help="horocycle: comma-separated offsets along the centre line")
    p.add_argument("--verify", action="store_true", help="witness: also run the verifier")
    p.add_argument("--min-exceed", type=int, default=1)
    p.add_argument("--threshold", type=float, default=1.0)
    p.add_argument("--pseudo", help="verify: pseudo-orbit JSON file ('-' for stdin)")
    p.add_argument("--scene", choices=sorted(SCENES), help="plot: which figure")
    p.add_argument("--sweep-epsilon", help="witness: a:b:n evenly spaced epsilons")
    p.add_argument("--jobs", type=int, default=1, help="sweep worker threads")
    p.add_argument("--trace-rtol", type=float, default=1e-9)
    p.add_argument("--format", dest="fmt", choices=("json", "csv", "svg"), default="json")
    p.add_argument("--out", help="write the main output here instead of stdout")
    p.add_argument("--figure", help="also write an SVG figure to this path")
    return p


def config_from_args(ns: argparse.Namespace) -> JobConfig:
    cfg = JobConfig(mode=ns.mode, coefficients=parse_map(ns.map, ns.real), real=ns.real,
                    epsilon=ns.epsilon, horizon=ns.horizon, fmt=ns.fmt, out=ns.out,
                    figure=ns.figure, backward=ns.backward, verify=ns.verify,
                    min_exceed=ns.min_exceed, threshold=ns.threshold, pseudo=ns.pseudo,
                    scene=ns.scene, jobs=ns.jobs, trace_rtol=ns.trace_rtol)
    if ns.b0 is not None:
        cfg.b0 = parse_point(ns.b0)
    if ns.family:
        cfg.family = tuple(_floats(ns.family, "--family"))
    if ns.sweep_epsilon:
        cfg.sweep = parse_sweep(ns.sweep_epsilon)
    _validate(cfg)
    return cfg


def _validate(cfg: JobConfig) -> None:
    if cfg.horizon is not None and cfg.horizon < 1:
        raise ConfigError("--horizon must be at least 1")
    if cfg.backward < 0:
        raise ConfigError("--backward must be nonnegative")
    if cfg.min_exceed < 1:
        raise ConfigError("--min-exceed must be at least 1")
    if cfg.jobs < 1:
        raise ConfigError("--jobs must be at least 1")
    if cfg.epsilon is not None and not (math.isfinite(cfg.epsilon) and cfg.epsilon > 0):
        raise ConfigError("--epsilon must be positive")
    if any(not e > 0 for e in cfg.sweep):
        raise ConfigError("--sweep-epsilon: every epsilon must be positive")
    if cfg.mode == "plot" and cfg.scene is None:
        raise ConfigError("plot needs --scene")
    if cfg.real and cfg.b0 is not None and not is_inf(cfg.b0) and cfg.b0.imag != 0:
        raise ConfigError("--b0 must be real with --real")


# ---------------------------------------------------------------- helpers

def _num(x: float):
    return x if math.isfinite(x) else ("inf" if x > 0 else "-inf")


def _complex_map(cfg: JobConfig) -> MobiusMap:
    if cfg.real:
        return real_map(*(z.real for z in cfg.coefficients)).to_complex()
    return normalize(*cfg.coefficients)


def _parabolic(cfg: JobConfig) -> MobiusMap:
    g = _complex_map(cfg)
    require_parabolic(g)
    return g


def _real(cfg: JobConfig) -> RealMobiusMap:
    g = real_map(*(z.real for z in cfg.coefficients))
    if not g.parabolic:
        raise NotParabolic(f"not parabolic (trace {g.trace:g})")
    return g


def _need_b0(cfg: JobConfig) -> SpherePoint:
    if cfg.b0 is None:
        raise ConfigError(f"{cfg.mode} needs --b0")
    return cfg.b0


def _line_json(line) -> dict:
    return {"anchor": to_pair(line.anchor), "direction": to_pair(line.direction)}


def _horocycle_json(g: MobiusMap, hc) -> dict:
    if isinstance(hc, ExtendedLine):
        return {"kind": "line", **_line_json(hc)}
    return {"kind": "circle", "center": to_pair(hc.center), "radius": hc.radius,
            "diametral": to_pair(diametral_point(g, hc))}


def _separation_rows(profile) -> List[Tuple]:
    return [(n, _num(s)) for n, s in profile]


# ---------------------------------------------------------------- modes

def _classify(cfg: JobConfig) -> Result:
    g = _complex_map(cfg)
    cls = classify(g, cfg.trace_rtol)
    if cls.kind is Kind.IDENTITY:
        raise NotParabolic("not parabolic (identity)")
    if not cls.parabolic:
        require_parabolic(g)
    alpha = fixed_point(g)
    data = {"class": cls.kind.value, "sign": cls.sign, "alpha": to_pair(alpha)}
    a = ("inf", "") if is_inf(alpha) else (alpha.real, alpha.imag)
    return Result(data, (("class", "sign", "alpha_re", "alpha_im"),
                         [(cls.kind.value, cls.sign, *a)]))


def _orbit(cfg: JobConfig) -> Result:
    g = _parabolic(cfg)
    z0 = point(_need_b0(cfg))
    steps = DEFAULT_ORBIT_STEPS if cfg.horizon is None else cfg.horizon
    orb = iterate(g, z0, steps, cfg.backward)
    alpha = fixed_point(g)
    rows, pts = [], []
    for n in orb.indices:
        z = orb[n]
        dist = euclid_distance(z, alpha) if not (is_inf(z) and is_inf(alpha)) else 0.0
        rows.append((n, "inf", "", _num(dist)) if is_inf(z)
                    else (n, z.real, z.imag, _num(dist)))
        pts.append({"n": n, "z": to_pair(z), "dist_to_alpha": _num(dist)})
    data = {"alpha": to_pair(alpha), "sign": require_parabolic(g).sign, "points": pts}

    if cfg.real and not g.fixes_infinity:
        rg = _real(cfg)
        xs = [z if is_inf(z) else z.real for z in forward(g, z0, steps)]
        scene = CobwebScene((rg.a, rg.b, rg.c, rg.d), xs, rg.alpha, rg.pole)
    else:
        hc = None
        if not g.fixes_infinity and not is_inf(z0) and z0 != alpha:
            hc = horocycle_through(g, z0)
        scene = OrbitScene([(n, orb[n]) for n in orb.indices],
                           None if is_inf(alpha) else alpha, hc)
    return Result(data, (("n", "re", "im", "dist_to_alpha"), rows), scene)


def _horocycle(cfg: JobConfig) -> Result:
    g = _parabolic(cfg)
    alpha = fixed_point(g)
    hcs, pts = [], []
    if cfg.b0 is not None:
        hcs.append(horocycle_through(g, cfg.b0))
        pts = [z for z in forward(g, cfg.b0, 12) if not is_inf(z)]
    family = cfg.family or (DEFAULT_FAMILY if cfg.b0 is None else ())
    hcs += [horocycle_at(g, t) for t in family]
    line, ell = extended_line(g), center_line(g)
    data = {"alpha": to_pair(alpha), "extended_line": _line_json(line),
            "center_line": _line_json(ell),
            "horocycles": [_horocycle_json(g, hc) for hc in hcs]}
    rows = []
    for hc in hcs:
        if isinstance(hc, Circle):
            rows.append(("circle", hc.center.real, hc.center.imag, hc.radius))
        else:
            rows.append(("line", hc.anchor.real, hc.anchor.imag, "inf"))
    scene = HorocycleScene(alpha, hcs, line, ell.direction, pts)
    return Result(data, (("kind", "center_re", "center_im", "radius"), rows), scene)


def _witness_map(cfg: JobConfig):
    return _real(cfg) if cfg.real else _parabolic(cfg)


def _start(cfg: JobConfig, g) -> SpherePoint:
    b0 = _need_b0(cfg)
    if isinstance(g, RealMobiusMap):
        return b0 if is_inf(b0) else b0.real
    return b0


def auto_horizon(g, b0, epsilon: float, min_exceed: int) -> int:
    """Long enough for ``min_exceed`` periodic returns, or the linear ramp to pass 1."""
    probe = build_witness(g, b0, epsilon, 0)
    if probe.period == 0:
        return math.ceil(1 / epsilon) + min_exceed
    return probe.preperiod + (min_exceed + 1) * probe.period


def _one_witness(cfg: JobConfig, g, b0, epsilon: float):
    horizon = cfg.horizon or auto_horizon(g, b0, epsilon, cfg.min_exceed)
    pseudo = build_witness(g, b0, epsilon, horizon)
    verdict = verify(g, pseudo, b0, cfg.min_exceed, cfg.threshold) if cfg.verify else None
    return pseudo, verdict


def _witness(cfg: JobConfig) -> Result:
    if cfg.sweep:
        return _sweep(cfg)
    if cfg.epsilon is None:
        raise ConfigError("witness needs --epsilon (or --sweep-epsilon)")
    g = _witness_map(cfg)
    b0 = _start(cfg, g)
    pseudo, verdict = _one_witness(cfg, g, b0, cfg.epsilon)
    profile = separation_profile(g, pseudo, b0)
    status = EXIT_OK
    if verdict is None:
        data = pseudo.to_json()
    else:
        data = {"pseudo_orbit": pseudo.to_json(), "verdict": verdict.to_json()}
        if not verdict.witnessed:
            status = EXIT_INCONCLUSIVE
    scene = SeparationScene(profile, cfg.threshold, pseudo.marked)
    return Result(data, (("n", "separation"), _separation_rows(profile)), scene, status)


def _sweep(cfg: JobConfig) -> Result:
    g = _witness_map(cfg)
    b0 = _start(cfg, g)
    cfg.verify = True

    def job(eps):
        return _one_witness(cfg, g, b0, eps)

    # threads only fan out the work; map() returns results in input order
    with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
        results = list(pool.map(job, cfg.sweep))
    entries, rows, status = [], [], EXIT_OK
    for eps, (pseudo, verdict) in zip(cfg.sweep, results):
        entries.append({"epsilon": eps, "preperiod": pseudo.preperiod,
                        "period": pseudo.period, "horizon": pseudo.horizon,
                        "verdict": verdict.to_json()})
        rows.append((eps, pseudo.horizon, _num(verdict.defect_observed),
                     verdict.exceed_count, verdict.conclusion.value))
        if not verdict.witnessed:
            status = EXIT_INCONCLUSIVE
    head = ("epsilon", "horizon", "defect_observed", "exceed_count", "conclusion")
    return Result({"sweep": entries}, (head, rows), None, status)


def load_pseudo(path: str) -> PseudoOrbit:
    """Read a pseudo-orbit JSON file; errors name the line or field at fault."""
    label = "<stdin>" if path == "-" else path
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise ConfigError(f"{label}: {exc.strerror}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{label}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if isinstance(obj, dict) and "pseudo_orbit" in obj:
        obj = obj["pseudo_orbit"]
    if not isinstance(obj, dict):
        raise ConfigError(f"{label}: expected a JSON object")
    for key in ("epsilon", "preperiod", "period", "points"):
        if key not in obj:
            raise ConfigError(f"{label}: missing field '{key}'")
    if not isinstance(obj["points"], list):
        raise ConfigError(f"{label}: field 'points' must be a list")
    for k, p in enumerate(obj["points"]):
        ok = p == "inf" or (isinstance(p, list) and len(p) == 2
                            and all(isinstance(v, (int, float)) for v in p))
        if not ok:
            raise ConfigError(f"{label}: field 'points[{k}]' must be [re, im] or \"inf\"")
    try:
        pseudo = PseudoOrbit.from_json(obj)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{label}: {exc}") from None
    if not pseudo.epsilon >= 0 or pseudo.preperiod < 0 or pseudo.period < 0:
        raise ConfigError(f"{label}: epsilon, preperiod and period must be nonnegative")
    return pseudo


def _verify(cfg: JobConfig) -> Result:
    if cfg.pseudo is None:
        raise ConfigError("verify needs --pseudo")
    pseudo = load_pseudo(cfg.pseudo)
    g = _witness_map(cfg)
    b0 = _start(cfg, g)
    if isinstance(g, RealMobiusMap):
        pseudo = PseudoOrbit(pseudo.epsilon,
                             tuple(p if is_inf(p) else p.real for p in pseudo.points),
                             pseudo.preperiod, pseudo.period)
    verdict = verify(g, pseudo, b0, cfg.min_exceed, cfg.threshold)
    profile = separation_profile(g, pseudo, b0)
    status = EXIT_OK if verdict.witnessed else EXIT_INCONCLUSIVE
    scene = SeparationScene(profile, cfg.threshold)
    return Result(verdict.to_json(), (("n", "separation"), _separation_rows(profile)),
                  scene, status)


_HANDLERS = {"classify": _classify, "orbit": _orbit, "horocycle": _horocycle,
             "witness": _witness, "verify": _verify}


# ---------------------------------------------------------------- output

def _csv_text(head, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(head) + "\n")
    for row in rows:
        buf.write(",".join(repr(v) if isinstance(v, float) else str(v) for v in row) + "\n")
    return buf.getvalue()


def render(result: Result, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(result.data, indent=2) + "\n"
    if fmt == "csv":
        if result.csv is None:
            raise ConfigError("no CSV form for this output")
        return _csv_text(*result.csv)
    if result.scene is None:
        raise ConfigError("no SVG figure for this output")
    return render_svg(result.scene)


def _write(path: Optional[str], text: str, stdout) -> None:
    if path is None:
        stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def run(config: JobConfig, stdout=None, stderr=None) -> int:
    """Execute one job; returns the exit status."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    mode, fmt = config.mode, config.fmt
    if mode == "plot":
        mode, fmt = SCENES[config.scene], "svg"
        if config.scene == "cobweb":
            config.real = True
    try:
        result = _HANDLERS[mode](config)
        text = render(result, fmt)
        _write(config.out, text, stdout)
        if config.figure:
            if result.scene is None:
                raise ConfigError("--figure: no figure for this output")
            _write(config.figure, render_svg(result.scene), stdout)
    except (NotParabolic, SingularMatrix) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_MAP
    except (ConfigError, ParabolicError, ValueError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    if result.status == EXIT_INCONCLUSIVE:
        stderr.write("verdict: Inconclusive\n")
    return result.status


def _attach_negative_values(argv: Sequence[str]) -> List[str]:
    """``--b0 -1,0`` -> ``--b0=-1,0`` so argparse does not take the value for a flag."""
    out = []
    for tok in argv:
        if (out and out[-1].startswith("--") and "=" not in out[-1]
                and len(tok) > 1 and tok[0] == "-" and (tok[1].isdigit() or tok[1] == ".")):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    ns = parser.parse_args(_attach_negative_values(sys.argv[1:] if argv is None else argv))
    try:
        config = config_from_args(ns)
    except ConfigError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
