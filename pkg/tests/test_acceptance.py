"""Acceptance criteria 1-9.  Each ``test_criterion_<k>`` feeds the PASS/FAIL
summary printed at the end of the pytest run (see conftest.py)."""

import cmath
import io
import json
import math
import time
import xml.etree.ElementTree as ET
from pathlib import Path

from _gen import center_dir, chordal, circle_points, fixed, mobius, random_parabolic
from _gen import random_real_parabolic, rng
from parabolic import cli
from parabolic.horocycle import Circle, center_line, check_invariance, horocycle_through
from parabolic.mobius import normal_form, translation
from parabolic.orbit import escape_entry_time, iterate, iterate_normal
from parabolic.realline import backward_dynamics, real_apply, real_inverse, step_image_lemma
from parabolic.sphere import is_inf
from parabolic.stability import (
    build_complex_witness,
    build_real_witness,
    build_translation_witness,
    separation_profile,
    verify,
)

GOLDEN = Path(__file__).parent / "golden"


def _horocycle_samples(seed, maps=200, per=50):
    """(g, p, r, points) with p on the centre line, r = |p - alpha|."""
    r = rng(seed)
    out = []
    for _ in range(maps):
        g = random_parabolic(r)
        t = r.choice((1, -1)) * r.uniform(0.2, 3.0)
        alpha = fixed(g)
        p = alpha + t * center_dir(g)
        out.append((g, p, abs(t), circle_points(p, abs(t), alpha, per)))
    return out


# 1 ---------------------------------------------------------------------------

def test_criterion_1_horocycle_invariance():
    start = time.perf_counter()
    worst = 0.0
    for g, p, rad, pts in _horocycle_samples(1):
        alpha = fixed(g)
        for z in pts:
            worst = max(worst, abs(abs(mobius(g, z) - p) - abs(alpha - p)))
        assert check_invariance(g, Circle(p, rad), samples=50, tol=1e-8).invariant
    elapsed = time.perf_counter() - start
    assert worst < 1e-8, worst
    assert elapsed < 5.0, elapsed


# 2 ---------------------------------------------------------------------------

def test_criterion_2_conjugation_and_closed_form():
    worst_conj = worst_iter = 0.0
    for g, _, _, pts in _horocycle_samples(1):
        alpha, s = fixed(g), (1 if (g.a + g.d).real > 0 else -1)

        def h(z):
            return 1 / (g.c * (z - alpha))

        nf = normal_form(g)
        for z in pts:
            worst_conj = max(worst_conj, abs(h(mobius(g, z)) - (h(z) + s)))
            worst_conj = max(worst_conj, abs(nf.to_normal(z) - h(z)))
        for z in pts[::10]:
            w = z
            for _ in range(50):
                w = mobius(g, w)
            worst_iter = max(worst_iter, chordal(iterate_normal(g, z, 50), w))
    assert worst_conj < 1e-8, worst_conj
    assert worst_iter < 1e-7, worst_iter


# 3 ---------------------------------------------------------------------------

def test_criterion_3_convergence_rate():
    r = rng(3)
    n = 10_000
    for _ in range(20):
        g = random_parabolic(r)
        alpha = fixed(g)
        z0 = alpha + r.uniform(0.5, 2.0) * cmath.exp(1j * r.uniform(0, 2 * math.pi))
        orb = iterate(g, z0, n, n)
        target = 1 / abs(g.c)
        for m in (n, -n):
            ratio = abs(m) * abs(orb[m] - alpha) / target
            assert abs(ratio - 1) < 0.01, (g, z0, m, ratio)
        # independent forward loop agrees with the library orbit
        z = z0
        for _ in range(n):
            z = mobius(g, z)
        assert abs(z - orb[n]) < 1e-9


# 4 ---------------------------------------------------------------------------

def test_criterion_4_algebraic_lemmas():
    r = rng(4)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(1000):
        g = random_parabolic(r)
        a, c, d = g.a, g.c, g.d
        alpha = fixed(g)
        t = r.choice((1, -1)) * r.uniform(0.2, 3.0)
        p = center_line(g).at(t)
        # the library's centre line is the perpendicular to alpha -> a/c
        worst = max(worst, abs(((p - alpha) * center_dir(g).conjugate()).imag))
        worst = max(worst, abs((c * p - a).conjugate() + (c * p + d)))
        worst = max(worst, abs(abs(c * p - a) ** 2 - (abs(c * (p - alpha)) ** 2 + 1)))
        z = circle_points(p, abs(t), alpha, 1, gap=r.uniform(0.1, 3.0))[0]
        expected_im = 1 / (2j * c * (p - alpha))
        w = normal_form(g).to_normal(z)
        worst = max(worst, abs(w.imag - expected_im.real), abs(expected_im.imag))
        hc = horocycle_through(g, z)
        worst = max(worst, abs(hc.center - p), abs(hc.radius - abs(t)))
    elapsed = time.perf_counter() - start
    assert worst < 1e-9, worst
    assert elapsed < 2.0, elapsed


# 5 ---------------------------------------------------------------------------

def _raw_defect(g, pts, apply_raw):
    worst = 0.0
    for x, y in zip(pts, pts[1:]):
        gx = apply_raw(g, x)
        if is_inf(gx) or is_inf(y):
            worst = max(worst, 0.0 if is_inf(gx) and is_inf(y) else math.inf)
        else:
            worst = max(worst, abs(y - gx))
    return worst


def _raw_separations(g, pts, b0, apply_raw):
    out, b = [], b0
    for a in pts:
        out.append(abs(a - b) if not (is_inf(a) or is_inf(b)) else math.inf)
        b = apply_raw(g, b)
    return out


def test_criterion_5_complex_witness():
    r = rng(5)
    maps = [random_parabolic(r) for _ in range(50)]
    starts = [complex(r.uniform(-3, 3), r.uniform(-3, 3)) for _ in range(50)]
    start = time.perf_counter()
    for eps in (0.5, 0.1, 0.02):
        for g, b0 in zip(maps, starts):
            n1 = escape_entry_time(g, b0, eps / 2)
            n2 = math.ceil(2 / (abs(g.c) * eps))
            pseudo = build_complex_witness(g, b0, eps, n1 + 11 * n2)
            verdict = verify(g, pseudo, b0, min_exceed=5)
            assert verdict.witnessed, (g, b0, eps, verdict)
            assert _raw_defect(g, pseudo.points, mobius) <= eps
            seps = _raw_separations(g, pseudo.points, b0, mobius)
            assert sum(s >= 1 for s in seps) >= 5
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0, elapsed


# 6 ---------------------------------------------------------------------------

def test_criterion_6_translation_witness():
    r = rng(6)
    for eps in (0.5, 0.1, 0.02):
        for k in range(40):
            q = complex(r.uniform(-1, 1), r.uniform(-1, 1))
            b0 = complex(r.uniform(-1, 1), r.uniform(-1, 1))
            if k % 2:
                D = r.uniform(0, 1)                  # real D in [0, 1)
            else:
                D = complex(r.uniform(-1, 1), r.uniform(-1, 1))
            a0 = b0 - D
            first = math.ceil((1 + abs(D)) / eps)
            pseudo = build_translation_witness(q, a0, eps, first + 5)
            profile = separation_profile(translation(q), pseudo, b0)
            for n, sep in profile:
                oracle = abs(b0 - a0 - n * eps)
                assert abs(sep - oracle) <= 1e-12, (n, sep, oracle)
            hits = [n for n, sep in profile if sep >= 1]
            assert all(n in hits for n in range(first, first + 6))
            if k % 2:
                assert hits[0] == first


# 7 ---------------------------------------------------------------------------

def _rules_hold(g, x, gx):
    alpha, pole, ac = g.alpha, g.pole, g.a_over_c
    if g.sigma == 1:
        return ((x > alpha) == (alpha < gx < ac)
                and (x < pole) == (gx > ac)
                and (pole < x < alpha) == (gx < alpha))
    return ((x < alpha) == (ac < gx < alpha)
            and (x > pole) == (gx < ac)
            and (alpha < x < pole) == (gx > alpha))


def test_criterion_7_real_lemmas():
    r = rng(7)
    violations = 0
    for sigma in (1, -1):
        for _ in range(100):
            g = random_real_parabolic(r, sigma)
            assert g.sigma == sigma
            for _ in range(100):
                x = g.alpha + math.tan(r.uniform(-1.55, 1.55)) / abs(g.c)
                step_image_lemma(g, x)
                gx = (g.a * x + g.b) / (g.c * x + g.d)
                violations += not _rules_hold(g, x, gx)
            # backward dynamics of g against forward dynamics of g^-1
            if sigma == 1:
                x0 = g.pole + (g.alpha - g.pole) * r.uniform(0.01, 0.99)
            else:
                x0 = g.alpha + math.tan(r.uniform(0.01, 1.5)) / abs(g.c)
            back = backward_dynamics(g, x0, 50)
            ginv, y = real_inverse(g), x0
            for k in range(51):
                assert abs(back[k] - y) <= 1e-10 * max(1.0, abs(y))
                if k:
                    assert abs(real_apply(g, back[k]) - back[k - 1]) <= 1e-10 * max(1, abs(y))
                y = real_apply(ginv, y)
    assert violations == 0


# 8 ---------------------------------------------------------------------------

def _real_raw(g, x):
    if is_inf(x):
        return g.a / g.c
    den = g.c * x + g.d
    return math.inf if den == 0 else (g.a * x + g.b) / den


def test_criterion_8_real_witness():
    r = rng(8)
    start = time.perf_counter()
    for sigma in (1, -1):
        maps = [random_real_parabolic(r, sigma) for _ in range(20)]
        for eps in (0.5, 0.1):
            for g in maps:
                b0 = r.uniform(-3, 3)
                probe = build_real_witness(g, b0, eps, 0)
                pseudo = build_real_witness(g, b0, eps, probe.preperiod + 4 * probe.period)
                verdict = verify(g, pseudo, b0)
                assert verdict.witnessed and verdict.exceed_count >= 3, (g, b0, eps, verdict)
                assert _raw_defect(g, pseudo.points, _real_raw) <= eps
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0, elapsed


# 9 ---------------------------------------------------------------------------

def _run(argv):
    out, err = io.StringIO(), io.StringIO()
    cfg = cli.config_from_args(cli._build_parser().parse_args(argv))
    code = cli.run(cfg, out, err)
    return code, out.getvalue(), err.getvalue()


WITNESS_ARGS = ["witness", "--map", "1,0,1,1", "--b0", "1,0", "--epsilon", "0.1",
                "--horizon", "200", "--verify", "--min-exceed", "5"]


def _check_svg(text):
    assert '"-//W3C//DTD SVG 1.1//EN"' in text
    root = ET.fromstring(text.encode())
    assert root.tag == "{http://www.w3.org/2000/svg}svg"
    assert root.get("version") == "1.1"
    return root


def test_criterion_9_cli_golden(tmp_path):
    code, out, err = _run(["classify", "--map", "1,0,1,1"])
    assert code == 0
    assert out == (GOLDEN / "classify.json").read_text()
    assert json.loads(out) == {"class": "parabolic", "sign": 1, "alpha": [0.0, 0.0]}

    code, out, err = _run(["classify", "--map", "2,0,0,0.5"])
    assert code == 3 and out == ""
    assert "not parabolic (trace 2.5)" in err

    runs = [_run(WITNESS_ARGS) for _ in range(2)]
    code, out, err = runs[0]
    assert code == 0 and runs[1] == runs[0]
    assert out == (GOLDEN / "witness.json").read_text()
    verdict = json.loads(out)["verdict"]
    assert verdict["conclusion"] == "NonStabilityWitnessed"
    # b_n = 1/(n+1) is inside B(0, 0.05) from n = 20 on; N2 = ceil(2/0.1) = 20;
    # diametral returns at 20 + 20 + 40k
    assert verdict["exceed_indices"] == [40, 80, 120, 160, 200]

    svgs = [
        ["horocycle", "--map", "1,0,1,1", "--family", "0.5,1,2", "--format", "svg"],
        ["orbit", "--map", "1,0,1,1", "--b0", "1,1", "--format", "svg"],
        ["witness", "--map", "1,0.3,0,1", "--b0", "0,0", "--epsilon", "0.1", "--format", "svg"],
        ["plot", "--scene", "cobweb", "--map", "1,0,1,1", "--b0", "0.5"],
    ]
    for argv in svgs:
        code, out, _ = _run(argv)
        assert code == 0, argv
        _check_svg(out)
        assert _run(argv)[1] == out
