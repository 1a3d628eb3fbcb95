import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _gen import fixed, mobius, random_parabolic, rng
from parabolic.errors import FixedPointInput
from parabolic.mobius import apply, inverse, normalize
from parabolic.orbit import (
    convergence_profile,
    escape_entry_time,
    forward,
    iterate,
    iterate_normal,
    predicted_distance,
)
from parabolic.sphere import INF, chordal_distance

G = normalize(1, 0, 1, 1)


def test_forward_examples():
    assert forward(G, 1, 3) == pytest.approx([1, 1 / 2, 1 / 3, 1 / 4])
    assert forward(G, 0, 3) == [0, 0, 0, 0]
    pts = forward(G, -1, 3)
    assert pts[0] == -1 and pts[1] is INF and pts[2] == 1 and pts[3] == pytest.approx(0.5)


def test_iterate_indices():
    orb = iterate(G, 1, 3, 2)
    assert list(orb.indices) == [-2, -1, 0, 1, 2, 3]
    assert orb[0] == 1 and orb[3] == pytest.approx(0.25)
    assert orb[-1] == apply(inverse(G), 1 + 0j)
    with pytest.raises(IndexError):
        orb[4]


def test_iterate_normal_examples():
    assert iterate_normal(G, 1, 3) == pytest.approx(0.25)
    assert iterate_normal(G, 2j, 0) == pytest.approx(2j)
    assert iterate_normal(G, 2j, -1) == pytest.approx(apply(inverse(G), 2j))


def test_escape_entry_example():
    assert escape_entry_time(G, 1, 0.05) == 20
    assert escape_entry_time(G, 0.01, 0.5) == 0


def _brute_entry(g, z0, radius, cap=5000):
    alpha = fixed(g)
    dists = []
    z = z0
    for _ in range(cap):
        dists.append(abs(z - alpha))
        z = mobius(g, z)
    last_out = max((n for n, d in enumerate(dists) if d >= radius), default=-1)
    return last_out + 1


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.floats(0.05, 1.0))
def test_escape_entry_matches_brute_force(seed, radius):
    r = rng(seed)
    g = random_parabolic(r)
    z0 = complex(r.uniform(-3, 3), r.uniform(-3, 3))
    n = escape_entry_time(g, z0, radius)
    assert n == _brute_entry(g, z0, radius)


@settings(max_examples=40)
@given(st.integers(0, 10_000), st.integers(-40, 40))
def test_closed_form_matches_iteration(seed, k):
    r = rng(seed)
    g = random_parabolic(r)
    z0 = complex(r.uniform(-3, 3), r.uniform(-3, 3))
    orb = iterate(g, z0, max(k, 0), max(-k, 0))
    assert chordal_distance(iterate_normal(g, z0, k), orb[k]) < 1e-9
    assert predicted_distance(g, z0, k) == pytest.approx(abs(orb[k] - fixed(g)), rel=1e-8)


def test_convergence_profile_rate():
    g = normalize(3, -2, 2, -1)
    prof = dict(convergence_profile(g, 2j, 2000))
    for n in (2000, -2000):
        assert abs(n) * prof[n] == pytest.approx(1 / 2, rel=0.01)


def test_fixed_point_start_rejected():
    with pytest.raises(FixedPointInput):
        convergence_profile(G, 0, 10)
    with pytest.raises(FixedPointInput):
        escape_entry_time(G, 0, 0.1)
