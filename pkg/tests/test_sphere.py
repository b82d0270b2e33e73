import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kanforge.sphere import (
    SphereError,
    angle_axiom_residuals,
    angle_between_paths,
    constant,
    enclosed_area,
    geodesic,
    latitude_loop,
    loop_with_area,
    meridian,
    parallel_transport,
    random_arrow_config,
    random_path,
    rotation_loop,
    some_tangent,
    sweep_family,
    sweep_winding,
    tangent_angle,
    unit,
    verify_arrow_identity,
    wrap,
)

seeds = st.integers(0, 2**31 - 1)
X, Y, Z = np.eye(3)


def test_wrap_range():
    assert wrap(np.pi) == np.pi
    assert wrap(-np.pi) == np.pi
    assert abs(wrap(3 * np.pi / 2) + np.pi / 2) < 1e-15


def test_octant():
    g1 = geodesic(X, Z).then(geodesic(Z, Y))
    g2 = geodesic(X, Y)
    assert abs(angle_between_paths(g1, g2) - np.pi / 2) < 1e-6
    assert abs(enclosed_area(g1, g2) - np.pi / 2) < 1e-6


@pytest.mark.parametrize("theta", [0.3, np.pi / 3, 1.2, 2.0])
def test_latitude_holonomy_is_cap_area(theta):
    loop = latitude_loop(theta)
    cap = 2 * np.pi * (1 - np.cos(theta))
    p = loop.start
    assert abs(wrap(angle_between_paths(constant(p), loop) - cap)) < 1e-6


def test_lune():
    assert abs(angle_between_paths(meridian(np.pi / 4), meridian(0.0)) - np.pi / 2) < 1e-6


def test_geodesic_transports_its_velocity():
    u, v = unit([1, 2, 0.5]), unit([-0.3, 1, 2])
    g = geodesic(u, v)
    t0 = g.segments[0].dfn(np.array([0.0]))[0]
    t1 = g.segments[0].dfn(np.array([1.0]))[0]
    assert np.abs(parallel_transport(g, t0) - t1).max() < 1e-9


@given(seeds)
def test_transport_isometry_and_inverse(seed):
    rng = np.random.default_rng(seed)
    p, q = unit(rng.normal(size=3)), unit(rng.normal(size=3))
    if np.dot(p, q) < -0.5:
        q = -q
    g = random_path(rng, p, q)
    xi = some_tangent(p) * 1.7
    v = parallel_transport(g, xi, 400)
    assert abs(np.linalg.norm(v) - 1.7) < 1e-9
    assert abs(np.dot(v, q)) < 1e-9
    assert np.abs(parallel_transport(g.reversed(), v, 400) - xi).max() < 1e-8


@given(seeds)
def test_holonomy_equals_enclosed_area(seed):
    rng = np.random.default_rng(seed)
    p, q = unit(rng.normal(size=3)), unit(rng.normal(size=3))
    if np.dot(p, q) < -0.5:
        q = -q
    g1, g2 = random_path(rng, p, q), random_path(rng, p, q)
    assert abs(wrap(angle_between_paths(g1, g2) - enclosed_area(g1, g2))) < 1e-5


@given(seeds, st.floats(0.05, 2 * np.pi - 0.05))
def test_loop_with_area(seed, alpha):
    q = unit(np.random.default_rng(seed).normal(size=3))
    loop = loop_with_area(q, alpha)
    assert np.linalg.norm(loop.start - q) < 1e-12 and np.linalg.norm(loop.end - q) < 1e-9
    assert abs(wrap(angle_between_paths(constant(q), loop) - alpha)) < 1e-6


def test_pointwise_angle_axioms():
    r = angle_axiom_residuals(np.random.default_rng(0), 200)
    assert max(r.values()) < 1e-12


def test_tangent_angle_orientation():
    assert abs(tangent_angle(X, Y, Z) - np.pi / 2) < 1e-15


def test_mismatched_endpoints():
    with pytest.raises(SphereError):
        angle_between_paths(geodesic(X, Y), geodesic(X, Z))
    with pytest.raises(SphereError):
        geodesic(X, -X)
    with pytest.raises(SphereError):
        parallel_transport(geodesic(X, Y), X)


@pytest.mark.parametrize("seed", range(5))
def test_arrow_identity_chain(seed):
    rep = verify_arrow_identity(random_arrow_config(np.random.default_rng(seed)))
    assert len(rep.residuals) == 14
    assert rep.max_residual < 1e-5


def test_arrow_identity_rejects_bad_lift():
    cfg = random_arrow_config(np.random.default_rng(7))
    cfg.r1 += 0.1
    with pytest.raises(SphereError):
        verify_arrow_identity(cfg)


def test_double_turn_doubles_area():
    p = unit([1, 1, 1])
    loop = rotation_loop(p, p + 0.2 * some_tangent(p), 2)
    cap = 2 * np.pi * (1 - 1 / np.sqrt(1.04))  # angular radius arctan(0.2)
    assert abs(wrap(angle_between_paths(constant(p), loop) - 2 * cap)) < 1e-6


@pytest.mark.parametrize("reverse,w", [(False, 2), (True, -2)])
def test_sweep(reverse, w):
    r = sweep_winding(sweep_family(unit([0.2, -0.5, 0.8]), reverse=reverse))
    assert r.winding == w
    assert abs(r.change - w * 2 * np.pi) < 1e-4


def test_coarse_sweep_refuses():
    with pytest.raises(SphereError):
        sweep_winding(sweep_family(Z), m=3)
