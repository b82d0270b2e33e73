"""Levi-Civita transport on the unit sphere, the angle between paths, and enclosed areas.

Orientation: tangent planes are oriented by the outward normal, so
``ang(u, v)`` is the counterclockwise angle from ``u`` to ``v`` seen from
outside.  With this convention ``ang(g1, g2)`` equals the signed area of a
region ``D`` with ``dD = g2 - g1`` (Gauss-Bonnet), reduced mod 2 pi.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Callable

import numpy as np

TWO_PI = 2 * np.pi


class SphereError(ValueError):
    pass


def wrap(x):
    """Reduce to ``(-pi, pi]``."""
    y = np.mod(np.asarray(x, dtype=float) + np.pi, TWO_PI) - np.pi
    return np.where(y == -np.pi, np.pi, y) if np.ndim(y) else (np.pi if y == -np.pi else float(y))


def unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def tangent_angle(u, v, n) -> float:
    """Signed angle from ``u`` to ``v`` in the plane with normal ``n``."""
    return float(np.arctan2(np.dot(n, np.cross(u, v)), np.dot(u, v)))


# ---------------------------------------------------------------------------
# Paths


@dataclass(frozen=True)
class Segment:
    """Smooth piece on [0, 1] with exact position and velocity (both vectorized in ``t``)."""

    fn: Callable
    dfn: Callable

    def reversed(self) -> "Segment":
        f, df = self.fn, self.dfn
        return Segment(lambda t: f(1 - np.asarray(t)), lambda t: -df(1 - np.asarray(t)))


@dataclass(frozen=True)
class SpherePath:
    segments: tuple

    @property
    def start(self) -> np.ndarray:
        return self.segments[0].fn(np.array([0.0]))[0]

    @property
    def end(self) -> np.ndarray:
        return self.segments[-1].fn(np.array([1.0]))[0]

    def then(self, other: "SpherePath", tol: float = 1e-9) -> "SpherePath":
        if np.linalg.norm(self.end - other.start) > tol:
            raise SphereError("paths do not meet")
        return SpherePath(self.segments + other.segments)

    def reversed(self) -> "SpherePath":
        return SpherePath(tuple(s.reversed() for s in reversed(self.segments)))

    def sample(self, n: int = 1000) -> np.ndarray:
        """``n`` steps per segment; shared knots are not repeated."""
        t = np.linspace(0, 1, n + 1)
        parts = [s.fn(t) for s in self.segments]
        return np.concatenate([parts[0]] + [p[1:] for p in parts[1:]])


def constant(p) -> SpherePath:
    p = unit(p)
    return SpherePath((Segment(lambda t: np.tile(p, (np.size(t), 1)), lambda t: np.zeros((np.size(t), 3))),))


def geodesic(u, v) -> SpherePath:
    """Minimizing great-circle arc (``u``, ``v`` not antipodal)."""
    u, v = unit(u), unit(v)
    om = float(np.arccos(np.clip(np.dot(u, v), -1, 1)))
    if om < 1e-15:
        return constant(u)
    if np.pi - om < 1e-9:
        raise SphereError("geodesic between antipodal points is not unique")
    so = np.sin(om)

    def fn(t):
        t = np.asarray(t, dtype=float)[:, None]
        return (np.sin((1 - t) * om) * u + np.sin(t * om) * v) / so

    def dfn(t):
        t = np.asarray(t, dtype=float)[:, None]
        return om * (-np.cos((1 - t) * om) * u + np.cos(t * om) * v) / so

    return SpherePath((Segment(fn, dfn),))


def rotation_loop(p, axis, turns: int = 1) -> SpherePath:
    """``p`` rotated about ``axis`` through ``2 pi turns`` (counterclockwise seen from ``axis``)."""
    p, c = unit(p), unit(axis)
    cp, cdot = np.cross(c, p), np.dot(c, p)

    def fn(t):
        ph = TWO_PI * turns * np.asarray(t, dtype=float)[:, None]
        return p * np.cos(ph) + cp * np.sin(ph) + c * cdot * (1 - np.cos(ph))

    def dfn(t):
        return TWO_PI * turns * np.cross(c, fn(t))

    return SpherePath((Segment(fn, dfn),))


def latitude_loop(theta: float, phi0: float = 0.0) -> SpherePath:
    """Counterclockwise loop at colatitude ``theta`` around the north pole."""
    p = np.array([np.sin(theta) * np.cos(phi0), np.sin(theta) * np.sin(phi0), np.cos(theta)])
    return rotation_loop(p, [0, 0, 1])


def meridian(lon: float) -> SpherePath:
    """North pole to south pole along longitude ``lon``."""
    cl, sl = np.cos(lon), np.sin(lon)

    def fn(t):
        a = np.pi * np.asarray(t, dtype=float)
        return np.stack([np.sin(a) * cl, np.sin(a) * sl, np.cos(a)], axis=-1)

    def dfn(t):
        a = np.pi * np.asarray(t, dtype=float)
        return np.pi * np.stack([np.cos(a) * cl, np.cos(a) * sl, -np.sin(a)], axis=-1)

    return SpherePath((Segment(fn, dfn),))


def from_ambient(P: Callable, dP: Callable) -> SpherePath:
    """``P / |P|`` for a nonvanishing ambient curve ``P`` with derivative ``dP``."""

    def fn(t):
        x = P(np.asarray(t, dtype=float))
        return x / np.linalg.norm(x, axis=-1, keepdims=True)

    def dfn(t):
        t = np.asarray(t, dtype=float)
        x, dx = P(t), dP(t)
        n = np.linalg.norm(x, axis=-1, keepdims=True)
        g = x / n
        return (dx - np.sum(dx * g, axis=-1, keepdims=True) * g) / n

    return SpherePath((Segment(fn, dfn),))


def random_path(rng: np.random.Generator, p, q, modes: int = 2, scale: float = 0.4) -> SpherePath:
    """Perturbed chord from ``p`` to ``q`` pushed to the sphere."""
    p, q = unit(p), unit(q)
    W = rng.normal(size=(modes, 3)) * scale

    def P(t):
        t = t[:, None]
        bump = sum(np.sin((k + 1) * np.pi * t) * W[k] for k in range(modes))
        return (1 - t) * p + t * q + t * (1 - t) * bump

    def dP(t):
        t = t[:, None]
        bump = sum(np.sin((k + 1) * np.pi * t) * W[k] for k in range(modes))
        dbump = sum((k + 1) * np.pi * np.cos((k + 1) * np.pi * t) * W[k] for k in range(modes))
        return q - p + (1 - 2 * t) * bump + t * (1 - t) * dbump

    return from_ambient(P, dP)


# ---------------------------------------------------------------------------
# Transport


def _segment_operator(seg: Segment, n: int) -> np.ndarray:
    """RK4 propagator of ``xi' = -(gamma' . xi) gamma`` over one segment."""
    h = 1.0 / n
    t = np.linspace(0, 1, 2 * n + 1)
    g, dg = seg.fn(t), seg.dfn(t)
    A = -np.einsum("ti,tj->tij", g, dg)
    A1, Am, A3 = A[0:-1:2], A[1::2], A[2::2]
    eye = np.eye(3)
    K1 = A1
    K2 = Am @ (eye + 0.5 * h * K1)
    K3 = Am @ (eye + 0.5 * h * K2)
    K4 = A3 @ (eye + h * K3)
    S = eye + (h / 6.0) * (K1 + 2 * K2 + 2 * K3 + K4)
    # ordered product S[n-1] ... S[0] by pairwise reduction
    while len(S) > 1:
        if len(S) % 2:
            S = np.concatenate([S[:-2], (S[-1] @ S[-2])[None]])
            continue
        S = S[1::2] @ S[0::2]
    return S[0]


def transport_operator(path: SpherePath, n: int = 1000) -> np.ndarray:
    """3x3 matrix sending tangent vectors at the start to their transports at the end."""
    return reduce(lambda M, seg: _segment_operator(seg, n) @ M, path.segments, np.eye(3))


def parallel_transport(path: SpherePath, xi, n: int = 1000, tol: float = 1e-9) -> np.ndarray:
    """Levi-Civita transport of ``xi`` (tangent at the start), reprojected to the end tangent plane."""
    xi = np.asarray(xi, dtype=float)
    p, q = path.start, path.end
    if abs(np.dot(xi, p)) > tol * max(1.0, np.linalg.norm(xi)):
        raise SphereError("xi is not tangent at the start of the path")
    v = transport_operator(path, n) @ xi
    v = v - np.dot(v, q) * q
    nv = np.linalg.norm(v)
    return v * (np.linalg.norm(xi) / nv) if nv > 0 else v


def some_tangent(p) -> np.ndarray:
    p = unit(p)
    e = np.eye(3)[int(np.argmin(np.abs(p)))]
    return unit(e - np.dot(e, p) * p)


def angle_between_paths(g1: SpherePath, g2: SpherePath, xi=None, n: int = 1000, tol: float = 1e-9) -> float:
    """``ang(xi // g1, xi // g2)`` at the common endpoint, in ``(-pi, pi]``."""
    if np.linalg.norm(g1.start - g2.start) > tol or np.linalg.norm(g1.end - g2.end) > tol:
        raise SphereError("paths do not share endpoints")
    xi = some_tangent(g1.start) if xi is None else np.asarray(xi, dtype=float)
    return tangent_angle(parallel_transport(g1, xi, n), parallel_transport(g2, xi, n), g1.end)


def triangle_area(a, b, c) -> np.ndarray:
    """Signed area of the geodesic triangle ``abc`` (Van Oosterom-Strackee), vectorized."""
    num = np.einsum("...i,...i->...", a, np.cross(b, c))
    den = 1 + np.einsum("...i,...i->...", a, b) + np.einsum("...i,...i->...", b, c) + np.einsum("...i,...i->...", c, a)
    return 2 * np.arctan2(num, den)


def enclosed_area(g1: SpherePath, g2: SpherePath, apex=None, n: int = 20000, tol: float = 1e-9) -> float:
    """Signed area of ``D`` with ``dD = g2 - g1``, as a fan of geodesic triangles from ``apex``."""
    if np.linalg.norm(g1.start - g2.start) > tol or np.linalg.norm(g1.end - g2.end) > tol:
        raise SphereError("paths do not share endpoints")
    loop = g2.then(g1.reversed(), tol=tol).sample(n)
    if apex is None:
        m = loop.mean(axis=0)
        if np.linalg.norm(m) < 1e-6:
            raise SphereError("degenerate fan: supply an apex")
        apex = m
    apex = unit(apex)
    if np.any(np.linalg.norm(loop + apex, axis=-1) < 1e-9):
        raise SphereError("degenerate fan: loop passes through the antipode of the apex")
    return float(triangle_area(apex, loop[:-1], loop[1:]).sum())


# ---------------------------------------------------------------------------
# Identity chain for the arrow map


def loop_with_area(q, alpha: float) -> SpherePath:
    """Counterclockwise circle through ``q`` enclosing area ``alpha mod 2 pi`` on its left."""
    a = float(np.mod(alpha, TWO_PI))
    q = unit(q)
    if a < 1e-14:
        return constant(q)
    rho = float(np.arccos(1 - a / TWO_PI))
    e = some_tangent(q)
    c = np.cos(rho) * q + np.sin(rho) * e
    return rotation_loop(q, c)


@dataclass
class ArrowConfig:
    g1: SpherePath
    g2: SpherePath
    xi1: np.ndarray  # at the common end
    xi2: np.ndarray
    xi1p: np.ndarray  # at the common start
    xi2p: np.ndarray
    r1: float
    r2: float


def lift_targets(g1, g2, xi1, xi2, xi1p, xi2p, n: int = 1000) -> tuple[float, float]:
    """Classes of ``r1``, ``r2`` forced by the fibered-product conditions."""
    p, q = g1.start, g1.end
    r2 = -tangent_angle(parallel_transport(g1.reversed(), xi1, n), parallel_transport(g2.reversed(), xi2, n), p)
    r1 = -tangent_angle(parallel_transport(g1, xi1p, n), parallel_transport(g2, xi2p, n), q)
    return r1, r2


def random_arrow_config(rng: np.random.Generator, n: int = 1000) -> ArrowConfig:
    p = unit(rng.normal(size=3))
    q = unit(rng.normal(size=3))
    if np.dot(p, q) < -0.5:
        q = -q
    g1, g2 = random_path(rng, p, q), random_path(rng, p, q)

    def tangent(x):
        v = rng.normal(size=3)
        return unit(v - np.dot(v, x) * x)

    xi1, xi2, xi1p, xi2p = tangent(q), tangent(q), tangent(p), tangent(p)
    r1, r2 = lift_targets(g1, g2, xi1, xi2, xi1p, xi2p, n)
    k1, k2 = rng.integers(-3, 4, size=2)
    return ArrowConfig(g1, g2, xi1, xi2, xi1p, xi2p, r1 + TWO_PI * k1, r2 + TWO_PI * k2)


@dataclass
class ArrowReport:
    residuals: dict  # name -> |deviation| mod 2 pi
    max_residual: float
    deformed: tuple = field(default=(), repr=False)


def verify_arrow_identity(cfg: ArrowConfig, n: int = 1000, lift_tol: float = 1e-6) -> ArrowReport:
    """Evaluate every identity in the chain from the lifts to ``[r2 - r1] = ang(g1', g2')``.

    Each angle is recomputed from its own transports; the deformed paths
    ``gi' = gi * loop`` have ``ang(gi, gi') = ang(xi_i, xi_i' // gi)`` by
    construction, and that relation is itself checked by transport.
    """
    g1, g2 = cfg.g1, cfg.g2
    p, q = g1.start, g1.end
    if np.linalg.norm(g2.start - p) > 1e-9 or np.linalg.norm(g2.end - q) > 1e-9:
        raise SphereError("paths do not share endpoints")
    T = lambda path, v: parallel_transport(path, v, n)  # noqa: E731
    ang = tangent_angle
    inv1, inv2 = g1.reversed(), g2.reversed()
    t1r1, t2r1, t2r2 = T(inv1, cfg.xi1), T(inv1, cfg.xi2), T(inv2, cfg.xi2)
    r1c, r2c = lift_targets(g1, g2, cfg.xi1, cfg.xi2, cfg.xi1p, cfg.xi2p, n)
    for name, r, c in (("r1", cfg.r1, r1c), ("r2", cfg.r2, r2c)):
        if abs(wrap(r - c)) > lift_tol:
            raise SphereError(f"lift {name} is inconsistent with the frames (off by {wrap(r - c):.3e})")
    a12 = angle_between_paths(g1, g2, n=n)
    a12_inv = angle_between_paths(inv1, inv2, n=n)
    x12 = ang(cfg.xi1, cfg.xi2, q)
    x12p = ang(cfg.xi1p, cfg.xi2p, p)
    s1 = T(g1, cfg.xi1p)
    s2 = T(g2, cfg.xi2p)
    s21 = T(g1, cfg.xi2p)
    b1 = ang(cfg.xi1, s1, q)
    b2 = ang(cfg.xi2, s2, q)
    d1 = g1.then(loop_with_area(q, b1))
    d2 = g2.then(loop_with_area(q, b2))
    dr = cfg.r2 - cfg.r1
    lhs = {
        "lift_r2": -cfg.r2 - ang(t1r1, t2r2, p),
        "additivity": ang(t1r1, t2r2, p) - ang(t1r1, t2r1, p) - ang(t2r1, t2r2, p),
        "frame_transport": ang(t1r1, t2r1, p) - x12,
        "reversal": a12_inv + a12,
        "r2_formula": a12 - cfg.r2 - x12,
        "r1_formula": a12 + cfg.r1 + x12p,
        "difference": dr - (2 * a12 - x12 + x12p),
        "four_terms": ang(cfg.xi1, s1, q) + ang(s1, s21, q) + ang(s21, s2, q) + ang(s2, cfg.xi2, q) - x12,
        "rearranged": (-x12 + x12p) - (-b1 + b2 - a12),
        "substituted": dr - (a12 - b1 + b2),
        "deformation_1": angle_between_paths(g1, d1, n=n) - b1,
        "deformation_2": angle_between_paths(g2, d2, n=n) - b2,
        "deformed_sum": dr - (a12 + angle_between_paths(d1, g1, n=n) + angle_between_paths(g2, d2, n=n)),
        "conclusion": dr - angle_between_paths(d1, d2, n=n),
    }
    res = {k: abs(wrap(v)) for k, v in lhs.items()}
    return ArrowReport(res, max(res.values()), (d1, d2))


def angle_axiom_residuals(rng: np.random.Generator, trials: int = 100) -> dict:
    """Additivity and antisymmetry of the pointwise angle."""
    add = anti = 0.0
    for _ in range(trials):
        n = unit(rng.normal(size=3))
        u, v, w = (unit(x - np.dot(x, n) * n) for x in rng.normal(size=(3, 3)))
        add = max(add, abs(wrap(tangent_angle(u, v, n) + tangent_angle(v, w, n) - tangent_angle(u, w, n))))
        anti = max(anti, abs(wrap(tangent_angle(u, v, n) + tangent_angle(v, u, n))))
    return {"additivity": add, "antisymmetry": anti}


# ---------------------------------------------------------------------------
# Sweeps


def sweep_family(p, direction=None, reverse: bool = False) -> Callable[[float], SpherePath]:
    """``s -> `` circle through ``p`` of angular radius ``pi s``; constant at s = 0 and s = 1."""
    p = unit(p)
    e = some_tangent(p) if direction is None else unit(np.asarray(direction) - np.dot(direction, p) * p)
    turns = -1 if reverse else 1

    def loop(s: float) -> SpherePath:
        rho = np.pi * s
        if s <= 0 or s >= 1:
            return constant(p)
        return rotation_loop(p, np.cos(rho) * p + np.sin(rho) * e, turns)

    return loop


@dataclass
class SweepResult:
    lifts: np.ndarray
    change: float
    winding: int
    rounding_distance: float


def sweep_winding(family: Callable[[float], SpherePath], m: int = 64, n: int = 1000, xi=None, max_jump: float = np.pi / 2) -> SweepResult:
    """Continuous lift of ``s -> ang(const, family(s))`` over ``s`` in [0, 1]."""
    first, last = family(0.0), family(1.0)
    p = first.start
    for lp in (first, last):
        if np.linalg.norm(lp.start - lp.end) > 1e-9 or np.linalg.norm(lp.start - p) > 1e-9:
            raise SphereError("family must consist of loops at one base point")
    xi = some_tangent(p) if xi is None else np.asarray(xi, dtype=float)
    raw = [tangent_angle(xi, parallel_transport(family(s), xi, n), p) for s in np.linspace(0, 1, m + 1)]
    lifts = [raw[0]]
    for a in raw[1:]:
        step = wrap(a - lifts[-1])
        if abs(step) > max_jump:
            raise SphereError(f"lift jump {step:.3f} exceeds {max_jump:.3f}; refine the sweep")
        lifts.append(lifts[-1] + step)
    lifts = np.array(lifts)
    change = float(lifts[-1] - lifts[0])
    w = change / TWO_PI
    return SweepResult(lifts, change, int(round(w)), float(abs(w - round(w))))
