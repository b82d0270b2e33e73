"""A-paths and A-homotopies over matrix Lie algebras and the tangent bundle of S^2.

Conventions: group paths solve ``g' = a(t) g`` with ``g(0) = 1``, so the
endpoint of a concatenation is ``g_q(1) g_p(1)``.  Fiber values of a matrix
model are ``d x d`` arrays; for the sphere they are ambient 3-vectors tangent
at the base point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq


class AlgebroidError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Models


@dataclass
class MatrixLieAlgebra:
    """Lie algebra spanned by ``basis``; anchor 0 over a point, bracket the commutator."""

    basis: list
    name: str = ""
    tol: float = 1e-10

    def __post_init__(self):
        self.basis = [np.asarray(b) for b in self.basis]
        self.d = self.basis[0].shape[0]
        flat = np.array([b.ravel() for b in self.basis])
        self._flat = np.concatenate([flat.real, flat.imag], axis=1).T
        r = self.closure_residual()
        if r > self.tol:
            raise AlgebroidError(f"basis not closed under the commutator (residual {r:.2e})")

    @staticmethod
    def bracket(a, b):
        return a @ b - b @ a

    def coords(self, x) -> np.ndarray:
        x = np.asarray(x).ravel()
        rhs = np.concatenate([x.real, x.imag])
        c, *_ = np.linalg.lstsq(self._flat, rhs, rcond=None)
        return c

    def element(self, coeffs) -> np.ndarray:
        return sum(c * b for c, b in zip(coeffs, self.basis))

    def span_residual(self, x) -> float:
        return float(np.abs(self.element(self.coords(x)) - x).max())

    def closure_residual(self) -> float:
        return max(
            (self.span_residual(self.bracket(a, b)) for a in self.basis for b in self.basis),
            default=0.0,
        )

    def identity(self) -> np.ndarray:
        return np.eye(self.d, dtype=self.basis[0].dtype)


def so3() -> MatrixLieAlgebra:
    """Rotation generators; ``E_z`` generates counterclockwise rotation about z."""
    E = []
    for i, j in ((1, 2), (2, 0), (0, 1)):
        m = np.zeros((3, 3))
        m[j, i], m[i, j] = 1.0, -1.0
        E.append(m)
    return MatrixLieAlgebra(E, "so(3)")


def su2() -> MatrixLieAlgebra:
    """Basis ``-i sigma_k / 2`` (complex matrices, real span)."""
    s = [
        np.array([[0, 1], [1, 0]], dtype=complex),
        np.array([[0, -1j], [1j, 0]], dtype=complex),
        np.array([[1, 0], [0, -1]], dtype=complex),
    ]
    return MatrixLieAlgebra([-0.5j * m for m in s], "su(2)")


@dataclass
class TangentSphere:
    """TS^2 -> S^2: anchor the identity, Levi-Civita connection, zero torsion."""

    name: str = "TS^2"
    tol: float = 1e-9

    def check_base(self, pts) -> float:
        r = float(np.abs(np.linalg.norm(np.asarray(pts), axis=-1) - 1).max())
        if r > self.tol:
            raise AlgebroidError(f"base samples off the unit sphere by {r:.2e}")
        return r


def exp_line(X: np.ndarray, u: np.ndarray) -> np.ndarray:
    """``exp(u X)`` for an array of scalars ``u`` (``X`` diagonalizable)."""
    lam, V = np.linalg.eig(X)
    Vi = np.linalg.inv(V)
    out = np.einsum("ij,...j,jk->...ik", V, np.exp(np.multiply.outer(u, lam)), Vi)
    return out.real if np.isrealobj(X) else out


# ---------------------------------------------------------------------------
# Paths


@dataclass
class APath:
    """Samples of ``(gamma(t_k), a(t_k))``.

    ``t`` is nondecreasing; a repeated knot separates smooth pieces (as in a
    concatenation), and steps are uniform within each piece.  ``base`` is None
    for a matrix model (base a point).
    """

    model: object
    t: np.ndarray
    fiber: np.ndarray
    base: np.ndarray | None = None

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        self.fiber = np.asarray(self.fiber)
        if len(self.t) != len(self.fiber):
            raise AlgebroidError("knots and fiber samples differ in length")
        if np.any(np.diff(self.t) < 0):
            raise AlgebroidError("knots must be nondecreasing")
        if isinstance(self.model, TangentSphere):
            if self.base is None:
                raise AlgebroidError("a sphere path needs base samples")
            self.base = np.asarray(self.base, dtype=float)
            self.model.check_base(self.base)
        elif self.base is not None:
            raise AlgebroidError("a matrix model has a point as base")

    @classmethod
    def from_function(cls, model, a: Callable, N: int = 1000, gamma: Callable | None = None) -> "APath":
        t = np.linspace(0.0, 1.0, N + 1)
        return cls(model, t, np.asarray(a(t)), None if gamma is None else np.asarray(gamma(t)))

    @classmethod
    def zero(cls, model, N: int = 1000, point=None) -> "APath":
        t = np.linspace(0.0, 1.0, N + 1)
        if isinstance(model, TangentSphere):
            return cls(model, t, np.zeros((N + 1, 3)), np.tile(np.asarray(point, dtype=float), (N + 1, 1)))
        return cls(model, t, np.zeros((N + 1, model.d, model.d), dtype=model.basis[0].dtype))

    @property
    def h(self) -> float:
        return float(min(np.diff(s).min() for s in self.pieces()))

    def pieces(self) -> list[slice]:
        cut = list(np.nonzero(np.diff(self.t) == 0)[0] + 1)
        bounds = [0] + cut + [len(self.t)]
        return [slice(a, b) for a, b in zip(bounds, bounds[1:])]

    def endpoints(self):
        if self.base is None:
            return None, None
        return self.base[0], self.base[-1]

    def a0_residual(self) -> float:
        """Largest of ``|a|`` and the third-order one-sided ``|a'|`` at t = 0, 1.

        The stencil is exact on cubics, so a profile vanishing to second order
        (like ``tau'``) reads as zero up to ``O(h^3)``.
        """
        a, t = self.fiber, self.t
        h0, h1 = t[1] - t[0], t[-1] - t[-2]
        d0 = (-11 * a[0] + 18 * a[1] - 9 * a[2] + 2 * a[3]) / (6 * h0)
        d1 = (11 * a[-1] - 18 * a[-2] + 9 * a[-3] - 2 * a[-4]) / (6 * h1)
        return float(max(np.abs(x).max() for x in (a[0], a[-1], d0, d1)))

    def is_a0(self, tol: float = 1e-4) -> bool:
        return self.a0_residual() <= tol


def apath_residual(p: APath) -> float:
    """Max over interior knots of ``|rho(a) - gamma'|`` (central differences per piece)."""
    if len(p.t) < 3:
        raise AlgebroidError("need at least 3 samples")
    if p.base is None:
        return 0.0
    worst = 0.0
    for sl in p.pieces():
        g, a, t = p.base[sl], p.fiber[sl], p.t[sl]
        if len(t) < 3:
            continue
        dg = (g[2:] - g[:-2]) / (t[2:] - t[:-2])[:, None]
        worst = max(worst, float(np.linalg.norm(a[1:-1] - dg, axis=-1).max()))
    return worst


@dataclass
class GroupPath:
    t: np.ndarray
    g: np.ndarray

    @property
    def endpoint(self) -> np.ndarray:
        return self.g[-1]


def _rk4_steps(ts: np.ndarray, A: np.ndarray) -> np.ndarray:
    """One-step RK4 propagators for ``M' = A(t) M`` on a uniform piece (midpoints by cubic spline)."""
    h = ts[1] - ts[0]
    if len(ts) >= 4:
        Am = CubicSpline(ts, A, axis=0)(0.5 * (ts[:-1] + ts[1:]))
    else:
        Am = 0.5 * (A[:-1] + A[1:])
    A1, A3 = A[:-1], A[1:]
    eye = np.eye(A.shape[-1])
    K1 = A1
    K2 = Am @ (eye + 0.5 * h * K1)
    K3 = Am @ (eye + 0.5 * h * K2)
    K4 = A3 @ (eye + h * K3)
    return eye + (h / 6.0) * (K1 + 2 * K2 + 2 * K3 + K4)


def integrate_path(p: APath) -> GroupPath:
    """Solve ``g' = a g``, ``g(0) = 1`` with a fourth-order one-step scheme."""
    if p.base is not None:
        raise AlgebroidError("integration is defined for matrix models")
    d = p.fiber.shape[-1]
    g = np.empty_like(p.fiber, dtype=np.result_type(p.fiber, float))
    cur = np.eye(d, dtype=g.dtype)
    for sl in p.pieces():
        ts, A = p.t[sl], p.fiber[sl]
        g[sl.start] = cur
        if len(ts) < 2:
            continue
        S = _rk4_steps(ts, A)
        for k in range(len(S)):
            cur = S[k] @ cur
            g[sl.start + k + 1] = cur
    return GroupPath(p.t, g)


def concat(p: APath, q: APath, tol: float = 1e-8) -> APath:
    """``p`` on [0, 1/2] and ``q`` on [1/2, 1], each at double speed."""
    if type(p.model) is not type(q.model) or getattr(p.model, "name", None) != getattr(q.model, "name", None):
        raise AlgebroidError("paths over different models")
    if p.base is not None:
        gap = float(np.linalg.norm(p.base[-1] - q.base[0]))
        if gap > tol:
            raise AlgebroidError(f"endpoint mismatch: |gamma_p(1) - gamma_q(0)| = {gap:.2e}")
    t = np.concatenate([p.t / 2, 0.5 + q.t / 2])
    fiber = np.concatenate([2 * p.fiber, 2 * q.fiber])
    base = None if p.base is None else np.concatenate([p.base, q.base])
    return APath(p.model, t, fiber, base)


def tau(t):
    """Quintic profile: tau', tau'' vanish at 0 and 1."""
    t = np.asarray(t, dtype=float)
    return t**3 * (10 - 15 * t + 6 * t**2)


def dtau(t):
    t = np.asarray(t, dtype=float)
    return 30 * t**2 * (1 - t) ** 2


def _tau_inv(y: float) -> float:
    if y <= 0:
        return 0.0
    if y >= 1:
        return 1.0
    return brentq(lambda x: float(tau(x)) - y, 0.0, 1.0, xtol=1e-15)


def reparametrize(p: APath) -> APath:
    """``a_tau(t) = tau'(t) a(tau(t))`` over ``gamma o tau``; the result satisfies the A_0 boundary."""
    ts, fs, bs = [], [], []
    for sl in p.pieces():
        t = p.t[sl]
        lo, hi = _tau_inv(t[0]), _tau_inv(t[-1])
        u = np.linspace(lo, hi, len(t))
        x = np.clip(tau(u), t[0], t[-1])
        a = CubicSpline(t, p.fiber[sl], axis=0)(x) if len(t) >= 4 else p.fiber[sl]
        fs.append(dtau(u).reshape((-1,) + (1,) * (p.fiber.ndim - 1)) * a)
        ts.append(u)
        if p.base is not None:
            b = CubicSpline(t, p.base[sl], axis=0)(x)
            bs.append(b / np.linalg.norm(b, axis=-1, keepdims=True))
    return APath(p.model, np.concatenate(ts), np.concatenate(fs), None if p.base is None else np.concatenate(bs))


def random_matrix_path(model: MatrixLieAlgebra, rng: np.random.Generator, N: int = 1000, modes: int = 3) -> APath:
    """Smooth path with random trigonometric coefficients in each basis direction."""
    c = rng.normal(size=(len(model.basis), modes))
    ph = rng.uniform(0, 2 * np.pi, size=(len(model.basis), modes))

    def a(t):
        coeff = sum(c[:, m, None] * np.cos((m + 1) * np.pi * t[None, :] + ph[:, m, None]) for m in range(modes))
        return np.einsum("jt,jkl->tkl", coeff, np.array(model.basis))

    return APath.from_function(model, a, N)


# ---------------------------------------------------------------------------
# Homotopies


@dataclass
class AHomotopy:
    """Samples over ``(t, s)``: axis 0 is ``t`` (M+1 knots), axis 1 is ``s`` (N+1 knots)."""

    model: object
    a: np.ndarray
    b: np.ndarray
    gamma: np.ndarray | None = None

    def __post_init__(self):
        if self.a.shape != self.b.shape:
            raise AlgebroidError("a and b grids differ in shape")
        if self.a.shape[0] < 3 or self.a.shape[1] < 3:
            raise AlgebroidError("need at least a 3x3 grid")
        if isinstance(self.model, TangentSphere):
            if self.gamma is None:
                raise AlgebroidError("a sphere homotopy needs base samples")
            self.model.check_base(self.gamma)

    @property
    def ht(self) -> float:
        return 1.0 / (self.a.shape[0] - 1)

    @property
    def hs(self) -> float:
        return 1.0 / (self.a.shape[1] - 1)

    def boundary_residual(self) -> float:
        return float(max(np.abs(self.b[0]).max(), np.abs(self.b[-1]).max()))

    def slice(self, j: int) -> APath:
        t = np.linspace(0, 1, self.a.shape[0])
        return APath(self.model, t, self.a[:, j], None if self.gamma is None else self.gamma[:, j])


@dataclass
class HomotopyResidual:
    residual: float
    boundary: float
    boundary_ok: bool


def ahomotopy_residual(H: AHomotopy, boundary_tol: float = 1e-8) -> HomotopyResidual:
    """Interior max of ``|d_t b - d_s a - T(a, b)|`` (central differences, covariant on the sphere)."""
    a, b = H.a, H.b
    dtb = (b[2:, 1:-1] - b[:-2, 1:-1]) / (2 * H.ht)
    dsa = (a[1:-1, 2:] - a[1:-1, :-2]) / (2 * H.hs)
    r = dtb - dsa
    if isinstance(H.model, TangentSphere):
        g = H.gamma[1:-1, 1:-1]
        r = r - np.sum(r * g, axis=-1, keepdims=True) * g
        res = float(np.linalg.norm(r, axis=-1).max())
    else:
        ai, bi = a[1:-1, 1:-1], b[1:-1, 1:-1]
        r = r - (ai @ bi - bi @ ai)
        res = float(np.abs(r).max())
    bd = H.boundary_residual()
    return HomotopyResidual(res, bd, bd <= boundary_tol)


def maurer_cartan_family(model: MatrixLieAlgebra, rng: np.random.Generator, M: int, N: int | None = None) -> AHomotopy:
    """``g(t,s) = exp(u X) exp(v Y)`` with exact ``a = g_t g^-1``, ``b = g_s g^-1``; ``b = 0`` at t = 0, 1."""
    N = M if N is None else N
    X = model.element(rng.normal(size=len(model.basis)))
    Y = model.element(rng.normal(size=len(model.basis)))
    c = rng.normal(size=4)
    t = np.linspace(0, 1, M + 1)[:, None]
    s = np.linspace(0, 1, N + 1)[None, :]
    w = t * (1 - t)
    u = c[0] * t + w * np.sin(2 * s + c[2])
    v = c[1] * t + w * np.cos(3 * s + c[3])
    u_t = c[0] + (1 - 2 * t) * np.sin(2 * s + c[2])
    v_t = c[1] + (1 - 2 * t) * np.cos(3 * s + c[3])
    u_s = 2 * w * np.cos(2 * s + c[2])
    v_s = -3 * w * np.sin(3 * s + c[3])
    E = exp_line(X, u)
    AdY = E @ Y @ np.linalg.inv(E)
    a = u_t[..., None, None] * X + v_t[..., None, None] * AdY
    b = u_s[..., None, None] * X + v_s[..., None, None] * AdY
    return AHomotopy(model, a, b)


def _normalize_with_derivs(P, *dPs):
    n = np.linalg.norm(P, axis=-1, keepdims=True)
    g = P / n
    out = [g]
    for dP in dPs:
        out.append((dP - np.sum(dP * g, axis=-1, keepdims=True) * g) / n)
    return out


def sphere_family(rng: np.random.Generator, M: int, N: int | None = None) -> AHomotopy:
    """Endpoint-fixed family ``gamma(t,s)`` on S^2 with ``a = d_t gamma``, ``b = d_s gamma``."""
    N = M if N is None else N
    p, q, w1, w2 = rng.normal(size=(4, 3))
    p, q = p / np.linalg.norm(p), q / np.linalg.norm(q)
    if np.dot(p, q) < -0.5:
        q = -q
    c = rng.uniform(0.5, 1.5, size=2)
    t = np.linspace(0, 1, M + 1)[:, None, None]
    s = np.linspace(0, 1, N + 1)[None, :, None]
    w = t * (1 - t)
    phi, dphi = np.sin(c[0] * np.pi * s), c[0] * np.pi * np.cos(c[0] * np.pi * s)
    psi, dpsi = np.cos(c[1] * np.pi * t), -c[1] * np.pi * np.sin(c[1] * np.pi * t)
    P = (1 - t) * p + t * q + w * (phi * w1 + psi * s * w2)
    Pt = q - p + (1 - 2 * t) * (phi * w1 + psi * s * w2) + w * dpsi * s * w2
    Ps = w * (dphi * w1 + psi * w2)
    g, a, b = _normalize_with_derivs(P, Pt, Ps)
    return AHomotopy(TangentSphere(), a, b, g)


def convergence_order(hs, residuals) -> float:
    """Least-squares slope of log residual against log h."""
    return float(np.polyfit(np.log(hs), np.log(residuals), 1)[0])


# ---------------------------------------------------------------------------
# Flat triangles


@dataclass
class FlatTriangle:
    """``Psi(x, y) = Phi(min(1, x+y), max(0, x+y-1))`` on ``0 <= y <= x <= 1``, ``Phi(u,v) = g_q(v) g_p(u)``.

    Grids are indexed ``[i, j] <-> (x, y) = (i/N, j/N)``; entries with ``j > i``
    are outside the triangle and set to NaN.
    """

    psi: np.ndarray
    a: np.ndarray  # d_x Psi Psi^-1
    b: np.ndarray  # d_y Psi Psi^-1
    edge_p: APath  # y = 0
    edge_q: APath  # x = 1
    edge_pq: APath  # y = x
    residual: float
    edge_errors: dict = field(default_factory=dict)


def flat_triangle(p: APath, q: APath) -> FlatTriangle:
    """Flat 2-simplex with sides ``p``, ``q`` and ``p . q``; the interior folds onto the broken path."""
    if p.base is not None:
        raise AlgebroidError("flat triangles are built over matrix models")
    if len(p.pieces()) != 1 or len(q.pieces()) != 1 or len(p.t) != len(q.t):
        raise AlgebroidError("flat_triangle needs single-piece paths on the same grid")
    N = len(p.t) - 1
    gp, gq = integrate_path(p).g, integrate_path(q).g
    # w = x + y in {0, ..., 2N}
    G = np.concatenate([gp, gq[1:] @ gp[-1]])
    C = np.concatenate([p.fiber, q.fiber[1:]])
    C[N] = 0.5 * (p.fiber[-1] + q.fiber[0])  # the fold; only its neighbours enter differences
    i, j = np.meshgrid(np.arange(N + 1), np.arange(N + 1), indexing="ij")
    inside = j <= i
    w = np.where(inside, i + j, 0)
    psi = np.where(inside[..., None, None], G[w], np.nan)
    a = np.where(inside[..., None, None], C[w], np.nan)
    b = a.copy()
    # d_x b - d_y a - [a, b] at interior points of the triangle (both neighbours inside)
    db = (b[2:, 1:-1] - b[:-2, 1:-1]) * N / 2
    da = (a[1:-1, 2:] - a[1:-1, :-2]) * N / 2
    ai, bi = a[1:-1, 1:-1], b[1:-1, 1:-1]
    r = np.abs(db - da - (ai @ bi - bi @ ai))
    ok = (j[1:-1, 1:-1] + 1 <= i[1:-1, 1:-1] - 1)[..., None, None] & np.isfinite(r)
    residual = float(np.where(ok, r, 0).max()) if ok.any() else 0.0
    t = np.linspace(0, 1, N + 1)
    left, right = C.copy(), C.copy()  # one-sided values at the fold
    left[N], right[N] = p.fiber[-1], q.fiber[0]
    edge_p = APath(p.model, t, left[: N + 1])
    edge_q = APath(p.model, t, right[N:])
    edge_pq = APath(p.model, t, 2 * left[0 : 2 * N + 1 : 2])
    pq = concat(p, q)
    errs = {
        "p": float(np.abs(edge_p.fiber - p.fiber).max()),
        "q": float(np.abs(edge_q.fiber - q.fiber).max()),
        "pq": _compare_resampled(edge_pq, pq),
    }
    return FlatTriangle(psi, a, b, edge_p, edge_q, edge_pq, residual, errs)


def _compare_resampled(u: APath, v: APath) -> float:
    """Max difference of ``u`` against ``v`` evaluated at ``u``'s knots, away from ``v``'s break points."""
    worst = 0.0
    for sl in v.pieces():
        tv = v.t[sl]
        mask = (u.t > tv[0]) & (u.t < tv[-1])
        if mask.any():
            vals = CubicSpline(tv, v.fiber[sl], axis=0)(u.t[mask])
            worst = max(worst, float(np.abs(vals - u.fiber[mask]).max()))
    return worst
