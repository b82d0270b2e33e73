"""Command-line front end.  Exit status: 0 success, 1 verification failure, 2 parse or input error."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import algebroid as alg
from . import io
from . import sphere as sph
from .groupoids import (
    FiniteGroupoid,
    LocalGroupoid,
    bigon_groupoid,
    check_local_kan_properties,
    local_nerve,
    nerve,
)
from .homotopy import homotopy_group
from .kan import kan_replace, truncate
from .morita import check_hypercover, extract_local_groupoid, pullback_2groupoid, vertex_cover
from .pipeline import truncation_homotopy
from .simplicial import FiniteSimplicialSet, SimplicialError, classify_n_groupoid

ARROW_TOL = 1e-5


@dataclass
class RunReport:
    command: str
    inputs: dict = field(default_factory=dict)  # path -> sha256 prefix
    caps: dict = field(default_factory=dict)
    verdicts: dict = field(default_factory=dict)
    residuals: dict = field(default_factory=dict)
    censuses: dict = field(default_factory=dict)
    threads: int = 1
    wall_time: float | None = None
    ok: bool = True

    def fail(self, key: str, value) -> None:
        self.verdicts[key] = value
        self.ok = False


class InputError(Exception):
    pass


def threads() -> int:
    """``KANFORGE_THREADS`` is read and reported; kernels run sequentially."""
    raw = os.environ.get("KANFORGE_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise InputError(f"KANFORGE_THREADS must be an integer, got {raw!r}") from None


# ---------------------------------------------------------------------------
# Inputs


def _load(path: str, report: RunReport):
    try:
        kind, value, text = io.read(path)
    except (OSError, io.FormatError) as e:
        raise InputError(f"{path}: {e}") from None
    report.inputs[path] = io.digest(text)
    return kind, value


def _group(label: str) -> FiniteGroupoid:
    label = label.strip()
    if label.upper() in ("S3", "S_3"):
        return FiniteGroupoid.symmetric(3)
    if label.upper().startswith("Z/"):
        return FiniteGroupoid.cyclic(int(label[2:]))
    raise InputError(f"unknown group {label!r} (use Z/n or S3)")


def _simplicial(args, report: RunReport, dim: int = 3) -> FiniteSimplicialSet:
    """A simplicial set from --in (set or groupoid file) or --group."""
    if getattr(args, "group", None):
        return nerve(_group(args.group), dim)
    if not getattr(args, "input", None):
        raise InputError("need --in or --group")
    kind, value = _load(args.input, report)
    if kind == "simplicial_set":
        return value
    if kind == "groupoid":
        return nerve(value, dim)
    if kind == "local_groupoid":
        return local_nerve(value, dim)
    raise InputError(f"{args.input}: expected a simplicial set or groupoid, found {kind}")


def _groupoid(args, report: RunReport) -> FiniteGroupoid:
    if getattr(args, "group", None):
        return _group(args.group)
    kind, value = _load(args.input, report)
    if kind != "groupoid":
        raise InputError(f"{args.input}: expected a groupoid, found {kind}")
    return value


def _emit(args, doc: dict) -> None:
    if getattr(args, "emit", None):
        io.write(args.emit, doc)


def _matrix_model(name: str):
    return {"so3": alg.so3, "su2": alg.su2}[name]()


def _path(args, report: RunReport, which: str, rng) -> alg.APath:
    src = getattr(args, which, None)
    if src:
        kind, value = _load(src, report)
        if kind != "path":
            raise InputError(f"{src}: expected a path, found {kind}")
        return value
    return alg.random_matrix_path(_matrix_model(args.model), rng, args.samples)


# ---------------------------------------------------------------------------
# Commands


def cmd_check_kan(args, r: RunReport):
    X = _simplicial(args, r, dim=max(3, (args.nmax or 1) + 2))
    v = classify_n_groupoid(X, args.nmax)
    r.caps["nmax"] = args.nmax
    r.verdicts["classification"] = v.describe()
    r.verdicts["checked_up_to"] = v.checked_up_to
    r.verdicts["horns"] = [rep.label for rep in v.reports]
    if not v.ok:
        r.ok = False


def cmd_nerve(args, r: RunReport):
    G = _groupoid(args, r)
    X = nerve(G, args.dim)
    r.caps["dim"] = args.dim
    r.censuses["levels"] = X.census()
    r.censuses["nondegenerate"] = X.census(True)
    r.verdicts["identity_violations"] = len(X.check_identities())
    _emit(args, io.simplicial_to_doc(X))


def cmd_local_nerve(args, r: RunReport):
    if args.input:
        kind, L = _load(args.input, r)
        if kind != "local_groupoid":
            raise InputError(f"{args.input}: expected a local groupoid")
    else:
        L = LocalGroupoid.integer_window(args.window)
    X = local_nerve(L, args.dim)
    rep = check_local_kan_properties(X, max_m=min(args.dim, 3))
    r.censuses["levels"] = X.census()
    r.verdicts["property_A"] = rep.property_A_ok
    r.verdicts["property_B"] = rep.property_B_ok
    r.verdicts["classification"] = classify_n_groupoid(X).describe()
    r.ok = rep.property_A_ok and rep.property_B_ok
    _emit(args, io.simplicial_to_doc(X))


def cmd_bigons(args, r: RunReport):
    Y = _simplicial(args, r)
    B = bigon_groupoid(Y)
    r.censuses["bigons"] = len(B.arrows)
    r.censuses["objects"] = len(B.objects)
    r.verdicts["groupoid_violations"] = len(B.violations())
    r.ok = not B.violations()
    _emit(args, io.groupoid_to_doc(B))


def _cover(X: FiniteSimplicialSet, k: int, dim: int):
    Z0 = [(v[0], i) for v in X.level(0) for i in range(k)]
    cov = vertex_cover(X, Z0, lambda z: (z[0], (0,)))
    return pullback_2groupoid(X, cov, top_dim=dim)


def cmd_hypercover(args, r: RunReport):
    X = _simplicial(args, r, dim=max(3, args.n))
    Z, f = _cover(X, args.cover, args.n)
    h = check_hypercover(f, args.n)
    r.caps.update(cover=args.cover, n=args.n)
    r.censuses["Z"] = Z.census()
    r.verdicts["levels"] = [
        {"k": v.k, "required": v.required, "surjective": v.surjective, "injective": v.injective} for v in h.per_level_verdicts
    ]
    r.verdicts["hypercover"] = h.ok
    r.ok = h.ok


def cmd_pullback(args, r: RunReport):
    X = _simplicial(args, r, dim=max(3, args.dim))
    Z, f = _cover(X, args.cover, args.dim)
    r.caps.update(cover=args.cover, dim=args.dim)
    r.censuses["Z"] = Z.census()
    r.verdicts["map_violations"] = len(f.verify())
    r.ok = not f.verify()
    _emit(args, io.simplicial_to_doc(Z))


def cmd_kan_replace(args, r: RunReport):
    X = _simplicial(args, r)
    F = kan_replace(X, args.depth, k_max=args.k_max, frontier=args.frontier, max_cells=args.max_cells)
    r.caps.update(depth=args.depth, k_max=args.k_max, frontier=args.frontier, max_cells=args.max_cells)
    r.censuses["stages"] = F.censuses()
    r.verdicts["partial"] = F.partial
    if args.census:
        print(" ".join(map(str, F.top.census())), file=sys.stderr)
    _emit(args, io.simplicial_to_doc(F.top))


def cmd_truncate(args, r: RunReport):
    X = _simplicial(args, r)
    F = kan_replace(X, args.depth, k_max=args.k_max, frontier=args.frontier)
    T = truncate(F.top, args.n)
    r.caps.update(depth=args.depth, k_max=args.k_max, frontier=args.frontier, n=args.n)
    r.censuses["quotient"] = T.quotient.census()
    r.verdicts["kan_unique"] = T.kan_unique
    _emit(args, io.simplicial_to_doc(T.quotient))


def cmd_homotopy(args, r: RunReport):
    r.caps.update(depth=args.depth, k_max=args.k_max, frontier=args.frontier)
    if args.input and not args.group:
        kind, value = _load(args.input, r)
        if kind == "simplicial_set":
            v = value.level(0)[0]
            g = homotopy_group(value, v, args.i)
            r.verdicts[f"pi_{args.i}_order"] = g.order
            return
        if kind != "groupoid":
            raise InputError("homotopy needs a groupoid or a simplicial set")
        G = value
    else:
        G = _group(args.group)
    res = truncation_homotopy(G, args.depth, args.k_max, args.frontier)
    for i, g in res.groups.items():
        r.verdicts[f"pi_{i}_order"] = g.order
    r.verdicts["pi_1_isomorphic_to_G"] = res.isomorphism is not None
    r.ok = res.isomorphism is not None and res.groups[0].order == 1 and res.groups[2].order == 1


def cmd_extract_local(args, r: RunReport):
    if args.input:
        kind, value = _load(args.input, r)
    else:
        kind, value = "local_groupoid", LocalGroupoid.integer_window(args.window)
    if kind == "simplicial_set":
        L = extract_local_groupoid(value)
    elif kind == "groupoid":
        L = extract_local_groupoid(nerve(value, 3))
    elif kind == "local_groupoid":
        X = local_nerve(value, 3)
        F = kan_replace(X, 1, k_max=3)
        T = truncate(F.top, 2)
        L = extract_local_groupoid(T.quotient, X.level(1))
    else:
        raise InputError(f"cannot extract from {kind}")
    r.censuses.update(objects=len(L.objects), U=len(L.arrows), V=len(L.V))
    _emit(args, io.groupoid_to_doc(L))


def cmd_integrate(args, r: RunReport):
    p = _path(args, r, "input", np.random.default_rng(args.seed))
    g = alg.integrate_path(p).endpoint
    r.residuals["endpoint"] = io._arr_out(g)
    r.residuals["apath_residual"] = alg.apath_residual(p)


def cmd_concat(args, r: RunReport):
    rng = np.random.default_rng(args.seed)
    p, q = _path(args, r, "input", rng), _path(args, r, "input2", rng)
    pq = alg.concat(p, q)
    gp, gq, gpq = (alg.integrate_path(x).endpoint for x in (p, q, pq))
    dev = float(np.abs(gpq - gq @ gp).max())
    r.residuals["endpoint_law"] = dev
    r.ok = dev < args.tol
    _emit(args, io.path_to_doc(pq))


def cmd_residual(args, r: RunReport):
    if args.input:
        kind, value = _load(args.input, r)
        if kind == "path":
            r.residuals["apath"] = alg.apath_residual(value)
        elif kind == "homotopy":
            hr = alg.ahomotopy_residual(value)
            r.residuals.update(homotopy=hr.residual, boundary=hr.boundary)
            r.ok = hr.boundary_ok
        else:
            raise InputError(f"no residual for {kind}")
        return
    grids = [int(x) for x in args.grids.split(",")]
    res = []
    for n in grids:
        rng = np.random.default_rng(args.seed)
        H = alg.sphere_family(rng, n) if args.family == "sphere" else alg.maurer_cartan_family(_matrix_model(args.model), rng, n)
        res.append(alg.ahomotopy_residual(H).residual)
    order = alg.convergence_order([1 / n for n in grids], res)
    r.caps.update(family=args.family, grids=grids)
    r.residuals.update(residuals=res, order=order)
    r.ok = abs(order - 2.0) <= 0.3


def _config(name: str, theta: float, alpha: float):
    ex, ey, ez = np.eye(3)
    if name == "octant":
        return sph.geodesic(ex, ez).then(sph.geodesic(ez, ey)), sph.geodesic(ex, ey), None
    if name == "latitude":
        L = sph.latitude_loop(theta)
        return sph.constant(L.start), L, ez
    if name == "lune":
        mid = [np.cos(alpha / 2), np.sin(alpha / 2), 0]
        return sph.meridian(alpha), sph.meridian(0.0), mid
    raise InputError(f"unknown configuration {name!r}")


def cmd_transport(args, r: RunReport):
    ez = np.array([0.0, 0.0, 1.0])
    if args.path == "latitude":
        L = sph.latitude_loop(args.theta)
        xi = sph.some_tangent(L.start)
        v = sph.parallel_transport(L, xi, args.samples)
        r.residuals["rotation"] = sph.tangent_angle(xi, v, L.start)
        r.residuals["expected"] = float(sph.wrap(2 * np.pi * (1 - np.cos(args.theta))))
    else:
        g = sph.geodesic([1.0, 0, 0], sph.unit([0.2, 0.5, 0.8]))
        xi = np.cross(g.start, ez)
        v = sph.parallel_transport(g, xi, args.samples)
        r.residuals["norm_drift"] = float(abs(np.linalg.norm(v) - np.linalg.norm(xi)))
        r.residuals["tangency"] = float(abs(np.dot(v, g.end)))


def cmd_angle(args, r: RunReport):
    g1, g2, _ = _config(args.config, args.theta, args.alpha)
    r.residuals["angle"] = sph.angle_between_paths(g1, g2, n=args.samples)


def cmd_area(args, r: RunReport):
    g1, g2, apex = _config(args.config, args.theta, args.alpha)
    r.residuals["area"] = sph.enclosed_area(g1, g2, apex=apex)


def _arrow_suite(seed: int, configs: int, r: RunReport):
    rng = np.random.default_rng(seed)
    worst: dict = {}
    for _ in range(configs):
        rep = sph.verify_arrow_identity(sph.random_arrow_config(rng))
        for k, v in rep.residuals.items():
            worst[k] = max(worst.get(k, 0.0), v)
    m = max(worst.values()) if worst else 0.0
    r.caps.update(seed=seed, configs=configs)
    r.residuals["arrow_identity"] = worst
    r.residuals["arrow_max"] = m
    if m >= ARROW_TOL:
        r.fail("arrow_identity", f"max residual {m:.3e} >= {ARROW_TOL}")


def cmd_arrow_suite(args, r: RunReport):
    _arrow_suite(args.seed, args.configs, r)


def cmd_sweep(args, r: RunReport):
    res = sph.sweep_winding(sph.sweep_family([0, 0, 1], reverse=args.reverse), m=args.steps)
    r.residuals.update(change=res.change, rounding_distance=res.rounding_distance)
    r.verdicts["winding"] = res.winding


def cmd_sphere_suite(args, r: RunReport):
    _arrow_suite(args.seed, args.configs, r)
    for name, want in (("octant", np.pi / 2), ("latitude", np.pi), ("lune", np.pi / 2)):
        g1, g2, _ = _config(name, np.pi / 3, np.pi / 4)
        dev = abs(sph.wrap(sph.angle_between_paths(g1, g2) - want))
        r.residuals[f"{name}_angle"] = dev
        if dev > 1e-6:
            r.fail(f"{name}_angle", dev)
    for rev, want in ((False, 2), (True, -2)):
        w = sph.sweep_winding(sph.sweep_family([0, 0, 1], reverse=rev)).winding
        r.verdicts[f"sweep{'_reversed' if rev else ''}"] = w
        if w != want:
            r.fail("sweep", w)


def cmd_validate(args, r: RunReport):
    try:
        value, diags = io.validate(args.input)
        r.inputs[args.input] = io.digest(open(args.input).read())
    except OSError as e:
        raise InputError(str(e)) from None
    r.verdicts["diagnostics"] = [str(d) for d in diags]
    r.verdicts["type"] = type(value).__name__ if value is not None else None
    r.ok = not diags


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=argparse.SUPPRESS, help="report file (default: standard output)")
    common.add_argument("--no-timing", action="store_true", default=argparse.SUPPRESS, help="omit wall time (for byte-identical reruns)")
    ap = argparse.ArgumentParser(prog="kanforge", description=__doc__, parents=[common])
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, *, inp=False, group=False, emit=False):
        p = sub.add_parser(name, parents=[common])
        p.set_defaults(fn=fn)
        if inp:
            p.add_argument("--in", dest="input")
        if group:
            p.add_argument("--group", help="Z/n or S3")
        if emit:
            p.add_argument("--emit", help="write the constructed object here")
        return p

    def kan_caps(p, depth=1, k_max=3):
        p.add_argument("--depth", type=int, default=depth)
        p.add_argument("--k-max", type=int, default=k_max)
        p.add_argument("--frontier", type=int, default=None)

    p = add("check-kan", cmd_check_kan, inp=True, group=True)
    p.add_argument("--nmax", type=int, default=None)
    p = add("nerve", cmd_nerve, inp=True, group=True, emit=True)
    p.add_argument("--dim", type=int, default=3)
    p = add("local-nerve", cmd_local_nerve, inp=True, emit=True)
    p.add_argument("--window", type=int, default=1)
    p.add_argument("--dim", type=int, default=4)
    add("bigons", cmd_bigons, inp=True, group=True, emit=True)
    p = add("hypercover", cmd_hypercover, inp=True, group=True)
    p.add_argument("--cover", type=int, default=2)
    p.add_argument("--n", type=int, default=2)
    p = add("pullback", cmd_pullback, inp=True, group=True, emit=True)
    p.add_argument("--cover", type=int, default=2)
    p.add_argument("--dim", type=int, default=2)
    p = add("kan-replace", cmd_kan_replace, inp=True, group=True, emit=True)
    kan_caps(p)
    p.add_argument("--max-cells", type=int, default=None)
    p.add_argument("--census", action="store_true", help="also print the top census to stderr")
    p = add("truncate", cmd_truncate, inp=True, group=True, emit=True)
    kan_caps(p)
    p.add_argument("--n", type=int, default=2)
    p = add("homotopy", cmd_homotopy, inp=True, group=True)
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--k-max", type=int, default=3)
    p.add_argument("--frontier", type=int, default=1)
    p.add_argument("--i", type=int, default=1)
    p = add("extract-local", cmd_extract_local, inp=True, emit=True)
    p.add_argument("--window", type=int, default=1)

    def path_opts(p, two=False):
        p.add_argument("--in", dest="input")
        if two:
            p.add_argument("--in2", dest="input2")
        p.add_argument("--model", choices=("su2", "so3"), default="su2")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--samples", type=int, default=1000)

    path_opts(add("integrate", cmd_integrate))
    p = add("concat", cmd_concat, emit=True)
    path_opts(p, two=True)
    p.add_argument("--tol", type=float, default=1e-7)
    p = add("residual", cmd_residual, inp=True)
    p.add_argument("--family", choices=("mc", "sphere"), default="mc")
    p.add_argument("--model", choices=("su2", "so3"), default="su2")
    p.add_argument("--grids", default="100,200,400")
    p.add_argument("--seed", type=int, default=0)
    p = add("transport", cmd_transport)
    p.add_argument("--path", choices=("latitude", "geodesic"), default="latitude")
    p.add_argument("--theta", type=float, default=np.pi / 3)
    p.add_argument("--samples", type=int, default=1000)
    for name, fn in (("angle", cmd_angle), ("area", cmd_area)):
        p = add(name, fn)
        p.add_argument("--config", choices=("octant", "latitude", "lune"), default="octant")
        p.add_argument("--theta", type=float, default=np.pi / 3)
        p.add_argument("--alpha", type=float, default=np.pi / 4)
        p.add_argument("--samples", type=int, default=1000)
    for name, fn in (("arrow-suite", cmd_arrow_suite), ("sphere-suite", cmd_sphere_suite)):
        p = add(name, fn)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--configs", type=int, default=200)
    p = add("sweep", cmd_sweep)
    p.add_argument("--reverse", action="store_true")
    p.add_argument("--steps", type=int, default=64)
    p = add("validate", cmd_validate)
    p.add_argument("--in", dest="input", required=True)
    return ap


def _json_default(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    return repr(x)


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)  # exits with status 2 on parse errors
    args.out = getattr(args, "out", None)
    args.no_timing = getattr(args, "no_timing", False)
    report = RunReport(args.command)
    t0 = time.perf_counter()
    try:
        report.threads = threads()
        args.fn(args, report)
    except InputError as e:
        print(f"kanforge: error: {e}", file=sys.stderr)
        return 2
    except (SimplicialError, alg.AlgebroidError, sph.SphereError, ValueError) as e:
        report.fail("error", str(e))
    if not args.no_timing:
        report.wall_time = round(time.perf_counter() - t0, 6)
    text = json.dumps(asdict(report), indent=2, sort_keys=True, default=_json_default) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
