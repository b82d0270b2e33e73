"""Acceptance criteria, one test each; every test records a PASS/FAIL line.

Run with pytest (lines appear in the terminal summary) or directly as a script.
"""

import random
import time

import numpy as np

from kanforge.algebroid import (
    ahomotopy_residual,
    concat,
    convergence_order,
    integrate_path,
    maurer_cartan_family,
    random_matrix_path,
    reparametrize,
    so3,
    sphere_family,
    su2,
)
from kanforge.groupoids import (
    FiniteGroupoid,
    LocalGroupoid,
    check_local_kan_properties,
    local_nerve,
    nerve,
    random_groupoid,
    string_of,
)
from kanforge.kan import kan_replace, kan_step, truncate
from kanforge.morita import check_hypercover, extract_local_groupoid, pullback_2groupoid, vertex_cover
from kanforge.pipeline import truncation_homotopy
from kanforge.simplicial import check_horn_filling, classify_n_groupoid, horn, simplicial_maps
from kanforge.sphere import (
    angle_between_paths,
    constant,
    geodesic,
    latitude_loop,
    meridian,
    random_arrow_config,
    sweep_family,
    sweep_winding,
    verify_arrow_identity,
)

RESULTS: list[str] = []
PI = np.pi


def record(n: int, name: str, ok: bool, elapsed: float, limit: float, detail: str) -> None:
    within = elapsed < limit
    verdict = "PASS" if ok and within else "FAIL"
    RESULTS.append(f"{verdict} criterion {n:2d} {name}: {detail} [{elapsed:.2f}s / {limit:g}s]")
    print(RESULTS[-1])
    assert ok, detail
    assert within, f"took {elapsed:.2f}s, limit {limit:g}s"


def test_criterion_01_census():
    t0 = time.perf_counter()
    X = nerve(FiniteGroupoid.cyclic(2), 3)
    Y, _ = kan_step(X, 3)
    two = kan_replace(X, 2, k_max=3).stages[2]
    c1, c2 = Y.census(), two.census()
    ok = c1[1] == 6 and c1[2] == 48 and c2[1] == 42
    record(1, "census", ok, time.perf_counter() - t0, 1, f"stage 1 levels 1,2 = {c1[1]},{c1[2]}; stage 2 level 1 = {c2[1]}")


def test_criterion_02_local_nerve():
    t0 = time.perf_counter()
    X = local_nerve(LocalGroupoid.integer_window(1), 3)
    sizes = X.census()
    bij = []
    for j in range(4):
        H = horn(3, j)
        hc = [c for d in range(3) for c in H.cores(d)]
        restricted = {tuple(X.apply(s, c) for c in hc) for s in X.level(3)}
        counted = len(restricted) == len(X.level(3)) == len(simplicial_maps(H, X))
        bij.append(counted and check_horn_filling(X, 3, j).restriction_bijective)
    rep = check_local_kan_properties(X)
    ok = sizes[2] == 7 and sizes[3] == 15 and all(bij) and rep.property_A_ok and rep.property_B_ok
    record(2, "local nerve", ok, time.perf_counter() - t0, 1,
           f"levels 2,3 = {sizes[2]},{sizes[3]}; Lambda[3,j] bijective {bij}; A={rep.property_A_ok} B={rep.property_B_ok}")


def test_criterion_03_kan_profile():
    t0 = time.perf_counter()
    rng = random.Random(2024)
    found = []
    for _ in range(5):
        G = random_groupoid(rng, max_objects=4, max_arrows=12)
        v = classify_n_groupoid(nerve(G, 3))
        unique_above_1 = all(r.restriction_bijective for r in v.reports if r.m >= 2)
        found.append((len(G.objects), len(G.arrows), v.n, unique_above_1))
    ok = all(n == 1 and u for _, _, n, u in found)
    record(3, "groupoid nerve Kan profile", ok, time.perf_counter() - t0, 10,
           "(objects, arrows, n, Kan! m>=2) " + " ".join(map(str, found)))


def test_criterion_04_truncation_homotopy():
    t0 = time.perf_counter()
    rows = []
    for label, G in (("Z/2", FiniteGroupoid.cyclic(2)), ("Z/3", FiniteGroupoid.cyclic(3)), ("S3", FiniteGroupoid.symmetric(3))):
        r = truncation_homotopy(G, depth=2, k_max=3, frontier=1)
        g = r.groups
        rows.append((label, g[0].order, g[1].order, r.isomorphism is not None, g[2].order))
    ok = all(p0 == 1 and iso and p2 == 1 for _, p0, _, iso, p2 in rows)
    record(4, "pi_i of truncated replacement", ok, time.perf_counter() - t0, 60,
           "(G, |pi0|, |pi1|, pi1 ~ G, |pi2|) " + " ".join(map(str, rows)))


def test_criterion_05_hypercover():
    t0 = time.perf_counter()
    X = nerve(FiniteGroupoid.cyclic(2), 3)
    star = X.level(0)[0]
    Z, f = pullback_2groupoid(X, vertex_cover(X, [0, 1], lambda a: star))
    h = check_hypercover(f, 2)
    z1 = len(Z.level(1))
    ok = h.ok and z1 == 8 and f.verify() == []
    record(5, "pullback hypercover", ok, time.perf_counter() - t0, 1, f"|Z1| = {z1}; hypercover(n=2) = {h.ok}")


def test_criterion_06_extraction():
    t0 = time.perf_counter()
    good_groups = []
    for G in (FiniteGroupoid.cyclic(3), FiniteGroupoid.symmetric(3), FiniteGroupoid.pair([0, 1, 2])):
        X = nerve(G, 2)
        L = extract_local_groupoid(X)
        arrow = lambda e, G=G: string_of(e, G)[0]  # noqa: E731
        same = sorted(map(arrow, L.arrows), key=G.arrows.index) == G.arrows
        same &= all(arrow(L.inverse[g]) == G.inverse[arrow(g)] for g in L.V)
        same &= all(
            arrow(L.mul(g, h)) == G.mul(arrow(g), arrow(h)) for g in L.V for h in L.V if L.source[g] == L.target[h]
        )
        good_groups.append(same)
    Xl = local_nerve(LocalGroupoid.integer_window(1), 3)
    Q = truncate(kan_replace(Xl, 1, k_max=3).top, 2).quotient
    L = extract_local_groupoid(Q, Xl.level(1))
    value = {e: sum(string_of(e, Xl.local_groupoid)) for e in Xl.level(1)}
    partial = True
    for a in L.V:
        partial &= value[L.inverse[a]] == -value[a]
        for b in L.V:
            c = L.mul(a, b)
            partial &= (value.get(c) == value[a] + value[b]) if abs(value[a] + value[b]) <= 1 else c not in value
    ok = all(good_groups) and partial and len(L.V) == 3
    record(6, "local groupoid round trip", ok, time.perf_counter() - t0, 10,
           f"groupoids reproduced {good_groups}; partial addition on V reproduced {partial} (|U| = {len(L.arrows)})")


def test_criterion_07_homotopy_pde():
    t0 = time.perf_counter()
    orders = {}
    for name, make in (("su(2) MC", lambda rng, M: maurer_cartan_family(su2(), rng, M)), ("S^2", sphere_family)):
        res = [ahomotopy_residual(make(np.random.default_rng(5), M)).residual for M in (100, 200, 400)]
        orders[name] = convergence_order([1e-2, 5e-3, 2.5e-3], res)
    ok = all(abs(o - 2) <= 0.3 for o in orders.values())
    record(7, "A-homotopy residual order", ok, time.perf_counter() - t0, 30,
           " ".join(f"{k}: {v:.3f}" for k, v in orders.items()))


def test_criterion_08_holonomy_area():
    t0 = time.perf_counter()
    X, Y, Z = np.eye(3)
    octant = angle_between_paths(geodesic(X, Z).then(geodesic(Z, Y)), geodesic(X, Y))
    lat = latitude_loop(PI / 3)
    latitude = angle_between_paths(constant(lat.start), lat)
    lune = angle_between_paths(meridian(PI / 4), meridian(0.0))
    errs = (abs(octant - PI / 2), abs(abs(latitude) - PI), abs(lune - PI / 2))
    ok = max(errs) < 1e-6
    record(8, "holonomy = area", ok, time.perf_counter() - t0, 10,
           f"octant {octant:.9f}, latitude {latitude:.9f}, lune {lune:.9f}; max error {max(errs):.1e}")


def test_criterion_09_arrow_identity():
    t0 = time.perf_counter()
    worst = 0.0
    for seed in range(200):
        worst = max(worst, verify_arrow_identity(random_arrow_config(np.random.default_rng(seed))).max_residual)
    ok = worst < 1e-5
    record(9, "arrow identity chain", ok, time.perf_counter() - t0, 60, f"200 configurations, max residual {worst:.2e}")


def test_criterion_10_sweep():
    t0 = time.perf_counter()
    p = np.array([0.2, -0.5, 0.8])
    fwd = sweep_winding(sweep_family(p))
    rev = sweep_winding(sweep_family(p, reverse=True))
    ok = fwd.winding == 2 and abs(fwd.change - 4 * PI) < 1e-4 and rev.winding == -2
    record(10, "sphere sweep winding", ok, time.perf_counter() - t0, 30,
           f"winding {fwd.winding} (change - 4 pi = {fwd.change - 4 * PI:.1e}), reversed {rev.winding}")


def test_criterion_11_endpoint_laws():
    t0 = time.perf_counter()
    worst_concat = worst_reparam = 0.0
    for seed in range(100):
        rng = np.random.default_rng(seed)
        model = su2() if seed % 2 == 0 else so3()
        p, q = random_matrix_path(model, rng, N=400), random_matrix_path(model, rng, N=400)
        gp, gq = integrate_path(p).endpoint, integrate_path(q).endpoint
        worst_concat = max(worst_concat, float(np.abs(integrate_path(concat(p, q)).endpoint - gq @ gp).max()))
        worst_reparam = max(worst_reparam, float(np.abs(integrate_path(reparametrize(p)).endpoint - gp).max()))
    ok = max(worst_concat, worst_reparam) < 1e-7
    record(11, "endpoint laws", ok, time.perf_counter() - t0, 30,
           f"100 pairs, concat {worst_concat:.1e}, reparametrization {worst_reparam:.1e}")


if __name__ == "__main__":
    import sys

    failed = 0
    for name, fn in sorted((k, v) for k, v in dict(globals()).items() if k.startswith("test_criterion")):
        try:
            fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
