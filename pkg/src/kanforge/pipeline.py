"""Homotopy groups of the 2-truncation of a finite Kan-replacement stage."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .groupoids import FiniteGroupoid, nerve
from .homotopy import HomotopyGroup, find_isomorphism, group_table, homotopy_group
from .kan import FilteredSimplicialSet, TruncationResult, kan_replace, stage_filter, truncate


@dataclass
class TruncationPi:
    replacement: FilteredSimplicialSet
    truncation: TruncationResult
    groups: dict  # i -> HomotopyGroup
    isomorphism: dict | None = None  # pi_1 -> isotropy of G, when G is given
    timings: dict = field(default_factory=dict)


def truncation_homotopy(
    G: FiniteGroupoid,
    depth: int = 2,
    k_max: int = 3,
    frontier: int | None = 1,
    dims=(0, 1, 2),
) -> TruncationPi:
    """``pi_i(tau_2(kan_replace(N G)))`` at the first object.

    Stage-0 spheres form the probe and fillers come from stages below the last
    one; classes born at the last stage have no homotopies yet.
    """
    t0 = time.perf_counter()
    X = nerve(G, 3)
    F = kan_replace(X, depth, k_max=k_max, frontier=frontier)
    t1 = time.perf_counter()
    T = truncate(F.top, 2)
    t2 = time.perf_counter()
    Q = T.quotient
    base = Q.vertex(G.objects[0])
    fill_ok = stage_filter(T, F.top, max(depth - 1, 0))
    stage0 = stage_filter(T, F.top, 0)
    groups: dict[int, HomotopyGroup] = {}
    for i in dims:
        if i == 0:
            groups[0] = homotopy_group(Q, base, 0)
        else:
            probe = [s for s in Q.nondegenerate(i) if stage0(s)]
            groups[i] = homotopy_group(Q, base, i, probe=probe, filler_ok=fill_ok)
    iso = None
    if 1 in groups:
        p = groups[1]
        iso = find_isomorphism(p.elements, p.table, p.identity, *group_table(G))
    t3 = time.perf_counter()
    return TruncationPi(F, T, groups, iso, {"replace": t1 - t0, "truncate": t2 - t1, "homotopy": t3 - t2})
