"""Kan replacement by iterated horn-filling pushouts, truncation, and word evaluation."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Hashable, NamedTuple

from .simplicial import (
    FiniteSimplicialSet,
    KanError,
    SimplicialError,
    SimplicialMap,
    check_horn_filling,
    horn,
    identity_surj,
    iter_simplicial_maps,
)


class Cell(NamedTuple):
    """A simplex adjoined at ``stage`` for the ``idx``-th map of Lambda[k, j]; ``role`` is "face" or "fill"."""

    stage: int
    role: str
    k: int
    j: int
    idx: int


class Filled(NamedTuple):
    """Top-level simplex of a truncation, identified by its boundary."""

    faces: tuple


def horn_set(k_max: int) -> list[tuple[int, int]]:
    """Lambda[2,1] together with every Lambda[k, j] for 3 <= k <= k_max."""
    J = [(2, 1)] if k_max >= 2 else []
    for k in range(3, k_max + 1):
        J += [(k, j) for j in range(k + 1)]
    return J


def _horn_cores(k: int, j: int) -> list:
    H = horn(k, j)
    return [c for d in range(k) for c in H.cores(d)]


@dataclass
class FilteredSimplicialSet:
    stages: list  # X^0, X^1, ...
    provenance: dict = field(default_factory=dict)  # Cell -> {horn core: simplex of previous stage}
    k_max: int = 4
    frontier: int | None = None
    partial: bool = False
    stage_times: list = field(default_factory=list)

    @property
    def base(self) -> FiniteSimplicialSet:
        return self.stages[0]

    @property
    def top(self) -> FiniteSimplicialSet:
        return self.stages[-1]

    @property
    def depth(self) -> int:
        return len(self.stages) - 1

    def new_cells(self, stage: int) -> list:
        return [c for c in self.provenance if c.stage == stage]

    def censuses(self) -> list[list[int]]:
        return [X.census() for X in self.stages]


def kan_step(
    X: FiniteSimplicialSet,
    k_max: int = 4,
    stage: int = 1,
    max_cells: int | None = None,
    frontier: int | None = None,
):
    """One pushout stage: a new missing face and a new top cell for every horn map in J.

    ``frontier`` caps, for horns of dimension at least 3, how many
    ``(k-1)``-faces may have cores adjoined in the previous stage; horns over
    older simplices are always filled.  Returns ``(X_next, provenance)``, or
    ``(None, partial_provenance)`` when the cell budget is exceeded.
    """
    if k_max > X.top_dim:
        raise SimplicialError(f"k_max={k_max} exceeds top_dim={X.top_dim}")
    cores = {k: X.cores(k) for k in range(X.top_dim + 1)}
    faces = {k: {c: X.core_faces(k, c) for c in X.cores(k)} for k in range(1, X.top_dim + 1)}
    prov: dict = {}
    n_new = 0
    for k, j in horn_set(k_max):
        hc = _horn_cores(k, j)
        F = tuple(i for i in range(k + 1) if i != j)
        fill_faces_src = [tuple(v for v in range(k + 1) if v != i) for i in range(k + 1)]
        admit = None
        if frontier is not None and k >= 3:
            tops = [(k - 1, c) for c in hc if len(c) == k]

            def admit(a, dim, core, val, tops=tops):
                if dim != k - 1 or not _is_fresh(val[0], stage - 1):
                    return True
                return sum(1 for key in tops if key in a and _is_fresh(a[key][0], stage - 1)) < frontier

        for idx, a in enumerate(iter_simplicial_maps(horn(k, j), X, admit)):
            h = {c: a[(len(c) - 1, c)] for c in hc}
            fc = Cell(stage, "face", k, j, idx)
            tc = Cell(stage, "fill", k, j, idx)
            fcf = tuple(h[F[:i] + F[i + 1 :]] for i in range(k))
            tcf = tuple((fc, identity_surj(k - 1)) if i == j else h[fill_faces_src[i]] for i in range(k + 1))
            cores[k - 1].append(fc)
            cores[k].append(tc)
            faces.setdefault(k - 1, {})
            if k - 1 >= 1:
                faces[k - 1][fc] = fcf
            faces[k][tc] = tcf
            prov[fc] = prov[tc] = h
            n_new += 2
            if max_cells is not None and n_new > max_cells:
                return None, prov
    Y = FiniteSimplicialSet(X.top_dim, cores, faces, name=f"{X.name}^{stage}", validate=False)
    return Y, prov


def _is_fresh(core, stage: int) -> bool:
    return isinstance(core, Cell) and core.stage == stage and stage >= 1


def kan_replace(
    X: FiniteSimplicialSet,
    depth: int = 2,
    k_max: int = 4,
    max_cells: int | None = None,
    check_properties: bool = True,
    frontier: int | None = None,
) -> FilteredSimplicialSet:
    """Iterate ``kan_step`` ``depth`` times.

    ``check_properties`` verifies Property B on the base (the later stages
    freely add composites and do not satisfy it).  When the cell budget runs
    out the stages built so far are returned with ``partial`` set.
    """
    if check_properties and X.top_dim >= 2 and k_max >= 2:
        from .groupoids import check_local_kan_properties

        rep = check_local_kan_properties(X, max_m=2)
        if not (rep.property_A_ok and rep.property_B_ok):
            raise SimplicialError(f"base fails Property A/B: {rep.counterexamples[:1]}")
    F = FilteredSimplicialSet([X], {}, k_max, frontier)
    for s in range(1, depth + 1):
        t0 = time.perf_counter()
        budget = None if max_cells is None else max_cells - len(F.provenance)
        Y, prov = kan_step(F.top, k_max, s, budget, frontier)
        if Y is None:
            F.partial = True
            break
        F.stages.append(Y)
        F.provenance.update(prov)
        F.stage_times.append(time.perf_counter() - t0)
    return F


def hom_count(A: FiniteSimplicialSet, X: FiniteSimplicialSet) -> int:
    return sum(1 for _ in iter_simplicial_maps(A, X))


def predicted_census(X: FiniteSimplicialSet, k_max: int) -> list[int]:
    """Level sizes of ``kan_step(X)`` from hom-set counts.

    A horn of dimension ``k`` contributes a new ``(k-1)``-cell and a new
    ``k``-cell; at level ``n`` each new ``d``-cell appears with its
    ``C(n, d)`` degeneracies.
    """
    from math import comb

    D = X.top_dim
    new_by_dim = [0] * (D + 1)
    for k, j in horn_set(k_max):
        c = hom_count(horn(k, j), X)
        new_by_dim[k - 1] += c
        new_by_dim[k] += c
    base = X.census()
    return [base[n] + sum(new_by_dim[d] * comb(n, d) for d in range(n + 1)) for n in range(D + 1)]


# ---------------------------------------------------------------------------
# Truncation


class _UF:
    def __init__(self, items):
        self.p = {x: x for x in items}

    def find(self, x):
        p = self.p
        r = x
        while p[r] != r:
            r = p[r]
        while p[x] != r:
            p[x], x = r, p[x]
        return r

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.p[rb] = ra
        return True


@dataclass
class TruncationResult:
    quotient: FiniteSimplicialSet
    n: int
    classes: dict  # representative n-simplex -> members
    class_of: dict  # n-simplex of the source -> representative in the quotient
    witnesses: list  # (x, y, z) for each merge performed
    top_map: dict = field(default_factory=dict)  # (n+1)-simplex of the source -> quotient simplex
    kan_unique: dict = field(default_factory=dict)  # j -> restriction to Lambda[n+1, j] injective
    kan_surjective: dict = field(default_factory=dict)

    @property
    def is_n_groupoid_top(self) -> bool:
        return all(self.kan_unique.values()) and all(self.kan_surjective.values())

    def quotient_map(self, X: FiniteSimplicialSet) -> SimplicialMap:
        """The projection from ``X`` (truncated at the quotient's top level)."""
        Q = self.quotient
        a = {}
        for k in range(Q.top_dim + 1):
            for c in X.cores(k):
                s = (c, identity_surj(k))
                a[(k, c)] = s if k < self.n else self.class_of[s] if k == self.n else self.top_map[s]
        return SimplicialMap(X.truncated(Q.top_dim), Q, a)


def top_fillers_unique(Q: FiniteSimplicialSet, m: int, j: int, exhaustive: bool = False) -> bool:
    """Is ``Q_m -> hom(Lambda[m, j], Q)`` injective?

    Two distinct degenerate simplices never share ``m`` faces, so a collision
    involves a core, and a degenerate partner of a core ``z`` must be
    ``s_i y`` with ``y`` among the horn faces ``d_i z``, ``d_{i+1} z``.  The
    ``exhaustive`` route compares every pair of ``m``-simplices instead.
    """

    def key(s):
        return tuple(Q.face(s, i) for i in range(m + 1) if i != j)

    if exhaustive:
        seen: dict = {}
        return all(seen.setdefault(key(s), s) == s for s in Q.level(m))
    seen = {}
    for z in Q.nondegenerate(m):
        fz = Q.core_faces(m, z[0])
        kz = tuple(fz[i] for i in range(m + 1) if i != j)
        if seen.setdefault(kz, z) != z:
            return False
        for i in range(m):
            for y in {fz[t] for t in (i, i + 1) if t != j}:
                if len(y[1]) == m and key(Q.degeneracy(y, i)) == kz:
                    return False
    return True


def truncate(
    X: FiniteSimplicialSet, n: int, D_out: int | None = None, check_surjective: bool = False, exhaustive: bool = False
) -> TruncationResult:
    """Quotient ``X_n`` by homotopy relative to the ``(n-1)``-skeleton.

    ``x ~ y`` when some ``z`` has ``d_n z = x``, ``d_{n+1} z = y`` and
    ``d_i z = s_{n-1} d_i x`` for ``i < n``; the relation is closed
    transitively.  With ``D_out = n + 1`` the top level is rebuilt from the
    distinct quotient boundaries of ``X_{n+1}``.
    """
    D_out = n + 1 if D_out is None else D_out
    if X.top_dim < n + 1:
        raise SimplicialError(f"truncation at {n} needs level {n + 1}")
    if D_out not in (n, n + 1):
        raise SimplicialError("D_out must be n or n + 1")
    lvl = X.level(n)
    uf = _UF(lvl)
    witnesses = []
    # a degenerate witness z = s_j w always has d_n z = d_{n+1} z, so only cores are scanned
    for zc in X.cores(n + 1):
        fz = X.core_faces(n + 1, zc)
        x, y = fz[n], fz[n + 1]
        if n >= 1 and any(fz[i] != X.degeneracy(X.face(x, i), n - 1) for i in range(n)):
            continue
        if uf.union(x, y):
            witnesses.append((x, y, (zc, identity_surj(n + 1))))
    members: dict = {}
    for x in lvl:
        members.setdefault(uf.find(x), []).append(x)
    rep_of_root = {}
    for root, ms in members.items():
        degen = [m for m in ms if X.is_degenerate(m)]
        if len(degen) > 1:
            raise SimplicialError(f"truncation identifies distinct degenerate simplices {degen[0]!r} and {degen[1]!r}")
        rep_of_root[root] = degen[0] if degen else ms[0]
    class_of = {x: rep_of_root[uf.find(x)] for x in lvl}
    classes = {rep_of_root[r]: ms for r, ms in members.items()}

    cores = {k: X.cores(k) for k in range(n)}
    cores[n] = [r[0] for r in classes if not X.is_degenerate(r)]
    faces = {k: {c: X.core_faces(k, c) for c in X.cores(k)} for k in range(1, n)}
    if n >= 1:
        faces[n] = {c: X.core_faces(n, c) for c in cores[n]}
    if D_out == n:
        Q = FiniteSimplicialSet(n, cores, faces, name=f"tau{n}({X.name})", validate=False)
        return TruncationResult(Q, n, classes, class_of, witnesses)

    shell = FiniteSimplicialSet(n + 1, cores, faces, validate=False)
    degen_bd = {shell.faces(s): s for s in shell.level(n + 1)}
    top_map = {}
    new: dict = {}
    # degenerate (n+1)-simplices map to degenerate ones; only cores can create new top cells
    for zc in X.cores(n + 1):
        z = (zc, identity_surj(n + 1))
        bd = tuple(class_of[f] for f in X.core_faces(n + 1, zc))
        s = degen_bd.get(bd)
        if s is None:
            s = new.get(bd)
            if s is None:
                s = new[bd] = (Filled(bd), identity_surj(n + 1))
        top_map[z] = s
    cores[n + 1] = [s[0] for s in new.values()]
    faces[n + 1] = {s[0]: s[0].faces for s in new.values()}
    Q = FiniteSimplicialSet(n + 1, cores, faces, name=f"tau{n}({X.name})", validate=False)
    res = TruncationResult(Q, n, classes, class_of, witnesses, top_map)
    for j in range(n + 2):
        res.kan_unique[j] = top_fillers_unique(Q, n + 1, j, exhaustive=exhaustive)
        if check_surjective:
            res.kan_surjective[j] = check_horn_filling(Q, n + 1, j).restriction_surjective
    return res


# ---------------------------------------------------------------------------
# Evaluation of formal composites


@dataclass
class Evaluation:
    """Map from the top stage to the base; ``None`` values mark undefined cells."""

    source: FiniteSimplicialSet
    target: FiniteSimplicialSet
    assignment: dict  # (k, core) -> simplex of target or None

    @property
    def undefined(self) -> list:
        return [key for key, v in self.assignment.items() if v is None]

    def __call__(self, s):
        core, surj = s
        v = self.assignment[(surj[-1], core)]
        return None if v is None else self.target.apply(v, surj)

    def verify(self) -> list:
        """Face compatibility failures on every core where the map is defined."""
        bad = []
        for (k, c), v in self.assignment.items():
            if v is None or k == 0:
                continue
            for i, f in enumerate(self.source.core_faces(k, c)):
                fv = self(f)
                if fv is None or self.target.face(v, i) != fv:
                    bad.append((k, c, i))
        return bad

    def as_map(self) -> SimplicialMap:
        if self.undefined:
            raise KanError(f"evaluation undefined on {len(self.undefined)} cells")
        return SimplicialMap(self.source, self.target, dict(self.assignment))


def evaluate_words(F: FilteredSimplicialSet, stage: int | None = None) -> Evaluation:
    """Send each adjoined cell to the base's unique filler of its evaluated horn.

    Fill cells go to the filler, face cells to its missing face.  When the
    base has no filler (a product leaving ``V`` in a local nerve) the cell is
    marked undefined, as is everything glued to it.
    """
    stage = F.depth if stage is None else stage
    X = F.base
    Y = F.stages[stage]
    a: dict = {}
    for k in range(X.top_dim + 1):
        for c in X.cores(k):
            a[(k, c)] = (c, identity_surj(k))
    fill_index: dict = {}

    def lookup(k, j, key):
        if (k, j) not in fill_index:
            hc = _horn_cores(k, j)
            ix: dict = {}
            for w in X.level(k):
                ix.setdefault(tuple(X.apply(w, c) for c in hc), []).append(w)
            fill_index[(k, j)] = (hc, ix)
        hc, ix = fill_index[(k, j)]
        return ix.get(key, ())

    def ev(s):
        core, surj = s
        v = a[(surj[-1], core)]
        return None if v is None else X.apply(v, surj)

    for st in range(1, stage + 1):
        for cell in (c for c in F.provenance if c.stage == st and c.role == "fill"):
            h = F.provenance[cell]
            hc = _horn_cores(cell.k, cell.j)
            vals = tuple(ev(h[c]) for c in hc)
            fc = cell._replace(role="face")
            if any(v is None for v in vals):
                a[(cell.k, cell)] = a[(cell.k - 1, fc)] = None
                continue
            fillers = lookup(cell.k, cell.j, vals)
            if len(fillers) > 1:
                raise KanError(f"base has {len(fillers)} fillers for {cell!r}; evaluation is not unique")
            if not fillers:
                a[(cell.k, cell)] = a[(cell.k - 1, fc)] = None
                continue
            w = fillers[0]
            a[(cell.k, cell)] = w
            a[(cell.k - 1, fc)] = X.face(w, cell.j)
    return Evaluation(Y, X, a)


def core_stage(c) -> int:
    return c.stage if isinstance(c, Cell) else 0


def truncation_stages(T: TruncationResult, X: FiniteSimplicialSet) -> dict:
    """Earliest stage at which each core of the quotient has a preimage core in ``X``."""
    Q = T.quotient
    out = {}
    for k in range(T.n):
        for c in Q.cores(k):
            out[(k, c)] = core_stage(c)
    for rep, members in T.classes.items():
        if not X.is_degenerate(rep):
            out[(T.n, rep[0])] = min(core_stage(m[0]) for m in members if not X.is_degenerate(m))
    for z, q in T.top_map.items():
        if not Q.is_degenerate(q):
            key = (T.n + 1, q[0])
            out[key] = min(out.get(key, 10**9), core_stage(z[0]))
    return out


def stage_filter(T: TruncationResult, X: FiniteSimplicialSet, stage: int):
    """Predicate on quotient simplices: the underlying core exists by ``stage``."""
    st = truncation_stages(T, X)
    return lambda s: st[(s[1][-1], s[0])] <= stage
