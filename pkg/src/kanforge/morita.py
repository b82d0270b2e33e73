"""Hypercovers, pullback 2-groupoids, Morita-lemma checks and local-groupoid extraction."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

from .groupoids import GroupoidError, LocalGroupoid
from .simplicial import (
    FiniteSimplicialSet,
    KanError,
    SimplicialError,
    SimplicialMap,
    boundary,
    iter_simplicial_maps,
)


class PB(NamedTuple):
    """Fiber-product simplex: a boundary in ``Z`` together with a filler in ``X``."""

    faces: tuple
    x: tuple


def boundary_maps(Z: FiniteSimplicialSet, k: int) -> list[tuple]:
    """hom(dDelta[k], Z) as tuples ``(d_0, ..., d_k)`` of ``(k-1)``-simplices."""
    if k == 0:
        return [()]
    B = boundary(k)
    faces = [tuple(v for v in range(k + 1) if v != i) for i in range(k + 1)]
    if k == 1:
        return [(a[(0, (1,))], a[(0, (0,))]) for a in iter_simplicial_maps(B, Z)]
    return [tuple(a[(k - 1, f)] for f in faces) for a in iter_simplicial_maps(B, Z)]


def pullback_level(f: SimplicialMap, k: int) -> list[tuple]:
    """PB(hom(dDelta[k], Z) -> hom(dDelta[k], X) <- X_k) as pairs ``(boundary, x)``."""
    X = f.target
    if k == 0:
        return [((), x) for x in X.level(0)]
    bidx = X.boundary_index(k)
    out = []
    for b in boundary_maps(f.source, k):
        for x in bidx.get(tuple(f(s) for s in b), ()):
            out.append((b, x))
    return out


@dataclass
class LevelVerdict:
    k: int
    required: str  # "surjective" or "bijective"
    surjective: bool
    injective: bool
    level_size: int
    pullback_size: int
    misses: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.surjective and (self.required == "surjective" or self.injective)


@dataclass
class Hypercover:
    map: SimplicialMap
    n: int
    per_level_verdicts: list

    @property
    def ok(self) -> bool:
        return all(v.ok for v in self.per_level_verdicts)

    @property
    def first_failure(self) -> LevelVerdict | None:
        return next((v for v in self.per_level_verdicts if not v.ok), None)


def check_hypercover(f: SimplicialMap, n: int, max_misses: int = 5) -> Hypercover:
    """``Z_k -> PB_k`` surjective for ``k < n`` and bijective for ``k = n``."""
    Z, X = f.source, f.target
    if Z.top_dim < n or X.top_dim < n:
        raise SimplicialError(f"hypercover check at n={n} needs both sides truncated at >= {n}")
    verdicts = []
    for k in range(n + 1):
        pb = pullback_level(f, k)
        image: dict = {}
        for z in Z.level(k):
            key = (Z.faces(z) if k else (), f(z))
            image[key] = image.get(key, 0) + 1
        pbset = set(pb)
        misses = [p for p in pb if p not in image][:max_misses]
        surj = not misses
        inj = all(c == 1 for c in image.values()) and set(image) <= pbset
        verdicts.append(LevelVerdict(k, "bijective" if k == n else "surjective", surj, inj, len(Z.level(k)), len(pb), misses))
    return Hypercover(f, n, verdicts)


@dataclass
class ZigZag:
    left: Hypercover
    right: SimplicialMap

    def __post_init__(self):
        if not self.left.ok:
            raise SimplicialError("left leg of a zig-zag must be a hypercover")
        if self.right.source is not self.left.map.source:
            raise SimplicialError("legs of a zig-zag must share their source")


# ---------------------------------------------------------------------------
# Pullback 2-groupoids


@dataclass
class Level01:
    """Levels 0 and 1 of a simplicial set with a map to ``X``.

    ``edges`` lists all 1-simplices (degenerate ones included); ``d0``/``d1``
    send them to vertices, ``s0`` sends vertices to edges, and ``f0``/``f1``
    map to vertices and 1-simplices of ``X``.
    """

    vertices: list
    edges: list
    d0: Callable
    d1: Callable
    s0: Callable
    f0: Callable
    f1: Callable

    def violations(self, X: FiniteSimplicialSet) -> list[str]:
        out = []
        for v in self.vertices:
            e = self.s0(v)
            if self.d0(e) != v or self.d1(e) != v:
                out.append(f"d s0 != id at {v!r}")
            if self.f1(e) != X.degeneracy(self.f0(v), 0):
                out.append(f"f does not commute with s0 at {v!r}")
        for e in self.edges:
            fe = self.f1(e)
            if X.face(fe, 0) != self.f0(self.d0(e)) or X.face(fe, 1) != self.f0(self.d1(e)):
                out.append(f"f does not commute with faces at {e!r}")
        return out


def vertex_cover(X: FiniteSimplicialSet, Z0: Sequence, f0: Callable) -> Level01:
    """``Z_1 = Z_0 x Z_0 x_{X_0 x X_0} X_1``, with edges written ``(source, target, x)``."""
    edges = [(a, b, x) for x in X.level(1) for a in Z0 for b in Z0 if f0(a) == X.face(x, 0) and f0(b) == X.face(x, 1)]
    return Level01(
        list(Z0),
        edges,
        d0=lambda e: e[0],
        d1=lambda e: e[1],
        s0=lambda v: (v, v, X.degeneracy(f0(v), 0)),
        f0=f0,
        f1=lambda e: e[2],
    )


def pullback_2groupoid(X: FiniteSimplicialSet, Z01: Level01, top_dim: int = 2) -> tuple[FiniteSimplicialSet, SimplicialMap]:
    """Extend ``Z01`` by ``Z_k = hom(dDelta[k], Z) x_{hom(dDelta[k], X)} X_k`` for ``2 <= k <= top_dim``.

    Degeneracies come from the simplicial identities, e.g.
    ``s_0 h = (h, h, s_0 d_1 h, s_0 f_1 h)`` at level 2.
    """
    bad = Z01.violations(X)
    if bad:
        raise SimplicialError(f"level-0/1 data is not simplicial over X: {bad[0]}")
    if top_dim < 1 or top_dim > X.top_dim:
        raise SimplicialError("top_dim must be between 1 and X.top_dim")
    degen1 = {Z01.s0(v) for v in Z01.vertices}
    if len(degen1) != len(Z01.vertices):
        raise SimplicialError("s0 must be injective")
    edge_simplex = {Z01.s0(v): (v, (0, 0)) for v in Z01.vertices}
    cores = {0: list(Z01.vertices), 1: [e for e in Z01.edges if e not in degen1]}
    for e in cores[1]:
        edge_simplex[e] = (e, (0, 1))
    faces = {1: {e: ((Z01.d0(e), (0,)), (Z01.d1(e), (0,))) for e in cores[1]}}
    assign = {(0, v): Z01.f0(v) for v in Z01.vertices}
    assign.update({(1, e): Z01.f1(e) for e in cores[1]})
    Z = FiniteSimplicialSet(1, cores, faces, name="Z")
    for k in range(2, top_dim + 1):
        shell = FiniteSimplicialSet(k, cores, faces, validate=False)
        f_shell = SimplicialMap(shell, X, assign)
        degenerate = {(shell.faces(s), f_shell(s)) for s in shell.level(k)}
        new = [PB(b, x) for b, x in pullback_level(SimplicialMap(Z, X, assign), k) if (b, x) not in degenerate]
        if len(set(new)) != len(new):
            raise SimplicialError("fiber product produced duplicate elements")
        cores[k] = new
        faces[k] = {p: p.faces for p in new}
        assign.update({(k, p): p.x for p in new})
        Z = FiniteSimplicialSet(k, cores, faces, name="Z")
    return Z, SimplicialMap(Z, X, assign)


def levels01_of(X: FiniteSimplicialSet) -> Level01:
    """The levels 0 and 1 of ``X`` itself, mapped identically."""
    verts = X.level(0)
    return Level01(
        [v[0] for v in verts],
        X.level(1),
        d0=lambda e: X.face(e, 0)[0],
        d1=lambda e: X.face(e, 1)[0],
        s0=lambda v: X.degeneracy((v, (0,)), 0),
        f0=lambda v: (v, (0,)),
        f1=lambda e: e,
    )


# ---------------------------------------------------------------------------
# Morita lemma conditions


@dataclass
class MoritaReport:
    conditions: dict  # 1..4 -> bool
    alternative_condition_3: bool
    failures: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.conditions.values())


def check_morita_lemma_conditions(
    f: SimplicialMap,
    Z1: Sequence,
    g1: Callable,
    h1: Callable,
    alpha: Callable,
) -> MoritaReport:
    """Check the four conditions of the 2-groupoid Morita lemma for ``f: K -> Y``.

    Condition 3 reads ``f_1 g_1 = alpha . h_1``: ``alpha(z)`` is a bigon with
    ``d_0 alpha(z) = h_1(z)`` and ``d_1 alpha(z) = f_1(g_1(z))``.  The reversed
    orientation is evaluated too and reported separately.
    """
    K, Y = f.source, f.target
    fails: dict = {}
    K0, Y0 = K.level(0), Y.level(0)
    img0 = [f(v) for v in K0]
    c1 = len(set(img0)) == len(K0) and set(img0) == set(Y0)
    if not c1:
        fails[1] = "f_0 is not a bijection"
    g_img = {g1(z) for z in Z1}
    h_img = {h1(z) for z in Z1}
    c2 = g_img == set(K.level(1)) and h_img == set(Y.level(1))
    if not c2:
        fails[2] = f"g_1 misses {len(set(K.level(1)) - g_img)}, h_1 misses {len(set(Y.level(1)) - h_img)}"
    c3 = alt3 = True
    for z in Z1:
        a = alpha(z)
        is_bigon = Y.face(a, 2)[1] == (0, 0)
        fg = f(g1(z))
        if not (is_bigon and Y.face(a, 0) == h1(z) and Y.face(a, 1) == fg):
            if c3:
                fails[3] = f"alpha fails at {z!r}"
            c3 = False
        if not (is_bigon and Y.face(a, 0) == fg and Y.face(a, 1) == h1(z)):
            alt3 = False
    if K.top_dim < 2:
        raise SimplicialError("condition 4 needs K_2")
    pb = pullback_level(f, 2)
    image: dict = {}
    for s in K.level(2):
        key = (K.faces(s), f(s))
        image[key] = image.get(key, 0) + 1
    c4 = set(image) == set(pb) and all(v == 1 for v in image.values())
    if not c4:
        fails[4] = "K_2 -> hom(dDelta[2], K) x Y_2 is not a bijection"
    return MoritaReport({1: c1, 2: c2, 3: c3, 4: c4}, alt3, fails)


# ---------------------------------------------------------------------------
# Local groupoid of a 2-groupoid


def _choose(values: list, V: set, what: str):
    """Unique value in ``V`` if there is one, otherwise the unique value overall."""
    inV = {v for v in values if v in V}
    if len(inV) == 1:
        return inV.pop()
    if len(inV) > 1:
        raise KanError(f"{what}: {len(inV)} distinct fillers inside V")
    distinct = set(values)
    if len(distinct) == 1:
        return distinct.pop()
    raise KanError(f"{what}: {'no' if not distinct else len(distinct)} candidate fillers")


def extract_local_groupoid(X: FiniteSimplicialSet, V: Sequence | None = None) -> LocalGroupoid:
    """Local groupoid ``V ⊂ U ⇒ X_0`` with ``m = d_1 ∘ σ_m``, inverse through ``σ_i``, units ``s_0``.

    ``σ_m`` picks, for a composable pair ``(g, h)`` (``d_0 g = d_1 h``), the
    2-simplex with ``d_2 = g`` and ``d_0 = h``; ``σ_i`` picks the 2-simplex with
    ``d_2 = g`` and ``d_1 = s_0 d_1 g``.  The section is the filler whose free
    face lies in ``V`` when that is unique (the discrete stand-in for a
    section near the degenerate ones), and otherwise the unique filler.
    """
    if X.top_dim < 2:
        raise SimplicialError("extraction needs level 2")
    V = list(X.level(1)) if V is None else list(V)
    Vset = set(V)
    verts = X.level(0)
    units = {v: X.degeneracy(v, 0) for v in verts}
    missing = [v for v, e in units.items() if e not in Vset]
    if missing:
        raise SimplicialError(f"V must contain s_0 of every vertex; missing {missing[0]!r}")
    pidx = X.face_pair_index(2)
    src = {g: X.face(g, 0) for g in V}
    tgt = {g: X.face(g, 1) for g in V}
    compose = {}
    for g in V:
        for h in V:
            if src[g] != tgt[h]:
                continue
            fill = [X.face(w, 1) for w in pidx.get((0, h, 2, g), ())]
            compose[(g, h)] = _choose(fill, Vset, f"composite of ({g!r}, {h!r})")
    inverse = {}
    for g in V:
        fill = [X.face(w, 0) for w in pidx.get((1, units[tgt[g]], 2, g), ())]
        inverse[g] = _choose(fill, Vset, f"inverse of {g!r}")
    U = list(V) + [u for u in dict.fromkeys(compose.values()) if u not in Vset]
    source = {u: X.face(u, 0) for u in U}
    target = {u: X.face(u, 1) for u in U}
    try:
        return LocalGroupoid(list(verts), U, V, source, target, compose, units, inverse, name=f"loc({X.name})")
    except GroupoidError as e:
        raise SimplicialError(f"extracted data is not a local groupoid: {e}") from e
