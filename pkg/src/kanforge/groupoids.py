"""Finite groupoids, local groupoids and their nerves."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .simplicial import (
    FiniteSimplicialSet,
    KanError,
    SimplicialError,
    check_horn_filling,
    horn,
    iter_simplicial_maps,
)


class GroupoidError(ValueError):
    pass


UNDEFINED = None


@dataclass
class FiniteGroupoid:
    """A groupoid with finitely many objects and arrows.

    ``compose[(g, h)]`` is ``g h`` (``g`` after ``h``), defined iff ``source(g) == target(h)``.
    """

    objects: list
    arrows: list
    source: dict
    target: dict
    compose: dict
    identity: dict
    inverse: dict
    name: str = ""

    def __post_init__(self):
        bad = self.violations()
        if bad:
            raise GroupoidError(f"invalid groupoid {self.name!r}: {bad[0]}")

    def mul(self, g, h):
        try:
            return self.compose[(g, h)]
        except KeyError:
            raise GroupoidError(f"{g!r} and {h!r} are not composable") from None

    def composable(self, g, h) -> bool:
        return self.source[g] == self.target[h]

    def is_identity(self, g) -> bool:
        return self.identity[self.source[g]] == g

    def violations(self) -> list[str]:
        out = []
        arrows = set(self.arrows)
        if len(arrows) != len(self.arrows):
            out.append("duplicate arrows")
        for x in self.objects:
            e = self.identity.get(x)
            if e not in arrows or self.source[e] != x or self.target[e] != x:
                out.append(f"bad identity at {x!r}")
        for g in self.arrows:
            for h in self.arrows:
                if self.source[g] != self.target[h]:
                    continue
                gh = self.compose.get((g, h))
                if gh not in arrows:
                    out.append(f"composite of {g!r},{h!r} undefined")
                    return out
                if self.source[gh] != self.source[h] or self.target[gh] != self.target[g]:
                    out.append(f"composite of {g!r},{h!r} has wrong ends")
        if out:
            return out
        for g in self.arrows:
            s, t = self.source[g], self.target[g]
            if self.compose[(g, self.identity[s])] != g or self.compose[(self.identity[t], g)] != g:
                out.append(f"identity law fails at {g!r}")
            gi = self.inverse.get(g)
            if gi not in arrows or self.compose.get((g, gi)) != self.identity[t] or self.compose.get((gi, g)) != self.identity[s]:
                out.append(f"inverse law fails at {g!r}")
        for g, h, k in self.composable_triples():
            if self.compose[(self.compose[(g, h)], k)] != self.compose[(g, self.compose[(h, k)])]:
                out.append(f"not associative at ({g!r}, {h!r}, {k!r})")
        return out

    def composable_triples(self):
        by_target: dict = {}
        for a in self.arrows:
            by_target.setdefault(self.target[a], []).append(a)
        for g in self.arrows:
            for h in by_target.get(self.source[g], ()):
                for k in by_target.get(self.source[h], ()):
                    yield g, h, k

    def isotropy(self, x) -> list:
        return [g for g in self.arrows if self.source[g] == x and self.target[g] == x]

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_group(cls, elements: Sequence, mul: Callable, unit, name: str = "", obj="*") -> "FiniteGroupoid":
        elements = list(elements)
        comp = {(g, h): mul(g, h) for g in elements for h in elements}
        inv = {g: next(h for h in elements if comp[(g, h)] == unit) for g in elements}
        return cls([obj], elements, {g: obj for g in elements}, {g: obj for g in elements}, comp, {obj: unit}, inv, name)

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroupoid":
        return cls.from_group(range(n), lambda a, b: (a + b) % n, 0, name=f"Z/{n}")

    @classmethod
    def symmetric(cls, n: int) -> "FiniteGroupoid":
        perms = list(itertools.permutations(range(n)))
        # (p q)(i) = p(q(i)): q acts first
        return cls.from_group(perms, lambda p, q: tuple(p[q[i]] for i in range(n)), tuple(range(n)), name=f"S{n}")

    @classmethod
    def pair(cls, objects: Sequence) -> "FiniteGroupoid":
        objs = list(objects)
        arrows = [(t, s) for t in objs for s in objs]  # (target, source)
        comp = {((a, b), (b2, c)): (a, c) for (a, b) in arrows for (b2, c) in arrows if b == b2}
        return cls(
            objs,
            arrows,
            {g: g[1] for g in arrows},
            {g: g[0] for g in arrows},
            comp,
            {x: (x, x) for x in objs},
            {g: (g[1], g[0]) for g in arrows},
            name=f"Pair{len(objs)}",
        )

    def product(self, other: "FiniteGroupoid") -> "FiniteGroupoid":
        objs = [(x, y) for x in self.objects for y in other.objects]
        arrows = [(g, h) for g in self.arrows for h in other.arrows]
        comp = {}
        for g1, h1 in arrows:
            for g2, h2 in arrows:
                if self.composable(g1, g2) and other.composable(h1, h2):
                    comp[((g1, h1), (g2, h2))] = (self.compose[(g1, g2)], other.compose[(h1, h2)])
        return FiniteGroupoid(
            objs,
            arrows,
            {a: (self.source[a[0]], other.source[a[1]]) for a in arrows},
            {a: (self.target[a[0]], other.target[a[1]]) for a in arrows},
            comp,
            {(x, y): (self.identity[x], other.identity[y]) for x, y in objs},
            {a: (self.inverse[a[0]], other.inverse[a[1]]) for a in arrows},
            name=f"{self.name}x{other.name}",
        )

    @staticmethod
    def disjoint_union(parts: Sequence["FiniteGroupoid"]) -> "FiniteGroupoid":
        objs, arrows, src, tgt, comp, ident, inv = [], [], {}, {}, {}, {}, {}
        for i, G in enumerate(parts):
            objs += [(i, x) for x in G.objects]
            arrows += [(i, g) for g in G.arrows]
            src.update({(i, g): (i, G.source[g]) for g in G.arrows})
            tgt.update({(i, g): (i, G.target[g]) for g in G.arrows})
            comp.update({((i, g), (i, h)): (i, v) for (g, h), v in G.compose.items()})
            ident.update({(i, x): (i, e) for x, e in G.identity.items()})
            inv.update({(i, g): (i, v) for g, v in G.inverse.items()})
        return FiniteGroupoid(objs, arrows, src, tgt, comp, ident, inv, name="+".join(G.name for G in parts))


def random_groupoid(rng: random.Random, max_objects: int = 4, max_arrows: int = 12) -> FiniteGroupoid:
    """Disjoint union of transitive groupoids ``Pair(k) x Z/n`` within the size budget.

    Groupoids with only identity arrows are resampled: their nerves are
    discrete and classify as 0-groupoids.
    """
    while True:
        parts, n_obj, n_arr = [], 0, 0
        while n_obj < max_objects:
            k = rng.randint(1, min(2, max_objects - n_obj))
            n = rng.randint(1, 3)
            if n_arr + k * k * n > max_arrows:
                break
            parts.append(FiniteGroupoid.pair(range(k)).product(FiniteGroupoid.cyclic(n)))
            n_obj += k
            n_arr += k * k * n
            if rng.random() < 0.4:
                break
        if parts and any(len(P.arrows) > len(P.objects) for P in parts):
            return FiniteGroupoid.disjoint_union(parts)


# ---------------------------------------------------------------------------
# Local groupoids


@dataclass
class LocalGroupoid:
    """Arrows ``U`` with multiplication defined on composable pairs from ``V``.

    ``compose[(g, h)]`` must be present for every composable pair in ``V``;
    entries outside ``V x V`` are ignored.
    """

    objects: list
    arrows: list  # U
    V: list
    source: dict
    target: dict
    compose: dict
    identity: dict
    inverse: dict  # on V
    name: str = ""

    def __post_init__(self):
        self._V = set(self.V)
        U = set(self.arrows)
        if not self._V <= U:
            raise GroupoidError("V must be a subset of U")
        for x in self.objects:
            if self.identity[x] not in self._V:
                raise GroupoidError(f"identity of {x!r} not in V")
        for g in self.V:
            gi = self.inverse.get(g)
            if gi not in self._V:
                raise GroupoidError(f"inverse of {g!r} not in V")
            if self.source[gi] != self.target[g] or self.target[gi] != self.source[g]:
                raise GroupoidError(f"inverse of {g!r} has wrong ends")
        for g in self.V:
            for h in self.V:
                if self.source[g] != self.target[h]:
                    continue
                gh = self.compose.get((g, h))
                if gh not in U:
                    raise GroupoidError(f"compose undefined on ({g!r}, {h!r}) in V x_M V")
                if self.source[gh] != self.source[h] or self.target[gh] != self.target[g]:
                    raise GroupoidError(f"composite of {g!r},{h!r} has wrong ends")
        for g in self.V:
            s, t = self.source[g], self.target[g]
            if self.compose[(g, self.identity[s])] != g or self.compose[(self.identity[t], g)] != g:
                raise GroupoidError(f"identity law fails at {g!r}")
            gi = self.inverse[g]
            if self.compose[(g, gi)] != self.identity[t] or self.compose[(gi, g)] != self.identity[s]:
                raise GroupoidError(f"inverse law fails at {g!r}")
        for g in self.V:
            for h in self.V:
                if self.source[g] != self.target[h]:
                    continue
                gh = self.compose[(g, h)]
                for k in self.V:
                    if self.source[h] != self.target[k]:
                        continue
                    hk = self.compose[(h, k)]
                    if gh in self._V and hk in self._V:
                        if self.compose[(gh, k)] != self.compose[(g, hk)]:
                            raise GroupoidError(f"not associative at ({g!r}, {h!r}, {k!r})")

    def in_V(self, g) -> bool:
        return g in self._V

    def mul(self, g, h):
        if g not in self._V or h not in self._V:
            raise GroupoidError(f"multiplication undefined outside V: ({g!r}, {h!r})")
        return self.compose[(g, h)]

    @classmethod
    def integer_window(cls, r: int = 1, u: int | None = None) -> "LocalGroupoid":
        """``V = {-r..r}`` inside ``U = {-u..u}`` (default ``u = 2r``) under addition."""
        u = 2 * r if u is None else u
        U = list(range(-u, u + 1))
        V = list(range(-r, r + 1))
        comp = {(a, b): a + b for a in V for b in V}
        return cls(["*"], U, V, {g: "*" for g in U}, {g: "*" for g in U}, comp, {"*": 0}, {g: -g for g in V}, f"Z[{-r},{r}]")

    @classmethod
    def from_groupoid(cls, G: FiniteGroupoid, V: Iterable | None = None) -> "LocalGroupoid":
        V = list(G.arrows) if V is None else list(V)
        return cls(list(G.objects), list(G.arrows), V, dict(G.source), dict(G.target), dict(G.compose), dict(G.identity), {g: G.inverse[g] for g in V}, G.name)


# ---------------------------------------------------------------------------
# Nerves


def _string_normal_form(string: tuple, obj, is_identity) -> tuple:
    """Normal form ``(core, surj)`` of a composable string; all-identity strings collapse to ``obj``."""
    core, surj, c = [], [0], 0
    for g in string:
        if not is_identity(g):
            core.append(g)
            c += 1
        surj.append(c)
    return (tuple(core) if core else obj, tuple(surj))


def _nerve_from(
    objects, arrows, source, target, mul, identity, in_V, top_dim, name
) -> FiniteSimplicialSet:
    ident_set = {identity[x] for x in objects}
    is_id = ident_set.__contains__
    nonid = [g for g in arrows if in_V(g) and not is_id(g)]
    by_target: dict = {}
    for g in nonid:
        by_target.setdefault(target[g], []).append(g)

    def nf(string, vertex0):
        return _string_normal_form(string, vertex0, is_id)

    def first_vertex(string):
        return target[string[0]]

    cores = {0: list(objects)}
    faces: dict = {}
    # each entry: (string, suffix products) where suffix products are g_i..g_k
    level = [((g,), (g,)) for g in nonid]
    for k in range(1, top_dim + 1):
        cores[k] = [s for s, _ in level]
        fk = {}
        for s, _ in level:
            fs = []
            for i in range(k + 1):
                if k == 1:
                    v = source[s[0]] if i == 0 else target[s[0]]
                    fs.append((v, (0,)))
                    continue
                if i == 0:
                    sub, v0 = s[1:], source[s[0]]
                elif i == k:
                    sub, v0 = s[:-1], target[s[0]]
                else:
                    sub, v0 = s[: i - 1] + (mul(s[i - 1], s[i]),) + s[i + 1 :], target[s[0]]
                fs.append(nf(sub, v0))
            fk[s] = tuple(fs)
        faces[k] = fk
        if k == top_dim:
            break
        nxt = []
        for s, suff in level:
            for g in by_target.get(source[s[-1]], ()):
                new_suff = []
                ok = True
                for p in suff:
                    q = mul(p, g)
                    if not in_V(q):
                        ok = False
                        break
                    new_suff.append(q)
                if ok:
                    nxt.append((s + (g,), tuple(new_suff) + (g,)))
        level = nxt
    return FiniteSimplicialSet(top_dim, cores, faces, name=name, validate=False)


def nerve(G: FiniteGroupoid, top_dim: int = 3) -> FiniteSimplicialSet:
    """Nerve with ``d_0`` = source, ``d_1`` = target on edges and ``d_k`` multiplying ``g_k g_{k+1}``."""
    if top_dim < 0:
        raise SimplicialError("top_dim must be non-negative")
    X = _nerve_from(G.objects, G.arrows, G.source, G.target, G.mul, G.identity, lambda g: True, top_dim, f"N({G.name})")
    X.groupoid = G
    return X


def local_nerve(L: LocalGroupoid, top_dim: int = 3) -> FiniteSimplicialSet:
    """Strings in ``V`` all of whose contiguous products lie in ``V``."""
    if top_dim < 0:
        raise SimplicialError("top_dim must be non-negative")
    X = _nerve_from(L.objects, L.V, L.source, L.target, L.mul, L.identity, L.in_V, top_dim, f"Nloc({L.name})")
    X.local_groupoid = L
    return X


def string_of(s, G) -> tuple:
    """Expand a nerve simplex of ``G`` (groupoid or local groupoid) to its string of arrows."""
    core, surj = s
    n = len(surj) - 1
    if surj[-1] == 0:
        return tuple(G.identity[core] for _ in range(n))
    out = []
    for i in range(1, n + 1):
        k = surj[i]
        if k != surj[i - 1]:
            out.append(core[k - 1])
        else:
            out.append(G.identity[G.target[core[0]] if k == 0 else G.source[core[k - 1]]])
    return tuple(out)


# ---------------------------------------------------------------------------
# Properties A and B


@dataclass
class PropertyReport:
    property_A_ok: bool
    property_B_ok: bool
    surjectivity: dict = field(default_factory=dict)  # (m, j) -> restriction surjective?
    hom_sizes: dict = field(default_factory=dict)  # j -> |hom(Lambda[2, j], X)|
    bijections: dict = field(default_factory=dict)  # (j, j') -> {horn_j: horn_j'}
    counterexamples: list = field(default_factory=list)


def _horn_maps(X, m, j):
    H = horn(m, j)
    hc = [c for k in range(m) for c in H.cores(k)]
    return hc, [tuple(a[(len(c) - 1, c)] for c in hc) for a in iter_simplicial_maps(H, X)]


def check_local_kan_properties(X: FiniteSimplicialSet, max_m: int | None = None) -> PropertyReport:
    """Property A (restrictions are submersions) and Property B (compatible Lambda[2, .] bijections).

    For finite sets every map is a submersion, so A always holds; the
    surjectivity of each restriction is recorded for inspection.  Property B
    holds iff each pair of restrictions of ``X_2`` identifies the same
    2-simplices and the three hom-sets have equal size; the bijection is then
    built by matching restrictions and pairing the remaining horns in
    enumeration order.
    """
    if X.top_dim < 2:
        raise SimplicialError("Property B needs top_dim >= 2")
    top = X.top_dim if max_m is None else min(max_m, X.top_dim)
    rep = PropertyReport(True, True)
    for m in range(1, top + 1):
        for j in range(m + 1):
            rep.surjectivity[(m, j)] = check_horn_filling(X, m, j).restriction_surjective
    horns, restr = {}, {}
    for j in range(3):
        hc, hs = _horn_maps(X, 2, j)
        horns[j] = hs
        restr[j] = {s: tuple(X.apply(s, c) for c in hc) for s in X.level(2)}
        rep.hom_sizes[j] = len(hs)
    for j, jj in ((0, 1), (1, 2), (0, 2)):
        fwd: dict = {}
        back: dict = {}
        for s in X.level(2):
            a, b = restr[j][s], restr[jj][s]
            if fwd.setdefault(a, b) != b or back.setdefault(b, a) != a:
                rep.property_B_ok = False
                rep.counterexamples.append(("B-incompatible", j, jj, s))
                break
        if len(horns[j]) != len(horns[jj]):
            rep.property_B_ok = False
            rep.counterexamples.append(("B-cardinality", j, jj, len(horns[j]), len(horns[jj])))
            continue
        rest_a = [h for h in horns[j] if h not in fwd]
        rest_b = [h for h in horns[jj] if h not in back]
        fwd.update(zip(rest_a, rest_b))
        rep.bijections[(j, jj)] = fwd
    return rep


# ---------------------------------------------------------------------------
# Bigons


def bigons(Y: FiniteSimplicialSet) -> list:
    """2-simplices whose ``d_2`` face is a degenerate vertex edge."""
    if Y.top_dim < 2:
        raise SimplicialError("bigons need top_dim >= 2")
    return [b for b in Y.level(2) if Y.face(b, 2)[1] == (0, 0)]


def bigon_groupoid(Y: FiniteSimplicialSet) -> FiniteGroupoid:
    """Groupoid over ``Y_1`` with arrows the bigons, ``d_0 -> d_1``.

    The composite of ``b1: e -> e'`` and ``b2: e' -> e''`` is ``d_1 w`` for the
    unique ``w`` in ``Y_3`` with ``d_0 w = b1``, ``d_2 w = b2`` and
    ``d_3 w`` totally degenerate.  The identity at ``h`` is ``s_0 h``.
    """
    if Y.top_dim < 3:
        raise SimplicialError("bigon composition needs top_dim >= 3")
    bs = bigons(Y)
    edges = Y.level(1)
    src = {b: Y.face(b, 0) for b in bs}
    tgt = {b: Y.face(b, 1) for b in bs}
    ident = {e: Y.degeneracy(e, 0) for e in edges}
    idx = Y.face_index(3)
    comp = {}
    for b1 in bs:
        for b2 in bs:
            if tgt[b1] != src[b2]:
                continue
            x = Y.face(Y.face(b1, 2), 0)
            base = Y.constant(x, 2)
            fill = [w for w in idx.get((0, b1), ()) if Y.face(w, 2) == b2 and Y.face(w, 3) == base]
            if len(fill) != 1:
                raise KanError(f"Lambda[3,1] horn ({b1!r}, {b2!r}) has {len(fill)} fillers; not a 2-groupoid")
            comp[(b2, b1)] = Y.face(fill[0], 1)
    inv = {}
    for b in bs:
        cands = [c for c in bs if src[c] == tgt[b] and comp.get((c, b)) == ident[src[b]]]
        if not cands:
            raise KanError(f"bigon {b!r} has no inverse")
        inv[b] = cands[0]
    return FiniteGroupoid(list(edges), bs, src, tgt, comp, ident, inv, name=f"b({Y.name})")
