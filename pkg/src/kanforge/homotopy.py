"""Combinatorial homotopy groups of finite simplicial sets.

Convention: an ``n``-sphere at ``v`` is an ``n``-simplex all of whose faces are
the constant simplex on ``v``.  Two spheres ``x, y`` are identified when some
``z`` in ``X_{n+1}`` has ``d_i z`` constant for ``i < n``, ``d_n z = x`` and
``d_{n+1} z = y`` (closed up transitively).  The product ``[a][b]`` is
``[d_n w]`` for any ``w`` with ``d_{n+1} w = a``, ``d_{n-1} w = b`` and the
remaining faces constant; on a nerve this is the arrow product ``a b``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Sequence

from .simplicial import FiniteSimplicialSet, KanError, SimplicialError, check_horn_filling


class _UnionFind:
    def __init__(self, items: Iterable):
        self.parent = {x: x for x in items}

    def find(self, x):
        p = self.parent
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


@dataclass
class HomotopyGroup:
    """``pi_n``; for ``n = 0`` only ``elements`` (the components) is meaningful."""

    n: int
    elements: list  # class representatives
    identity: Hashable | None
    table: dict | None  # (a, b) -> a*b on representatives
    class_of: dict = field(default_factory=dict)  # sphere -> representative
    notes: list = field(default_factory=list)

    @property
    def order(self) -> int:
        return len(self.elements)

    def mul(self, a, b):
        return self.table[(a, b)]

    def is_abelian(self) -> bool:
        return all(self.table[(a, b)] == self.table[(b, a)] for a in self.elements for b in self.elements)


def spheres(X: FiniteSimplicialSet, v, n: int) -> list:
    """The constant sphere followed by the nondegenerate spheres (a degenerate sphere is constant)."""
    if n == 0:
        return list(X.level(0))
    base = X.constant(v, n - 1)
    return [X.constant(v, n)] + [x for x in X.nondegenerate(n) if all(f == base for f in X.core_faces(n, x[0]))]


def _product_fillers(X: FiniteSimplicialSet, a, b, n: int, base_n, cidx) -> list:
    """All ``w`` with ``d_{n+1} w = a``, ``d_{n-1} w = b`` and the other low faces constant."""
    out = [
        w
        for w in cidx.get((n + 1, a), ())
        if X.face(w, n - 1) == b and all(X.face(w, i) == base_n for i in range(n - 1))
    ]
    # degenerate fillers are s_n a, s_{n-1} b or the constant simplex
    for w in {X.degeneracy(a, n), X.degeneracy(b, n - 1), X.degeneracy(base_n, 0)}:
        if X.face(w, n + 1) == a and X.face(w, n - 1) == b and all(X.face(w, i) == base_n for i in range(n - 1)):
            out.append(w)
    return out


def homotopy_group(
    X: FiniteSimplicialSet,
    basepoint,
    n: int,
    probe: Sequence | None = None,
    check_kan: bool = False,
    filler_ok: Callable | None = None,
) -> HomotopyGroup:
    """Compute ``pi_n(X, basepoint)`` for ``n`` in 0, 1, 2.

    ``probe`` restricts attention to the classes meeting a finite set of
    spheres (at a finite stage of a colimit the remaining classes have not yet
    been identified).  The table is checked for independence of the
    representative and of the filler over all probe pairs, and every product
    must land in a probed class.  ``filler_ok`` restricts which
    ``(n+1)``-simplices may serve as product fillers.  With ``check_kan`` the
    horn conditions up to level ``n + 1`` are verified first and the first
    unfillable horn is reported.
    """
    if n not in (0, 1, 2):
        raise SimplicialError("homotopy groups are implemented for n = 0, 1, 2")
    if X.top_dim < n + 1:
        raise SimplicialError(f"pi_{n} needs level {n + 1}; top_dim is {X.top_dim}")
    v = basepoint if isinstance(basepoint, tuple) and len(basepoint) == 2 and basepoint[1] == (0,) else X.vertex(basepoint)
    if check_kan:
        for m in range(1, n + 2):
            for j in range(m + 1):
                r = check_horn_filling(X, m, j, max_misses=1)
                if not r.restriction_surjective:
                    raise KanError(f"not Kan: Lambda[{m},{j}] horn {r.witness_misses[0]!r} has no filler")

    if n == 0:
        uf = _UnionFind(X.level(0))
        for e in X.level(1):
            uf.union(X.face(e, 0), X.face(e, 1))
        reps = sorted({uf.find(x) for x in X.level(0)}, key=X.level(0).index)
        cls = {x: uf.find(x) for x in X.level(0)}
        return HomotopyGroup(0, reps, cls[v], None, cls)

    sph = spheres(X, v, n)
    sph_set = set(sph)
    base_n = X.constant(v, n)
    uf = _UnionFind(sph)
    # degenerate witnesses only relate a sphere to itself
    for zc in X.cores(n + 1):
        fz = X.core_faces(n + 1, zc)
        x, y = fz[n], fz[n + 1]
        if x in sph_set and y in sph_set and all(fz[i] == base_n for i in range(n)):
            uf.union(x, y)
    probe = sph if probe is None else [base_n] + [p for p in probe if p in sph_set and p != base_n]
    order = {p: i for i, p in reversed(list(enumerate(probe)))}

    cidx = X.core_face_index(n + 1)
    products = []
    for a in probe:
        for b in probe:
            fillers = _product_fillers(X, a, b, n, base_n, cidx)
            if filler_ok is not None:
                fillers = [w for w in fillers if filler_ok(w)]
            if not fillers:
                raise KanError(f"not Kan: Lambda[{n + 1},{n}] horn with faces ({b!r}, {a!r}) has no filler")
            for w in fillers:
                c = X.face(w, n)
                if c not in sph_set:
                    raise SimplicialError(f"product face {c!r} is not a sphere")
                products.append((a, b, c))
    seen: dict = {}
    for a, b, c in products:
        prev = seen.setdefault((uf.find(a), uf.find(b)), c)
        if uf.find(prev) != uf.find(c):
            raise SimplicialError(f"pi_{n} product not well defined at ({a!r}, {b!r})")

    # representatives: earliest probe sphere in each class
    rep: dict = {}
    for p in probe:
        rep.setdefault(uf.find(p), p)
    notes = []
    outside = len({uf.find(x) for x in sph} - set(rep))
    if outside:
        notes.append(f"{outside} classes do not meet the probe")
    class_of = {x: rep.get(uf.find(x)) for x in sph}
    elements = sorted(set(rep.values()), key=order.__getitem__)
    table: dict = {}
    for a, b, c in products:
        prod = class_of[c]
        if prod is None:
            raise SimplicialError(f"probe not closed: product of {a!r} and {b!r} leaves the probed classes")
        table[(class_of[a], class_of[b])] = prod
    e = class_of[base_n]
    G = HomotopyGroup(n, elements, e, table, class_of, notes)
    bad = group_axiom_violations(G.elements, G.table, e)
    if bad:
        raise SimplicialError(f"pi_{n} fails the group axioms: {bad[0]}")
    return G


def group_axiom_violations(elements: Sequence, table: dict, e) -> list:
    out = []
    for a in elements:
        if table[(a, e)] != a or table[(e, a)] != a:
            out.append(("identity", a))
        if not any(table[(a, b)] == e and table[(b, a)] == e for b in elements):
            out.append(("inverse", a))
    for a, b, c in itertools.product(elements, repeat=3):
        if table[(table[(a, b)], c)] != table[(a, table[(b, c)])]:
            out.append(("associativity", a, b, c))
            break
    return out


def group_table(G) -> tuple[list, dict, Hashable]:
    """Elements, multiplication table and unit of a one-object groupoid's isotropy."""
    x = G.objects[0]
    els = G.isotropy(x)
    return els, {(a, b): G.compose[(a, b)] for a in els for b in els}, G.identity[x]


def find_isomorphism(
    els1: Sequence, t1: dict, e1, els2: Sequence, t2: dict, e2
) -> dict | None:
    """Backtracking search for a multiplication-preserving bijection sending ``e1`` to ``e2``."""
    if len(els1) != len(els2):
        return None
    els1 = [e1] + [a for a in els1 if a != e1]
    phi = {e1: e2}
    used = {e2}

    def consistent() -> bool:
        for a, fa in phi.items():
            for b, fb in phi.items():
                ab = t1[(a, b)]
                if ab in phi and phi[ab] != t2[(fa, fb)]:
                    return False
        return True

    def rec(i):
        if i == len(els1):
            return True
        a = els1[i]
        for b in els2:
            if b in used:
                continue
            phi[a] = b
            used.add(b)
            if consistent() and rec(i + 1):
                return True
            del phi[a]
            used.discard(b)
        return False

    return dict(phi) if rec(1) else None
