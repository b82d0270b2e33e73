"""Finite truncated simplicial sets.

A simplex is stored in Eilenberg-Zilber normal form: a pair ``(core, surj)``
where ``core`` labels a nondegenerate simplex of dimension ``k`` and ``surj``
is a weakly increasing surjection ``[n] -> [k]`` written as a tuple of length
``n + 1``.  The simplex is ``surj^*(core)``; it is degenerate iff ``n > k``.
Faces and degeneracies of degenerate simplices are computed from the stored
faces of the cores via epi-mono factorisation in the simplex category, so only
the nondegenerate data is ever stored.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Sequence

Simplex = tuple  # (core, surj)


class SimplicialError(ValueError):
    """Raised for malformed simplicial data or undetermined levels."""


class KanError(SimplicialError):
    """Raised when an operation needs a horn filler that does not exist."""


def identity_surj(k: int) -> tuple[int, ...]:
    return tuple(range(k + 1))


def surjections(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """All weakly increasing surjections [n] -> [k], lexicographically."""
    if k > n or k < 0:
        return
    for jumps in itertools.combinations(range(1, n + 1), k):
        out, v = [], 0
        js = set(jumps)
        for i in range(n + 1):
            if i in js:
                v += 1
            out.append(v)
        yield tuple(out)


def degeneracy_word(surj: Sequence[int]) -> tuple[int, ...]:
    """Indices ``j_1 < ... < j_r`` with ``surj^* x = s_{j_r} ... s_{j_1} x``."""
    return tuple(i for i in range(len(surj) - 1) if surj[i] == surj[i + 1])


def surj_from_word(k: int, word: Sequence[int]) -> tuple[int, ...]:
    surj = identity_surj(k)
    for j in word:
        if not 0 <= j < len(surj):
            raise SimplicialError(f"degeneracy index {j} out of range at level {len(surj) - 1}")
        surj = surj[: j + 1] + surj[j:]
    return surj


@dataclass(frozen=True)
class MonotoneMap:
    """A weakly increasing map ``[source_dim] -> [target_dim]``."""

    source_dim: int
    target_dim: int
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != self.source_dim + 1:
            raise SimplicialError("MonotoneMap needs source_dim + 1 values")
        if any(not 0 <= v <= self.target_dim for v in self.values):
            raise SimplicialError("MonotoneMap value out of range")
        if any(a > b for a, b in zip(self.values, self.values[1:])):
            raise SimplicialError("MonotoneMap values must be weakly increasing")

    @property
    def is_nondegenerate(self) -> bool:
        return all(a < b for a, b in zip(self.values, self.values[1:]))

    def to_simplex(self) -> Simplex:
        image = tuple(sorted(set(self.values)))
        return (image, tuple(image.index(v) for v in self.values))

    @classmethod
    def from_simplex(cls, s: Simplex, target_dim: int) -> "MonotoneMap":
        core, surj = s
        return cls(len(surj) - 1, target_dim, tuple(core[i] for i in surj))


class FiniteSimplicialSet:
    """Simplicial set truncated at ``top_dim``, generated by finitely many cores.

    Parameters
    ----------
    top_dim:
        Truncation dimension ``D``; levels ``0..D`` are available.
    cores:
        ``cores[k]`` lists the nondegenerate ``k``-simplices (any hashables).
    faces:
        ``faces[k][c]`` is the tuple ``(d_0 c, ..., d_k c)`` of ``(k-1)``-simplices
        in normal form, for every core ``c`` of dimension ``k >= 1``.
    """

    def __init__(
        self,
        top_dim: int,
        cores: Mapping[int, Sequence[Hashable]],
        faces: Mapping[int, Mapping[Hashable, tuple]],
        name: str = "",
        validate: bool = True,
    ):
        if top_dim < 0:
            raise SimplicialError("top_dim must be non-negative")
        self.top_dim = top_dim
        self.name = name
        self._cores = {k: list(cores.get(k, ())) for k in range(top_dim + 1)}
        extra = [k for k in cores if k > top_dim and cores[k]]
        if extra:
            raise SimplicialError(f"cores above top_dim {top_dim}: dims {extra}")
        self._core_set = {k: set(v) for k, v in self._cores.items()}
        for k, cs in self._cores.items():
            if len(self._core_set[k]) != len(cs):
                raise SimplicialError(f"duplicate core identifiers at dimension {k}")
        self._faces = {k: dict(faces.get(k, {})) for k in range(1, top_dim + 1)}
        self._restrict_cache: dict = {}
        self._face_cache: dict = {}
        self._level_cache: dict = {}
        self._face_index: dict = {}
        self._boundary_index: dict = {}
        if validate:
            self._validate()

    # -- basic structure ---------------------------------------------------

    def cores(self, k: int) -> list:
        return list(self._cores.get(k, ()))

    def core_faces(self, k: int, core: Hashable) -> tuple:
        return self._faces[k][core]

    def has_core(self, k: int, core: Hashable) -> bool:
        return core in self._core_set.get(k, ())

    @staticmethod
    def dim(s: Simplex) -> int:
        return len(s[1]) - 1

    @staticmethod
    def is_degenerate(s: Simplex) -> bool:
        return s[1][-1] != len(s[1]) - 1

    def vertex(self, v: Hashable) -> Simplex:
        if not self.has_core(0, v):
            raise SimplicialError(f"{v!r} is not a vertex")
        return (v, (0,))

    def nondegenerate(self, k: int) -> list:
        return [(c, identity_surj(k)) for c in self._cores.get(k, ())]

    def contains(self, s: Simplex) -> bool:
        core, surj = s
        k = surj[-1]
        n = len(surj) - 1
        if n > self.top_dim or not self.has_core(k, core):
            return False
        return surj[0] == 0 and all(b - a in (0, 1) for a, b in zip(surj, surj[1:]))

    def _check_level(self, n: int):
        if n < 0 or n > self.top_dim:
            raise SimplicialError(
                f"level {n} is undetermined: {self.name or 'simplicial set'} is truncated at {self.top_dim}"
            )

    def level(self, n: int) -> list:
        """All ``n``-simplices (degenerate ones included)."""
        self._check_level(n)
        if n not in self._level_cache:
            out = []
            for k in range(n + 1):
                sj = list(surjections(n, k))
                for c in self._cores[k]:
                    out.extend((c, s) for s in sj)
            self._level_cache[n] = out
        return self._level_cache[n]

    def census(self, nondegenerate: bool = False) -> list[int]:
        if nondegenerate:
            return [len(self._cores[k]) for k in range(self.top_dim + 1)]
        return [sum(len(self._cores[k]) * comb(n, k) for k in range(n + 1)) for n in range(self.top_dim + 1)]

    # -- structure maps ----------------------------------------------------

    def _restrict(self, k: int, core: Hashable, image: tuple) -> Simplex:
        """Pull the core back along the injection with the given image."""
        if len(image) == k + 1:
            return (core, identity_surj(k))
        key = (k, core, image)
        hit = self._restrict_cache.get(key)
        if hit is not None:
            return hit
        imset = set(image)
        i = max(v for v in range(k + 1) if v not in imset)
        face = self._faces[k][core][i]
        inner = tuple(v if v < i else v - 1 for v in image)
        out = self.apply(face, inner)
        self._restrict_cache[key] = out
        return out

    def apply(self, s: Simplex, f: Sequence[int]) -> Simplex:
        """``f^* s`` for a weakly increasing map ``f: [m] -> [dim s]``."""
        core, surj = s
        g = [surj[i] for i in f]
        image = tuple(sorted(set(g)))
        pos = {v: idx for idx, v in enumerate(image)}
        k = surj[-1]
        core2, tau = self._restrict(k, core, image)
        return (core2, tuple(tau[pos[v]] for v in g))

    def face(self, s: Simplex, i: int) -> Simplex:
        n = len(s[1]) - 1
        if n < 1 or not 0 <= i <= n:
            raise SimplicialError(f"face d_{i} undefined on a {n}-simplex")
        core, surj = s
        if surj[-1] == n:
            return self._faces[n][core][i]
        v = surj[i]
        if (i > 0 and surj[i - 1] == v) or (i < n and surj[i + 1] == v):
            # the deleted vertex is repeated: the face keeps the same core
            return (core, surj[:i] + surj[i + 1 :])
        key = (s, i)
        hit = self._face_cache.get(key)
        if hit is None:
            hit = self.apply(s, tuple(v for v in range(n + 1) if v != i))
            self._face_cache[key] = hit
        return hit

    def faces(self, s: Simplex) -> tuple:
        return tuple(self.face(s, i) for i in range(len(s[1])))

    def degeneracy(self, s: Simplex, j: int) -> Simplex:
        n = len(s[1]) - 1
        if n + 1 > self.top_dim:
            raise SimplicialError(f"s_{j} of a {n}-simplex needs level {n + 1} > top_dim {self.top_dim}")
        if not 0 <= j <= n:
            raise SimplicialError(f"degeneracy s_{j} undefined on a {n}-simplex")
        core, surj = s
        return (core, surj[: j + 1] + surj[j:])

    def constant(self, v: Simplex, n: int) -> Simplex:
        """The totally degenerate ``n``-simplex on a vertex."""
        self._check_level(n)
        if len(v[1]) != 1:
            raise SimplicialError("constant simplices are built from vertices")
        return self.apply(v, (0,) * (n + 1))

    def normal_form(self, s: Simplex) -> tuple[Hashable, tuple[int, ...]]:
        return s[0], degeneracy_word(s[1])

    def face_table(self, n: int, i: int) -> dict:
        return {s: self.face(s, i) for s in self.level(n)}

    def degeneracy_table(self, n: int, i: int) -> dict:
        return {s: self.degeneracy(s, i) for s in self.level(n)}

    # -- indices used by hom enumeration ------------------------------------

    def face_index(self, n: int) -> dict:
        """``(i, d_i s) -> [s]`` over level ``n``."""
        if n not in self._face_index:
            idx: dict = {}
            for s in self.level(n):
                for i in range(n + 1):
                    idx.setdefault((i, self.face(s, i)), []).append(s)
            self._face_index[n] = idx
        return self._face_index[n]

    def face_pair_index(self, n: int) -> dict:
        """``(i, d_i s, j, d_j s) -> [s]`` for ``i < j`` over level ``n``."""
        key = ("pair", n)
        if key not in self._face_index:
            idx: dict = {}
            for s in self.level(n):
                fs = self.faces(s)
                for i, j in itertools.combinations(range(n + 1), 2):
                    idx.setdefault((i, fs[i], j, fs[j]), []).append(s)
            self._face_index[key] = idx
        return self._face_index[key]

    def core_face_index(self, n: int) -> dict:
        """``(i, d_i c) -> [c]`` over the nondegenerate ``n``-simplices only."""
        key = ("core", n)
        if key not in self._face_index:
            idx: dict = {}
            for c in self._cores[n]:
                for i, f in enumerate(self._faces[n][c]):
                    idx.setdefault((i, f), []).append((c, identity_surj(n)))
            self._face_index[key] = idx
        return self._face_index[key]

    def boundary_index(self, n: int) -> dict:
        """``(d_0 s, ..., d_n s) -> [s]`` over level ``n``."""
        if n not in self._boundary_index:
            idx: dict = {}
            for s in self.level(n):
                idx.setdefault(self.faces(s), []).append(s)
            self._boundary_index[n] = idx
        return self._boundary_index[n]

    # -- validation ----------------------------------------------------------

    def _validate(self):
        for k in range(1, self.top_dim + 1):
            for c in self._cores[k]:
                fs = self._faces[k].get(c)
                if fs is None or len(fs) != k + 1:
                    raise SimplicialError(f"core {c!r} of dimension {k} needs {k + 1} faces")
                for i, f in enumerate(fs):
                    if len(f[1]) != k or not self.contains(f):
                        raise SimplicialError(f"face d_{i} of {c!r} is not a {k - 1}-simplex: {f!r}")
        for k in range(2, self.top_dim + 1):
            for c in self._cores[k]:
                s = (c, identity_surj(k))
                for i, j in itertools.combinations(range(k + 1), 2):
                    if self.face(self.face(s, j), i) != self.face(self.face(s, i), j - 1):
                        raise SimplicialError(
                            f"simplicial identity d_{i} d_{j} = d_{j - 1} d_{i} fails on core {c!r} (n={k}, i={i}, j={j})"
                        )

    def check_identities(self, max_level: int | None = None) -> list[tuple]:
        """Exhaustively check all simplicial identities; return violations ``(kind, n, i, j, s)``."""
        top = self.top_dim if max_level is None else min(max_level, self.top_dim)
        bad = []
        for n in range(top + 1):
            for s in self.level(n):
                if n >= 2:
                    for i, j in itertools.combinations(range(n + 1), 2):
                        if self.face(self.face(s, j), i) != self.face(self.face(s, i), j - 1):
                            bad.append(("dd", n, i, j, s))
                if n + 2 <= top:
                    for i in range(n + 1):
                        for j in range(i, n + 1):
                            if self.degeneracy(self.degeneracy(s, j), i) != self.degeneracy(self.degeneracy(s, i), j + 1):
                                bad.append(("ss", n, i, j, s))
                if n + 1 <= top:
                    for j in range(n + 1):
                        t = self.degeneracy(s, j)
                        for i in range(n + 2):
                            got = self.face(t, i)
                            if i < j:
                                want = self.degeneracy(self.face(s, i), j - 1) if n >= 1 else None
                            elif i in (j, j + 1):
                                want = s
                            else:
                                want = self.degeneracy(self.face(s, i - 1), j) if n >= 1 else None
                            if want is not None and got != want:
                                bad.append(("ds", n, i, j, s))
        return bad

    def truncated(self, dim: int) -> "FiniteSimplicialSet":
        return FiniteSimplicialSet(
            dim,
            {k: self._cores[k] for k in range(dim + 1)},
            {k: self._faces[k] for k in range(1, dim + 1)},
            name=self.name,
            validate=False,
        )

    def relabel(self, mapping: Callable[[int, Hashable], Hashable]) -> tuple["FiniteSimplicialSet", Callable]:
        """Copy with every core renamed by ``mapping(k, core)``; returns the copy and a simplex translator."""

        def tr(s):
            core, surj = s
            return (mapping(surj[-1], core), surj)

        cores = {k: [mapping(k, c) for c in cs] for k, cs in self._cores.items()}
        faces = {k: {mapping(k, c): tuple(tr(f) for f in fs) for c, fs in d.items()} for k, d in self._faces.items()}
        return FiniteSimplicialSet(self.top_dim, cores, faces, name=self.name), tr

    def __repr__(self):
        return f"FiniteSimplicialSet({self.name!r}, top_dim={self.top_dim}, nondegenerate={self.census(True)})"


# ---------------------------------------------------------------------------
# Standard simplices, horns and boundaries


def _sub_simplex(m: int, top_dim: int, keep: Callable[[tuple], bool], name: str) -> FiniteSimplicialSet:
    cores: dict[int, list] = {}
    faces: dict[int, dict] = {}
    for k in range(min(m, top_dim) + 1):
        cs = [c for c in itertools.combinations(range(m + 1), k + 1) if keep(c)]
        cores[k] = cs
        if k >= 1:
            faces[k] = {c: tuple((c[:i] + c[i + 1 :], identity_surj(k - 1)) for i in range(k + 1)) for c in cs}
    return FiniteSimplicialSet(top_dim, cores, faces, name=name, validate=False)


def standard_simplex(m: int, top_dim: int | None = None) -> FiniteSimplicialSet:
    """Delta[m]; simplices are monotone maps ``[n] -> [m]`` (cores are their images)."""
    top_dim = m if top_dim is None else top_dim
    if m < 0:
        raise SimplicialError("m must be non-negative")
    if top_dim < m:
        raise SimplicialError(f"truncation dim {top_dim} < {m} would lose the top cell of Delta[{m}]")
    return _sub_simplex(m, top_dim, lambda c: True, f"Delta[{m}]")


def horn(m: int, j: int, top_dim: int | None = None) -> FiniteSimplicialSet:
    """Lambda[m, j]: monotone maps whose image misses some vertex other than ``j``."""
    if m < 1 or not 0 <= j <= m:
        raise SimplicialError(f"invalid horn ({m}, {j})")
    top_dim = m - 1 if top_dim is None else top_dim
    if top_dim < m - 1:
        raise SimplicialError(f"truncation dim {top_dim} < {m - 1} would lose faces of Lambda[{m},{j}]")
    rest = set(range(m + 1)) - {j}
    return _sub_simplex(m, top_dim, lambda c: not rest <= set(c), f"Lambda[{m},{j}]")


def boundary(m: int, top_dim: int | None = None) -> FiniteSimplicialSet:
    """The boundary of Delta[m]: all non-surjective monotone maps."""
    if m < 0:
        raise SimplicialError("m must be non-negative")
    top_dim = max(m - 1, 0) if top_dim is None else top_dim
    return _sub_simplex(m, top_dim, lambda c: len(c) < m + 1, f"dDelta[{m}]")


# ---------------------------------------------------------------------------
# Simplicial maps


@dataclass
class SimplicialMap:
    """A map of finite simplicial sets, determined by its values on cores."""

    source: FiniteSimplicialSet
    target: FiniteSimplicialSet
    assignment: dict  # (k, core) -> target simplex of dimension k

    def __call__(self, s: Simplex) -> Simplex:
        core, surj = s
        return self.target.apply(self.assignment[(surj[-1], core)], surj)

    def level_map(self, n: int) -> dict:
        return {s: self(s) for s in self.source.level(n)}

    def key(self) -> tuple:
        return tuple(self.assignment[(k, c)] for k in range(self.source.top_dim + 1) for c in self.source.cores(k))

    def verify(self) -> list[tuple]:
        """Return ``(k, core, i)`` for every failure of ``F d_i = d_i F`` on cores."""
        bad = []
        for k in range(self.source.top_dim + 1):
            for c in self.source.cores(k):
                img = self.assignment.get((k, c))
                if img is None or len(img[1]) != k + 1 or not self.target.contains(img):
                    bad.append((k, c, None))
                    continue
                if k >= 1:
                    for i, f in enumerate(self.source.core_faces(k, c)):
                        if self.target.face(img, i) != self(f):
                            bad.append((k, c, i))
        return bad

    def compose(self, other: "SimplicialMap") -> "SimplicialMap":
        """``other ∘ self``."""
        return SimplicialMap(self.source, other.target, {key: other(v) for key, v in self.assignment.items()})

    @classmethod
    def identity(cls, X: FiniteSimplicialSet) -> "SimplicialMap":
        return cls(X, X, {(k, c): (c, identity_surj(k)) for k in range(X.top_dim + 1) for c in X.cores(k)})


def _generator_order(A: FiniteSimplicialSet) -> list[tuple[int, Hashable]]:
    """Cores not lying in the image of any face map, top dimension first."""
    covered = set()
    for k in range(1, A.top_dim + 1):
        for c in A.cores(k):
            for f in A.core_faces(k, c):
                covered.add((f[1][-1], f[0]))
    gens = [(k, c) for k in range(A.top_dim + 1) for c in A.cores(k) if (k, c) not in covered]
    return sorted(gens, key=lambda kc: -kc[0])


def iter_simplicial_maps(
    A: FiniteSimplicialSet, X: FiniteSimplicialSet, admit: Callable[[dict, int, Hashable, tuple], bool] | None = None
) -> Iterator[dict]:
    """Backtracking enumeration of hom(A, X) as core assignments.

    Generators are visited in decreasing dimension (stable within a dimension);
    candidates for a generator come from the face index of ``X`` keyed by an
    already-determined face, and every subsimplex is unified on assignment.
    ``admit(partial_assignment, k, core, value)`` can veto a generator value
    before it is tried.
    """
    gens = _generator_order(A)
    if gens and gens[0][0] > X.top_dim:
        raise SimplicialError(f"source generated in dimension {gens[0][0]} above target top_dim {X.top_dim}")
    assign: dict = {}

    def unify(k, c, val, trail) -> bool:
        cur = assign.get((k, c))
        if cur is not None:
            return cur == val
        assign[(k, c)] = val
        trail.append((k, c))
        if k == 0:
            return True
        for i, (fc, fs) in enumerate(A.core_faces(k, c)):
            target = X.face(val, i)
            fk = fs[-1]
            if fk == len(fs) - 1:
                if not unify(fk, fc, target, trail):
                    return False
            else:
                cur = assign.get((fk, fc))
                if cur is not None:
                    if X.apply(cur, fs) != target:
                        return False
                else:
                    section = tuple(fs.index(v) for v in range(fk + 1))
                    cand = X.apply(target, section)
                    if X.apply(cand, fs) != target or not unify(fk, fc, cand, trail):
                        return False
        return True

    def candidates(k, c):
        if k >= 1:
            known = []
            for i, (fc, fs) in enumerate(A.core_faces(k, c)):
                cur = assign.get((fs[-1], fc))
                if cur is not None:
                    known.append((i, X.apply(cur, fs)))
            if len(known) == k + 1:
                return X.boundary_index(k).get(tuple(f for _, f in known), ())
            if len(known) >= 2:
                (i, f), (i2, f2) = known[0], known[1]
                return X.face_pair_index(k).get((i, f, i2, f2), ())
            if known:
                return X.face_index(k).get(known[0], ())
        return X.level(k)

    def rec(g):
        if g == len(gens):
            yield dict(assign)
            return
        k, c = gens[g]
        if (k, c) in assign:
            yield from rec(g + 1)
            return
        for val in candidates(k, c):
            if admit is not None and not admit(assign, k, c, val):
                continue
            trail: list = []
            if unify(k, c, val, trail):
                yield from rec(g + 1)
            for key in trail:
                del assign[key]

    yield from rec(0)


def simplicial_maps(A: FiniteSimplicialSet, X: FiniteSimplicialSet) -> list[SimplicialMap]:
    """The complete hom-set hom(A, X)."""
    return [SimplicialMap(A, X, a) for a in iter_simplicial_maps(A, X)]


# ---------------------------------------------------------------------------
# Kan conditions


@dataclass
class KanReport:
    m: int
    j: int
    restriction_surjective: bool
    restriction_bijective: bool
    horn_count: int
    simplex_count: int
    witness_misses: list = field(default_factory=list)

    @property
    def label(self) -> str:
        return f"Kan({self.m},{self.j})"


def _horn_cores(m: int, j: int) -> list[tuple]:
    H = horn(m, j)
    return [c for k in range(m) for c in H.cores(k)]


def horn_key(X: FiniteSimplicialSet, s: Simplex, m: int, j: int) -> tuple:
    """Restriction of an ``m``-simplex to Lambda[m, j], as images of the horn's cores."""
    return tuple(X.apply(s, c) for c in _horn_cores(m, j))


def check_horn_filling(X: FiniteSimplicialSet, m: int, j: int, max_misses: int = 10) -> KanReport:
    """Surjectivity / bijectivity of hom(Delta[m], X) -> hom(Lambda[m, j], X)."""
    if m > X.top_dim:
        raise SimplicialError(f"Kan({m},{j}) needs level {m} > top_dim {X.top_dim}")
    hcores = _horn_cores(m, j)
    H = horn(m, j)
    horns = [tuple(a[(len(c) - 1, c)] for c in hcores) for a in iter_simplicial_maps(H, X)]
    images: dict = {}
    for s in X.level(m):
        images.setdefault(tuple(X.apply(s, c) for c in hcores), []).append(s)
    misses = [dict(zip(hcores, h)) for h in horns if h not in images]
    surj = not misses
    inj = all(len(v) == 1 for v in images.values())
    return KanReport(m, j, surj, surj and inj, len(horns), len(X.level(m)), misses[:max_misses])


def _horn_order(m: int) -> list[int]:
    # inner horns (composition) before outer horns (inverses)
    return [j for j in range(1, m)] + [0, m] if m >= 2 else [0, 1]


@dataclass
class GroupoidVerdict:
    n: int | None
    reports: list[KanReport]
    failure: KanReport | None = None
    checked_up_to: int = 0

    @property
    def ok(self) -> bool:
        return self.n is not None

    def describe(self) -> str:
        if self.ok:
            return f"{self.n}-groupoid"
        return f"not a Lie n-groupoid: {self.failure.label} fails"


def classify_n_groupoid(X: FiniteSimplicialSet, n_max: int | None = None) -> GroupoidVerdict:
    """Smallest ``n`` with Kan(m, j) for all m and Kan!(m, j) for all m > n (up to top_dim)."""
    if n_max is not None and X.top_dim < n_max + 1:
        raise SimplicialError(f"need top_dim >= n_max + 1 = {n_max + 1}")
    reports = []
    for m in range(1, X.top_dim + 1):
        for j in _horn_order(m):
            r = check_horn_filling(X, m, j)
            reports.append(r)
            if not r.restriction_surjective:
                return GroupoidVerdict(None, reports, r, X.top_dim)
    n = 0
    for r in reports:
        if not r.restriction_bijective:
            n = max(n, r.m)
    if n >= X.top_dim:
        # uniqueness above n cannot be confirmed inside the truncation
        return GroupoidVerdict(None, reports, next(r for r in reports if r.m == n and not r.restriction_bijective), X.top_dim)
    if n_max is not None and n > n_max:
        return GroupoidVerdict(None, reports, next(r for r in reports if r.m == n and not r.restriction_bijective), X.top_dim)
    return GroupoidVerdict(n, reports, None, X.top_dim)
