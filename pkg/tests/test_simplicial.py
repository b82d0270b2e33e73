import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kanforge.groupoids import FiniteGroupoid, nerve
from kanforge.simplicial import (
    FiniteSimplicialSet,
    MonotoneMap,
    SimplicialError,
    SimplicialMap,
    boundary,
    check_horn_filling,
    classify_n_groupoid,
    degeneracy_word,
    horn,
    simplicial_maps,
    standard_simplex,
    surj_from_word,
    surjections,
)


def monotone_maps(n, m):
    """All monotone [n] -> [m] as tuples (independent enumeration)."""
    return [f for f in itertools.product(range(m + 1), repeat=n + 1) if all(a <= b for a, b in zip(f, f[1:]))]


def as_tuple(X, s):
    """A simplex of a sub-simplex of Delta[m] as the monotone map it represents."""
    core, surj = s
    return tuple(core[i] for i in surj)


def test_standard_simplex_census():
    assert standard_simplex(2).census(True) == [3, 3, 1]
    assert standard_simplex(2).census() == [3, 6, 10]


def test_horn_and_boundary_census():
    assert horn(2, 1).census(True) == [3, 2]
    assert horn(3, 1).census(True) == [4, 6, 3]
    assert boundary(2, top_dim=2).census(True) == [3, 3, 0]


def test_horn_1_0_is_vertex_0():
    H = horn(1, 0)
    assert H.cores(0) == [(0,)]
    assert H.census(True) == [1]


@pytest.mark.parametrize("m,top", [(1, 3), (2, 3), (3, 4)])
def test_levels_are_monotone_maps(m, top):
    X = standard_simplex(m, top)
    for n in range(top + 1):
        assert sorted(as_tuple(X, s) for s in X.level(n)) == monotone_maps(n, m)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_faces_and_degeneracies_match_composition(m):
    X = standard_simplex(m, m + 1)
    for n in range(1, m + 2):
        for s in X.level(n):
            f = as_tuple(X, s)
            for i in range(n + 1):
                assert as_tuple(X, X.face(s, i)) == f[:i] + f[i + 1 :]
            if n + 1 <= m + 1:
                for j in range(n + 1):
                    assert as_tuple(X, X.degeneracy(s, j)) == f[: j + 1] + f[j:]


@pytest.mark.parametrize("X", [standard_simplex(3, 4), horn(3, 1, 3), boundary(3, 3)], ids=["Delta3", "Lambda31", "dDelta3"])
def test_simplicial_identities(X):
    assert X.check_identities() == []


def test_nerve_identities():
    assert nerve(FiniteGroupoid.symmetric(3), 3).check_identities() == []


@given(st.integers(1, 5).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, n))))
def test_surjection_word_round_trip(nk):
    n, k = nk
    for s in surjections(n, k):
        assert surj_from_word(k, degeneracy_word(s)) == s


@given(st.integers(0, 4), st.integers(0, 4), st.data())
def test_monotone_map_round_trip(n, m, data):
    f = data.draw(st.sampled_from(monotone_maps(n, m)))
    mm = MonotoneMap(n, m, f)
    assert MonotoneMap.from_simplex(mm.to_simplex(), m) == mm
    assert mm.is_nondegenerate == (len(set(f)) == n + 1)


def test_bad_faces_rejected():
    with pytest.raises(SimplicialError):
        FiniteSimplicialSet(1, {0: ["a", "b"], 1: ["e"]}, {1: {"e": (("a", (0,)),)}})
    with pytest.raises(SimplicialError):
        FiniteSimplicialSet(1, {0: ["a"], 1: ["e"]}, {1: {"e": (("z", (0,)), ("a", (0,)))}})


def test_dd_violation_rejected():
    cores = {0: ["a", "b"], 1: ["e", "f", "g"], 2: ["t"]}
    v = lambda x: (x, (0,))  # noqa: E731
    e = lambda x: (x, (0, 1))  # noqa: E731
    faces = {1: {"e": (v("b"), v("a")), "f": (v("b"), v("a")), "g": (v("a"), v("b"))}, 2: {"t": (e("e"), e("f"), e("g"))}}
    with pytest.raises(SimplicialError, match=r"n=2, i=1, j=2"):
        FiniteSimplicialSet(2, cores, faces)


def test_yoneda_hom_from_standard_simplex():
    Y = nerve(FiniteGroupoid.symmetric(3), 3)
    for m in range(4):
        assert len(simplicial_maps(standard_simplex(m), Y)) == len(Y.level(m))


def brute_force_boundary_maps(Y, k):
    """Tuples of (k-1)-simplices with d_i x_j = d_{j-1} x_i for i < j."""
    out = 0
    for xs in itertools.product(Y.level(k - 1), repeat=k + 1):
        if all(Y.face(xs[j], i) == Y.face(xs[i], j - 1) for i in range(k + 1) for j in range(i + 1, k + 1)):
            out += 1
    return out


@pytest.mark.parametrize("G", [FiniteGroupoid.cyclic(2), FiniteGroupoid.pair([0, 1]), FiniteGroupoid.cyclic(3)], ids=str)
def test_hom_counts_against_brute_force(G):
    Y = nerve(G, 3)
    assert len(simplicial_maps(boundary(2), Y)) == brute_force_boundary_maps(Y, 2)
    composable = sum(1 for g in G.arrows for h in G.arrows if G.composable(g, h))
    assert len(simplicial_maps(horn(2, 1), Y)) == composable


def test_z2_small_homs():
    Y = nerve(FiniteGroupoid.cyclic(2), 3)
    assert len(simplicial_maps(horn(2, 1), Y)) == 4
    assert len(simplicial_maps(standard_simplex(2), Y)) == 4


def test_simplicial_maps_verify():
    Y = nerve(FiniteGroupoid.cyclic(3), 3)
    for f in simplicial_maps(horn(2, 0), Y):
        assert f.verify() == []
    ident = SimplicialMap.identity(Y)
    assert ident.verify() == []


def test_nerve_is_1_groupoid():
    v = classify_n_groupoid(nerve(FiniteGroupoid.symmetric(3), 3))
    assert v.ok and v.n == 1
    assert v.describe() == "1-groupoid"


def test_standard_simplex_not_kan():
    r = check_horn_filling(standard_simplex(2, 2), 2, 0)
    assert not r.restriction_surjective
    assert r.witness_misses


def test_discrete_set_is_0_groupoid():
    X = FiniteSimplicialSet(2, {0: ["a", "b"]}, {})
    assert classify_n_groupoid(X).n == 0
