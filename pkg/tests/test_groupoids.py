import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kanforge.groupoids import (
    FiniteGroupoid,
    GroupoidError,
    LocalGroupoid,
    bigon_groupoid,
    bigons,
    check_local_kan_properties,
    local_nerve,
    nerve,
    random_groupoid,
    string_of,
)
from kanforge.simplicial import classify_n_groupoid


def count_strings(objects, arrows, source, target, mul, ok, n):
    """Composable strings g_1..g_n (t(g_{i+1}) = s(g_i)) whose contiguous products all pass ``ok``."""
    if n == 0:
        return len(objects)
    total = 0
    for s in itertools.product(arrows, repeat=n):
        if any(source[s[i]] != target[s[i + 1]] for i in range(n - 1)):
            continue
        good = True
        for i in range(n):
            p = s[i]
            for j in range(i + 1, n):
                p = mul(p, s[j])
                if not ok(p):
                    good = False
                    break
            if not good:
                break
        total += good
    return total


groupoids = st.integers(0, 10_000).map(lambda seed: random_groupoid(random.Random(seed), max_objects=3, max_arrows=8))


@given(groupoids)
def test_nerve_census_matches_string_count(G):
    X = nerve(G, 3)
    for n in range(4):
        assert len(X.level(n)) == count_strings(G.objects, G.arrows, G.source, G.target, G.mul, lambda g: True, n)


@given(groupoids)
def test_nerve_simplices_round_trip_to_strings(G):
    X = nerve(G, 3)
    strings = {string_of(s, G) for s in X.level(2)}
    assert len(strings) == len(X.level(2))


@given(groupoids)
def test_nerve_identities_and_kan(G):
    X = nerve(G, 3)
    assert X.check_identities() == []
    assert classify_n_groupoid(X).n == 1


@pytest.mark.parametrize("r", [1, 2])
def test_local_nerve_census_matches_string_count(r):
    L = LocalGroupoid.integer_window(r)
    X = local_nerve(L, 4)
    for n in range(5):
        assert len(X.level(n)) == count_strings(L.objects, L.V, L.source, L.target, lambda a, b: a + b, L.in_V, n)


def test_integer_window_census():
    assert local_nerve(LocalGroupoid.integer_window(1), 4).census() == [1, 3, 7, 15, 31]


def test_integer_window_properties():
    X = local_nerve(LocalGroupoid.integer_window(1), 3)
    rep = check_local_kan_properties(X)
    assert rep.property_A_ok and rep.property_B_ok
    assert set(rep.hom_sizes.values()) == {9}
    for bij in rep.bijections.values():
        assert len(bij) == 9 and len(set(bij.values())) == 9
    # not Kan: 1 + 1 leaves the window
    assert not rep.surjectivity[(2, 1)]


def test_full_local_groupoid_is_nerve():
    G = FiniteGroupoid.symmetric(3)
    assert local_nerve(LocalGroupoid.from_groupoid(G), 3).census() == nerve(G, 3).census()


def test_invalid_groupoid_rejected():
    G = FiniteGroupoid.cyclic(3)
    comp = dict(G.compose)
    a, b = comp[(1, 1)], comp[(1, 2)]
    comp[(1, 1)], comp[(1, 2)] = b, a
    with pytest.raises(GroupoidError):
        FiniteGroupoid(G.objects, G.arrows, G.source, G.target, comp, G.identity, G.inverse)


def test_local_groupoid_needs_closed_inverse():
    with pytest.raises(GroupoidError):
        LocalGroupoid(["*"], [0, 1, 2], [0, 1], {g: "*" for g in range(3)}, {g: "*" for g in range(3)},
                      {(a, b): a + b for a in (0, 1) for b in (0, 1)}, {"*": 0}, {0: 0, 1: 2})


@pytest.mark.parametrize("G", [FiniteGroupoid.cyclic(2), FiniteGroupoid.symmetric(3), FiniteGroupoid.pair([0, 1, 2])], ids=str)
def test_bigon_groupoid_of_nerve_is_discrete(G):
    Y = nerve(G, 3)
    B = bigon_groupoid(Y)
    # in a 1-groupoid nerve each edge has only its identity bigon
    assert len(bigons(Y)) == len(Y.level(1))
    assert len(B.objects) == len(Y.level(1)) and len(B.arrows) == len(B.objects)


def test_product_and_union_counts():
    A, B = FiniteGroupoid.cyclic(2), FiniteGroupoid.pair([0, 1])
    assert len(A.product(B).arrows) == 8
    U = FiniteGroupoid.disjoint_union([A, B])
    assert len(U.objects) == 3 and len(U.arrows) == 6
