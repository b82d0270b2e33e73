import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kanforge.groupoids import FiniteGroupoid, nerve, random_groupoid
from kanforge.homotopy import find_isomorphism, group_axiom_violations, group_table, homotopy_group
from kanforge.kan import KanError
from kanforge.simplicial import horn


def components(G):
    seen, count = set(), 0
    for x in G.objects:
        if x in seen:
            continue
        count += 1
        stack = [x]
        while stack:
            y = stack.pop()
            if y in seen:
                continue
            seen.add(y)
            stack += [G.target[g] for g in G.arrows if G.source[g] == y]
            stack += [G.source[g] for g in G.arrows if G.target[g] == y]
    return count


groupoids = st.integers(0, 10_000).map(lambda seed: random_groupoid(random.Random(seed), max_objects=3, max_arrows=8))


@given(groupoids)
def test_pi0_counts_components(G):
    X = nerve(G, 3)
    assert homotopy_group(X, G.objects[0], 0).order == components(G)


@given(groupoids)
def test_pi1_is_isotropy(G):
    X = nerve(G, 3)
    p = homotopy_group(X, G.objects[0], 1)
    assert group_axiom_violations(p.elements, p.table, p.identity) == []
    assert find_isomorphism(p.elements, p.table, p.identity, *group_table(G)) is not None


@pytest.mark.parametrize("G", [FiniteGroupoid.cyclic(4), FiniteGroupoid.symmetric(3)], ids=str)
def test_pi2_of_nerve_trivial(G):
    assert homotopy_group(nerve(G, 3), G.objects[0], 2).order == 1


def test_s3_pi1_not_abelian():
    G = FiniteGroupoid.symmetric(3)
    p = homotopy_group(nerve(G, 3), G.objects[0], 1)
    assert p.order == 6 and not p.is_abelian()


def test_isomorphism_distinguishes_z4_and_klein():
    z4 = FiniteGroupoid.cyclic(4)
    k = FiniteGroupoid.cyclic(2).product(FiniteGroupoid.cyclic(2))
    assert find_isomorphism(*group_table(z4), *group_table(k)) is None
    assert find_isomorphism(*group_table(z4), *group_table(z4)) is not None


def test_check_kan_reports_unfillable_horn():
    X = horn(2, 1, 2)
    with pytest.raises(KanError, match="not Kan"):
        homotopy_group(X, X.level(0)[0], 1, check_kan=True)
