import random
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kanforge.groupoids import FiniteGroupoid, LocalGroupoid, local_nerve, nerve, random_groupoid
from kanforge.kan import (
    Cell,
    evaluate_words,
    hom_count,
    horn_set,
    kan_replace,
    kan_step,
    predicted_census,
    stage_filter,
    top_fillers_unique,
    truncate,
)
from kanforge.simplicial import SimplicialError, horn


def z2():
    return nerve(FiniteGroupoid.cyclic(2), 3)


def test_horn_set():
    assert horn_set(2) == [(2, 1)]
    assert horn_set(3) == [(2, 1), (3, 0), (3, 1), (3, 2), (3, 3)]


def test_z2_first_stage_census():
    Y, prov = kan_step(z2(), 3)
    assert Y.census() == [1, 6, 48, 160]
    # one face cell and one fill cell per horn map
    assert len(prov) == 2 * sum(hom_count(horn(k, j), z2()) for k, j in horn_set(3))


def test_z2_census_by_hand():
    # |hom(Lambda[2,1], N Z/2)| = 4 and |hom(Lambda[3,j], N Z/2)| = 8 for each j
    X = z2()
    assert hom_count(horn(2, 1), X) == 4
    assert all(hom_count(horn(3, j), X) == 8 for j in range(4))
    new1, new2 = 4, 4 + 4 * 8
    assert 2 + new1 == 6
    assert 4 + new1 * comb(2, 1) + new2 == 48


def test_z2_depth_two_level_one():
    F = kan_replace(z2(), 2, k_max=3)
    assert F.stages[2].census()[1] == 42


@given(st.integers(0, 10_000))
def test_predicted_census_matches(seed):
    X = nerve(random_groupoid(random.Random(seed), max_objects=2, max_arrows=4), 3)
    Y, _ = kan_step(X, 3)
    assert Y.census() == predicted_census(X, 3)


def test_kan_step_identities():
    Y, _ = kan_step(z2(), 3)
    assert Y.check_identities() == []


def test_k_max_above_top_dim_rejected():
    with pytest.raises(SimplicialError):
        kan_step(nerve(FiniteGroupoid.cyclic(2), 2), 3)


def test_budget_gives_partial():
    F = kan_replace(z2(), 2, k_max=3, max_cells=20)
    assert F.partial and F.depth == 0


def test_frontier_only_trims_fresh_horns():
    full = kan_replace(z2(), 2, k_max=3)
    capped = kan_replace(z2(), 2, k_max=3, frontier=1)
    assert full.stages[1].census() == capped.stages[1].census()
    a, b = full.stages[2].census(), capped.stages[2].census()
    assert a[:2] == b[:2]
    assert b[2] < a[2]


def test_fill_cells_have_horn_faces():
    X = z2()
    F = kan_replace(X, 1, k_max=3)
    Y = F.top
    for cell, h in F.provenance.items():
        if cell.role != "fill":
            continue
        faces = Y.core_faces(cell.k, cell)
        assert faces[cell.j] == (cell._replace(role="face"), tuple(range(cell.k)))
        for i in range(cell.k + 1):
            if i != cell.j:
                assert faces[i] == h[tuple(v for v in range(cell.k + 1) if v != i)]


@pytest.mark.parametrize("G", [FiniteGroupoid.cyclic(2), FiniteGroupoid.pair([0, 1])], ids=str)
def test_evaluation_retracts_onto_nerve(G):
    X = nerve(G, 3)
    F = kan_replace(X, 2, k_max=3, frontier=1)
    ev = evaluate_words(F)
    assert ev.undefined == []
    assert ev.verify() == []
    m = ev.as_map()
    for s in X.level(2):
        assert m(s) == s


def test_evaluation_undefined_outside_window():
    F = kan_replace(local_nerve(LocalGroupoid.integer_window(1), 3), 1, k_max=3)
    ev = evaluate_words(F)
    assert ev.undefined
    assert ev.verify() == []


@pytest.mark.parametrize("G", [FiniteGroupoid.cyclic(2), FiniteGroupoid.cyclic(3)], ids=str)
def test_truncation_unique_fillers_smart_vs_exhaustive(G):
    F = kan_replace(nerve(G, 3), 1, k_max=3)
    T = truncate(F.top, 2)
    for j in range(4):
        assert top_fillers_unique(T.quotient, 3, j) == top_fillers_unique(T.quotient, 3, j, exhaustive=True)


@given(st.integers(0, 10_000))
def test_truncation_quotient_map_is_simplicial(seed):
    X = nerve(random_groupoid(random.Random(seed), max_objects=2, max_arrows=3), 3)
    F = kan_replace(X, 1, k_max=3)
    T = truncate(F.top, 2)
    assert T.quotient.check_identities() == []
    assert T.quotient_map(F.top).verify() == []
    for j in range(4):
        assert top_fillers_unique(T.quotient, 3, j) == top_fillers_unique(T.quotient, 3, j, exhaustive=True)


def test_truncation_of_nerve_changes_nothing():
    X = z2()
    T = truncate(X, 2)
    assert T.quotient.census() == X.census()
    assert T.witnesses == []
    assert all(T.kan_unique.values())


def test_stage_filter():
    F = kan_replace(z2(), 2, k_max=3, frontier=1)
    T = truncate(F.top, 2)
    f0 = stage_filter(T, F.top, 0)
    f2 = stage_filter(T, F.top, 2)
    lvl1 = T.quotient.level(1)
    assert sum(map(f0, lvl1)) == 2
    assert all(map(f2, lvl1))
    assert all(f0(s) for s in T.quotient.level(1) if not isinstance(s[0], Cell))
