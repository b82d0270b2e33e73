import json
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kanforge import io
from kanforge.algebroid import maurer_cartan_family, random_matrix_path, sphere_family, su2
from kanforge.groupoids import FiniteGroupoid, LocalGroupoid, local_nerve, nerve, random_groupoid
from kanforge.kan import kan_replace


def roundtrip(tmp_path, doc, name="x.json"):
    p = tmp_path / name
    io.write(p, doc)
    kind, value, text = io.read(p)
    return kind, value


@given(st.integers(0, 10_000))
def test_groupoid_round_trip(tmp_path_factory, seed):
    G = random_groupoid(random.Random(seed), max_objects=3, max_arrows=8)
    kind, H = roundtrip(tmp_path_factory.mktemp("g"), io.groupoid_to_doc(G))
    assert kind == "groupoid"
    assert H.objects == G.objects and H.arrows == G.arrows
    assert H.compose == G.compose and H.inverse == G.inverse


def test_local_groupoid_round_trip(tmp_path):
    L = LocalGroupoid.integer_window(1)
    kind, M = roundtrip(tmp_path, io.groupoid_to_doc(L))
    assert kind == "local_groupoid"
    assert M.V == L.V and M.arrows == L.arrows
    assert local_nerve(M, 3).census() == local_nerve(L, 3).census()


@pytest.mark.parametrize("full", [False, True])
def test_simplicial_round_trip(tmp_path, full):
    X = kan_replace(nerve(FiniteGroupoid.cyclic(2), 3), 1, k_max=3).top
    kind, Y = roundtrip(tmp_path, io.simplicial_to_doc(X, full=full))
    assert kind == "simplicial_set"
    assert Y.census() == X.census() and Y.census(True) == X.census(True)
    assert Y.check_identities() == []


def test_dumps_is_deterministic():
    X = nerve(FiniteGroupoid.symmetric(3), 3)
    a = io.dumps(io.simplicial_to_doc(X))
    b = io.dumps(io.simplicial_to_doc(nerve(FiniteGroupoid.symmetric(3), 3)))
    assert io.digest(a) == io.digest(b)
    assert json.loads(a)["format"] == "kanforge.simplicial_set"


def test_path_round_trip_complex(tmp_path):
    p = random_matrix_path(su2(), np.random.default_rng(0), N=50)
    kind, q = roundtrip(tmp_path, io.path_to_doc(p))
    assert kind == "path"
    assert np.array_equal(q.fiber, p.fiber) and np.array_equal(q.t, p.t)


@pytest.mark.parametrize("sphere", [False, True])
def test_homotopy_round_trip(tmp_path, sphere):
    rng = np.random.default_rng(0)
    H = sphere_family(rng, 10) if sphere else maurer_cartan_family(su2(), rng, 10)
    kind, K = roundtrip(tmp_path, io.homotopy_to_doc(H))
    assert kind == "homotopy"
    assert np.array_equal(K.a, H.a) and np.array_equal(K.b, H.b)


def test_invalid_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{\n"format": "kanforge.groupoid",\n"version": 1,,\n}')
    value, diags = io.validate(p)
    assert value is None and diags[0].line == 3


def test_unknown_format(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{\n"format": "kanforge.banana",\n"version": 1\n}')
    _, diags = io.validate(p)
    assert "unknown format" in diags[0].message and diags[0].line == 2
    with pytest.raises(io.FormatError):
        io.read(p)


def test_missing_field(tmp_path):
    doc = io.groupoid_to_doc(FiniteGroupoid.cyclic(2))
    del doc["inverses"]
    p = tmp_path / "g.json"
    io.write(p, doc)
    _, diags = io.validate(p)
    assert any("inverses" in d.message for d in diags)


def test_non_associative_table_located(tmp_path):
    doc = io.groupoid_to_doc(FiniteGroupoid.cyclic(3))
    row = next(r for r in doc["compose_table"] if r[0] == 1 and r[1] == 1)
    row[2] = 0
    p = tmp_path / "g.json"
    text = io.write(p, doc)
    _, diags = io.validate(p)
    assert diags
    lines = text.splitlines()
    assert all(d.line is not None and 1 <= d.line <= len(lines) for d in diags)
    assert any(lines[d.line - 1].lstrip().startswith("[1") for d in diags)


def test_broken_simplicial_identity_located(tmp_path):
    doc = io.simplicial_to_doc(nerve(FiniteGroupoid.cyclic(2), 3))
    lev = doc["levels"][3]
    lev["faces"][-1][0], lev["faces"][-1][1] = lev["faces"][-1][1], lev["faces"][-1][0]
    p = tmp_path / "x.json"
    text = io.write(p, doc)
    _, diags = io.validate(p)
    assert diags and "simplicial identity" in diags[0].message
    assert '"' + lev["ids"][-1] + '"' in text.splitlines()[diags[0].line - 1]
