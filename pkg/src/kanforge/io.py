"""Versioned JSON documents for simplicial sets, groupoids, paths and homotopies."""

from __future__ import annotations

import ast
import hashlib
import json
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .algebroid import AHomotopy, APath, TangentSphere, so3, su2
from .groupoids import FiniteGroupoid, GroupoidError, LocalGroupoid
from .simplicial import FiniteSimplicialSet, SimplicialError

VERSION = 1
KINDS = ("simplicial_set", "groupoid", "local_groupoid", "path", "homotopy")


class FormatError(ValueError):
    pass


@dataclass
class Diagnostic:
    line: int | None
    message: str

    def __str__(self):
        return f"line {self.line}: {self.message}" if self.line else self.message


def digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _line_of(text: str, needle: str) -> int | None:
    i = text.find(needle)
    return None if i < 0 else text.count("\n", 0, i) + 1


def dumps(doc: dict) -> str:
    """One top-level key per line and one list entry per line (keeps diagnostics line-precise)."""
    lines = ["{"]
    items = list(doc.items())
    for n, (k, v) in enumerate(items):
        end = "," if n < len(items) - 1 else ""
        if isinstance(v, list) and v and not isinstance(v[0], (int, float)):
            lines.append(f"  {json.dumps(k)}: [")
            lines += [f"    {json.dumps(x)}" + ("," if i < len(v) - 1 else "") for i, x in enumerate(v)]
            lines.append("  ]" + end)
        else:
            lines.append(f"  {json.dumps(k)}: {json.dumps(v)}{end}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _header(kind: str) -> dict:
    return {"format": f"kanforge.{kind}", "version": VERSION}


# ---------------------------------------------------------------------------
# Simplicial sets


def simplicial_to_doc(X: FiniteSimplicialSet, full: bool = False) -> dict:
    """Cores get string ids ``"k:i"``; a face is ``[id, surjection]``.

    With ``full`` every level also lists its degeneracy and normal-form tables.
    """
    ids = {(k, c): f"{k}:{i}" for k in range(X.top_dim + 1) for i, c in enumerate(X.cores(k))}
    ref = lambda s: [ids[(s[1][-1], s[0])], list(s[1])]  # noqa: E731
    levels = []
    for k in range(X.top_dim + 1):
        lev = {"ids": [ids[(k, c)] for c in X.cores(k)], "labels": [repr(c) for c in X.cores(k)]}
        if k:
            lev["faces"] = [[ref(f) for f in X.core_faces(k, c)] for c in X.cores(k)]
        if full:
            lev["normal_forms"] = [ref(s) for s in X.level(k)]
            if k + 1 <= X.top_dim:
                lev["degeneracies"] = [[ref(X.degeneracy(s, j)) for j in range(k + 1)] for s in X.level(k)]
        levels.append(lev)
    return {**_header("simplicial_set"), "name": X.name, "dim": X.top_dim, "levels": levels}


def simplicial_from_doc(doc: dict, validate: bool = True) -> FiniteSimplicialSet:
    dim = doc["dim"]
    levels = doc["levels"]
    if len(levels) != dim + 1:
        raise FormatError(f"expected {dim + 1} levels, found {len(levels)}")
    cores = {k: list(lev["ids"]) for k, lev in enumerate(levels)}
    faces = {}
    for k in range(1, dim + 1):
        fs = levels[k].get("faces", [])
        if len(fs) != len(cores[k]):
            raise FormatError(f"level {k}: {len(cores[k])} ids but {len(fs)} face lists")
        faces[k] = {c: tuple((f[0], tuple(f[1])) for f in row) for c, row in zip(cores[k], fs)}
    X = FiniteSimplicialSet(dim, cores, faces, name=doc.get("name", ""), validate=validate)
    for k, lev in enumerate(levels):
        if "normal_forms" in lev:
            listed = {(f[0], tuple(f[1])) for f in lev["normal_forms"]}
            if listed != set(X.level(k)):
                raise FormatError(f"level {k}: normal_forms disagree with the cores")
        if "degeneracies" in lev:
            for s, row in zip(lev.get("normal_forms", []), lev["degeneracies"]):
                s = (s[0], tuple(s[1]))
                for j, d in enumerate(row):
                    if (d[0], tuple(d[1])) != X.degeneracy(s, j):
                        raise FormatError(f"level {k}: s_{j} of {s!r} disagrees")
    return X


# ---------------------------------------------------------------------------
# Groupoids


def _jsonable(x):
    if isinstance(x, tuple):
        return [_jsonable(y) for y in x]
    return x


def _hashable(x):
    if isinstance(x, list):
        return tuple(_hashable(y) for y in x)
    return x


def groupoid_to_doc(G: FiniteGroupoid | LocalGroupoid) -> dict:
    local = isinstance(G, LocalGroupoid)
    J = _jsonable
    arrows = G.arrows
    doc = {
        **_header("local_groupoid" if local else "groupoid"),
        "name": G.name,
        "objects": [J(x) for x in G.objects],
        "identities": [[J(x), J(G.identity[x])] for x in G.objects],
        "arrows": [{"id": J(g), "src": J(G.source[g]), "tgt": J(G.target[g])} for g in arrows],
    }
    pairs = [(g, h) for (g, h) in G.compose if (not local or (g in G._V and h in G._V))]
    doc["compose_table"] = [[J(g), J(h), J(G.compose[(g, h)])] for g, h in pairs]
    doc["inverses"] = [[J(g), J(G.inverse[g])] for g in (G.V if local else arrows)]
    if local:
        doc["V"] = [J(g) for g in G.V]
        doc["U"] = [J(g) for g in arrows]
    return doc


def groupoid_from_doc(doc: dict, check: bool = True):
    H = _hashable
    objects = [H(x) for x in doc["objects"]]
    arrows = [H(a["id"]) for a in doc["arrows"]]
    source = {H(a["id"]): H(a["src"]) for a in doc["arrows"]}
    target = {H(a["id"]): H(a["tgt"]) for a in doc["arrows"]}
    compose = {(H(g), H(h)): H(gh) for g, h, gh in doc["compose_table"]}
    identity = {H(x): H(e) for x, e in doc["identities"]}
    inverse = {H(g): H(gi) for g, gi in doc["inverses"]}
    name = doc.get("name", "")
    if doc["format"].endswith("local_groupoid"):
        return LocalGroupoid(objects, [H(u) for u in doc["U"]], [H(v) for v in doc["V"]], source, target, compose, identity, inverse, name=name)
    if not check:
        G = object.__new__(FiniteGroupoid)
        G.__dict__.update(objects=objects, arrows=arrows, source=source, target=target, compose=compose, identity=identity, inverse=inverse, name=name)
        return G
    return FiniteGroupoid(objects, arrows, source, target, compose, identity, inverse, name=name)


# ---------------------------------------------------------------------------
# Paths and homotopies


def _model_name(model) -> str:
    if isinstance(model, TangentSphere):
        return "sphere"
    return {"so(3)": "so3", "su(2)": "su2"}[model.name]


def _model(name: str):
    try:
        return {"so3": so3, "su2": su2, "sphere": TangentSphere}[name]()
    except KeyError:
        raise FormatError(f"unknown model {name!r}") from None


def _arr_out(a: np.ndarray):
    a = np.asarray(a)
    if np.iscomplexobj(a):
        return {"re": a.real.tolist(), "im": a.imag.tolist()}
    return a.tolist()


def _arr_in(x):
    if isinstance(x, dict):
        return np.asarray(x["re"]) + 1j * np.asarray(x["im"])
    return np.asarray(x, dtype=float)


def path_to_doc(p: APath) -> dict:
    doc = {**_header("path"), "model": _model_name(p.model), "t": p.t.tolist(), "samples": _arr_out(p.fiber)}
    if p.base is not None:
        doc["base"] = p.base.tolist()
    return doc


def path_from_doc(doc: dict) -> APath:
    model = _model(doc["model"])
    base = doc.get("base")
    return APath(model, np.asarray(doc["t"]), _arr_in(doc["samples"]), None if base is None else np.asarray(base))


def homotopy_to_doc(H: AHomotopy) -> dict:
    grid = {"a": _arr_out(H.a), "b": _arr_out(H.b)}
    if H.gamma is not None:
        grid["gamma"] = H.gamma.tolist()
    return {**_header("homotopy"), "model": _model_name(H.model), "grid": grid}


def homotopy_from_doc(doc: dict) -> AHomotopy:
    g = doc["grid"]
    return AHomotopy(_model(doc["model"]), _arr_in(g["a"]), _arr_in(g["b"]), None if "gamma" not in g else np.asarray(g["gamma"]))


# ---------------------------------------------------------------------------
# Reading and validation


_READERS = {
    "simplicial_set": simplicial_from_doc,
    "groupoid": groupoid_from_doc,
    "local_groupoid": groupoid_from_doc,
    "path": path_from_doc,
    "homotopy": homotopy_from_doc,
}


def kind_of(doc: dict) -> str:
    fmt = doc.get("format", "") if isinstance(doc, dict) else ""
    kind = fmt.removeprefix("kanforge.")
    if kind not in KINDS:
        raise FormatError(f"unknown format {fmt!r}")
    if doc.get("version") != VERSION:
        raise FormatError(f"unsupported version {doc.get('version')!r}")
    return kind


def read(path: str | Path):
    """Parse and validate; returns ``(kind, value, text)`` or raises FormatError."""
    text = Path(path).read_text()
    value, diags, kind = _validate_text(text)
    if diags:
        raise FormatError("; ".join(map(str, diags)))
    return kind, value, text


def write(path: str | Path | None, doc: dict) -> str:
    text = dumps(doc)
    if path is not None:
        Path(path).write_text(text)
    return text


_REQUIRED = {
    "simplicial_set": ("dim", "levels"),
    "groupoid": ("objects", "identities", "arrows", "compose_table", "inverses"),
    "local_groupoid": ("objects", "identities", "arrows", "compose_table", "inverses", "V", "U"),
    "path": ("model", "t", "samples"),
    "homotopy": ("model", "grid"),
}


def validate(path: str | Path):
    """Typed value (or None) and a list of diagnostics."""
    text = Path(path).read_text()
    value, diags, _ = _validate_text(text)
    return value, diags


def _validate_text(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        return None, [Diagnostic(e.lineno, f"invalid JSON: {e.msg}")], None
    try:
        kind = kind_of(doc)
    except FormatError as e:
        return None, [Diagnostic(_line_of(text, '"format"') or _line_of(text, '"version"'), str(e))], None
    missing = [k for k in _REQUIRED[kind] if k not in doc]
    if missing:
        return None, [Diagnostic(None, f"missing field {k!r}") for k in missing], kind
    if kind == "groupoid":
        try:
            G = groupoid_from_doc(doc, check=False)
        except (KeyError, TypeError, ValueError) as e:
            return None, [Diagnostic(None, f"schema violation: {e!r}")], kind
        diags = []
        for msg in FiniteGroupoid.violations(G):
            diags.append(Diagnostic(_locate_groupoid(text, msg), msg))
        return (None if diags else groupoid_from_doc(doc)), diags, kind
    try:
        X = _READERS[kind](doc) if kind != "simplicial_set" else simplicial_from_doc(doc, validate=False)
    except (KeyError, TypeError, IndexError) as e:
        return None, [Diagnostic(None, f"schema violation: {e!r}")], kind
    except (FormatError, SimplicialError, GroupoidError, ValueError) as e:
        return None, [Diagnostic(None, str(e))], kind
    if kind == "simplicial_set":
        diags = []
        try:
            X._validate()
        except SimplicialError as e:
            m = re.search(r"core '([^']+)'", str(e))
            diags.append(Diagnostic(_line_of(text, json.dumps(m.group(1))) if m else None, str(e)))
        if not diags:
            for kind_, n, i, j, s in X.check_identities()[:10]:
                diags.append(Diagnostic(_line_of(text, json.dumps(s[0])), f"simplicial identity {kind_} fails at (n={n}, i={i}, j={j}) on {s!r}"))
        if diags:
            return None, diags, kind
    return X, [], kind


def _locate_groupoid(text: str, msg: str) -> int | None:
    # messages quote arrows with repr; find the compose_table line mentioning the first one
    start = msg.find("(")
    if start >= 0:
        try:
            first = ast.literal_eval(msg[start:])
            needle = json.dumps(_jsonable(first[0] if isinstance(first, tuple) else first))
            line = _line_of(text[text.find('"compose_table"') :], "[" + needle)
            if line is not None:
                return line + text[: text.find('"compose_table"')].count("\n")
        except (ValueError, SyntaxError):
            pass
    return _line_of(text, '"compose_table"')
