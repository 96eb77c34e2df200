"""
JSON file formats.

Complex entries are ``[re, im]`` pairs written with Python's shortest
round-trip float repr, so ``parse(serialize(x))`` is bit-exact.

* channel: ``{"source_dim", "target_dim", "kraus": [matrix, ...], "name"?, "gluing"?}``
  where a matrix is a list of rows of ``[re, im]`` pairs
* split: ``{"s1_dim", "s2_dim", "t1_dim", "t2_dim"}``
* matrix: ``{"rows", "cols", "entries": [[re, im], ...]}`` (row-major)
* gluing: ``{"c": matrix, "rep1": channel, "rep2": channel}``
* vector: ``[[re, im], ...]``
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .channel import KrausChannel
from .errors import GluingError
from .gluing import GluingMatrix
from .subspace import BlockSplit


class SchemaError(GluingError):
    """Malformed file; ``path`` is the offending field, e.g. ``kraus[1][0][2]``."""

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")


def _reject_constant(name):
    raise ValueError(f"non-finite number {name} is not allowed")


def loads(text: str):
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except ValueError as exc:
        raise SchemaError("<root>", f"invalid JSON: {exc}") from None


def load(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SchemaError(str(path), f"cannot read file: {exc.strerror}") from None
    return loads(text)


def dumps(obj) -> str:
    return json.dumps(obj, indent=1, allow_nan=False) + "\n"


def dump(obj, path):
    Path(path).write_text(dumps(obj))


# -- scalars -----------------------------------------------------------------

def complex_to_json(z) -> list:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _count(obj, key, path):
    if key not in obj:
        raise SchemaError(f"{path}{key}", "missing field")
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise SchemaError(f"{path}{key}", f"must be an integer >= 1, got {v!r}")
    return v


def complex_from_json(v, path) -> complex:
    if (not isinstance(v, list) or len(v) != 2
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v)):
        raise SchemaError(path, "complex entry must be a two-element [re, im] array")
    if not all(math.isfinite(x) for x in v):
        raise SchemaError(path, "non-finite entry")
    return complex(float(v[0]), float(v[1]))


# -- matrices and vectors ----------------------------------------------------

def nested_to_json(m) -> list:
    m = np.asarray(m)
    return [[complex_to_json(z) for z in row] for row in m]


def nested_from_json(v, path, shape=None) -> np.ndarray:
    if not isinstance(v, list) or not v:
        raise SchemaError(path, "matrix must be a non-empty list of rows")
    rows = []
    width = None
    for i, row in enumerate(v):
        if not isinstance(row, list):
            raise SchemaError(f"{path}[{i}]", "row must be a list")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise SchemaError(f"{path}[{i}]", f"row has {len(row)} entries, expected {width}")
        rows.append([complex_from_json(z, f"{path}[{i}][{j}]") for j, z in enumerate(row)])
    m = np.array(rows, dtype=np.complex128)
    if shape is not None and m.shape != tuple(shape):
        raise SchemaError(path, f"shape {m.shape} does not match expected {tuple(shape)}")
    return m


def matrix_to_json(m) -> dict:
    m = np.asarray(m, dtype=np.complex128)
    return {"rows": m.shape[0], "cols": m.shape[1], "entries": [complex_to_json(z) for z in m.reshape(-1)]}


def matrix_from_json(obj, path="") -> np.ndarray:
    if isinstance(obj, list):
        return nested_from_json(obj, path or "<root>")
    if not isinstance(obj, dict):
        raise SchemaError(path or "<root>", "matrix must be an object or nested list")
    rows, cols = _count(obj, "rows", path), _count(obj, "cols", path)
    entries = obj.get("entries")
    if not isinstance(entries, list):
        raise SchemaError(f"{path}entries", "missing or not a list")
    if len(entries) != rows * cols:
        raise SchemaError(f"{path}entries", f"has {len(entries)} entries, expected {rows * cols}")
    vals = [complex_from_json(z, f"{path}entries[{i}]") for i, z in enumerate(entries)]
    return np.array(vals, dtype=np.complex128).reshape(rows, cols)


def vector_to_json(v) -> list:
    return [complex_to_json(z) for z in np.asarray(v).reshape(-1)]


def vector_from_json(obj, path="<root>") -> np.ndarray:
    if not isinstance(obj, list) or not obj:
        raise SchemaError(path, "vector must be a non-empty list of [re, im] pairs")
    return np.array([complex_from_json(z, f"{path}[{i}]") for i, z in enumerate(obj)])


# -- channels, splits, gluing matrices ---------------------------------------

def channel_to_json(phi: KrausChannel, name: str = None, gluing: GluingMatrix = None) -> dict:
    out = {"source_dim": phi.source_dim, "target_dim": phi.target_dim,
           "kraus": [nested_to_json(v) for v in phi.kraus]}
    if name is not None:
        out["name"] = name
    if gluing is not None:
        out["gluing"] = gluing_to_json(gluing)
    return out


def channel_from_json(obj, path="") -> KrausChannel:
    if not isinstance(obj, dict):
        raise SchemaError(path or "<root>", "channel must be an object")
    s, t = _count(obj, "source_dim", path), _count(obj, "target_dim", path)
    kraus = obj.get("kraus")
    if not isinstance(kraus, list) or not kraus:
        raise SchemaError(f"{path}kraus", "must be a non-empty list of matrices")
    ops = tuple(nested_from_json(v, f"{path}kraus[{k}]", shape=(t, s)) for k, v in enumerate(kraus))
    if "name" in obj and not isinstance(obj["name"], str):
        raise SchemaError(f"{path}name", "must be a string")
    return KrausChannel(s, t, ops)


def split_to_json(split: BlockSplit) -> dict:
    return {"s1_dim": split.s1_dim, "s2_dim": split.s2_dim, "t1_dim": split.t1_dim, "t2_dim": split.t2_dim}


def split_from_json(obj, path="") -> BlockSplit:
    if not isinstance(obj, dict):
        raise SchemaError(path or "<root>", "split must be an object")
    return BlockSplit(*(_count(obj, k, path) for k in ("s1_dim", "s2_dim", "t1_dim", "t2_dim")))


def gluing_to_json(g: GluingMatrix) -> dict:
    return {"c": matrix_to_json(g.c), "rep1": channel_to_json(g.rep1), "rep2": channel_to_json(g.rep2)}


def gluing_from_json(obj, path="") -> GluingMatrix:
    if not isinstance(obj, dict):
        raise SchemaError(path or "<root>", "gluing must be an object")
    for key in ("c", "rep1", "rep2"):
        if key not in obj:
            raise SchemaError(f"{path}{key}", "missing field")
    c = matrix_from_json(obj["c"], f"{path}c.")
    rep1 = channel_from_json(obj["rep1"], f"{path}rep1.")
    rep2 = channel_from_json(obj["rep2"], f"{path}rep2.")
    return GluingMatrix(c, rep1, rep2)


def read_channel(path) -> KrausChannel:
    return channel_from_json(load(path))


def read_split(path) -> BlockSplit:
    return split_from_json(load(path))
