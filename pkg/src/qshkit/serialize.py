"""JSON container for matrices, tensors and matrix Lie algebras.

Exact entries are written as "p/q" strings (or "p" for integers), float
entries as numbers.  A top-level "arithmetic" field selects the parse mode.
"""
from __future__ import annotations

import json
import math

import numpy as np

from . import exact as ex
from .exact import Q

RATIONAL = "rational"
FLOAT = "float"


def _entry(x) -> str:
    q = Q(int(x)) if isinstance(x, (int, np.integer)) else Q(x)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _encode(a: np.ndarray):
    flat = a.reshape(-1)
    if ex.is_exact(a):
        return [_entry(x) for x in flat]
    return [float(x) for x in flat]


def to_container(a) -> dict:
    a = np.asarray(a)
    doc = {
        "arithmetic": RATIONAL if ex.is_exact(a) else FLOAT,
        "shape": list(a.shape),
        "data": _encode(a),
    }
    return doc


def from_container(doc: dict) -> np.ndarray:
    mode = doc.get("arithmetic")
    shape = tuple(doc["shape"])
    data = doc["data"]
    if mode == RATIONAL:
        arr = np.empty(len(data), dtype=object)
        for i, s in enumerate(data):
            arr[i] = Q(s)
    elif mode == FLOAT:
        arr = np.asarray(data, dtype=float)
    else:
        raise ValueError(f"unknown arithmetic {mode!r}")
    if arr.size != int(np.prod(shape, dtype=np.int64)):
        raise ValueError("data length does not match shape")
    return arr.reshape(shape)


def dumps(a) -> str:
    return json.dumps(to_container(a), sort_keys=True)


def loads(text: str) -> np.ndarray:
    return from_container(json.loads(text))


def algebra_to_container(alg) -> dict:
    """A MatrixLieAlgebra as {"name", "size", "arithmetic", "basis": [...]}."""
    return {
        "name": alg.name,
        "size": alg.size,
        "arithmetic": RATIONAL,
        "basis": [to_container(ex.exact(b))["data"] for b in alg.basis],
    }


def algebra_from_container(doc: dict):
    from .liecore import span_algebra

    N = doc["size"]
    mats = [from_container({"arithmetic": doc["arithmetic"], "shape": [N, N], "data": d}) for d in doc["basis"]]
    ints = []
    for m in mats:
        den = math.lcm(*(Q(x).denominator for x in m.reshape(-1)))
        ints.append(np.array([[int(x * den) for x in row] for row in m], dtype=np.int64))
    return span_algebra(ints, doc["name"])

