"""QTEN: a JSON text format for quaternion tensors.

::

    {
      "version": 1,
      "left_shape": [2, 2],
      "right_shape": [2, 3],
      "entries": [
        [w, x, y, z],
        ...
      ]
    }

Entry ``t`` (1-based) holds the tensor entry at flattened position
``(r, c)`` with ``t = r + (c - 1) * prod(left_shape)``, where ``r`` and
``c`` are the linearized left and right multi-indices (first index
fastest).  Reals are written with 17 significant digits, so a write/read
cycle is bit-exact.  A matrix is a tensor with one left and one right mode.
"""

from __future__ import annotations

import json
import math
from math import prod

import numpy as np

from .errors import DimensionMismatch, FormatError
from .quat_tensor import QuatTensor
from .tensor_index import flatten, unflatten
from .quat_matrix import QuatMatrix

VERSION = 1


def _num(v: float) -> str:
    if not math.isfinite(v):
        raise FormatError(f"non-finite value {v!r} cannot be stored")
    return format(v, ".17g")


def dumps(t: QuatTensor) -> str:
    m = flatten(t)
    entries = np.transpose(m.data, (1, 0, 2)).reshape(-1, 4)
    lines = [
        "{",
        f'  "version": {VERSION},',
        f'  "left_shape": {json.dumps(list(t.left))},',
        f'  "right_shape": {json.dumps(list(t.right))},',
        '  "entries": [',
    ]
    rows = ["    [" + ", ".join(_num(float(v)) for v in e) + "]" for e in entries]
    lines.append(",\n".join(rows))
    lines.append("  ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _shape(obj, key):
    value = obj.get(key)
    if not isinstance(value, list) or not value:
        raise FormatError(f"{key} must be a nonempty list of positive integers")
    for e in value:
        if isinstance(e, bool) or not isinstance(e, int) or e < 1:
            raise FormatError(f"{key} must be a nonempty list of positive integers")
    return tuple(value)


def loads(text: str) -> QuatTensor:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"not valid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise FormatError("top level must be an object")
    if obj.get("version") != VERSION:
        raise FormatError(f"unsupported version {obj.get('version')!r}")
    left = _shape(obj, "left_shape")
    right = _shape(obj, "right_shape")
    entries = obj.get("entries")
    rows, cols = prod(left), prod(right)
    if not isinstance(entries, list) or len(entries) != rows * cols:
        raise FormatError(f"expected {rows * cols} entries")
    for e in entries:
        if not isinstance(e, list) or len(e) != 4 or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in e
        ):
            raise FormatError("each entry must be a list of four numbers [w, x, y, z]")
    arr = np.array(entries, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise FormatError("entries must be finite")
    data = np.transpose(arr.reshape(cols, rows, 4), (1, 0, 2))
    return unflatten(QuatMatrix(data), left, right)


def write(path, t: QuatTensor) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(t))


def read(path) -> QuatTensor:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text)


def reshape(t: QuatTensor, left, right) -> QuatTensor:
    """Reinterpret the flattening of ``t`` under new left/right shapes."""
    m = flatten(t)
    if m.rows != prod(left) or m.cols != prod(right):
        raise DimensionMismatch(f"{m.rows}x{m.cols} data does not fit {tuple(left)}|{tuple(right)}")
    return unflatten(m, left, right)
