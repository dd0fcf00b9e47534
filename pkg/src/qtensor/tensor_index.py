"""The tensor <-> matrix bijection.

Multi-indices are 1-based tuples.  The first index varies fastest:
``linearize((i1, ..., iN), (I1, ..., IN)) = i1 + sum_k (i_k - 1) I1...I_{k-1}``.
A tensor with left shape ``(I1..IN)`` and right shape ``(J1..JM)`` flattens
to a ``prod(I) x prod(J)`` matrix with entry ``(linearize(i), linearize(j))``.
"""

from __future__ import annotations

from math import prod

import numpy as np

from .errors import DimensionMismatch, IndexOutOfRange
from .quat_matrix import QuatMatrix


def as_shape(extents) -> tuple[int, ...]:
    """Validate and normalise a shape: a nonempty tuple of positive ints."""
    if isinstance(extents, (int, np.integer)):
        extents = (extents,)
    shape = tuple(int(e) for e in extents)
    if not shape or any(e < 1 for e in shape):
        raise DimensionMismatch(f"invalid shape {extents!r}")
    return shape


def _strides(shape):
    # strides[t] = I_1 ... I_{t}  (0-based t, so strides[0] = 1)
    out = [1]
    for e in shape[:-1]:
        out.append(out[-1] * e)
    return out


def linearize(index, shape) -> int:
    """Map a 1-based multi-index to its 1-based linear position."""
    shape = as_shape(shape)
    index = tuple(int(i) for i in index)
    if len(index) != len(shape) or any(not 1 <= i <= e for i, e in zip(index, shape)):
        raise IndexOutOfRange(f"index {index} outside shape {shape}")
    strides = _strides(shape)
    return index[0] + sum((index[k] - 1) * strides[k] for k in range(1, len(shape)))


def delinearize(i: int, shape) -> tuple[int, ...]:
    """Inverse of :func:`linearize`, by the top-down floor formulas.

    ``p_N = floor((i-1) / (I1..I_{N-1})) + 1``; each lower ``p_t`` divides
    what remains after removing the higher coordinates by ``I1..I_{t-1}``;
    ``p_1`` is the final remainder.
    """
    shape = as_shape(shape)
    i = int(i)
    if not 1 <= i <= prod(shape):
        raise IndexOutOfRange(f"linear index {i} outside 1..{prod(shape)}")
    n = len(shape)
    strides = _strides(shape)
    p = [0] * n
    for t in range(n - 1, 0, -1):
        higher = sum((p[k] - 1) * strides[k] for k in range(t + 1, n))
        p[t] = (i - 1 - higher) // strides[t] + 1
    p[0] = i - sum((p[k] - 1) * strides[k] for k in range(1, n))
    return tuple(p)


def all_indices(shape):
    """Every multi-index of ``shape`` in linear order."""
    shape = as_shape(shape)
    return [delinearize(i, shape) for i in range(1, prod(shape) + 1)]


def flatten(tensor) -> QuatMatrix:
    """Image of a tensor under the bijection: a ``prod(left) x prod(right)`` matrix."""
    rows = prod(tensor.left)
    cols = prod(tensor.right)
    return QuatMatrix(np.reshape(tensor.data, (rows, cols, 4), order="F"))


def unflatten(matrix: QuatMatrix, left, right):
    """Inverse of :func:`flatten`."""
    from .quat_tensor import QuatTensor

    left = as_shape(left)
    right = as_shape(right)
    if matrix.rows != prod(left) or matrix.cols != prod(right):
        raise DimensionMismatch(
            f"{matrix.rows}x{matrix.cols} matrix does not unflatten to {left}|{right}"
        )
    data = np.reshape(matrix.data, left + right + (4,), order="F")
    return QuatTensor(data, left, right)
