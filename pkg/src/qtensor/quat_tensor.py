"""Even-order quaternion tensors under the Einstein product.

A :class:`QuatTensor` has a left shape ``(I1..IN)`` and a right shape
``(J1..JM)``.  The Einstein product contracts the right modes of the first
factor against the left modes of the second.  All numerics go through
:func:`~qtensor.tensor_index.flatten`, a matrix routine, and
:func:`~qtensor.tensor_index.unflatten`; since flattening turns Einstein
products into matrix products, every tensor factorization is the image of
the corresponding matrix factorization.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import NamedTuple

import numpy as np

from . import quat_matrix as qm
from .errors import DimensionMismatch, IndexOutOfRange, NotEtaHermitian
from .quat_core import Quaternion, check_eta
from .quat_matrix import QuatMatrix
from .tensor_index import as_shape, delinearize, flatten, linearize, unflatten


class QuatTensor:
    """Immutable dense quaternion tensor with explicit left and right shapes.

    ``data`` has shape ``left + right + (4,)`` and is indexed 0-based;
    :meth:`entry` offers 1-based access matching the index formulas.
    """

    __slots__ = ("_data", "_left", "_right")

    def __init__(self, data, left, right):
        left = as_shape(left)
        right = as_shape(right)
        arr = np.array(data, dtype=np.float64)
        if arr.shape != left + right + (4,):
            raise DimensionMismatch(f"data shape {arr.shape} does not match {left}|{right}")
        arr.flags.writeable = False
        self._data = arr
        self._left = left
        self._right = right

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def left(self) -> tuple[int, ...]:
        return self._left

    @property
    def right(self) -> tuple[int, ...]:
        return self._right

    @property
    def is_square(self) -> bool:
        return self._left == self._right

    @classmethod
    def zeros(cls, left, right) -> "QuatTensor":
        left, right = as_shape(left), as_shape(right)
        return cls(np.zeros(left + right + (4,)), left, right)

    @classmethod
    def random(cls, left, right, rng, low=-1.0, high=1.0) -> "QuatTensor":
        """Components drawn uniformly from ``[low, high)``."""
        left, right = as_shape(left), as_shape(right)
        return cls(rng.uniform(low, high, left + right + (4,)), left, right)

    @classmethod
    def from_entries(cls, left, right, entries) -> "QuatTensor":
        """Build from ``{(i1..iN, j1..jM): value}`` with 1-based keys.

        Keys may also be digit strings such as ``"1231"`` when every extent
        is below 10.  Unlisted entries are zero.
        """
        left, right = as_shape(left), as_shape(right)
        data = np.zeros(left + right + (4,))
        for key, value in entries.items():
            if isinstance(key, str):
                key = tuple(int(c) for c in key)
            key = tuple(key)
            if len(key) != len(left) + len(right):
                raise IndexOutOfRange(f"index {key} has wrong order")
            # validates both halves
            linearize(key[: len(left)], left)
            linearize(key[len(left):], right)
            data[tuple(k - 1 for k in key)] = qm._as_components(value)
        return cls(data, left, right)

    def entry(self, left_index, right_index) -> Quaternion:
        linearize(left_index, self._left)
        linearize(right_index, self._right)
        key = tuple(i - 1 for i in tuple(left_index) + tuple(right_index))
        return Quaternion.from_array(self._data[key])

    def nonzero_entries(self, atol=0.0):
        """``{(1-based index): Quaternion}`` for entries with norm above ``atol``."""
        mags = np.sqrt(np.sum(self._data**2, axis=-1))
        out = {}
        for idx in zip(*np.nonzero(mags > atol)):
            out[tuple(int(i) + 1 for i in idx)] = Quaternion.from_array(self._data[idx])
        return out

    def flat(self) -> QuatMatrix:
        return flatten(self)

    def __repr__(self):
        return f"QuatTensor(left={self._left}, right={self._right})"

    def __eq__(self, other):
        if not isinstance(other, QuatTensor):
            return NotImplemented
        return (
            self._left == other._left
            and self._right == other._right
            and bool(np.array_equal(self._data, other._data))
        )

    __hash__ = None

    def _check_same(self, other):
        if not isinstance(other, QuatTensor) or (self._left, self._right) != (other._left, other._right):
            raise DimensionMismatch("tensor shapes differ")

    def __add__(self, other):
        self._check_same(other)
        return QuatTensor(self._data + other._data, self._left, self._right)

    def __sub__(self, other):
        self._check_same(other)
        return QuatTensor(self._data - other._data, self._left, self._right)

    def __neg__(self):
        return QuatTensor(-self._data, self._left, self._right)

    def __mul__(self, scalar):
        return QuatTensor(self._data * float(scalar), self._left, self._right)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return QuatTensor(self._data / float(scalar), self._left, self._right)

    def __matmul__(self, other):
        return einstein_product(self, other)

    @property
    def H(self) -> "QuatTensor":
        return conj_transpose(self)

    def eta_H(self, eta) -> "QuatTensor":
        return eta_conj_transpose(self, eta)

    def norm(self) -> float:
        return frobenius_norm(self)


# -- basic operations ------------------------------------------------------

def einstein_product(a: QuatTensor, b: QuatTensor) -> QuatTensor:
    """Contract the right modes of ``a`` with the left modes of ``b``."""
    if a.right != b.left:
        raise DimensionMismatch(f"cannot contract {a.left}|{a.right} with {b.left}|{b.right}")
    return unflatten(qm.matmul(flatten(a), flatten(b)), a.left, b.right)


def conj_transpose(a: QuatTensor) -> QuatTensor:
    return unflatten(qm.conj_transpose(flatten(a)), a.right, a.left)


def eta_conj_transpose(a: QuatTensor, eta) -> QuatTensor:
    """``A^{eta*} = -eta A* eta``."""
    return unflatten(qm.eta_conj_transpose(flatten(a), check_eta(eta)), a.right, a.left)


def unit_tensor(shape) -> QuatTensor:
    shape = as_shape(shape)
    return unflatten(QuatMatrix.identity(prod(shape)), shape, shape)


def diagonal_tensor(shape, values) -> QuatTensor:
    """Square tensor whose only nonzeros sit at repeated multi-indices ``(i.., i..)``.

    ``values`` lists the diagonal in linear order (length ``prod(shape)``)
    or is an array of shape ``shape``; a trailing axis of 4 makes the
    entries quaternions, otherwise they are real.
    """
    shape = as_shape(shape)
    n = prod(shape)
    vals = np.asarray(values, dtype=np.float64)
    quaternionic = vals.ndim >= 1 and vals.shape[-1] == 4 and vals.size == 4 * n
    if quaternionic:
        vals = np.reshape(vals, (n, 4), order="F") if vals.shape[:-1] == shape else vals.reshape(n, 4)
    else:
        if vals.size != n:
            raise DimensionMismatch(f"need {n} diagonal values, got {vals.size}")
        vals = np.reshape(vals, n, order="F")
        vals = np.stack([vals, np.zeros(n), np.zeros(n), np.zeros(n)], axis=-1)
    data = np.zeros((n, n, 4))
    data[np.arange(n), np.arange(n)] = vals
    return unflatten(QuatMatrix(data), shape, shape)


def frobenius_norm(a: QuatTensor) -> float:
    return float(np.sqrt(np.sum(a.data**2)))


def _require_square(a: QuatTensor, what):
    if not a.is_square:
        raise DimensionMismatch(f"{what} needs matching left and right shapes, got {a.left}|{a.right}")


def is_unitary(a: QuatTensor, tol) -> bool:
    """``||U * U^* - I||_F <= tol`` and ``||U^* * U - I||_F <= tol``."""
    _require_square(a, "is_unitary")
    eye = unit_tensor(a.left)
    ah = conj_transpose(a)
    return (
        frobenius_norm(einstein_product(a, ah) - eye) <= tol
        and frobenius_norm(einstein_product(ah, a) - eye) <= tol
    )


def is_eta_hermitian(a: QuatTensor, eta, tol) -> bool:
    _require_square(a, "is_eta_hermitian")
    return frobenius_norm(a - eta_conj_transpose(a, eta)) <= tol


def diagonal_positions(r, left, right):
    """``(delinearize(i, left), delinearize(i, right))`` for ``i = 1..r``."""
    return [(delinearize(i, left), delinearize(i, right)) for i in range(1, r + 1)]


def _real_core(values, left, right) -> QuatTensor:
    return unflatten(QuatMatrix.real_diag(values, prod(left), prod(right)), left, right)


# -- decompositions --------------------------------------------------------

@dataclass(frozen=True)
class TensorSvd:
    """``A = U * B * V^*`` with unitary ``U``, ``V`` and real ``B``.

    ``singvals[i]`` sits in ``B`` at ``positions[i] = (p, q)`` where ``p``
    and ``q`` are the multi-indices of linear position ``i + 1`` in the
    left and right shapes.
    """

    U: QuatTensor
    B: QuatTensor
    V: QuatTensor
    singvals: np.ndarray
    positions: list

    @property
    def rank(self) -> int:
        return len(self.singvals)

    def reconstruct(self) -> QuatTensor:
        return self.U @ self.B @ conj_transpose(self.V)

    def pinv_core(self) -> QuatTensor:
        """``B^+``: real, ``1/d_i`` at the swapped positions ``(q_i, p_i)``."""
        left, right = self.B.left, self.B.right
        return _real_core(1.0 / np.asarray(self.singvals), right, left)

    def pseudo_inverse(self) -> QuatTensor:
        """``V * B^+ * U^*``."""
        return self.V @ self.pinv_core() @ conj_transpose(self.U)


class TensorRankDecomposition(NamedTuple):
    """``A = P * B * Q`` with invertible ``P``, ``Q`` and a 0/1 core ``B``."""

    P: QuatTensor
    B: QuatTensor
    Q: QuatTensor
    rank: int


@dataclass(frozen=True)
class EtaDecomp:
    """``A = U * B * U^{eta*}`` for an eta-Hermitian ``A``; ``B`` is real diagonal."""

    U: QuatTensor
    B: QuatTensor
    sigma: np.ndarray
    eta: str
    positions: list

    def reconstruct(self) -> QuatTensor:
        return self.U @ self.B @ eta_conj_transpose(self.U, self.eta)


def _reorder_leading(mat: QuatMatrix, r, ascending):
    if not ascending or r < 2:
        return mat
    data = np.array(mat.data)
    data[:, :r] = data[:, :r][:, ::-1]
    return QuatMatrix(data)


def tensor_svd(a: QuatTensor, tol_rank=None, ascending=False, scale=None) -> TensorSvd:
    """Quaternion tensor SVD.

    Parameters
    ----------
    a : QuatTensor
    tol_rank, scale
        Rank cutoff controls, forwarded to :func:`qtensor.quat_matrix.svd`.
    ascending : bool
        List the singular values in increasing order (the factors are
        permuted to match, so position ``i`` still holds the ``i``-th value).
    """
    f = qm.svd(flatten(a), tol_rank, scale)
    r = f.rank
    sv = np.asarray(f.singvals, dtype=np.float64)
    u, v = f.U, f.V
    if ascending:
        sv = sv[::-1].copy()
        u = _reorder_leading(u, r, True)
        v = _reorder_leading(v, r, True)
    return TensorSvd(
        U=unflatten(u, a.left, a.left),
        B=_real_core(sv, a.left, a.right),
        V=unflatten(v, a.right, a.right),
        singvals=sv,
        positions=diagonal_positions(r, a.left, a.right),
    )


def tensor_rank_decomposition(a: QuatTensor, tol_rank=None) -> TensorRankDecomposition:
    p, q, r = qm.rank_decomposition(flatten(a), tol_rank)
    return TensorRankDecomposition(
        P=unflatten(p, a.left, a.left),
        B=_real_core(np.ones(r), a.left, a.right),
        Q=unflatten(q, a.right, a.right),
        rank=r,
    )


def tensor_eta_decomposition(a: QuatTensor, eta, tol_rank=None, ascending=False, tol=1e-10) -> EtaDecomp:
    """Factor an eta-Hermitian square tensor as ``U * B * U^{eta*}``.

    ``B`` carries the nonzero singular values of the flattening at the
    diagonal positions ``(p_i, p_i)``.

    Raises
    ------
    DimensionMismatch
        If the left and right shapes differ.
    NotEtaHermitian
        If ``||A - A^{eta*}||_F > tol max(1, ||A||_F)``.
    """
    eta = check_eta(eta)
    _require_square(a, "eta decomposition")
    if not is_eta_hermitian(a, eta, tol * max(1.0, frobenius_norm(a))):
        raise NotEtaHermitian(f"tensor is not {eta}-Hermitian within tolerance")
    u, sigma = qm.eta_hermitian_decomposition(flatten(a), eta, tol_rank, tol)
    r = int(np.count_nonzero(sigma > 0))
    sv = sigma[:r].copy()
    if ascending:
        sv = sv[::-1].copy()
        u = _reorder_leading(u, r, True)
    return EtaDecomp(
        U=unflatten(u, a.left, a.left),
        B=_real_core(sv, a.left, a.left),
        sigma=sv,
        eta=eta,
        positions=diagonal_positions(r, a.left, a.left),
    )


def pinv(a: QuatTensor, tol_rank=None, scale=None) -> QuatTensor:
    """Moore-Penrose inverse via the tensor SVD, ``V * B^+ * U^*``."""
    return tensor_svd(a, tol_rank, scale=scale).pseudo_inverse()


def pinv_via_matrix(a: QuatTensor, tol_rank=None, scale=None) -> QuatTensor:
    """Moore-Penrose inverse as ``unflatten(pinv(flatten(A)))``."""
    return unflatten(qm.pinv(flatten(a), tol_rank, scale), a.right, a.left)


def projector_L(a: QuatTensor, a_pinv: QuatTensor | None = None) -> QuatTensor:
    """``L_A = I - A^+ * A`` (right x right)."""
    if a_pinv is None:
        a_pinv = pinv(a)
    return unit_tensor(a.right) - a_pinv @ a


def projector_R(a: QuatTensor, a_pinv: QuatTensor | None = None) -> QuatTensor:
    """``R_A = I - A * A^+`` (left x left)."""
    if a_pinv is None:
        a_pinv = pinv(a)
    return unit_tensor(a.left) - a @ a_pinv


def penrose_residuals(a: QuatTensor, x: QuatTensor) -> tuple[float, float, float, float]:
    """Frobenius norms of the four Penrose equation defects for ``X ~ A^+``."""
    ax = a @ x
    xa = x @ a
    return (
        frobenius_norm(ax @ a - a),
        frobenius_norm(x @ a @ x - x),
        frobenius_norm(conj_transpose(ax) - ax),
        frobenius_norm(conj_transpose(xa) - xa),
    )
