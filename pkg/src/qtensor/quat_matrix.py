"""Dense quaternion matrices and their factorizations.

Every factorization goes through the complex adjoint: writing
``A = A1 + A2 j`` with complex ``A1, A2``, the ``2m x 2n`` complex matrix
``[[A1, A2], [-conj(A2), conj(A1)]]`` is multiplicative and doubles every
singular value.  Singular and eigen vectors of the adjoint are read back
into quaternion columns and re-orthonormalized with quaternion Gram-Schmidt.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotEtaHermitian
from .jacobi import jacobi_eigh, jacobi_svd
from .quat_core import (
    Quaternion,
    abs2_array,
    conj_array,
    eta_conj_array,
    hamilton,
    unit_array,
)

# Singular values closer than this (relative to the largest) share one
# invariant subspace when reading back quaternion vectors.
_CLUSTER_GAP = 1e-8
_SQRT_HALF = np.sqrt(0.5)
# Unit u with conj(u) i u = eta, used to rotate i-plane eigenvalues onto eta.
_ROTATE_I_TO = {
    "i": np.array([1.0, 0.0, 0.0, 0.0]),
    "j": np.array([_SQRT_HALF, 0.0, 0.0, -_SQRT_HALF]),
    "k": np.array([_SQRT_HALF, 0.0, _SQRT_HALF, 0.0]),
}


class QuatMatrix:
    """Immutable dense ``rows x cols`` quaternion matrix.

    ``data`` has shape ``(rows, cols, 4)``; the trailing axis holds the
    ``(w, x, y, z)`` components.
    """

    __slots__ = ("_data",)

    def __init__(self, data):
        arr = np.array(data, dtype=np.float64)
        if arr.ndim != 3 or arr.shape[2] != 4 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise DimensionMismatch(f"expected a (rows, cols, 4) array, got shape {arr.shape}")
        arr.flags.writeable = False
        self._data = arr

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def rows(self) -> int:
        return self._data.shape[0]

    @property
    def cols(self) -> int:
        return self._data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._data.shape[:2]

    @classmethod
    def zeros(cls, rows, cols) -> "QuatMatrix":
        return cls(np.zeros((rows, cols, 4)))

    @classmethod
    def identity(cls, n) -> "QuatMatrix":
        return cls.real_diag(np.ones(n), n, n)

    @classmethod
    def real_diag(cls, values, rows, cols) -> "QuatMatrix":
        """``rows x cols`` matrix with ``values`` on the leading diagonal."""
        values = np.asarray(values, dtype=np.float64)
        if values.size > min(rows, cols):
            raise DimensionMismatch("too many diagonal values")
        data = np.zeros((rows, cols, 4))
        idx = np.arange(values.size)
        data[idx, idx, 0] = values
        return cls(data)

    @classmethod
    def from_rows(cls, rows) -> "QuatMatrix":
        """Build from nested lists of :class:`Quaternion` or reals."""
        data = [[_as_components(e) for e in row] for row in rows]
        return cls(data)

    @classmethod
    def from_complex_pair(cls, a1, a2) -> "QuatMatrix":
        """Matrix ``a1 + a2 j`` from two complex arrays."""
        a1 = np.asarray(a1, dtype=np.complex128)
        a2 = np.asarray(a2, dtype=np.complex128)
        return cls(np.stack([a1.real, a1.imag, a2.real, a2.imag], axis=-1))

    def complex_pair(self):
        d = self._data
        return d[..., 0] + 1j * d[..., 1], d[..., 2] + 1j * d[..., 3]

    def __getitem__(self, idx) -> Quaternion:
        r, c = idx
        return Quaternion.from_array(self._data[r, c])

    def __repr__(self):
        return f"QuatMatrix(rows={self.rows}, cols={self.cols})"

    def __eq__(self, other):
        if not isinstance(other, QuatMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._data, other._data))

    __hash__ = None

    def __add__(self, other):
        _same_shape(self, other)
        return QuatMatrix(self._data + other._data)

    def __sub__(self, other):
        _same_shape(self, other)
        return QuatMatrix(self._data - other._data)

    def __neg__(self):
        return QuatMatrix(-self._data)

    def __mul__(self, scalar):
        """Scale by a real number, or right-multiply every entry by a quaternion."""
        if isinstance(scalar, Quaternion):
            return rscale(self, scalar)
        return QuatMatrix(self._data * float(scalar))

    def __rmul__(self, scalar):
        if isinstance(scalar, Quaternion):
            return lscale(scalar, self)
        return QuatMatrix(self._data * float(scalar))

    def __matmul__(self, other):
        return matmul(self, other)

    @property
    def H(self) -> "QuatMatrix":
        return conj_transpose(self)

    def eta_H(self, eta) -> "QuatMatrix":
        return eta_conj_transpose(self, eta)

    def norm(self) -> float:
        return frobenius_norm(self)


def _as_components(e):
    if isinstance(e, Quaternion):
        return e.as_array()
    return np.array([float(e), 0.0, 0.0, 0.0])


def _same_shape(a, b):
    if a.shape != b.shape:
        raise DimensionMismatch(f"shape mismatch: {a.shape} vs {b.shape}")


@dataclass(frozen=True)
class MatSvd:
    """``A = U diag(singvals, 0) V*`` with ``U``, ``V`` unitary."""

    U: QuatMatrix
    singvals: np.ndarray
    V: QuatMatrix
    rank: int

    def sigma(self) -> QuatMatrix:
        """The ``m x n`` real matrix carrying ``singvals`` on its diagonal."""
        return QuatMatrix.real_diag(self.singvals, self.U.rows, self.V.rows)

    def reconstruct(self) -> QuatMatrix:
        return matmul(matmul(self.U, self.sigma()), conj_transpose(self.V))


# -- elementary operations -------------------------------------------------

def matmul(a: QuatMatrix, b: QuatMatrix) -> QuatMatrix:
    """Quaternion matrix product, summing the inner index in ascending order."""
    if a.cols != b.rows:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    ad = a.data
    bd = b.data
    acc = hamilton(ad[:, 0, None, :], bd[None, 0, :, :])
    for k in range(1, a.cols):
        acc = acc + hamilton(ad[:, k, None, :], bd[None, k, :, :])
    return QuatMatrix(acc)


def conj_transpose(a: QuatMatrix) -> QuatMatrix:
    return QuatMatrix(conj_array(np.swapaxes(a.data, 0, 1)))


def eta_conj_transpose(a: QuatMatrix, eta) -> QuatMatrix:
    """``A^{eta*} = -eta A* eta``, entrywise ``eta_conj`` of the transpose."""
    return QuatMatrix(eta_conj_array(np.swapaxes(a.data, 0, 1), eta))


def lscale(q, a: QuatMatrix) -> QuatMatrix:
    """Left-multiply every entry of ``a`` by the quaternion ``q``."""
    q = q.as_array() if isinstance(q, Quaternion) else np.asarray(q, dtype=np.float64)
    return QuatMatrix(hamilton(q, a.data))


def rscale(a: QuatMatrix, q) -> QuatMatrix:
    """Right-multiply every entry of ``a`` by the quaternion ``q``."""
    q = q.as_array() if isinstance(q, Quaternion) else np.asarray(q, dtype=np.float64)
    return QuatMatrix(hamilton(a.data, q))


def frobenius_norm(a: QuatMatrix) -> float:
    return float(np.sqrt(np.sum(a.data**2)))


def complex_adjoint(a: QuatMatrix) -> np.ndarray:
    """The ``2m x 2n`` complex matrix ``[[A1, A2], [-conj(A2), conj(A1)]]``."""
    a1, a2 = a.complex_pair()
    return np.block([[a1, a2], [-a2.conj(), a1.conj()]])


def from_complex_adjoint(c) -> QuatMatrix:
    """Read ``A1 + A2 j`` back from the top block row of an adjoint."""
    c = np.asarray(c)
    m, n = c.shape[0] // 2, c.shape[1] // 2
    return QuatMatrix.from_complex_pair(c[:m, :n], c[:m, n:])


def default_rank_tol(rows, cols) -> float:
    return 1e-12 * max(rows, cols)


# -- quaternion vector helpers (vectors are (n, 4) arrays) -----------------

def _vec_from_adjoint_column(v, n):
    # Column v of an adjoint matrix is [w1; -conj(w2)] for the quaternion w1 + w2 j.
    w1 = v[:n]
    w2 = -v[n:].conj()
    return np.stack([w1.real, w1.imag, w2.real, w2.imag], axis=-1)


def _project_out_many(xs, basis):
    """Remove the span of ``basis`` from each vector of ``xs`` (shape (p, n, 4)).

    Classical Gram-Schmidt applied twice, which is enough to restore
    orthogonality to working precision.
    """
    if not basis:
        return xs
    b = np.stack(basis)  # (k, n, 4)
    bc = conj_array(b)
    for _ in range(2):
        coeff = hamilton(bc[None], xs[:, None]).sum(axis=2)  # (p, k, 4)
        xs = xs - hamilton(b[None], coeff[:, :, None, :]).sum(axis=1)
    return xs


def _project_out(x, basis):
    return _project_out_many(x[None], basis)[0]


def _vnorm(x):
    return float(np.sqrt(abs2_array(x).sum()))


def _pivoted_gram_schmidt(candidates, basis, need, floor=1e-6):
    """Greedily append up to ``need`` orthonormal directions to ``basis``.

    Each step takes the candidate whose residual against the current basis
    (in the quaternion, right-linear sense) is largest.
    """
    pool = list(candidates)
    added = []
    while len(added) < need and pool:
        residuals = _project_out_many(np.stack(pool), basis)
        norms = np.sqrt(abs2_array(residuals).sum(axis=1))
        best = int(np.argmax(norms))
        if norms[best] < floor:
            break
        w = residuals[best] / norms[best]
        w = w / _vnorm(_project_out(w, basis))
        basis.append(w)
        added.append(w)
        pool.pop(best)
    return added


def _complete_basis(basis, n):
    eye = [np.zeros((n, 4)) for _ in range(n)]
    for l, e in enumerate(eye):
        e[l, 0] = 1.0
    _pivoted_gram_schmidt(eye, basis, n - len(basis), floor=0.0)
    return basis


def _orthonormalize(vectors):
    basis = []
    for x in vectors:
        r = _project_out(x, basis)
        basis.append(r / _vnorm(r))
    return basis


def _columns_to_matrix(cols, n):
    return QuatMatrix(np.stack(cols, axis=1)) if cols else QuatMatrix.zeros(n, 0)


def _clusters(s, cutoff):
    """Split descending values into near-equal runs; the last run is the null group."""
    groups = []
    nonnull = [i for i, v in enumerate(s) if v > cutoff]
    null = [i for i, v in enumerate(s) if v <= cutoff]
    gap = _CLUSTER_GAP * (s[0] if s.size else 0.0)
    for i in nonnull:
        if groups and s[groups[-1][-1]] - s[i] <= gap:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups, null


# -- factorizations --------------------------------------------------------

def svd(a: QuatMatrix, tol_rank=None, scale=None) -> MatSvd:
    """Quaternion SVD ``A = U diag(d_1..d_r, 0) V*``.

    Parameters
    ----------
    a : QuatMatrix
    tol_rank : float, optional
        A singular value counts toward the rank when it exceeds
        ``tol_rank * max(sigma_max, scale)``.  Defaults to
        ``1e-12 * max(rows, cols)``.
    scale : float, optional
        Reference magnitude for the rank cutoff, for inputs that are
        numerically zero by construction (a residual ``R_A C`` of a
        full-rank ``A``, say).

    Raises
    ------
    ConvergenceFailure
        If the complex Jacobi sweep does not converge.
    """
    m, n = a.shape
    if m < n:
        t = svd(conj_transpose(a), tol_rank, scale)
        return MatSvd(U=t.V, singvals=t.singvals, V=t.U, rank=t.rank)
    if tol_rank is None:
        tol_rank = default_rank_tol(m, n)

    _, s, vc = jacobi_svd(complex_adjoint(a))
    smax = float(s[0]) if s.size else 0.0
    cutoff = tol_rank * max(smax, scale or 0.0)
    if smax == 0.0 or smax <= cutoff:
        return MatSvd(QuatMatrix.identity(m), np.zeros(0), QuatMatrix.identity(n), 0)

    groups, null = _clusters(s, cutoff)
    basis: list = []
    singvals = []
    for group in groups:
        cand = [_vec_from_adjoint_column(vc[:, i], n) for i in group]
        got = _pivoted_gram_schmidt(cand, basis, (len(group) + 1) // 2)
        vals = s[group]
        pair_means = [0.5 * (vals[2 * t] + vals[min(2 * t + 1, len(vals) - 1)]) for t in range(len(got))]
        singvals.extend(pair_means)
    r = len(singvals)
    cand = [_vec_from_adjoint_column(vc[:, i], n) for i in null]
    _pivoted_gram_schmidt(cand, basis, n - len(basis))
    _complete_basis(basis, n)
    vcols = _orthonormalize(basis)
    v = _columns_to_matrix(vcols, n)

    av = matmul(a, v).data
    ucols = _orthonormalize([av[:, t, :] / singvals[t] for t in range(r)])
    _complete_basis(ucols, m)
    u = _columns_to_matrix(ucols, m)
    return MatSvd(U=u, singvals=np.array(singvals), V=v, rank=r)


def pinv(a: QuatMatrix, tol_rank=None, scale=None) -> QuatMatrix:
    """Moore-Penrose inverse ``V diag(1/d_1..1/d_r, 0) U*``."""
    f = svd(a, tol_rank, scale)
    return pinv_from_svd(f)


def pinv_from_svd(f: MatSvd) -> QuatMatrix:
    m, n = f.U.rows, f.V.rows
    if f.rank == 0:
        return QuatMatrix.zeros(n, m)
    r = f.rank
    vr = QuatMatrix(f.V.data[:, :r])
    ur = QuatMatrix(f.U.data[:, :r])
    scaled = QuatMatrix(vr.data / f.singvals[None, :, None])
    return matmul(scaled, conj_transpose(ur))


def rank_decomposition(a: QuatMatrix, tol_rank=None):
    """Return ``(P, Q, r)`` with ``A = P E_r Q`` and ``P``, ``Q`` invertible.

    ``E_r`` carries ones at ``(1,1)..(r,r)``.  Built from the SVD as
    ``P = U diag(d_1..d_r, 1..1)`` and ``Q = V*``.
    """
    f = svd(a, tol_rank)
    scales = np.ones(a.rows)
    scales[: f.rank] = f.singvals
    p = QuatMatrix(f.U.data * scales[None, :, None])
    return p, conj_transpose(f.V), f.rank


def is_eta_hermitian(a: QuatMatrix, eta, tol) -> bool:
    if a.rows != a.cols:
        raise DimensionMismatch("eta-Hermitian check needs a square matrix")
    return frobenius_norm(a - eta_conj_transpose(a, eta)) <= tol


def eta_hermitian_decomposition(a: QuatMatrix, eta, tol_rank=None, tol=1e-10):
    """Factor an eta-Hermitian matrix as ``U diag(sigma) U^{eta*}``.

    ``B = eta A`` is skew-Hermitian, so ``i * adjoint(B)`` is complex
    Hermitian.  Its negative eigenvalues ``-sigma`` carry eigenvectors
    ``w`` with ``B w = w (i sigma)``; right-multiplying ``w`` by a unit that
    rotates ``i`` onto ``eta`` gives ``B = W diag(sigma eta) W*`` and finally
    ``U = -eta W eta``.

    Returns
    -------
    U : QuatMatrix
        Unitary.
    sigma : ndarray
        Nonnegative, descending, length ``n``.

    Raises
    ------
    NotEtaHermitian
        If ``||A - A^{eta*}||_F > tol max(1, ||A||_F)``.
    """
    n = a.rows
    if a.cols != n:
        raise DimensionMismatch("eta-Hermitian decomposition needs a square matrix")
    scale = max(1.0, frobenius_norm(a))
    if not is_eta_hermitian(a, eta, tol * scale):
        raise NotEtaHermitian(f"matrix is not {eta}-Hermitian within tolerance")
    if tol_rank is None:
        tol_rank = default_rank_tol(n, n)

    e = unit_array(eta)
    b = lscale(e, a)
    b = QuatMatrix(0.5 * (b.data - conj_transpose(b).data))
    h = 1j * complex_adjoint(b)
    h = 0.5 * (h + h.conj().T)
    lam, vecs = jacobi_eigh(h)

    smax = float(np.max(np.abs(lam))) if lam.size else 0.0
    cutoff = tol_rank * smax
    pos = [i for i, l in enumerate(lam) if -l > cutoff and smax > 0]
    rot = _ROTATE_I_TO[eta]
    ws = [hamilton(_vec_from_adjoint_column(vecs[:, i], n), rot) for i in pos]
    basis = _orthonormalize(ws)
    sigma = np.zeros(n)
    sigma[: len(pos)] = -lam[pos]
    _complete_basis(basis, n)
    w = _columns_to_matrix(basis, n)
    u = QuatMatrix(-hamilton(hamilton(e, w.data), e))
    return u, sigma
