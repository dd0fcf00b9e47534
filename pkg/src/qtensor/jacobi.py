"""Jacobi kernels on complex matrices.

Both routines are plain cyclic-by-row Jacobi sweeps with a hard sweep cap.
They are deliberately simple: the quaternion factorizations only ever feed
them the (small) complex adjoint of a flattened tensor.
"""

import math

import numpy as np

from .errors import ConvergenceFailure

MAX_SWEEPS = 30
ROTATION_TOL = 1e-14


def _tangent(z):
    # Smaller root of t^2 + 2 z t - 1 = 0.
    if abs(z) > 1e150:
        return 0.5 / z
    return math.copysign(1.0, z) / (abs(z) + math.sqrt(1.0 + z * z))


def jacobi_svd(a, tol=ROTATION_TOL, max_sweeps=MAX_SWEEPS):
    """One-sided (Hestenes) Jacobi SVD of a complex matrix.

    Parameters
    ----------
    a : array_like, shape (m, n)
    tol : float
        A column pair is rotated while ``|g_p^H g_q| > tol * |g_p| |g_q|``.
    max_sweeps : int

    Returns
    -------
    u : ndarray, shape (m, k)
        Left singular vectors for the ``k = min(m, n)`` largest values.
        Columns belonging to zero singular values are zero.
    s : ndarray, shape (k,)
        Singular values, descending.
    v : ndarray, shape (n, n) if ``m >= n`` else (n, k)
        Right singular vectors matching ``s`` (for ``m >= n`` all ``n``
        right vectors are returned, the trailing ones spanning the kernel).
    """
    a = np.asarray(a, dtype=np.complex128)
    m, n = a.shape
    if m < n:
        v, s, u = jacobi_svd(a.conj().T, tol, max_sweeps)
        return u, s, v[:, : s.size]

    g = a.copy()
    v = np.eye(n, dtype=np.complex128)
    for _ in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                gp = g[:, p]
                gq = g[:, q]
                alpha = np.vdot(gp, gp).real
                beta = np.vdot(gq, gq).real
                if alpha == 0.0 or beta == 0.0:
                    continue
                gamma = np.vdot(gp, gq)
                mag = abs(gamma)
                if mag <= tol * math.sqrt(alpha * beta):
                    continue
                rotated = True
                phase = gamma.conjugate() / mag
                t = _tangent((beta - alpha) / (2.0 * mag))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = c * t
                rot = np.array([[c, s], [-s * phase, c * phase]])
                g[:, [p, q]] = g[:, [p, q]] @ rot
                v[:, [p, q]] = v[:, [p, q]] @ rot
        if not rotated:
            break
    else:
        raise ConvergenceFailure(f"one-sided Jacobi did not converge in {max_sweeps} sweeps")

    s = np.linalg.norm(g, axis=0)
    order = np.argsort(-s, kind="stable")
    s = s[order]
    g = g[:, order]
    v = v[:, order]
    u = np.zeros_like(g)
    nz = s > 0
    u[:, nz] = g[:, nz] / s[nz]
    return u, s, v


def jacobi_eigh(h, tol=ROTATION_TOL, max_sweeps=MAX_SWEEPS):
    """Cyclic two-sided Jacobi eigendecomposition of a Hermitian matrix.

    Returns ``(w, v)`` with eigenvalues ``w`` ascending and unitary ``v``
    such that ``h @ v ~= v * w``.  Off-diagonal entries are annihilated
    while they exceed ``tol * ||h||_F``.
    """
    a = np.array(h, dtype=np.complex128, copy=True)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    scale = np.linalg.norm(a)
    if scale == 0.0:
        return np.zeros(n), v
    thresh = tol * scale
    for _ in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= thresh:
                    continue
                rotated = True
                phase = apq.conjugate() / mag
                t = _tangent((a[q, q].real - a[p, p].real) / (2.0 * mag))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = c * t
                rot = np.array([[c, s], [-s * phase, c * phase]])
                a[:, [p, q]] = a[:, [p, q]] @ rot
                a[[p, q], :] = rot.conj().T @ a[[p, q], :]
                v[:, [p, q]] = v[:, [p, q]] @ rot
        if not rotated:
            break
    else:
        raise ConvergenceFailure(f"Hermitian Jacobi did not converge in {max_sweeps} sweeps")

    w = a.diagonal().real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]
