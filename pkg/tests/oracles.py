"""Independent reference computations used by the tests.

Nothing here calls the package's numerical kernels: products go through a
basis-unit lookup table or plain loops, and spectra come from
``numpy.linalg``.
"""

import itertools

import numpy as np

from qtensor import Quaternion, QuatMatrix, QuatTensor

# (unit_a, unit_b) -> (sign, unit) for the basis 1, i, j, k (indices 0..3)
BASIS_TABLE = {
    (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
    (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
    (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
    (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
}


def table_qmul(p, q):
    out = [0.0, 0.0, 0.0, 0.0]
    pa, qa = list(p), list(q)
    for a in range(4):
        for b in range(4):
            sign, c = BASIS_TABLE[(a, b)]
            out[c] += sign * pa[a] * qa[b]
    return Quaternion(*out)


def naive_matmul(a: QuatMatrix, b: QuatMatrix) -> QuatMatrix:
    """Triple loop with scalar quaternions, inner index ascending."""
    m, n = a.rows, b.cols
    data = np.zeros((m, n, 4))
    for i in range(m):
        for j in range(n):
            acc = a[i, 0] * b[0, j]
            for k in range(1, a.cols):
                acc = acc + a[i, k] * b[k, j]
            data[i, j] = acc.as_array()
    return QuatMatrix(data)


def naive_einstein(a: QuatTensor, b: QuatTensor) -> QuatTensor:
    """Direct contraction over every shared multi-index, in linear order."""
    assert a.right == b.left
    shared = [tuple(reversed(t)) for t in itertools.product(*(range(e) for e in reversed(a.right)))]
    data = np.zeros(a.left + b.right + (4,))
    for i in itertools.product(*(range(e) for e in a.left)):
        for k in itertools.product(*(range(e) for e in b.right)):
            acc = Quaternion()
            for j in shared:
                x = Quaternion.from_array(a.data[i + j])
                y = Quaternion.from_array(b.data[j + k])
                acc = acc + table_qmul(x, y)
            data[i + k] = acc.as_array()
    return QuatTensor(data, a.left, b.right)


def divmod_delinearize(i, shape):
    """Peel coordinates off with divmod, first index fastest."""
    rem = i - 1
    out = []
    for e in shape:
        rem, r = divmod(rem, e)
        out.append(r + 1)
    return tuple(out)


def adjoint(m: QuatMatrix) -> np.ndarray:
    """Complex adjoint built straight from the components."""
    d = m.data
    a1 = d[..., 0] + 1j * d[..., 1]
    a2 = d[..., 2] + 1j * d[..., 3]
    return np.block([[a1, a2], [-a2.conj(), a1.conj()]])


def singular_values(m: QuatMatrix) -> np.ndarray:
    """Quaternion singular values, descending, from numpy's SVD of the adjoint."""
    s = np.linalg.svd(adjoint(m), compute_uv=False)
    return s[::2]


def rand_quat(rng):
    return Quaternion(*rng.uniform(-1.0, 1.0, 4))


def rand_matrix(rng, m, n):
    return QuatMatrix(rng.uniform(-1.0, 1.0, (m, n, 4)))


def rand_lowrank_tensor(rng, left, right, r):
    """``unflatten(G @ H)`` with ``G: prod(left) x r`` and ``H: r x prod(right)``."""
    g = QuatTensor.random(left, (r,), rng)
    h = QuatTensor.random((r,), right, rng)
    return g @ h


def rel(x, ref):
    return x.norm() / max(1.0, ref.norm())
