import math

import numpy as np
import pytest

from qtensor import ConvergenceFailure, DimensionMismatch, NotEtaHermitian, Quaternion, QuatMatrix
from qtensor import quat_matrix as qm
from qtensor.jacobi import jacobi_eigh, jacobi_svd
from qtensor.tensor_index import flatten

import worked_examples as ex
from oracles import adjoint, naive_matmul, rand_matrix, singular_values

J_ = Quaternion(0, 0, 1, 0)


def fro(m):
    return qm.frobenius_norm(m)


def unitary_error(u):
    n = u.rows
    return max(fro(u @ u.H - QuatMatrix.identity(n)), fro(u.H @ u - QuatMatrix.identity(n)))


def penrose(a, x):
    ax, xa = a @ x, x @ a
    return (fro(ax @ a - a), fro(x @ a @ x - x), fro(ax.H - ax), fro(xa.H - xa))


def rank_r(rng, m, n, r):
    return rand_matrix(rng, m, r) @ rand_matrix(rng, r, n)


# -- products and transposes -----------------------------------------------

def test_identity_is_neutral():
    rng = np.random.default_rng(0)
    m = rand_matrix(rng, 2, 2)
    assert QuatMatrix.identity(2) @ m == m
    assert m @ QuatMatrix.identity(2) == m


def test_scalar_product():
    i = QuatMatrix.from_rows([[Quaternion(0, 1)]])
    j = QuatMatrix.from_rows([[J_]])
    assert (i @ j)[0, 0] == Quaternion(0, 0, 0, 1)


def test_matmul_matches_naive_loop_exactly():
    rng = np.random.default_rng(1)
    for _ in range(20):
        a, b = rand_matrix(rng, 3, 4), rand_matrix(rng, 4, 2)
        assert a @ b == naive_matmul(a, b)


def test_matmul_shape_check():
    with pytest.raises(DimensionMismatch):
        QuatMatrix.zeros(2, 3) @ QuatMatrix.zeros(2, 3)


def test_conj_transpose_involution_exact():
    rng = np.random.default_rng(2)
    m = rand_matrix(rng, 3, 5)
    assert m.H.H == m
    assert m.H.shape == (5, 3)
    assert m.H[4, 1] == m[1, 4].conj()


def test_eta_transpose_examples():
    d = QuatMatrix.real_diag([2.0, -1.0, 3.0], 3, 3)
    for eta in "ijk":
        assert d.eta_H(eta) == d
    j = QuatMatrix.from_rows([[J_]])
    # -i conj(j) i = -i (-j) i = i j i = j
    assert j.eta_H("i") == j
    assert j.eta_H("j") == -j


def test_eta_transpose_product_rule():
    rng = np.random.default_rng(3)
    for eta in "ijk":
        for _ in range(10):
            a, b = rand_matrix(rng, 3, 3), rand_matrix(rng, 3, 3)
            diff = (a @ b).eta_H(eta) - b.eta_H(eta) @ a.eta_H(eta)
            assert np.max(np.abs(diff.data)) <= 1e-13


def test_conj_transpose_product_rule():
    rng = np.random.default_rng(4)
    a, b = rand_matrix(rng, 2, 4), rand_matrix(rng, 4, 3)
    assert np.max(np.abs(((a @ b).H - b.H @ a.H).data)) <= 1e-14


# -- complex adjoint -------------------------------------------------------

def test_adjoint_examples():
    assert np.array_equal(qm.complex_adjoint(QuatMatrix.from_rows([[J_]])), np.array([[0, 1], [-1, 0]]))
    assert np.array_equal(qm.complex_adjoint(QuatMatrix.identity(3)), np.eye(6))


def test_adjoint_matches_oracle_and_inverts():
    rng = np.random.default_rng(5)
    m = rand_matrix(rng, 3, 2)
    assert np.array_equal(qm.complex_adjoint(m), adjoint(m))
    assert qm.from_complex_adjoint(qm.complex_adjoint(m)) == m


def test_adjoint_is_homomorphism():
    rng = np.random.default_rng(6)
    for _ in range(20):
        a, b = rand_matrix(rng, 2, 3), rand_matrix(rng, 3, 2)
        ca, cb = qm.complex_adjoint(a), qm.complex_adjoint(b)
        assert np.max(np.abs(qm.complex_adjoint(a @ b) - ca @ cb)) <= 1e-13
        c = rand_matrix(rng, 2, 3)
        assert np.max(np.abs(qm.complex_adjoint(a + c) - (ca + qm.complex_adjoint(c)))) <= 1e-15
        assert np.array_equal(qm.complex_adjoint(a.H), ca.conj().T)


def test_adjoint_singular_values_pair_up():
    rng = np.random.default_rng(7)
    for _ in range(10):
        s = np.linalg.svd(adjoint(rand_matrix(rng, 3, 4)), compute_uv=False)
        assert np.all(np.abs(s[0::2] - s[1::2]) <= 1e-10 * s[0])


# -- Jacobi kernels ----------------------------------------------------------

def test_jacobi_svd_matches_numpy():
    rng = np.random.default_rng(8)
    for m, n in ((6, 4), (4, 6), (5, 5), (1, 3)):
        a = rng.normal(size=(m, n)) + 1j * rng.normal(size=(m, n))
        u, s, v = jacobi_svd(a)
        assert np.allclose(s, np.linalg.svd(a, compute_uv=False), rtol=0, atol=1e-13)
        k = s.size
        assert np.allclose(u[:, :k] * s @ v[:, :k].conj().T, a, atol=1e-13)


def test_jacobi_eigh_matches_numpy():
    rng = np.random.default_rng(9)
    g = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    h = g + g.conj().T
    w, v = jacobi_eigh(h)
    assert np.allclose(w, np.linalg.eigvalsh(h), atol=1e-12)
    assert np.allclose(h @ v, v * w, atol=1e-12)


def test_jacobi_sweep_cap():
    rng = np.random.default_rng(10)
    a = rng.normal(size=(6, 6)) + 0j
    with pytest.raises(ConvergenceFailure):
        jacobi_svd(a, max_sweeps=1)
    with pytest.raises(ConvergenceFailure):
        jacobi_eigh(a + a.T, max_sweeps=1)


# -- SVD -------------------------------------------------------------------

def test_svd_zero():
    f = qm.svd(QuatMatrix.zeros(2, 2))
    assert f.rank == 0 and f.singvals.size == 0
    assert f.U == QuatMatrix.identity(2) and f.V == QuatMatrix.identity(2)


def test_svd_diag_with_unit_quaternion():
    a = QuatMatrix.from_rows([[3.0, 0.0], [0.0, Quaternion(0, 0, 0, 4)]])
    f = qm.svd(a)
    assert np.allclose(f.singvals, [4.0, 3.0], atol=1e-14, rtol=0)


def test_svd_worked_example_spectrum():
    f = qm.svd(flatten(ex.svd_example()))
    assert sorted(f.singvals) == pytest.approx(ex.SVD_EXAMPLE_SINGVALS, abs=1e-12)


@pytest.mark.parametrize("shape", [(3, 3), (4, 2), (2, 5), (1, 4), (6, 6)])
def test_svd_invariants_random(shape):
    rng = np.random.default_rng(10 * shape[0] + shape[1])
    m, n = shape
    for _ in range(10):
        a = rand_matrix(rng, m, n)
        f = qm.svd(a)
        assert f.rank == min(m, n)
        assert np.all(np.diff(f.singvals) <= 0) and np.all(f.singvals > 0)
        assert unitary_error(f.U) <= 1e-12 * m
        assert unitary_error(f.V) <= 1e-12 * n
        assert fro(a - f.reconstruct()) <= 1e-11 * fro(a)
        assert np.allclose(f.singvals, singular_values(a)[: f.rank], atol=1e-12)


def test_svd_rank_deficient_and_repeated():
    rng = np.random.default_rng(11)
    a = rank_r(rng, 6, 5, 2)
    f = qm.svd(a)
    assert f.rank == 2
    assert fro(a - f.reconstruct()) <= 1e-11 * fro(a)
    # repeated values: a scaled unitary
    u = qm.svd(rand_matrix(rng, 4, 4)).U
    f = qm.svd(u * 3.0)
    assert np.allclose(f.singvals, 3.0, atol=1e-13)
    assert fro(u * 3.0 - f.reconstruct()) <= 1e-12


def test_svd_rank_tolerance():
    a = QuatMatrix.real_diag([1.0, 1e-13], 2, 2)
    assert qm.svd(a).rank == 1
    assert qm.svd(a, tol_rank=1e-15).rank == 2
    # a reference scale pushes an all-small matrix below the cutoff
    assert qm.svd(a * 1e-6, scale=1.0, tol_rank=1e-5).rank == 0
    assert qm.svd(a * 1e-6, tol_rank=1e-5).rank == 1


# -- pseudo-inverse and rank decomposition ------------------------------------

def test_pinv_zero_and_unitary():
    assert qm.pinv(QuatMatrix.zeros(2, 3)) == QuatMatrix.zeros(3, 2)
    rng = np.random.default_rng(12)
    u = qm.svd(rand_matrix(rng, 3, 3)).U
    assert fro(qm.pinv(u) - u.H) <= 1e-13


def test_pinv_scalar():
    x = qm.pinv(QuatMatrix.from_rows([[Quaternion(1, 1)]]))
    assert np.allclose(x.data[0, 0], [0.5, -0.5, 0, 0], atol=1e-15)
    a = QuatMatrix.from_rows([[Quaternion(1, 1)]])
    assert max(penrose(a, x)) <= 1e-15


def test_pinv_penrose_random():
    rng = np.random.default_rng(13)
    for m, n, r in ((4, 3, 3), (3, 5, 2), (5, 5, 1), (2, 2, 2)):
        for _ in range(5):
            a = rank_r(rng, m, n, r)
            x = qm.pinv(a)
            scale = max(1.0, fro(a), fro(x))
            assert max(penrose(a, x)) <= 1e-11 * scale
            ax, xa = a @ x, x @ a
            assert fro(ax @ ax - ax) <= 1e-11 and fro(xa @ xa - xa) <= 1e-11


def test_rank_decomposition():
    n = 3
    p, q, r = qm.rank_decomposition(QuatMatrix.identity(n))
    assert r == n and fro(p @ q - QuatMatrix.identity(n)) <= 1e-13
    p, q, r = qm.rank_decomposition(QuatMatrix.zeros(2, 3))
    assert r == 0 and p == QuatMatrix.identity(2) and q == QuatMatrix.identity(3)
    rng = np.random.default_rng(14)
    for _ in range(5):
        a = rank_r(rng, 4, 4, 2)
        p, q, r = qm.rank_decomposition(a)
        er = QuatMatrix.real_diag([1.0] * r, 4, 4)
        assert r == 2
        assert fro(a - p @ er @ q) <= 1e-11 * fro(a)
        assert np.linalg.matrix_rank(adjoint(p)) == 8 and np.linalg.matrix_rank(adjoint(q)) == 8


# -- eta-Hermitian decomposition --------------------------------------------

def eta_hermitian(rng, n, eta, rank=None):
    g = rand_matrix(rng, n, n)
    vals = rng.uniform(0.5, 3.0, n)
    if rank is not None:
        vals[rank:] = 0.0
    return g @ QuatMatrix.real_diag(vals, n, n) @ g.eta_H(eta)


def test_eta_decomposition_of_real_diagonal():
    d = QuatMatrix.real_diag([3.0, 1.0, 0.5], 3, 3)
    for eta in "ijk":
        u, s = qm.eta_hermitian_decomposition(d, eta)
        assert np.allclose(s, [3.0, 1.0, 0.5], atol=1e-14)
        assert fro(u @ QuatMatrix.real_diag(s, 3, 3) @ u.eta_H(eta) - d) <= 1e-13


def test_eta_decomposition_scalar():
    # j is i-Hermitian: -i conj(j) i = j
    a = QuatMatrix.from_rows([[J_]])
    u, s = qm.eta_hermitian_decomposition(a, "i")
    assert np.allclose(s, [1.0], atol=1e-15)
    assert abs(u[0, 0].norm() - 1.0) <= 1e-15
    assert fro(u @ QuatMatrix.real_diag(s, 1, 1) @ u.eta_H("i") - a) <= 1e-14


def test_eta_decomposition_rejects_non_hermitian():
    with pytest.raises(NotEtaHermitian):
        qm.eta_hermitian_decomposition(QuatMatrix.from_rows([[J_]]), "j")
    with pytest.raises(DimensionMismatch):
        qm.eta_hermitian_decomposition(QuatMatrix.zeros(2, 3), "i")


@pytest.mark.parametrize("eta", ["i", "j", "k"])
def test_eta_decomposition_random(eta):
    rng = np.random.default_rng(ord(eta))
    for n, rank in ((3, None), (4, 2), (5, None), (2, 0)):
        a = eta_hermitian(rng, n, eta, rank)
        assert qm.is_eta_hermitian(a, eta, 1e-13 * max(1.0, fro(a)))
        u, s = qm.eta_hermitian_decomposition(a, eta)
        assert unitary_error(u) <= 1e-12 * n
        assert np.all(s >= 0) and np.all(np.diff(s) <= 0)
        rec = u @ QuatMatrix.real_diag(s, n, n) @ u.eta_H(eta)
        assert fro(a - rec) <= 1e-10 * max(1.0, fro(a))
        assert np.allclose(s, singular_values(a), atol=1e-10 * max(1.0, fro(a)))


def test_eta_decomposition_k_example_reconstructs():
    a = flatten(ex.k_hermitian_example())
    u, s = qm.eta_hermitian_decomposition(a, "k")
    rec = u @ QuatMatrix.real_diag(s, 4, 4) @ u.eta_H("k")
    assert fro(a - rec) <= 1e-10 * max(1.0, fro(a))
    # the spectrum is the singular spectrum of the flattening
    assert np.allclose(s, singular_values(a), atol=1e-12)
    assert sorted(s) == pytest.approx([1.0, math.sqrt(3.0), 2.0, 2.0], abs=1e-12)
