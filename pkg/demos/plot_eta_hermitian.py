"""
eta-Hermitian decomposition
===========================

A square tensor that equals its own eta-conjugate transpose factors as
``A = U * B * U^{eta*}`` with ``U`` unitary and ``B`` real diagonal.
"""

from pathlib import Path

import numpy as np

from qtensor import QuatTensor, diagonal_tensor, is_eta_hermitian, qten, tensor_eta_decomposition
from qtensor import quat_tensor as qt

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"

a = qten.read(FIXTURES / "k_hermitian_example.qten")
for eta in "ijk":
    print(f"{eta}-Hermitian:", is_eta_hermitian(a, eta, 1e-14))

d = tensor_eta_decomposition(a, "k", ascending=True)
print("sigma:", d.sigma)
print("U unitary:", qt.is_unitary(d.U, 1e-12))
print("reconstruction error:", qt.frobenius_norm(d.reconstruct() - a))

################################################
# Build one from scratch
# ----------------------
# ``G * R * G^{eta*}`` is eta-Hermitian for any ``G`` and real diagonal ``R``.

rng = np.random.default_rng(0)
g = QuatTensor.random((2, 2), (2, 2), rng)
h = g @ diagonal_tensor((2, 2), [4.0, 3.0, 2.0, 1.0]) @ g.eta_H("j")
d = tensor_eta_decomposition(h, "j")
print("sigma:", d.sigma)
print("reconstruction error:", qt.frobenius_norm(d.reconstruct() - h))
