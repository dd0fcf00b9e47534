"""
Tensor SVD and Moore-Penrose inverse
====================================

A quaternion tensor with shape ``(2, 2) | (3, 2)`` is factored as
``A = U * B * V^*`` under the Einstein product, then inverted.
"""

from pathlib import Path

import numpy as np

from qtensor import flatten, pinv, qten, tensor_svd
from qtensor import quat_tensor as qt

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"

a = qten.read(FIXTURES / "svd_example.qten")
print("A:", a)
print("flattened to a", flatten(a).shape, "quaternion matrix")

################################################
# Factor
# ------
# ``ascending=True`` lists the singular values smallest first, which puts
# them at the same core positions as the worked example.

f = tensor_svd(a, ascending=True)
print("singular values:", f.singvals)
for (p, q), s in zip(f.positions, f.singvals):
    print(f"  B{p + q} = {s:.6f}")
print("reconstruction error:", qt.frobenius_norm(f.reconstruct() - a))

################################################
# Invert
# ------
# The core of ``A^+`` holds the reciprocals at transposed positions.

for k, v in sorted(f.pinv_core().nonzero_entries().items()):
    print(f"  B+{k} = {v.w:.6f}")

x = pinv(a)
print("Penrose residuals:", np.array(qt.penrose_residuals(a, x)))
