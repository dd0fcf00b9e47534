"""Dense quaternion tensors under the Einstein product.

Quaternion scalars and matrices, the tensor/matrix flattening bijection,
tensor SVD, rank and eta-Hermitian decompositions, the Moore-Penrose
inverse, and closed-form solvers for two-sided Sylvester tensor equations.
"""

from .errors import (
    ConvergenceFailure,
    DimensionMismatch,
    DomainError,
    FormatError,
    Inconsistent,
    IndexOutOfRange,
    NotASolution,
    NotEtaHermitian,
    QTensorError,
)
from .quat_core import Quaternion, conj, eta_conj, qinv, qmul, unit
from .quat_matrix import QuatMatrix
from .quat_tensor import (
    QuatTensor,
    conj_transpose,
    diagonal_tensor,
    einstein_product,
    eta_conj_transpose,
    frobenius_norm,
    is_eta_hermitian,
    is_unitary,
    pinv,
    projector_L,
    projector_R,
    tensor_eta_decomposition,
    tensor_rank_decomposition,
    tensor_svd,
    unit_tensor,
)
from . import qten
from .tensor_index import delinearize, flatten, linearize, unflatten

__version__ = "0.1.0"
