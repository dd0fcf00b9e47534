"""Rewrite the QTEN fixtures from the transcriptions in tests/worked_examples.py.

Run from the repository root:  python3 fixtures/regenerate.py
"""

import pathlib
import sys

HERE = pathlib.Path(__file__).resolve().parent
sys.path.insert(0, str(HERE.parent / "tests"))

import worked_examples as ex  # noqa: E402
from qtensor import QuatMatrix, qten, unflatten, unit_tensor  # noqa: E402


def main():
    printed = QuatMatrix.from_rows(ex.FLATTEN_EXAMPLE_MATRIX)
    files = {
        "flatten_example.qten": ex.flatten_example(),
        "flatten_example_matrix.qten": unflatten(printed, (4,), (6,)),
        "svd_example.qten": ex.svd_example(),
        "i_hermitian_example.qten": ex.i_hermitian_example(),
        "k_hermitian_example.qten": ex.k_hermitian_example(),
        "unit_2x2.qten": unit_tensor((2, 2)),
    }
    for name, t in files.items():
        qten.write(HERE / name, t)
        print(name)


if __name__ == "__main__":
    main()
