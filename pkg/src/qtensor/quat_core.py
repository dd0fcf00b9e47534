"""Quaternion scalars and the componentwise kernels shared by arrays.

A quaternion ``w + x i + y j + z k`` is stored as four float64 values.
Arrays of quaternions carry the components on a trailing axis of length 4,
and :func:`hamilton` multiplies two such arrays elementwise.  The scalar
:class:`Quaternion` type routes through the very same arithmetic so that a
scalar loop and a vectorised kernel produce bit-identical results.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Literal, Union

import numpy as np

from .errors import DomainError, FormatError

ImaginaryUnit = Literal["i", "j", "k"]
ETAS: tuple[str, ...] = ("i", "j", "k")

_CONJ_SIGNS = np.array([1.0, -1.0, -1.0, -1.0])


def _hamilton(w1, x1, y1, z1, w2, x2, y2, z2):
    # Fixed evaluation order; scalar and array paths must round identically.
    return (
        w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
        w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
        w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
        w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
    )


def check_eta(eta) -> str:
    """Validate an imaginary-unit tag and return it as ``'i'``, ``'j'`` or ``'k'``."""
    if isinstance(eta, Quaternion):
        for tag in ETAS:
            if eta == unit(tag):
                return tag
    elif eta in ETAS:
        return eta
    raise ValueError(f"eta must be one of 'i', 'j', 'k', got {eta!r}")


@dataclass(frozen=True, slots=True)
class Quaternion:
    """Immutable real quaternion ``w + x i + y j + z k``."""

    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def from_array(cls, arr) -> "Quaternion":
        w, x, y, z = (float(v) for v in arr)
        return cls(w, x, y, z)

    @classmethod
    def parse(cls, text: str) -> "Quaternion":
        return parse_quaternion(text)

    def as_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z], dtype=np.float64)

    def conj(self) -> "Quaternion":
        return conj(self)

    def norm(self) -> float:
        return norm(self)

    def __iter__(self):
        yield from (self.w, self.x, self.y, self.z)

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return Quaternion(self.w + other.w, self.x + other.x, self.y + other.y, self.z + other.z)

    __radd__ = __add__

    def __neg__(self):
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return Quaternion(self.w - other.w, self.x - other.x, self.y - other.y, self.z - other.z)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return qmul(self, other)

    def __rmul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return qmul(other, self)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return qmul(self, qinv(other))

    def __abs__(self):
        return norm(self)

    def __str__(self):
        return format_quaternion(self)


Scalar = Union[Quaternion, float, int]


def _coerce(value):
    if isinstance(value, Quaternion):
        return value
    if isinstance(value, (int, float, np.floating, np.integer)):
        return Quaternion(float(value))
    return NotImplemented


def unit(eta: str) -> Quaternion:
    """The imaginary unit named by ``eta`` as a quaternion."""
    eta = check_eta(eta)
    return {"i": Quaternion(0.0, 1.0), "j": Quaternion(0.0, 0.0, 1.0), "k": Quaternion(0.0, 0.0, 0.0, 1.0)}[eta]


def qmul(p: Quaternion, q: Quaternion) -> Quaternion:
    """Hamilton product ``p q``."""
    return Quaternion(*_hamilton(p.w, p.x, p.y, p.z, q.w, q.x, q.y, q.z))


def conj(q: Quaternion) -> Quaternion:
    """Quaternion conjugate ``w - x i - y j - z k``."""
    return Quaternion(q.w, -q.x, -q.y, -q.z)


def eta_conj(q: Quaternion, eta: str) -> Quaternion:
    """Return ``-eta * conj(q) * eta``."""
    e = unit(eta)
    return -qmul(qmul(e, conj(q)), e)


def norm(q: Quaternion) -> float:
    # hypot rescales, so tiny nonzero quaternions keep a nonzero norm
    return math.hypot(q.w, q.x, q.y, q.z)


def qinv(q: Quaternion) -> Quaternion:
    """Multiplicative inverse ``conj(q) / |q|^2``.

    No rescaling is attempted, so components near the overflow threshold
    are not supported.
    """
    n2 = q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z
    if n2 == 0.0:
        raise DomainError("zero quaternion has no inverse")
    return Quaternion(q.w / n2, -q.x / n2, -q.y / n2, -q.z / n2)


# -- text form -------------------------------------------------------------

_NUM = r"(?:(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?|inf|nan)"
_QUAT_RE = re.compile(
    rf"^\s*([+-]?\s*{_NUM})"
    rf"\s*([+-])\s*({_NUM})\s*i"
    rf"\s*([+-])\s*({_NUM})\s*j"
    rf"\s*([+-])\s*({_NUM})\s*k\s*$"
)


def _fmt(v: float) -> str:
    return format(v, ".17g")


def format_quaternion(q: Quaternion) -> str:
    """Render as ``w+xi+yj+zk`` with an explicit sign on every imaginary term."""
    parts = [_fmt(q.w)]
    for value, tag in ((q.x, "i"), (q.y, "j"), (q.z, "k")):
        sign = "-" if math.copysign(1.0, value) < 0 else "+"
        parts.append(f"{sign}{_fmt(abs(value))}{tag}")
    return "".join(parts)


def parse_quaternion(text: str) -> Quaternion:
    """Inverse of :func:`format_quaternion`; whitespace between tokens is allowed."""
    m = _QUAT_RE.match(text)
    if m is None:
        raise FormatError(f"not a quaternion literal: {text!r}")
    w = float(m.group(1).replace(" ", ""))
    comps = []
    for sign, mag in ((m.group(2), m.group(3)), (m.group(4), m.group(5)), (m.group(6), m.group(7))):
        v = float(mag)
        comps.append(-v if sign == "-" else v)
    return Quaternion(w, *comps)


# -- array kernels ---------------------------------------------------------

def hamilton(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Elementwise Hamilton product of broadcastable ``(..., 4)`` arrays."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    out = _hamilton(a[..., 0], a[..., 1], a[..., 2], a[..., 3],
                    b[..., 0], b[..., 1], b[..., 2], b[..., 3])
    return np.stack(out, axis=-1)


def conj_array(a: np.ndarray) -> np.ndarray:
    return np.asarray(a, dtype=np.float64) * _CONJ_SIGNS


def unit_array(eta: str) -> np.ndarray:
    return unit(eta).as_array()


def eta_conj_array(a: np.ndarray, eta: str) -> np.ndarray:
    """Elementwise ``-eta * conj(a) * eta``.

    Conjugating by a unit ``eta`` flips the sign of the two imaginary
    components orthogonal to ``eta``; composing with ``conj`` leaves only
    the ``eta`` component negated.
    """
    idx = ETAS.index(check_eta(eta)) + 1
    out = np.array(a, dtype=np.float64, copy=True)
    out[..., idx] = -out[..., idx]
    return out


def abs2_array(a: np.ndarray) -> np.ndarray:
    return np.sum(np.asarray(a) ** 2, axis=-1)
