"""Quaternion scalars over IEEE doubles, components ordered (w, x, y, z)."""

from __future__ import annotations

import math
from dataclasses import dataclass

from qbound.errors import DomainError


@dataclass(frozen=True, slots=True)
class Quaternion:
    """``w + x*i + y*j + z*k``."""

    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def from_seq(cls, seq) -> Quaternion:
        w, x, y, z = (float(c) for c in seq)
        return cls(w, x, y, z)

    @classmethod
    def from_complex(cls, c: complex) -> Quaternion:
        return cls(c.real, c.imag, 0.0, 0.0)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.w, self.x, self.y, self.z)

    def as_list(self) -> list[float]:
        return [self.w, self.x, self.y, self.z]

    def __iter__(self):
        return iter(self.as_tuple())

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return Quaternion(self.w + other.w, self.x + other.x, self.y + other.y, self.z + other.z)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return Quaternion(self.w - other.w, self.x - other.x, self.y - other.y, self.z - other.z)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return quat_mul(self, other)

    def __rmul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return quat_mul(other, self)

    def __abs__(self) -> float:
        return quat_abs(self)

    def conj(self) -> Quaternion:
        return quat_conj(self)

    def inv(self) -> Quaternion:
        return quat_inv(self)

    def __repr__(self) -> str:
        return f"Quaternion({self.w!r}, {self.x!r}, {self.y!r}, {self.z!r})"


def _coerce(value):
    if isinstance(value, Quaternion):
        return value
    if isinstance(value, (int, float)):
        return Quaternion(float(value))
    if isinstance(value, complex):
        return Quaternion.from_complex(value)
    return NotImplemented


ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


def quat_mul(p: Quaternion, q: Quaternion) -> Quaternion:
    """Hamilton product ``p*q`` (not commutative)."""
    a1, b1, c1, d1 = p.w, p.x, p.y, p.z
    a2, b2, c2, d2 = q.w, q.x, q.y, q.z
    return Quaternion(
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    )


def quat_conj(q: Quaternion) -> Quaternion:
    return Quaternion(q.w, -q.x, -q.y, -q.z)


def quat_abs(q: Quaternion) -> float:
    return math.hypot(q.w, q.x, q.y, q.z)


def quat_inv(q: Quaternion) -> Quaternion:
    """``conj(q) / |q|^2``; raises DomainError for q == 0."""
    # scale first so |q|^2 cannot overflow or underflow
    m = max(abs(q.w), abs(q.x), abs(q.y), abs(q.z))
    if m == 0.0:
        raise DomainError("zero quaternion has no inverse")
    w, x, y, z = q.w / m, q.x / m, q.y / m, q.z / m
    s = (w * w + x * x + y * y + z * z) * m
    return Quaternion(w / s, -x / s, -y / s, -z / s)
