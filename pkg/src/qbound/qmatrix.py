"""Dense quaternion matrices stored as real arrays of shape (rows, cols, 4).

The complex adjoint uses the split ``q = (w + x i) + (y + z i) j``, so a
matrix ``A = A1 + A2 j`` maps to ``[[A1, A2], [-conj(A2), conj(A1)]]``.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from qbound.errors import ShapeError
from qbound.quaternion import Quaternion

# _HAMILTON[a, b, c]: coefficient of basis c in e_a * e_b, basis order (1, i, j, k)
_HAMILTON = np.zeros((4, 4, 4))
for _a, _b, _c, _s in [
    (0, 0, 0, 1), (0, 1, 1, 1), (0, 2, 2, 1), (0, 3, 3, 1),
    (1, 0, 1, 1), (1, 1, 0, -1), (1, 2, 3, 1), (1, 3, 2, -1),
    (2, 0, 2, 1), (2, 1, 3, -1), (2, 2, 0, -1), (2, 3, 1, 1),
    (3, 0, 3, 1), (3, 1, 2, 1), (3, 2, 1, -1), (3, 3, 0, -1),
]:
    _HAMILTON[_a, _b, _c] = _s

_CONJ_SIGNS = np.array([1.0, -1.0, -1.0, -1.0])


class QMatrix:
    """Immutable dense m x n quaternion matrix."""

    __slots__ = ("_data",)

    def __init__(self, data):
        arr = np.array(data, dtype=np.float64)
        if arr.ndim != 3 or arr.shape[2] != 4:
            raise ShapeError(f"expected array of shape (rows, cols, 4), got {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ShapeError(f"matrix dimensions must be positive, got {arr.shape[:2]}")
        arr.setflags(write=False)
        self._data = arr

    # construction -------------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> QMatrix:
        return cls(np.zeros((rows, rows if cols is None else cols, 4)))

    @classmethod
    def identity(cls, n: int) -> QMatrix:
        data = np.zeros((n, n, 4))
        data[np.arange(n), np.arange(n), 0] = 1.0
        return cls(data)

    @classmethod
    def from_nested(cls, rows: Sequence[Sequence[Sequence[float]]]) -> QMatrix:
        """Build from ``[[ [w, x, y, z], ... ], ...]``."""
        try:
            arr = np.array(rows, dtype=np.float64)
        except ValueError as exc:
            raise ShapeError(f"ragged quaternion matrix: {exc}") from None
        return cls(arr)

    @classmethod
    def from_quaternions(cls, rows: Sequence[Sequence[Quaternion]]) -> QMatrix:
        return cls([[q.as_tuple() for q in row] for row in rows])

    @classmethod
    def from_complex_parts(cls, a1: np.ndarray, a2: np.ndarray) -> QMatrix:
        """Inverse of the split: entries ``a1 + a2 j``."""
        a1 = np.atleast_2d(np.asarray(a1, dtype=complex))
        a2 = np.atleast_2d(np.asarray(a2, dtype=complex))
        if a1.shape != a2.shape:
            raise ShapeError(f"complex parts differ in shape: {a1.shape} vs {a2.shape}")
        return cls(np.stack([a1.real, a1.imag, a2.real, a2.imag], axis=-1))

    @classmethod
    def block(cls, blocks: Sequence[Sequence[QMatrix]]) -> QMatrix:
        """Assemble a matrix from a 2-D grid of conformable blocks."""
        try:
            rows = [np.concatenate([b.data for b in row], axis=1) for row in blocks]
            return cls(np.concatenate(rows, axis=0))
        except ValueError as exc:
            raise ShapeError(f"blocks are not conformable: {exc}") from None

    # access ---------------------------------------------------------------

    @property
    def data(self) -> np.ndarray:
        """Read-only (rows, cols, 4) view."""
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

    @property
    def entries(self) -> list[Quaternion]:
        """Row-major list of entries."""
        return [Quaternion.from_seq(c) for c in self._data.reshape(-1, 4)]

    def __getitem__(self, idx) -> Quaternion:
        i, j = idx
        return Quaternion.from_seq(self._data[i, j])

    def submatrix(self, rows: slice, cols: slice) -> QMatrix:
        return QMatrix(self._data[rows, cols].copy())

    def to_nested(self) -> list:
        return self._data.tolist()

    def is_square(self) -> bool:
        return self.rows == self.cols

    # algebra --------------------------------------------------------------

    def __matmul__(self, other: QMatrix) -> QMatrix:
        return qm_matmul(self, other)

    def __add__(self, other: QMatrix) -> QMatrix:
        _same_shape(self, other)
        return QMatrix(self._data + other._data)

    def __sub__(self, other: QMatrix) -> QMatrix:
        _same_shape(self, other)
        return QMatrix(self._data - other._data)

    def __neg__(self) -> QMatrix:
        return QMatrix(-self._data)

    def scale(self, c: float) -> QMatrix:
        return QMatrix(self._data * float(c))

    @property
    def H(self) -> QMatrix:
        return qm_conj_transpose(self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._data, other._data))

    __hash__ = None

    def allclose(self, other: QMatrix, rtol: float = 0.0, atol: float = 0.0) -> bool:
        return self.shape == other.shape and bool(
            np.allclose(self._data, other._data, rtol=rtol, atol=atol)
        )

    def __repr__(self) -> str:
        return f"QMatrix({self.rows}x{self.cols})"


def _same_shape(a: QMatrix, b: QMatrix) -> None:
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch: {a.shape} vs {b.shape}")


def qm_matmul(a: QMatrix, b: QMatrix) -> QMatrix:
    """Matrix product with Hamilton products ``a[i,t] * b[t,j]`` (left factor first)."""
    if a.cols != b.rows:
        raise ShapeError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    return QMatrix(np.einsum("ita,tjb,abc->ijc", a.data, b.data, _HAMILTON, optimize=True))


def qm_conj_transpose(a: QMatrix) -> QMatrix:
    return QMatrix(np.transpose(a.data, (1, 0, 2)) * _CONJ_SIGNS)


def entry_moduli(a: QMatrix) -> np.ndarray:
    """Real (rows, cols) array of |a_ij|."""
    return np.sqrt(np.sum(a.data * a.data, axis=-1))


def qm_norm_one(a: QMatrix) -> float:
    """Maximum column sum of entry moduli."""
    return float(entry_moduli(a).sum(axis=0).max())


def qm_norm_inf(a: QMatrix) -> float:
    """Maximum row sum of entry moduli."""
    return float(entry_moduli(a).sum(axis=1).max())


def qm_norm_frobenius(a: QMatrix) -> float:
    return float(np.linalg.norm(a.data.ravel()))


def complex_parts(a: QMatrix) -> tuple[np.ndarray, np.ndarray]:
    d = a.data
    return d[..., 0] + 1j * d[..., 1], d[..., 2] + 1j * d[..., 3]


def qm_complex_adjoint(a: QMatrix) -> np.ndarray:
    """The 2m x 2n complex matrix ``[[A1, A2], [-conj(A2), conj(A1)]]``."""
    a1, a2 = complex_parts(a)
    return np.block([[a1, a2], [-a2.conj(), a1.conj()]])


def adjoint_vector_to_quaternion(v: np.ndarray) -> QMatrix:
    """Map an eigenvector ``[v1; v2]`` of an adjoint to the quaternion column ``v1 - conj(v2) j``.

    If ``chi(A) v = v lam`` then ``A x = x lam`` for the returned column x.
    """
    v = np.asarray(v, dtype=complex).ravel()
    if v.size % 2:
        raise ShapeError("adjoint vector must have even length")
    n = v.size // 2
    return QMatrix.from_complex_parts(v[:n, None], -v[n:, None].conj())


def quaternion_vector_to_adjoint(x: QMatrix) -> np.ndarray:
    """Inverse of :func:`adjoint_vector_to_quaternion` for a column x."""
    if x.cols != 1:
        raise ShapeError("expected a column vector")
    x1, x2 = complex_parts(x)
    return np.concatenate([x1[:, 0], -x2[:, 0].conj()])


def stack_columns(blocks: Iterable[QMatrix]) -> QMatrix:
    return QMatrix(np.concatenate([b.data for b in blocks], axis=0))
