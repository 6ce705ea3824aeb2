"""Right spectra and 2-norms of quaternion matrices through the complex adjoint.

Every right eigenvalue class of an n x n quaternion matrix meets the complex
plane in a conjugate pair, and the adjoint has exactly those 2n values. A
class is reported by its member with nonnegative imaginary part. Left
eigenvalues (and the left spectral radius) are not computed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from qbound.errors import NumericalConsistencyError, ShapeError
from qbound.kernel import c_eigenpair, c_eigenvalues, c_spectral_norm
from qbound.qmatrix import QMatrix, adjoint_vector_to_quaternion, qm_complex_adjoint

PAIRING_RTOL = 1e-8


@dataclass(frozen=True)
class RightSpectrum:
    representatives: tuple[complex, ...]
    radius: float
    adjoint_dimension: int
    adjoint_eigenvalues: np.ndarray = field(repr=False, compare=False)

    def moduli(self) -> list[float]:
        return [abs(r) for r in self.representatives]


def _sort_key(z: complex) -> tuple[float, float, float]:
    return (abs(z), z.real, z.imag)


def pair_conjugates(eigs, tol: float) -> list[complex]:
    """Greedily match each value with the nearest unmatched conjugate partner.

    Returns one representative per pair, with ``Im >= 0``, sorted by
    (modulus, real part, imaginary part).
    """
    values = sorted((complex(z) for z in eigs), key=_sort_key)
    if len(values) % 2:
        raise NumericalConsistencyError(f"odd number of adjoint eigenvalues ({len(values)})")
    used = [False] * len(values)
    reps = []
    for i, lam in enumerate(values):
        if used[i]:
            continue
        used[i] = True
        target = lam.conjugate()
        best = None
        for j in range(i + 1, len(values)):
            if used[j]:
                continue
            key = (abs(values[j] - target),) + _sort_key(values[j])
            if best is None or key < best[0]:
                best = (key, j)
        if best is None or best[0][0] > tol:
            dist = best[0][0] if best else math.inf
            raise NumericalConsistencyError(
                f"adjoint eigenvalue {lam} has no conjugate partner within {tol:.3e} (nearest {dist:.3e})"
            )
        j = best[1]
        used[j] = True
        mid = 0.5 * (lam + values[j].conjugate())
        reps.append(complex(mid.real, abs(mid.imag)))
    reps.sort(key=_sort_key)
    return reps


def right_spectrum(a: QMatrix) -> RightSpectrum:
    if not a.is_square():
        raise ShapeError(f"right spectrum needs a square matrix, got {a.rows}x{a.cols}")
    chi = qm_complex_adjoint(a)
    eigs = c_eigenvalues(chi)
    tol = PAIRING_RTOL * max(1.0, float(np.linalg.norm(chi)))
    reps = pair_conjugates(eigs, tol)
    radius = max((abs(r) for r in reps), default=0.0)
    return RightSpectrum(tuple(reps), radius, chi.shape[0], eigs)


def right_spectral_radius(a: QMatrix) -> float:
    return right_spectrum(a).radius


def right_eigenvector(a: QMatrix, lam: complex) -> QMatrix:
    """Unit quaternion column x with ``A x ~= x lam`` for a representative lam."""
    if not a.is_square():
        raise ShapeError(f"right eigenvector needs a square matrix, got {a.rows}x{a.cols}")
    v = c_eigenpair(qm_complex_adjoint(a), lam)
    return adjoint_vector_to_quaternion(v)


def q_spectral_norm(a: QMatrix) -> float:
    """Operator 2-norm, equal to the largest singular value of the adjoint."""
    return c_spectral_norm(qm_complex_adjoint(a))


def spectral_radius_2x2(m) -> float:
    """Spectral radius of a real 2x2 matrix in closed form."""
    (a, b), (c, d) = np.asarray(m, dtype=float)
    half_tr = 0.5 * (a + d)
    disc = (0.5 * (a - d)) ** 2 + b * c
    if disc >= 0.0:
        root = math.sqrt(disc)
        return max(abs(half_tr + root), abs(half_tr - root))
    # complex pair: |lam|^2 = det
    return math.sqrt(max(a * d - b * c, 0.0))


def spectral_norm_2x2(m) -> float:
    """Largest singular value of a real 2x2 matrix in closed form."""
    (a, b), (c, d) = np.asarray(m, dtype=float)
    p = a * a + c * c
    s = b * b + d * d
    q = a * b + c * d
    lam = 0.5 * (p + s + math.sqrt((p - s) ** 2 + 4.0 * q * q))
    return math.sqrt(lam)


def block_partition(m: QMatrix, row_split: int, col_split: int) -> tuple[QMatrix, QMatrix, QMatrix, QMatrix]:
    """Copy out ``(M11, M12, M21, M22)`` for a 2x2 partition at the given row/column."""
    if not (1 <= row_split < m.rows and 1 <= col_split < m.cols):
        raise ShapeError(f"split ({row_split}, {col_split}) invalid for a {m.rows}x{m.cols} matrix")
    r, c = row_split, col_split
    return (
        m.submatrix(slice(0, r), slice(0, c)),
        m.submatrix(slice(0, r), slice(c, None)),
        m.submatrix(slice(r, None), slice(0, c)),
        m.submatrix(slice(r, None), slice(c, None)),
    )


def partition_majorant(a: QMatrix, split_row: int, split_col: int | None = None) -> np.ndarray:
    """2x2 real matrix of block 2-norms for the partition at ``(split_row, split_col)``."""
    if not a.is_square():
        raise ShapeError(f"partition majorant needs a square matrix, got {a.rows}x{a.cols}")
    blocks = block_partition(a, split_row, split_row if split_col is None else split_col)
    return np.array([q_spectral_norm(b) for b in blocks]).reshape(2, 2)
