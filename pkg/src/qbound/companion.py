"""Monic quaternion matrix polynomials and their block companion matrices.

``L(t) = I t^k + A_{k-1} t^{k-1} + ... + A_1 t + A_0`` with the scalar t
commuting with the coefficients. Right eigenvalues lam satisfy
``A_0 x + A_1 x lam + ... + x lam^k = 0`` and coincide with the right
eigenvalues of the kn x kn companion matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from qbound.errors import DegreeError, MonicityError, ShapeError, UnsupportedPowerError
from qbound.qmatrix import QMatrix, adjoint_vector_to_quaternion, qm_complex_adjoint
from qbound.kernel import c_eigenpair
from qbound.quaternion import Quaternion, quat_mul
from qbound.spectrum import RightSpectrum, block_partition, q_spectral_norm, right_spectrum

__all__ = [
    "MatrixPolynomial",
    "DerivedCoefficients",
    "CompanionMatrix",
    "RightEigenpair",
    "build_companion",
    "derived_coefficients",
    "companion_power",
    "proof_matrix_S",
    "proof_matrix_N",
    "block_partition",
    "polynomial_right_spectrum",
    "polynomial_right_eigenpairs",
    "polynomial_residual",
    "residual_threshold",
]


@dataclass(frozen=True)
class MatrixPolynomial:
    """Monic polynomial with coefficients ``coeffs = (A_0, ..., A_{k-1})``; ``A_k = I``."""

    coeffs: tuple[QMatrix, ...]

    def __init__(self, coeffs: Sequence[QMatrix], leading: QMatrix | None = None):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise DegreeError("a monic polynomial needs degree k >= 1")
        n = coeffs[0].rows
        for i, a in enumerate(coeffs):
            if a.shape != (n, n):
                raise ShapeError(f"coefficient A_{i} has shape {a.shape}, expected ({n}, {n})")
        if leading is not None and leading != QMatrix.identity(n):
            raise MonicityError("leading coefficient must be the identity; non-monic input is not supported")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def scalar(cls, coeffs: Sequence[Quaternion]) -> MatrixPolynomial:
        """``p(t) = t^k + a_{k-1} t^{k-1} + ... + a_0`` as a 1x1 matrix polynomial."""
        return cls([QMatrix([[q.as_tuple()]]) for q in coeffs])

    @classmethod
    def zero(cls, k: int, n: int) -> MatrixPolynomial:
        """``I t^k``."""
        return cls([QMatrix.zeros(n)] * k)

    @property
    def n(self) -> int:
        return self.coeffs[0].rows

    @property
    def k(self) -> int:
        return len(self.coeffs)

    def coeff(self, i: int) -> QMatrix:
        """``A_i`` with ``A_i = 0`` for negative i and ``A_k = I``."""
        if i < 0:
            return QMatrix.zeros(self.n)
        if i == self.k:
            return QMatrix.identity(self.n)
        return self.coeffs[i]

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatrixPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    __hash__ = None


@dataclass(frozen=True)
class DerivedCoefficients:
    """Last block rows of the squared and cubed companion matrix."""

    B: tuple[QMatrix, ...]
    C: tuple[QMatrix, ...]


@dataclass(frozen=True)
class CompanionMatrix:
    poly: MatrixPolynomial
    power: int
    matrix: QMatrix


def build_companion(poly: MatrixPolynomial) -> CompanionMatrix:
    """Identity blocks on the block superdiagonal, last block row ``[-A_0 ... -A_{k-1}]``."""
    n, k = poly.n, poly.k
    data = np.zeros((k * n, k * n, 4))
    eye = np.arange(n)
    for i in range(k - 1):
        data[i * n + eye, (i + 1) * n + eye, 0] = 1.0
    for j, a in enumerate(poly.coeffs):
        data[(k - 1) * n:, j * n:(j + 1) * n] = -a.data
    return CompanionMatrix(poly, 1, QMatrix(data))


def derived_coefficients(poly: MatrixPolynomial) -> DerivedCoefficients:
    """``B_i = A_{k-1} A_i - A_{i-1}`` and ``C_i = -A_{k-1} B_i + A_{k-2} A_i - A_{i-2}``."""
    k = poly.k
    if k < 2:
        raise DegreeError(f"B/C recurrences need k >= 2, got k = {k}")
    top = poly.coeff(k - 1)
    second = poly.coeff(k - 2)
    b = tuple(top @ poly.coeff(i) - poly.coeff(i - 1) for i in range(k))
    c = tuple(-(top @ b[i]) + second @ poly.coeff(i) - poly.coeff(i - 2) for i in range(k))
    return DerivedCoefficients(b, c)


def companion_power(comp: CompanionMatrix, m: int) -> CompanionMatrix:
    """``C_L^m`` for m in {2, 3}.

    When k >= m the matrix is assembled from its block structure (k - m
    shifted identity rows, then the rows ``-A``, ``B`` and, for m = 3, ``C``).
    For smaller k it is the plain repeated product.
    """
    if m not in (2, 3):
        raise UnsupportedPowerError(f"companion power must be 2 or 3, got {m}")
    if comp.power != 1:
        raise UnsupportedPowerError("companion_power expects the first power as input")
    poly = comp.poly
    n, k = poly.n, poly.k
    if k < m:
        out = comp.matrix
        for _ in range(m - 1):
            out = out @ comp.matrix
        return CompanionMatrix(poly, m, out)

    derived = derived_coefficients(poly)
    rows = [[-a for a in poly.coeffs], list(derived.B)]
    if m == 3:
        rows.append(list(derived.C))
    data = np.zeros((k * n, k * n, 4))
    eye = np.arange(n)
    for i in range(k - m):
        data[i * n + eye, (i + m) * n + eye, 0] = 1.0
    for r, row in enumerate(rows):
        r0 = (k - m + r) * n
        for j, blk in enumerate(row):
            data[r0:r0 + n, j * n:(j + 1) * n] = blk.data
    return CompanionMatrix(poly, m, QMatrix(data))


def _shift_with_last_row(poly: MatrixPolynomial, width: int, offset: int, zero_rows: int) -> QMatrix:
    # square (width*n): I at block (i, i + offset), `zero_rows` empty rows, then [-A_0 ... -A_{width-1}]
    n = poly.n
    data = np.zeros((width * n, width * n, 4))
    eye = np.arange(n)
    for i in range(width - 1 - zero_rows):
        data[i * n + eye, (i + offset) * n + eye, 0] = 1.0
    for j in range(width):
        data[(width - 1) * n:, j * n:(j + 1) * n] = -poly.coeffs[j].data
    return QMatrix(data)


def proof_matrix_S(poly: MatrixPolynomial) -> QMatrix:
    """Leading (k-1)n x (k-1)n block of ``C_L^2``: identities two blocks right of
    the diagonal, one zero block row, then ``[-A_0 ... -A_{k-2}]``."""
    if poly.k < 4:
        raise DegreeError(f"S is defined for k >= 4, got k = {poly.k}")
    return _shift_with_last_row(poly, poly.k - 1, offset=2, zero_rows=1)


def proof_matrix_N(poly: MatrixPolynomial) -> QMatrix:
    """Leading (k-2)n x (k-2)n block of ``C_L^3``: identities three blocks right of
    the diagonal, two zero block rows, then ``[-A_0 ... -A_{k-3}]``."""
    if poly.k < 5:
        raise DegreeError(f"N is defined for k >= 5, got k = {poly.k}")
    return _shift_with_last_row(poly, poly.k - 2, offset=3, zero_rows=2)


def polynomial_right_spectrum(poly: MatrixPolynomial) -> RightSpectrum:
    return right_spectrum(build_companion(poly).matrix)


def _qpow(q: Quaternion, e: int) -> Quaternion:
    out = Quaternion(1.0)
    for _ in range(e):
        out = quat_mul(out, q)
    return out


def polynomial_residual(poly: MatrixPolynomial, x: QMatrix, lam: Quaternion) -> float:
    """Euclidean norm of ``A_0 x + A_1 x lam + ... + x lam^k`` (right multiplication by lam)."""
    if x.shape != (poly.n, 1):
        raise ShapeError(f"eigenvector must be {poly.n}x1, got {x.shape}")
    total = np.zeros((poly.n, 1, 4))
    for i in range(poly.k + 1):
        xl = x @ QMatrix([[_qpow(lam, i).as_tuple()]])
        total += (poly.coeff(i) @ xl).data
    return float(np.linalg.norm(total))


def residual_threshold(poly: MatrixPolynomial, lam: complex, norms: Sequence[float] | None = None) -> float:
    """``1e-7 (1 + sum ||A_i||_2) max(1, |lam|^k)``."""
    if norms is None:
        norms = [q_spectral_norm(a) for a in poly.coeffs]
    return 1e-7 * (1.0 + sum(norms)) * max(1.0, abs(lam) ** poly.k)


@dataclass(frozen=True)
class RightEigenpair:
    value: complex
    vector: QMatrix
    residual: float
    threshold: float

    @property
    def ok(self) -> bool:
        return self.residual <= self.threshold


def polynomial_right_eigenpairs(
    poly: MatrixPolynomial, spectrum: RightSpectrum | None = None
) -> list[RightEigenpair]:
    """One eigenpair per representative, with x the unit-normalised first block
    of the companion eigenvector and its polynomial residual."""
    comp = build_companion(poly).matrix
    chi = qm_complex_adjoint(comp)
    if spectrum is None:
        spectrum = right_spectrum(comp)
    norms = [q_spectral_norm(a) for a in poly.coeffs]
    n = poly.n
    out = []
    for lam in spectrum.representatives:
        v = adjoint_vector_to_quaternion(c_eigenpair(chi, lam))
        x = v.submatrix(slice(0, n), slice(None))
        xnorm = float(np.linalg.norm(x.data))
        if xnorm > 0.0:
            x = x.scale(1.0 / xnorm)
        res = polynomial_residual(poly, x, Quaternion.from_complex(lam))
        out.append(RightEigenpair(lam, x, res, residual_threshold(poly, lam, norms)))
    return out
