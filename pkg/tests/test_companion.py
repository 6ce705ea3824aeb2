import numpy as np
import pytest

from qbound.companion import (
    MatrixPolynomial,
    block_partition,
    build_companion,
    companion_power,
    derived_coefficients,
    polynomial_residual,
    polynomial_right_eigenpairs,
    polynomial_right_spectrum,
    proof_matrix_N,
    proof_matrix_S,
)
from qbound.errors import DegreeError, MonicityError, ShapeError, UnsupportedPowerError
from qbound.qmatrix import QMatrix
from qbound.quaternion import Quaternion, quat_abs, quat_mul
from qbound.spectrum import q_spectral_norm, right_spectral_radius

from conftest import random_poly


def scalar(*qs):
    return MatrixPolynomial.scalar([Quaternion(*q) if isinstance(q, tuple) else Quaternion(q) for q in qs])


def generic_power(comp, m):
    out = comp.matrix
    for _ in range(m - 1):
        out = out @ comp.matrix
    return out


def test_constructor_validation(rng):
    with pytest.raises(DegreeError):
        MatrixPolynomial([])
    with pytest.raises(ShapeError):
        MatrixPolynomial([QMatrix.zeros(2), QMatrix.zeros(3)])
    with pytest.raises(MonicityError):
        MatrixPolynomial([QMatrix.zeros(2)], leading=QMatrix.zeros(2))
    MatrixPolynomial([QMatrix.zeros(2)], leading=QMatrix.identity(2))


def test_companion_layout():
    a0, a1 = Quaternion(1, 2, 3, 4), Quaternion(0, 1, 0, 0)
    c = build_companion(MatrixPolynomial.scalar([a0, a1])).matrix
    assert c == QMatrix.from_quaternions([[Quaternion(), Quaternion(1)], [-a0, -a1]])
    p = MatrixPolynomial([QMatrix([[[1, 0, 0, 0], [0, 1, 0, 0]], [[0, 0, 1, 0], [0, 0, 0, 1]]])])
    assert build_companion(p).matrix == -p.coeffs[0]
    z = MatrixPolynomial.zero(3, 1)
    assert build_companion(z).matrix == QMatrix(np.eye(3, k=1)[..., None] * [1, 0, 0, 0])
    assert right_spectral_radius(build_companion(z).matrix) == 0.0


def test_derived_coefficients_scalar_k2():
    a0, a1 = Quaternion(1, 2, 0, -1), Quaternion(0.5, 0, 1, 0)
    d = derived_coefficients(MatrixPolynomial.scalar([a0, a1]))
    assert d.B[0][0, 0] == quat_mul(a1, a0)
    assert d.B[1][0, 0] == quat_mul(a1, a1) - a0
    with pytest.raises(DegreeError):
        derived_coefficients(MatrixPolynomial.zero(1, 2))


def test_derived_coefficients_zero():
    d = derived_coefficients(MatrixPolynomial.zero(4, 2))
    assert all(b == QMatrix.zeros(2) for b in d.B + d.C)


def test_recurrences_match_generic_last_rows(rng):
    poly = random_poly(rng, 4, 1)
    comp = build_companion(poly)
    sq = generic_power(comp, 2)
    d = derived_coefficients(poly)
    for j, b in enumerate(d.B):
        assert np.allclose(sq.data[3, j], b.data[0, 0], atol=1e-14)


@pytest.mark.parametrize("m", [2, 3])
@pytest.mark.parametrize("k", [1, 2, 3, 4, 5, 8])
@pytest.mark.parametrize("n", [1, 3])
def test_structured_power_matches_product(rng, m, k, n):
    comp = build_companion(random_poly(rng, k, n))
    got = companion_power(comp, m)
    assert got.power == m
    ref = generic_power(comp, m)
    assert np.max(np.abs(got.matrix.data - ref.data)) <= 1e-11 * max(1.0, np.max(np.abs(ref.data)))


def test_structured_last_rows_are_recurrences_exactly(rng):
    poly = random_poly(rng, 6, 2)
    d = derived_coefficients(poly)
    n, k = 2, 6
    c2 = companion_power(build_companion(poly), 2).matrix
    c3 = companion_power(build_companion(poly), 3).matrix
    for j in range(k):
        cols = slice(j * n, (j + 1) * n)
        assert np.array_equal(c2.data[(k - 1) * n:, cols], d.B[j].data)
        assert np.array_equal(c3.data[(k - 1) * n:, cols], d.C[j].data)
        assert np.array_equal(c3.data[(k - 2) * n:(k - 1) * n, cols], d.B[j].data)


def test_double_shift_nilpotent():
    c2 = companion_power(build_companion(MatrixPolynomial.zero(4, 1)), 2).matrix
    assert c2 == QMatrix(np.eye(4, k=2)[..., None] * [1, 0, 0, 0])
    p = c2
    for _ in range(3):
        p = p @ c2
    assert p == QMatrix.zeros(4)


def test_unsupported_power(rng):
    comp = build_companion(random_poly(rng, 4, 1))
    for m in (0, 1, 4):
        with pytest.raises(UnsupportedPowerError):
            companion_power(comp, m)


def test_block_partition():
    blocks = block_partition(QMatrix.identity(4), 2, 2)
    assert blocks == (QMatrix.identity(2), QMatrix.zeros(2), QMatrix.zeros(2), QMatrix.identity(2))
    a0, a1 = Quaternion(1, 1), Quaternion(0, 0, 2)
    c = build_companion(MatrixPolynomial.scalar([a0, a1])).matrix
    b11, b12, b21, b22 = block_partition(c, 1, 1)
    assert (b11[0, 0], b12[0, 0], b21[0, 0], b22[0, 0]) == (Quaternion(), Quaternion(1), -a0, -a1)
    with pytest.raises(ShapeError):
        block_partition(c, 0, 1)


def test_squared_companion_block_norms(rng):
    poly = random_poly(rng, 4, 1)
    d = derived_coefficients(poly)
    c2 = companion_power(build_companion(poly), 2).matrix
    _, _, m21, m22 = block_partition(c2, 3, 3)
    xi2 = np.sqrt(sum(q_spectral_norm(b) ** 2 for b in d.B[:3]))
    assert q_spectral_norm(m21) <= xi2 + 1e-12
    assert q_spectral_norm(m22) == pytest.approx(q_spectral_norm(d.B[3]), rel=1e-14)


def test_proof_matrices_are_leading_blocks(rng):
    poly = random_poly(rng, 7, 2)
    comp = build_companion(poly)
    s = proof_matrix_S(poly)
    assert s == block_partition(companion_power(comp, 2).matrix, 12, 12)[0]
    nmat = proof_matrix_N(poly)
    assert nmat == block_partition(companion_power(comp, 3).matrix, 10, 10)[0]


def test_proof_matrix_zero_polynomial():
    assert q_spectral_norm(proof_matrix_S(MatrixPolynomial.zero(4, 2))) == pytest.approx(1.0)
    assert q_spectral_norm(proof_matrix_N(MatrixPolynomial.zero(6, 2))) == pytest.approx(1.0)
    # with k = 5 the N block has no identity rows at all
    assert q_spectral_norm(proof_matrix_N(MatrixPolynomial.zero(5, 2))) == 0.0
    with pytest.raises(DegreeError):
        proof_matrix_S(MatrixPolynomial.zero(3, 1))
    with pytest.raises(DegreeError):
        proof_matrix_N(MatrixPolynomial.zero(4, 1))


def test_polynomial_spectrum_examples():
    s = polynomial_right_spectrum(scalar(1, 0))
    assert s.representatives == pytest.approx([1j, 1j])
    assert s.radius == pytest.approx(1.0)
    assert polynomial_right_spectrum(scalar(0, 0)).radius == 0.0
    assert polynomial_right_spectrum(MatrixPolynomial.zero(5, 3)).radius == 0.0


def test_quaternionic_quadratic_residuals():
    # p(t) = t^2 - (i + j) t + k
    poly = MatrixPolynomial.scalar([Quaternion(0, 0, 0, 1), Quaternion(0, -1, -1, 0)])
    pairs = polynomial_right_eigenpairs(poly)
    assert len(pairs) == 2
    for p in pairs:
        assert p.residual <= 1e-7
        assert p.ok


def test_residual_rejects_wrong_vector(rng):
    poly = random_poly(rng, 3, 2)
    with pytest.raises(ShapeError):
        polynomial_residual(poly, QMatrix.zeros(3, 1), Quaternion(1))
    pair = polynomial_right_eigenpairs(poly)[0]
    other = Quaternion.from_complex(pair.value + 0.5)
    assert polynomial_residual(poly, pair.vector, other) > 1e-3


def test_radius_via_powers(rng):
    poly = random_poly(rng, 5, 2)
    comp = build_companion(poly)
    r = polynomial_right_spectrum(poly).radius
    assert right_spectral_radius(companion_power(comp, 2).matrix) ** 0.5 == pytest.approx(r, rel=1e-8)
    assert right_spectral_radius(companion_power(comp, 3).matrix) ** (1 / 3) == pytest.approx(r, rel=1e-8)
