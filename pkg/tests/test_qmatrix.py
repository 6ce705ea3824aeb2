import numpy as np
import pytest

from qbound.errors import ShapeError
from qbound.qmatrix import (
    QMatrix,
    adjoint_vector_to_quaternion,
    qm_complex_adjoint,
    qm_conj_transpose,
    qm_matmul,
    qm_norm_frobenius,
    qm_norm_inf,
    qm_norm_one,
    quaternion_vector_to_adjoint,
)
from qbound.quaternion import I, J, K, Quaternion, quat_abs, quat_mul

from conftest import naive_complex_matmul, random_qmatrix

QI = [[[0, 1, 0, 0]]]
QJ = [[[0, 0, 1, 0]]]


def test_matmul_1x1_is_hamilton():
    assert qm_matmul(QMatrix(QI), QMatrix(QJ))[0, 0] == K
    assert qm_matmul(QMatrix(QJ), QMatrix(QI))[0, 0] == -K


def test_matmul_matches_entrywise_loop(rng):
    a, b = random_qmatrix(rng, 3, 4), random_qmatrix(rng, 4, 2)
    got = qm_matmul(a, b)
    for i in range(3):
        for j in range(2):
            acc = Quaternion()
            for t in range(4):
                acc = acc + quat_mul(a[i, t], b[t, j])
            assert np.allclose(got[i, j].as_tuple(), acc.as_tuple(), atol=1e-14)


def test_identity_and_shape_errors(rng):
    a = random_qmatrix(rng, 2)
    assert QMatrix.identity(2) @ a == a
    with pytest.raises(ShapeError):
        qm_matmul(random_qmatrix(rng, 2, 3), random_qmatrix(rng, 2, 3))
    with pytest.raises(ShapeError):
        QMatrix(np.zeros((2, 2, 3)))


def test_conj_transpose(rng):
    assert qm_conj_transpose(QMatrix(QJ))[0, 0] == -J
    assert QMatrix.identity(3).H == QMatrix.identity(3)
    a, b = random_qmatrix(rng, 2), random_qmatrix(rng, 2)
    assert (a @ b).H.allclose(b.H @ a.H, atol=1e-12)
    c = random_qmatrix(rng, 3, 5)
    assert c.H.H == c


def test_norms_examples():
    m = QMatrix([[[0, 1, 0, 0], [0, 0, 0, 0]], [[0, 0, 0, 0], [0, 0, 2, 0]]])
    assert qm_norm_one(m) == 2.0
    assert qm_norm_inf(m) == 2.0
    assert qm_norm_one(QMatrix.zeros(3)) == 0.0
    assert qm_norm_inf(QMatrix([[[1, 0, 0, 0], [1, 0, 0, 0]]])) == 2.0
    assert qm_norm_inf(QMatrix.identity(4)) == 1.0
    assert qm_norm_frobenius(QMatrix.identity(5)) == pytest.approx(np.sqrt(5), rel=1e-15)
    assert qm_norm_frobenius(QMatrix([[[1, 1, 1, 1]]])) == 2.0
    assert qm_norm_frobenius(QMatrix.zeros(2)) == 0.0


@pytest.mark.parametrize("shape", [(3, 3), (2, 5), (6, 1)])
def test_norm_duality(rng, shape):
    for _ in range(20):
        a = random_qmatrix(rng, *shape)
        assert qm_norm_one(a) == pytest.approx(qm_norm_inf(a.H), abs=1e-14)
        assert qm_norm_inf(a) == pytest.approx(qm_norm_one(a.H), abs=1e-14)
        total = sum(quat_abs(q) ** 2 for q in a.entries)
        assert qm_norm_frobenius(a) ** 2 == pytest.approx(total, rel=1e-12)


def test_adjoint_examples():
    assert np.array_equal(qm_complex_adjoint(QMatrix(QJ)), [[0, 1], [-1, 0]])
    assert np.array_equal(qm_complex_adjoint(QMatrix(QI)), [[1j, 0], [0, -1j]])


def test_adjoint_homomorphism(rng):
    for m, p, n in [(2, 2, 2), (3, 4, 2), (1, 3, 5)]:
        a, b = random_qmatrix(rng, m, p), random_qmatrix(rng, p, n)
        lhs = qm_complex_adjoint(a @ b)
        rhs = naive_complex_matmul(qm_complex_adjoint(a), qm_complex_adjoint(b))
        assert np.allclose(lhs, rhs, atol=1e-12)
        assert np.allclose(qm_complex_adjoint(a.H), qm_complex_adjoint(a).conj().T, atol=1e-12)


def test_adjoint_vector_roundtrip(rng):
    a = random_qmatrix(rng, 3, 1)
    assert adjoint_vector_to_quaternion(quaternion_vector_to_adjoint(a)).allclose(a, atol=0)


def test_adjoint_vector_maps_right_eigenvectors():
    # chi([[j]]) has eigenvalue i with eigenvector (1, i); the quaternion x satisfies j x = x i
    v = np.array([1.0, 1j]) / np.sqrt(2)
    x = adjoint_vector_to_quaternion(v)
    lhs = (QMatrix(QJ) @ x)[0, 0]
    rhs = quat_mul(x[0, 0], I)
    assert np.allclose(lhs.as_tuple(), rhs.as_tuple(), atol=1e-15)


def test_block_assembly():
    e = QMatrix.identity(2)
    z = QMatrix.zeros(2)
    assert QMatrix.block([[e, z], [z, e]]) == QMatrix.identity(4)
    with pytest.raises(ShapeError):
        QMatrix.block([[e, QMatrix.zeros(3)]])
