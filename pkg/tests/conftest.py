import numpy as np
import pytest
from hypothesis import strategies as st

from qbound.companion import MatrixPolynomial
from qbound.qmatrix import QMatrix
from qbound.quaternion import Quaternion


def random_qmatrix(rng, rows, cols=None, scale=1.0):
    cols = rows if cols is None else cols
    return QMatrix(rng.uniform(-scale, scale, (rows, cols, 4)))


def random_poly(rng, k, n, scale=1.0, complex_only=False):
    coeffs = []
    for _ in range(k):
        data = rng.uniform(-scale, scale, (n, n, 4))
        if complex_only:
            data[..., 2:] = 0.0
        coeffs.append(QMatrix(data))
    return MatrixPolynomial(coeffs)


def naive_complex_matmul(a, b):
    """Triple loop over complex entries, used as an independent product oracle."""
    out = np.zeros((a.shape[0], b.shape[1]), dtype=complex)
    for i in range(a.shape[0]):
        for j in range(b.shape[1]):
            out[i, j] = sum(a[i, t] * b[t, j] for t in range(a.shape[1]))
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


finite = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)
quaternions = st.builds(Quaternion, finite, finite, finite, finite)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULT_LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
