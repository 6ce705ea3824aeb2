"""Right-eigenvalue bounds for monic quaternion matrix polynomials."""

from qbound.bounds import (
    BoundReport,
    all_bounds,
    all_scalar_bounds,
    b1_baseline,
    lemma33_value,
    lemma34_value,
    scalar_bound,
    thm35_bound,
    thm36_bound,
    thm37_bound,
)
from qbound.companion import (
    CompanionMatrix,
    DerivedCoefficients,
    MatrixPolynomial,
    build_companion,
    companion_power,
    derived_coefficients,
    polynomial_right_eigenpairs,
    polynomial_right_spectrum,
    proof_matrix_N,
    proof_matrix_S,
)
from qbound.errors import *  # noqa: F401,F403
from qbound.harness import (
    SplitMix64,
    load_polynomial,
    random_polynomial,
    run_suite,
    save_polynomial,
    verify_instance,
)
from qbound.qmatrix import (
    QMatrix,
    qm_complex_adjoint,
    qm_conj_transpose,
    qm_matmul,
    qm_norm_frobenius,
    qm_norm_inf,
    qm_norm_one,
)
from qbound.quaternion import Quaternion, quat_abs, quat_conj, quat_inv, quat_mul
from qbound.spectrum import (
    RightSpectrum,
    block_partition,
    partition_majorant,
    q_spectral_norm,
    right_spectral_radius,
    right_spectrum,
)

__version__ = "0.1.0"
