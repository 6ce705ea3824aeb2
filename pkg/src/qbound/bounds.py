"""Closed-form upper bounds on the moduli of right eigenvalues.

All bounds are evaluated from 2-norms of the coefficients ``A_i`` and of
the derived blocks ``B_i``, ``C_i`` (the last block rows of the squared and
cubed companion matrix). The matrix path takes those norms through the
complex adjoint. The scalar path (n = 1) computes them directly as
quaternion moduli, so the two paths are independent except for the final
arithmetic.

Degree floors: lemma33 k >= 3, lemma34 k >= 5, thm35 and thm36 k >= 4,
thm37 k >= 5, b1 k >= 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from qbound.companion import MatrixPolynomial, derived_coefficients
from qbound.errors import DegreeError, NumericalError, QBoundError
from qbound.qmatrix import QMatrix
from qbound.quaternion import Quaternion, quat_abs, quat_conj, quat_mul
from qbound.spectrum import q_spectral_norm

DISCRIMINANT_SLACK = 1e-12

EIGENVALUE_BOUNDS = ("thm35", "thm36", "thm37", "b1_baseline")
SCALAR_BOUNDS = {"cor35_scalar": "thm35", "cor36_scalar": "thm36", "cor37_scalar": "thm37"}
FLOORS = {
    "lemma33": 3,
    "lemma34": 5,
    "thm35": 4,
    "thm36": 4,
    "thm37": 5,
    "b1_baseline": 2,
}

# short names used by the CLI and the CSV report
SHORT_NAMES = {"thm35": "thm35", "thm36": "thm36", "thm37": "thm37", "b1_baseline": "b1"}


@dataclass
class BoundReport:
    bound_name: str
    value: float | None
    intermediates: dict[str, float] = field(default_factory=dict)
    degree_k: int = 0
    block_size_n: int = 0
    applicable: bool = True
    skip_reason: str | None = None
    tightest: bool = False

    def to_dict(self) -> dict:
        return {
            "bound_name": self.bound_name,
            "value": self.value,
            "intermediates": dict(self.intermediates),
            "degree_k": self.degree_k,
            "block_size_n": self.block_size_n,
            "applicable": self.applicable,
            "skip_reason": self.skip_reason,
            "tightest": self.tightest,
        }


def _root(disc: float, scale: float) -> float:
    """sqrt of a discriminant that is nonnegative in exact arithmetic."""
    if disc >= 0.0:
        return math.sqrt(disc)
    if disc >= -DISCRIMINANT_SLACK * max(1.0, scale):
        return 0.0
    raise NumericalError(f"discriminant {disc:.6e} is negative beyond rounding slack")


def _lemma_form(total_sq: float, head_sq: float) -> float:
    """``(1/2)(1 + t + sqrt((1 + t)^2 - 4 h))``."""
    s = 1.0 + total_sq
    return 0.5 * (s + _root(s * s - 4.0 * head_sq, s * s))


def _gram_pair(x_sq: float, y_sq: float, cross: float) -> float:
    """Spectral-radius majorant of ``[[X X^H, X Y^H], [Y X^H, Y Y^H]]``, square-rooted."""
    d = x_sq - y_sq
    return math.sqrt(0.5 * (x_sq + y_sq + math.sqrt(d * d + 4.0 * cross * cross)))


class _Norms:
    """Norm data a bound formula needs, indexed like the coefficients."""

    k: int
    n: int

    a: list[float]

    @property
    def b(self) -> list[float]:
        raise NotImplementedError

    @property
    def c(self) -> list[float]:
        raise NotImplementedError

    def cross_ab(self, lo: int, hi: int) -> float:
        """``|| sum_{i=lo}^{hi} A_i B_i^H ||_2``."""
        raise NotImplementedError

    def cross_bc(self, lo: int, hi: int) -> float:
        raise NotImplementedError


class _MatrixNorms(_Norms):
    def __init__(self, poly: MatrixPolynomial):
        self.poly = poly
        self.k, self.n = poly.k, poly.n
        self.a = [q_spectral_norm(m) for m in poly.coeffs]

    @cached_property
    def _derived(self):
        return derived_coefficients(self.poly)

    @cached_property
    def b(self) -> list[float]:
        return [q_spectral_norm(m) for m in self._derived.B]

    @cached_property
    def c(self) -> list[float]:
        return [q_spectral_norm(m) for m in self._derived.C]

    def _cross(self, xs: Sequence[QMatrix], ys: Sequence[QMatrix], lo: int, hi: int) -> float:
        total = QMatrix.zeros(self.n)
        for i in range(lo, hi + 1):
            total = total + xs[i] @ ys[i].H
        return q_spectral_norm(total)

    def cross_ab(self, lo: int, hi: int) -> float:
        return self._cross(self.poly.coeffs, self._derived.B, lo, hi)

    def cross_bc(self, lo: int, hi: int) -> float:
        return self._cross(self._derived.B, self._derived.C, lo, hi)


class _ScalarNorms(_Norms):
    def __init__(self, coeffs: Sequence[Quaternion]):
        self.coeffs = [c if isinstance(c, Quaternion) else Quaternion.from_seq(c) for c in coeffs]
        self.k, self.n = len(self.coeffs), 1
        self.a = [quat_abs(q) for q in self.coeffs]

    def _coef(self, i: int) -> Quaternion:
        return self.coeffs[i] if i >= 0 else Quaternion()

    @cached_property
    def _bq(self) -> list[Quaternion]:
        top = self.coeffs[-1]
        return [quat_mul(top, self._coef(i)) - self._coef(i - 1) for i in range(self.k)]

    @cached_property
    def _cq(self) -> list[Quaternion]:
        top, second = self.coeffs[-1], self.coeffs[-2]
        return [
            -quat_mul(top, self._bq[i]) + quat_mul(second, self._coef(i)) - self._coef(i - 2)
            for i in range(self.k)
        ]

    @cached_property
    def b(self) -> list[float]:
        return [quat_abs(q) for q in self._bq]

    @cached_property
    def c(self) -> list[float]:
        return [quat_abs(q) for q in self._cq]

    @staticmethod
    def _cross(xs, ys, lo, hi) -> float:
        total = Quaternion()
        for i in range(lo, hi + 1):
            total = total + quat_mul(xs[i], quat_conj(ys[i]))
        return quat_abs(total)

    def cross_ab(self, lo: int, hi: int) -> float:
        return self._cross(self.coeffs, self._bq, lo, hi)

    def cross_bc(self, lo: int, hi: int) -> float:
        return self._cross(self._bq, self._cq, lo, hi)


def _sq_sum(values: Sequence[float], lo: int, hi: int) -> float:
    return math.fsum(v * v for v in values[lo:hi + 1])


def _check_floor(name: str, k: int) -> None:
    floor = FLOORS[name]
    if k < floor:
        raise DegreeError(f"{name} requires degree k >= {floor}, got k = {k}")


def _report(name: str, value: float, nm: _Norms, **intermediates: float) -> BoundReport:
    return BoundReport(name, value, intermediates, nm.k, nm.n)


# formulas on norm data ------------------------------------------------------


def _lemma33(nm: _Norms) -> BoundReport:
    _check_floor("lemma33", nm.k)
    a = nm.a
    xi0 = _sq_sum(a, 0, nm.k - 2)
    value = _lemma_form(xi0, a[0] ** 2 + a[1] ** 2)
    return _report("lemma33", value, nm, xi0=xi0)


def _lemma34(nm: _Norms) -> BoundReport:
    _check_floor("lemma34", nm.k)
    a = nm.a
    alpha = _sq_sum(a, 0, nm.k - 3)
    value = _lemma_form(alpha, a[0] ** 2 + a[1] ** 2 + a[2] ** 2)
    return _report("lemma34", value, nm, alpha=alpha)


def _thm35(nm: _Norms) -> BoundReport:
    _check_floor("thm35", nm.k)
    k = nm.k
    lemma = _lemma33(nm)
    xi1 = math.sqrt(lemma.value)
    xi2 = math.sqrt(_sq_sum(nm.b, 0, k - 2))
    b_last = nm.b[k - 1]
    a_last = nm.a[k - 1]
    d = xi1 - b_last
    inner = 0.5 * (xi1 + b_last + math.sqrt(d * d + 4.0 * xi2 * math.sqrt(1.0 + a_last * a_last)))
    return _report(
        "thm35", math.sqrt(inner), nm,
        xi0=lemma.intermediates["xi0"], lemma33=lemma.value, xi1=xi1, xi2=xi2,
        norm_B_last=b_last, norm_A_last=a_last,
    )


def _thm36(nm: _Norms) -> BoundReport:
    _check_floor("thm36", nm.k)
    k = nm.k
    a, b = nm.a, nm.b
    beta1 = _gram_pair(_sq_sum(a, 0, k - 3), _sq_sum(b, 0, k - 3), nm.cross_ab(0, k - 3))
    beta2 = _gram_pair(_sq_sum(a, k - 2, k - 1), _sq_sum(b, k - 2, k - 1), nm.cross_ab(k - 2, k - 1))
    s = beta1 * beta1 + beta2 * beta2
    inner = 1.0 + 0.5 * (s + math.sqrt(s * s + 4.0 * (2.0 * beta1 * beta2 + 1.0)))
    return _report("thm36", inner ** 0.25, nm, beta1=beta1, beta2=beta2)


def _thm37(nm: _Norms) -> BoundReport:
    _check_floor("thm37", nm.k)
    k = nm.k
    a, b, c = nm.a, nm.b, nm.c
    lemma = _lemma34(nm)
    eta1 = math.sqrt(lemma.value)
    eta2 = _gram_pair(_sq_sum(b, k - 2, k - 1), _sq_sum(c, k - 2, k - 1), nm.cross_bc(k - 2, k - 1))
    tau2 = _gram_pair(_sq_sum(b, 0, k - 3), _sq_sum(c, 0, k - 3), nm.cross_bc(0, k - 3))
    tau1 = math.sqrt(a[k - 1] ** 2 + a[k - 2] ** 2 + 1.0)
    d = eta1 - eta2
    inner = 0.5 * (eta1 + eta2 + math.sqrt(d * d + 4.0 * tau1 * tau2))
    return _report(
        "thm37", inner ** (1.0 / 3.0), nm,
        alpha=lemma.intermediates["alpha"], lemma34=lemma.value,
        eta1=eta1, eta2=eta2, tau1=tau1, tau2=tau2,
    )


def _b1(nm: _Norms) -> BoundReport:
    _check_floor("b1_baseline", nm.k)
    k = nm.k
    a_last = nm.a[k - 1]
    rest = _sq_sum(nm.a, 0, k - 2)
    value = 0.5 * (1.0 + a_last + math.sqrt((a_last - 1.0) ** 2 + 4.0 * math.sqrt(rest)))
    return _report("b1_baseline", value, nm, norm_A_last=a_last, sum_sq_rest=rest)


_FORMULAS: dict[str, Callable[[_Norms], BoundReport]] = {
    "lemma33": _lemma33,
    "lemma34": _lemma34,
    "thm35": _thm35,
    "thm36": _thm36,
    "thm37": _thm37,
    "b1_baseline": _b1,
}


# public API ---------------------------------------------------------------


def lemma33_value(poly: MatrixPolynomial) -> BoundReport:
    """Upper bound on ``||S||_2^2`` with ``xi0 = sum_{i<=k-2} ||A_i||^2``."""
    return _lemma33(_MatrixNorms(poly))


def lemma34_value(poly: MatrixPolynomial) -> BoundReport:
    """Upper bound on ``||N||_2^2`` with ``alpha = sum_{i<=k-3} ||A_i||^2``."""
    return _lemma34(_MatrixNorms(poly))


def thm35_bound(poly: MatrixPolynomial) -> BoundReport:
    """Square-root bound from the 2x2 partition of ``C_L^2`` (last block row/column)."""
    return _thm35(_MatrixNorms(poly))


def thm36_bound(poly: MatrixPolynomial) -> BoundReport:
    """Fourth-root bound from the 2-norm of ``C_L^2`` split after its first k-2 block rows."""
    return _thm36(_MatrixNorms(poly))


def thm37_bound(poly: MatrixPolynomial) -> BoundReport:
    """Cube-root bound from the 2x2 partition of ``C_L^3``."""
    return _thm37(_MatrixNorms(poly))


def b1_baseline(poly: MatrixPolynomial) -> BoundReport:
    """Disk radius ``(1/2)[1 + a + sqrt((a - 1)^2 + 4 sqrt(sum_{i<=k-2} ||A_i||^2))]``, a = ||A_{k-1}||."""
    return _b1(_MatrixNorms(poly))


def scalar_bound(coeffs: Sequence[Quaternion], which: str) -> BoundReport:
    """Zero bound for ``p(t) = t^k + a_{k-1} t^{k-1} + ... + a_0``.

    ``which`` is one of cor35_scalar, cor36_scalar, cor37_scalar (the
    prefixes cor35/cor36/cor37 are accepted too).
    """
    name = which if which in SCALAR_BOUNDS else f"{which}_scalar"
    if name not in SCALAR_BOUNDS:
        raise ValueError(f"unknown scalar bound {which!r}; expected one of {sorted(SCALAR_BOUNDS)}")
    report = _FORMULAS[SCALAR_BOUNDS[name]](_ScalarNorms(coeffs))
    report.bound_name = name
    return report


def _skipped(name: str, k: int, n: int, reason: str) -> BoundReport:
    return BoundReport(name, None, {}, k, n, applicable=False, skip_reason=reason)


def _evaluate_all(nm: _Norms, names: Sequence[str]) -> list[BoundReport]:
    reports = []
    for name in names:
        try:
            reports.append(_FORMULAS[name](nm))
        except DegreeError as exc:
            reports.append(_skipped(name, nm.k, nm.n, str(exc)))
        except QBoundError as exc:
            reports.append(_skipped(name, nm.k, nm.n, f"{type(exc).__name__}: {exc}"))
    computed = [r for r in reports if r.applicable]
    if computed:
        # min() keeps the first of equal values, so ties follow the order of `names`
        min(computed, key=lambda r: r.value).tightest = True
    return reports


def all_bounds(poly: MatrixPolynomial, names: Sequence[str] = EIGENVALUE_BOUNDS) -> list[BoundReport]:
    """Evaluate the eigenvalue bounds, recording skips and failures instead of raising.

    Exactly one computed report is flagged ``tightest`` (smallest value, ties
    resolved in the order thm35, thm36, thm37, b1).
    """
    unknown = set(names) - set(_FORMULAS)
    if unknown:
        raise ValueError(f"unknown bounds: {sorted(unknown)}")
    order = [n for n in EIGENVALUE_BOUNDS + ("lemma33", "lemma34") if n in names]
    return _evaluate_all(_MatrixNorms(poly), order)


def all_scalar_bounds(coeffs: Sequence[Quaternion]) -> list[BoundReport]:
    reports = _evaluate_all(_ScalarNorms(coeffs), ["thm35", "thm36", "thm37"])
    inverse = {v: k for k, v in SCALAR_BOUNDS.items()}
    for r in reports:
        r.bound_name = inverse[r.bound_name]
    return reports
