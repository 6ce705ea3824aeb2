"""Dense complex eigenvalue and spectral-norm kernel.

Eigenvalues come from diagonal balancing, Householder reduction to upper
Hessenberg form and single-shift complex QR sweeps (Wilkinson shift, with an
exceptional shift after every 10 sweeps without deflation). Eigenvectors are
computed on demand by inverse iteration. The spectral norm is the square
root of the dominant eigenvalue of the Gram matrix, found by power iteration.
"""

from __future__ import annotations

import cmath
import math
import warnings

import numpy as np
import scipy.linalg

from qbound.errors import ConvergenceError, ShapeError

MAX_DIM = 512
DEFLATION_EPS = 1e-14
SWEEPS_PER_DIM = 100
EXCEPTIONAL_EVERY = 10

POWER_RTOL = 1e-12
POWER_MAX_ITER = 10_000
DEFAULT_SEED = 0

EIGENPAIR_STEPS = 5
EIGENPAIR_RTOL = 1e-8
SINGULAR_SHIFT = 1e-10


def _as_square(m) -> np.ndarray:
    a = np.array(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] > MAX_DIM:
        raise ShapeError(f"dimension {a.shape[0]} exceeds the kernel cap of {MAX_DIM}")
    return a


def balance(a: np.ndarray) -> np.ndarray:
    """Radix-2 diagonal similarity scaling that evens out row and column norms."""
    a = a.copy()
    n = a.shape[0]
    absa = np.abs(a)
    done = False
    while not done:
        done = True
        for i in range(n):
            c = absa[:, i].sum() - absa[i, i]
            r = absa[i, :].sum() - absa[i, i]
            if c == 0.0 or r == 0.0:
                continue
            s = c + r
            f = 1.0
            g = r / 2.0
            while c < g:
                f *= 2.0
                c *= 4.0
            g = r * 2.0
            while c > g:
                f /= 2.0
                c /= 4.0
            if (c + r) / f < 0.95 * s:
                done = False
                a[i, :] /= f
                a[:, i] *= f
                absa[i, :] /= f
                absa[:, i] *= f
    return a


def hessenberg(a: np.ndarray) -> np.ndarray:
    """Unitary similarity to upper Hessenberg form (Householder reflectors)."""
    h = np.array(a, dtype=complex)
    n = h.shape[0]
    for k in range(n - 2):
        x = h[k + 1:, k]
        tail = np.linalg.norm(x[1:])
        if tail == 0.0:
            continue
        xnorm = math.hypot(abs(x[0]), tail)
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x.copy()
        v[0] += phase * xnorm
        v /= np.linalg.norm(v)
        h[k + 1:, k:] -= 2.0 * np.outer(v, v.conj() @ h[k + 1:, k:])
        h[:, k + 1:] -= 2.0 * np.outer(h[:, k + 1:] @ v, v.conj())
        h[k + 2:, k] = 0.0
    return h


def _eig2(a: complex, b: complex, c: complex, d: complex) -> tuple[complex, complex]:
    """Eigenvalues of [[a, b], [c, d]]."""
    m = 0.5 * (a + d)
    disc = cmath.sqrt((0.5 * (a - d)) ** 2 + b * c)
    l1, l2 = m + disc, m - disc
    # recover the smaller root from the determinant to avoid cancellation
    det = a * d - b * c
    if abs(l1) >= abs(l2):
        if l1 != 0:
            l2 = det / l1
    elif l2 != 0:
        l1 = det / l2
    return l1, l2


def _qr_sweep(w: np.ndarray, sigma: complex) -> None:
    """One shifted QR step ``W - s I = QR, W <- RQ + s I`` on a Hessenberg window, in place."""
    m = w.shape[0]
    idx = np.arange(m)
    w[idx, idx] -= sigma
    rots = []
    for i in range(m - 1):
        a = w[i, i]
        b = w[i + 1, i]
        r = math.hypot(abs(a), abs(b))
        if r == 0.0:
            c, s = 1.0 + 0j, 0j
        else:
            c, s = a / r, b / r
        top = w[i, i:]
        bot = w[i + 1, i:]
        new_top = c.conjugate() * top + s.conjugate() * bot
        new_bot = c * bot - s * top
        w[i, i:] = new_top
        w[i + 1, i:] = new_bot
        w[i + 1, i] = 0.0
        rots.append((c, s))
    for i, (c, s) in enumerate(rots):
        last = min(i + 2, m - 1) + 1
        left = w[:last, i]
        right = w[:last, i + 1]
        new_left = c * left + s * right
        new_right = c.conjugate() * right - s.conjugate() * left
        w[:last, i] = new_left
        w[:last, i + 1] = new_right
    w[idx, idx] += sigma


def _hessenberg_eigenvalues(h: np.ndarray) -> np.ndarray:
    n = h.shape[0]
    eig = np.zeros(n, dtype=complex)
    if n == 0:
        return eig
    hnorm = np.linalg.norm(h)
    max_sweeps = SWEEPS_PER_DIM * n
    sweeps = 0
    stalled = 0
    hi = n - 1
    while hi >= 0:
        if hi == 0:
            eig[0] = h[0, 0]
            break
        lo = hi
        while lo > 0:
            s = abs(h[lo, lo]) + abs(h[lo - 1, lo - 1])
            if s == 0.0:
                s = hnorm
            if abs(h[lo, lo - 1]) <= DEFLATION_EPS * s:
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            eig[hi] = h[hi, hi]
            hi -= 1
            stalled = 0
            continue
        if hi - lo == 1:
            eig[lo], eig[hi] = _eig2(h[lo, lo], h[lo, hi], h[hi, lo], h[hi, hi])
            hi -= 2
            stalled = 0
            continue
        if sweeps >= max_sweeps:
            partial = eig.copy()
            partial[: hi + 1] = np.diag(h)[: hi + 1]
            raise ConvergenceError(
                f"QR iteration did not converge within {max_sweeps} sweeps "
                f"({hi + 1} eigenvalues unresolved)",
                partial=partial,
            )
        sweeps += 1
        stalled += 1
        if stalled % EXCEPTIONAL_EVERY == 0:
            sigma = h[hi, hi] + 0.75 * abs(h[hi, hi - 1].real)
        else:
            l1, l2 = _eig2(h[hi - 1, hi - 1], h[hi - 1, hi], h[hi, hi - 1], h[hi, hi])
            sigma = l1 if abs(l1 - h[hi, hi]) <= abs(l2 - h[hi, hi]) else l2
        _qr_sweep(h[lo:hi + 1, lo:hi + 1], sigma)
    return eig


def c_eigenvalues(m) -> np.ndarray:
    """All eigenvalues of a square complex matrix (order unspecified)."""
    a = _as_square(m)
    if a.shape[0] == 0:
        return np.zeros(0, dtype=complex)
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return _hessenberg_eigenvalues(hessenberg(balance(a)))


def c_spectral_norm(m, seed: int = DEFAULT_SEED) -> float:
    """Largest singular value.

    Power iteration on ``G = M^H M``. The start vector is the all-ones
    vector pushed through a normalised repeated square of G (the same
    power iteration run 2^s steps at a time), then polished with plain
    power steps until the Rayleigh quotient changes by at most 1e-12
    relative. A seeded random start replaces the all-ones vector if it is
    orthogonal to the dominant eigenspace.
    """
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ShapeError(f"expected a matrix, got shape {a.shape}")
    if a.size == 0:
        return 0.0
    g = a.conj().T @ a
    trace = float(np.real(np.trace(g)))
    if trace == 0.0:
        return 0.0
    d = g.shape[0]
    p = g / trace
    for _ in range(64):
        p2 = p @ p
        p2 = 0.5 * (p2 + p2.conj().T)
        t = float(np.real(np.trace(p2)))
        if t == 0.0:
            break
        p2 /= t
        delta = np.linalg.norm(p2 - p)
        p = p2
        if delta <= 1e-15:
            break

    v = p @ np.ones(d, dtype=complex)
    if np.linalg.norm(v) <= 1e-8 * math.sqrt(d):
        rng = np.random.default_rng(seed)
        v = p @ (rng.standard_normal(d) + 1j * rng.standard_normal(d))
    vnorm = np.linalg.norm(v)
    if vnorm == 0.0:
        raise ConvergenceError("power iteration stagnated after restart", partial=0.0)
    v = v / vnorm

    theta = float(np.real(np.vdot(v, g @ v)))
    for _ in range(POWER_MAX_ITER):
        w = g @ v
        wnorm = np.linalg.norm(w)
        if wnorm == 0.0:
            return 0.0
        theta_new = float(np.real(np.vdot(v, w)))
        v = w / wnorm
        if abs(theta_new - theta) <= POWER_RTOL * abs(theta_new):
            return math.sqrt(max(theta_new, 0.0))
        theta = theta_new
    raise ConvergenceError(
        f"power iteration did not converge in {POWER_MAX_ITER} steps",
        partial=math.sqrt(max(theta, 0.0)),
    )


def c_eigenpair(m, lam: complex, seed: int = DEFAULT_SEED) -> np.ndarray:
    """Unit eigenvector for an (approximate) eigenvalue, by inverse iteration.

    Raises ConvergenceError if the residual ``||Mv - v lam||`` is still above
    ``1e-8 * ||M||_2`` after five steps.
    """
    a = _as_square(m)
    n = a.shape[0]
    lam = complex(lam)
    mnorm = c_spectral_norm(a)
    tol = EIGENPAIR_RTOL * max(mnorm, np.finfo(float).tiny)

    shift = lam
    with warnings.catch_warnings():
        # an exactly singular factor is expected here and handled just below
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a - shift * np.eye(n), check_finite=False)
    if np.min(np.abs(np.diag(lu))) <= np.finfo(float).eps * max(mnorm, 1.0):
        shift = lam + SINGULAR_SHIFT * max(mnorm, 1.0)
        lu, piv = scipy.linalg.lu_factor(a - shift * np.eye(n), check_finite=False)

    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    res = math.inf
    for step in range(EIGENPAIR_STEPS):
        v = scipy.linalg.lu_solve((lu, piv), v, check_finite=False)
        vnorm = np.linalg.norm(v)
        if not np.isfinite(vnorm) or vnorm == 0.0:
            break
        v /= vnorm
        res = np.linalg.norm(a @ v - v * lam)
        # the first solve from a random start is rarely converged; always take a second
        if res <= tol and step >= 1:
            return v
    if res <= tol:
        return v
    raise ConvergenceError(
        f"inverse iteration residual {res:.3e} above {tol:.3e} after {EIGENPAIR_STEPS} steps",
        partial=v,
    )
