"""Dense linear-algebra kernels.

Thin wrappers around LAPACK (through numpy/scipy) that enforce the numerical
contracts the rest of the package relies on and translate LAPACK failures
into this package's exceptions.
"""

import warnings

import numpy as np
import scipy.linalg as sla

from .exceptions import ConvergenceFailure, IndefiniteMatrix, SingularMatrix
from .validation import check_matrix, symmetrize

__all__ = [
    "solve_linear",
    "lu_factor",
    "lu_solve",
    "svd_decompose",
    "real_schur",
    "psd_lowrank_factor",
]

EPS = np.finfo(float).eps


def lu_factor(a):
    """LU-factor a square matrix, refusing numerically singular input.

    Returns the ``(lu, piv)`` pair understood by :func:`lu_solve`.

    Raises
    ------
    SingularMatrix
        If the reciprocal 1-norm condition estimate falls below machine
        epsilon.
    """
    if a.shape[0] == 0:
        return a.copy(), np.zeros(0, dtype=np.int32)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(a, check_finite=False)
    gecon, = sla.get_lapack_funcs(("gecon",), (lu,))
    anorm = np.linalg.norm(a, 1)
    rcond, info = gecon(lu, anorm, norm="1")
    if anorm == 0.0 or rcond < EPS:
        raise SingularMatrix(
            f"matrix is singular to working precision (rcond={rcond:.3e})")
    return lu, piv


def lu_solve(factors, b):
    lu, piv = factors
    if lu.shape[0] == 0:
        return np.zeros(b.shape, dtype=np.result_type(lu, b))
    return sla.lu_solve((lu, piv), b, check_finite=False)


def solve_linear(a, b):
    """Solve ``a @ x = b`` for square nonsingular `a`.

    Real and complex operands are both accepted; `b` may be a vector or a
    matrix with ``a.shape[0]`` rows.

    Raises
    ------
    SingularMatrix
        If `a` is singular to working precision.
    """
    dtype = np.result_type(np.asarray(a).dtype, np.asarray(b).dtype, float)
    a = check_matrix(a, "A", dtype=dtype, square=True, allow_empty=True)
    b = np.asarray(b, dtype=dtype)
    if b.shape[0] != a.shape[0]:
        raise ValueError(f"A has {a.shape[0]} rows but B has {b.shape[0]}")
    return lu_solve(lu_factor(a), b)


def svd_decompose(a, full_matrices=False):
    """Singular value decomposition ``a = u @ diag(sigma) @ x.T``.

    Returns ``(u, sigma, x)`` with `sigma` nonincreasing. Note that the right
    factor is returned as `x`, not transposed.
    """
    a = np.asarray(a, dtype=float)
    try:
        u, sigma, vh = np.linalg.svd(a, full_matrices=full_matrices)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"SVD did not converge: {exc}") from exc
    return u, sigma, vh.T


def real_schur(a):
    """Real Schur form ``a = q @ t @ q.T``.

    `t` is quasi-upper-triangular with 1x1 and 2x2 diagonal blocks, the
    latter carrying complex-conjugate eigenvalue pairs.
    """
    a = check_matrix(a, "A", square=True)
    try:
        t, q = sla.schur(a, output="real", check_finite=False)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise ConvergenceFailure(f"Schur iteration did not converge: {exc}") from exc
    return q, t


def schur_eigenvalues(t):
    """Eigenvalues read off a real quasi-triangular Schur factor."""
    n = t.shape[0]
    eigs = np.empty(n, dtype=complex)
    i = 0
    while i < n:
        if i + 1 < n and t[i + 1, i] != 0.0:
            eigs[i:i + 2] = np.linalg.eigvals(t[i:i + 2, i:i + 2])
            i += 2
        else:
            eigs[i] = t[i, i]
            i += 1
    return eigs


def psd_lowrank_factor(p, rel_tol=1e-12):
    """Low-rank factor `r` of a symmetric positive semidefinite matrix.

    Eigenpairs with eigenvalue at least ``rel_tol * lambda_max`` are kept and
    scaled by the square root of the eigenvalue, so ``p ~= r @ r.T`` with
    spectral-norm error at most ``rel_tol * lambda_max`` plus the magnitude of
    the most negative discarded eigenvalue. Columns come ordered by
    decreasing eigenvalue.

    Raises
    ------
    IndefiniteMatrix
        If the most negative eigenvalue exceeds ``rel_tol * lambda_max`` in
        magnitude, i.e. `p` is not a plausible Gramian.
    """
    p = check_matrix(p, "P", square=True)
    lam, vec = np.linalg.eigh(symmetrize(p))
    lam, vec = lam[::-1], vec[:, ::-1]
    lam_max = lam[0]
    if lam_max <= 0.0:
        if lam[-1] < 0.0:
            raise IndefiniteMatrix("matrix has no positive eigenvalues")
        return np.zeros((p.shape[0], 0))
    cutoff = rel_tol * lam_max
    if lam[-1] < -cutoff:
        raise IndefiniteMatrix(
            f"eigenvalue {lam[-1]:.3e} is too negative for a Gramian "
            f"(lambda_max={lam_max:.3e}, rel_tol={rel_tol:g})")
    keep = lam >= cutoff
    return vec[:, keep] * np.sqrt(lam[keep])
