"""Generalized Lyapunov and Sylvester solvers, and the position/velocity
Gramian factors of second-order systems with initial-condition subspaces.

All Gramians here are solutions of Lyapunov equations, i.e. the frequency
integrals carry the ``1/(2*pi)`` factor:

    P = 1/(2 pi) * int (i w E - A)^{-1} B B^T (i w E - A)^{-H} dw
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .exceptions import DimensionMismatch, NumericalInconsistency, OddDimension, UnstablePencil
from .linalg import lu_factor, lu_solve, psd_lowrank_factor, real_schur, schur_eigenvalues
from .system import Subsystem, companion, subsystem_input_matrix
from .validation import check_matrix, symmetrize

__all__ = [
    "GramianFactors",
    "solve_gen_lyapunov",
    "solve_gen_lyapunov_obs",
    "solve_sylvester_cross",
    "extract_position_block",
    "extract_velocity_obs_block",
    "controllability_factors",
    "combined_factor",
    "relative_residual",
]

RESIDUAL_RTOL = 1e-10


class _StandardForm:
    """Complex Schur form of ``E^{-1} A``, reusable across several solves."""

    def __init__(self, E, A):
        E = check_matrix(E, "E", square=True)
        A = check_matrix(A, "A", square=True)
        if E.shape != A.shape:
            raise DimensionMismatch(f"E vs A: shapes {E.shape} and {A.shape} differ")
        self.E, self.A = E, A
        self._lu = lu_factor(E)
        self.At = lu_solve(self._lu, A)
        q, t = real_schur(self.At)
        self.eigenvalues = schur_eigenvalues(t)
        self.abscissa = float(np.max(self.eigenvalues.real))
        if self.abscissa >= 0.0:
            raise UnstablePencil(
                f"pencil is not asymptotically stable (spectral abscissa {self.abscissa:.3e})")
        self.schur = sla.rsf2csf(t, q, check_finite=False)
        self._schur_t = None

    @property
    def schur_transposed(self):
        """Complex Schur pair of ``(E^{-1} A)^T``, computed on first use."""
        if self._schur_t is None:
            q, t = real_schur(self.At.T)
            self._schur_t = sla.rsf2csf(t, q, check_finite=False)
        return self._schur_t

    def solve_e(self, b):
        return lu_solve(self._lu, b)

    def solve_e_transposed(self, b):
        return sla.lu_solve(self._lu, b, trans=1, check_finite=False)


def _sylvester_triangular(T, S, H):
    """Solve ``T Y + Y S^T = H`` for upper triangular complex `T`, `S`.

    Columns are swept from last to first; column `j` couples only to the
    already computed columns ``k > j`` through row `j` of `S`.
    """
    N, r = H.shape
    Y = np.zeros((N, r), dtype=complex)
    diag = np.diag_indices(N)
    for j in range(r - 1, -1, -1):
        rhs = H[:, j] - Y[:, j + 1:] @ S[j, j + 1:]
        Tj = T.copy()
        Tj[diag] += S[j, j]
        Y[:, j] = sla.solve_triangular(Tj, rhs, check_finite=False)
    return Y


def _bartels_stewart(left, right, G):
    """Solve ``X1 X + X X2^T = G`` given complex Schur pairs ``(T, Q)`` of
    ``X1`` and ``X2``."""
    T1, Q1 = left
    T2, Q2 = right
    H = Q1.conj().T @ G @ Q2.conj()
    Y = _sylvester_triangular(T1, T2, H)
    return (Q1 @ Y @ Q2.T).real


def relative_residual(residual, rhs):
    scale = np.linalg.norm(rhs)
    if scale == 0.0:
        return float(np.linalg.norm(residual))
    return float(np.linalg.norm(residual) / scale)


def _check_residual(res, rhs, what, rtol):
    rel = relative_residual(res, rhs)
    if rel > rtol:
        raise NumericalInconsistency(
            f"{what} relative residual {rel:.3e} exceeds {rtol:.1e}")
    return rel


def _lyapunov(form, F, rtol):
    F = check_matrix(F, "F", allow_empty=True)
    N = form.A.shape[0]
    if F.shape[0] != N:
        raise DimensionMismatch(f"F vs A: F has {F.shape[0]} rows, A has order {N}")
    FF = F @ F.T
    if not FF.any():
        return np.zeros((N, N))
    G = form.solve_e(F)
    P = symmetrize(_bartels_stewart(form.schur, form.schur, -(G @ G.T)))
    E, A = form.E, form.A
    _check_residual(A @ P @ E.T + E @ P @ A.T + FF, FF, "Lyapunov", rtol)
    return P


def _lyapunov_obs(form, C, rtol):
    C = check_matrix(C, "C", allow_empty=True)
    N = form.A.shape[0]
    if C.shape[1] != N:
        raise DimensionMismatch(f"C vs A: C has {C.shape[1]} columns, A has order {N}")
    CC = C.T @ C
    if not CC.any():
        return np.zeros((N, N))
    st = form.schur_transposed
    Z = symmetrize(_bartels_stewart(st, st, -CC))
    # Z = E^T Q E
    Q = form.solve_e_transposed(form.solve_e_transposed(Z).T).T
    Q = symmetrize(Q)
    E, A = form.E, form.A
    _check_residual(A.T @ Q @ E + E.T @ Q @ A + CC, CC, "Lyapunov (observability)", rtol)
    return Q


def solve_gen_lyapunov(E, A, F, rtol=RESIDUAL_RTOL):
    """Solve ``A P E^T + E P A^T = -F F^T`` for symmetric `P`.

    The pencil is reduced to standard form ``E^{-1} A`` and solved by the
    Bartels-Stewart method on its Schur form.

    Raises
    ------
    UnstablePencil
        If ``(E, A)`` has an eigenvalue with nonnegative real part.
    NumericalInconsistency
        If the relative residual exceeds `rtol`.
    """
    return _lyapunov(_StandardForm(E, A), F, rtol)


def solve_gen_lyapunov_obs(E, A, C, rtol=RESIDUAL_RTOL):
    """Solve ``A^T Q E + E^T Q A = -C^T C`` for symmetric `Q`."""
    return _lyapunov_obs(_StandardForm(E, A), C, rtol)


def solve_sylvester_cross(E, A, B, E_r, A_r, B_r, rtol=RESIDUAL_RTOL):
    """Solve ``A X E_r^T + E X A_r^T = -B B_r^T`` for the ``(N, r)`` matrix `X`.

    This mixed Gramian of a full and a reduced realization enters the
    trace formula for the H2 norm of their difference.
    """
    B = check_matrix(B, "B", allow_empty=True)
    B_r = check_matrix(B_r, "B_r", allow_empty=True)
    E_r = np.asarray(E_r, dtype=float)
    if E_r.size == 0:
        return np.zeros((B.shape[0], 0))
    full = _StandardForm(E, A)
    red = _StandardForm(E_r, A_r)
    return _sylvester(full, red, B, B_r, rtol)


def _sylvester(full, red, B, B_r, rtol):
    if B.shape[1] != B_r.shape[1]:
        raise DimensionMismatch(
            f"B vs B_r: {B.shape[1]} and {B_r.shape[1]} input columns differ")
    BB = B @ B_r.T
    if not BB.any():
        return np.zeros(BB.shape)
    G = -(full.solve_e(B) @ red.solve_e(B_r).T)
    X = _bartels_stewart(full.schur, red.schur, G)
    E, A, E_r, A_r = full.E, full.A, red.E, red.A
    _check_residual(A @ X @ E_r.T + E @ X @ A_r.T + BB, BB, "Sylvester", rtol)
    return X


def _half(P):
    P = np.asarray(P)
    if P.ndim != 2 or P.shape[0] != P.shape[1] or P.shape[0] % 2:
        raise OddDimension(f"expected a square matrix of even order, got shape {P.shape}")
    return P.shape[0] // 2


def extract_position_block(P):
    """Upper-left ``n x n`` block of a ``2n x 2n`` companion Gramian."""
    n = _half(P)
    return np.array(P[:n, :n])


def extract_velocity_obs_block(Q):
    """Lower-right ``n x n`` block of a ``2n x 2n`` companion Gramian."""
    n = _half(Q)
    return np.array(Q[n:, n:])


@dataclass(frozen=True, eq=False)
class GramianFactors:
    """Low-rank factors of the position controllability Gramians of the
    three subsystems and of the shared velocity observability Gramian.

    ``P_so ~= R_so R_so^T`` and so on, ``Q ~= S S^T``.
    """

    R_so: np.ndarray
    R_x0: np.ndarray
    R_v0: np.ndarray
    S: np.ndarray

    def __getitem__(self, tag):
        tag = Subsystem.coerce(tag)
        return {Subsystem.SO: self.R_so, Subsystem.X0: self.R_x0,
                Subsystem.V0: self.R_v0}[tag]


def controllability_factors(sos, rel_tol=1e-12, rtol=RESIDUAL_RTOL):
    """Compute :class:`GramianFactors` for a stable second-order system.

    Each subsystem's companion Lyapunov equation is solved with its own
    input matrix (see :func:`~somor.system.subsystem_input_matrix`), the
    position block is extracted and factored with `rel_tol` as the relative
    eigenvalue cutoff. All four solves share one Schur decomposition.
    """
    fos = companion(sos)
    form = _StandardForm(fos.E, fos.A)
    factors = {}
    for tag in Subsystem:
        F = subsystem_input_matrix(sos, tag)
        if F.shape[1] == 0:
            factors[tag] = np.zeros((sos.n, 0))
            continue
        P = _lyapunov(form, F, rtol)
        factors[tag] = psd_lowrank_factor(extract_position_block(P), rel_tol)
    Q = _lyapunov_obs(form, fos.C, rtol)
    S = psd_lowrank_factor(extract_velocity_obs_block(Q), rel_tol)
    return GramianFactors(factors[Subsystem.SO], factors[Subsystem.X0],
                          factors[Subsystem.V0], S)


def combined_factor(factors):
    """Horizontal concatenation ``[R_so, R_x0, R_v0]``.

    Its Gram product is ``P_so + P_x0 + P_v0``, the position Gramian of the
    companion system driven by all three inputs at once.
    """
    blocks = [factors.R_so, factors.R_x0, factors.R_v0]
    rows = {b.shape[0] for b in blocks}
    if len(rows) != 1:
        raise DimensionMismatch(f"factor row counts differ: {sorted(rows)}")
    return np.hstack(blocks)
