"""Benchmark systems: a mass-spring-damper chain and the initial-condition
construction used with the building model."""

import numpy as np

from .exceptions import FullRank, InvalidParameter
from .linalg import svd_decompose
from .system import SecondOrderSystem

__all__ = ["generate_msd", "building_init_from_projection", "MSD_DEFAULTS"]

MSD_DEFAULTS = dict(mass=1.0, stiffness=1.0, alpha=0.02, beta=0.02, damper=0.0)


def _param(value, size, name, allow_zero=False):
    arr = np.broadcast_to(np.asarray(value, dtype=float), (size,)).copy() \
        if np.ndim(value) == 0 else np.asarray(value, dtype=float)
    if arr.shape != (size,):
        raise InvalidParameter(f"{name} must be a scalar or have length {size}, got {arr.shape}")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0) or (not allow_zero and np.any(arr == 0)):
        kind = "nonnegative" if allow_zero else "positive"
        raise InvalidParameter(f"{name} must be {kind}")
    return arr


def generate_msd(n, mass=MSD_DEFAULTS["mass"], stiffness=MSD_DEFAULTS["stiffness"],
                 alpha=MSD_DEFAULTS["alpha"], beta=MSD_DEFAULTS["beta"],
                 damper=MSD_DEFAULTS["damper"]):
    """Chain of `n` masses between two walls.

    Spring ``i`` (``i = 0..n``) joins mass ``i`` and mass ``i + 1``, with
    springs 0 and `n` attached to the walls, so unit springs give
    ``K = tridiag(-1, 2, -1)``. Damping is ``alpha M + beta K`` plus optional
    dampers from each mass to ground.

    The input forces and the output observes the last mass; the initial
    position subspace is spanned by the last unit vector and the initial
    velocity subspace by the first.

    Parameters
    ----------
    n : int
        Number of masses, at least 2.
    mass : float or (n,) array_like
    stiffness : float or (n + 1,) array_like
    alpha, beta : float
        Rayleigh damping coefficients (nonnegative).
    damper : float or (n,) array_like
        Grounded dampers (nonnegative).
    """
    if int(n) != n or n < 2:
        raise InvalidParameter(f"n must be an integer >= 2, got {n}")
    n = int(n)
    m = _param(mass, n, "mass")
    k = _param(stiffness, n + 1, "stiffness")
    c = _param(damper, n, "damper", allow_zero=True)
    if alpha < 0 or beta < 0:
        raise InvalidParameter("Rayleigh coefficients must be nonnegative")
    if alpha == 0 and beta == 0 and not np.any(c > 0):
        raise InvalidParameter("undamped chain: set alpha, beta or damper")
    M = np.diag(m)
    K = np.diag(k[:-1] + k[1:]) - np.diag(k[1:-1], 1) - np.diag(k[1:-1], -1)
    D = alpha * M + beta * K + np.diag(c)
    B = np.zeros((n, 1))
    B[-1, 0] = 1.0
    C = B.T.copy()
    X0 = B.copy()
    V0 = np.zeros((n, 1))
    V0[0, 0] = 1.0
    return SecondOrderSystem(M, D, K, B, C, X0=X0, V0=V0)


def building_init_from_projection(W, rank_rtol=1e-12):
    """Unit vector orthogonal to the range of `W`, used as initial data.

    Takes the full SVD ``W = U S X^T``, determines the numerical rank ``l``
    (singular values above ``rank_rtol * s_1``) and returns column ``l`` of
    `U` (zero-based), i.e. the first left singular vector outside the range.
    The same vector serves as initial position and initial velocity basis.

    Returns
    -------
    X0, V0 : (n, 1) ndarray

    Raises
    ------
    FullRank
        If `W` has rank ``n`` and no orthogonal direction exists.
    """
    W = np.asarray(W, dtype=float)
    U, s, _ = svd_decompose(W, full_matrices=True)
    rank = int(np.count_nonzero(s > s[0] * rank_rtol)) if s.size and s[0] > 0 else 0
    if rank >= W.shape[0]:
        raise FullRank(f"W has full row rank {rank}; no orthogonal direction")
    col = U[:, rank:rank + 1].copy()
    return col, col.copy()
