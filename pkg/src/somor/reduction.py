"""Structure-preserving balanced truncation for second-order systems with
initial-condition subspaces.

Three schemes share the same square-root projection:

* homogeneous: balance the input-driven Gramian only (the usual
  second-order BT, ignoring initial data),
* split: reduce each of the three superposed subsystems with its own
  tailored Gramian and add the reduced outputs,
* combined: one projection from the summed controllability Gramian.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .exceptions import EmptySpectrum, InvalidParameter, RankDeficient
from .gramians import combined_factor, controllability_factors
from .linalg import svd_decompose
from .system import SecondOrderSystem, Subsystem, companion, stability_check
from .validation import check_order_spec

__all__ = [
    "ReducedModel",
    "SplitReduction",
    "UnstableReducedModelWarning",
    "bt_project",
    "order_from_tolerance",
    "reduce_split",
    "reduce_combined",
    "reduce_homogeneous",
]

# singular values below this fraction of the largest are treated as zero
RANK_RTOL = 1e-14


class UnstableReducedModelWarning(UserWarning):
    """Second-order balanced truncation does not preserve stability."""


def order_from_tolerance(sigma, rel_tol):
    """Number of singular values with ``sigma_i >= rel_tol * sigma_1``."""
    sigma = np.asarray(sigma, dtype=float)
    if sigma.size == 0:
        raise EmptySpectrum("cannot choose an order from an empty spectrum")
    return int(np.count_nonzero(sigma >= rel_tol * sigma[0]))


def bt_project(S, R, order):
    """Balancing and truncating projection matrices from Gramian factors.

    With ``S.T @ R = U diag(sigma) X.T`` the projections are

        W = S U_r diag(sigma_r)^{-1/2},   V = R X_r diag(sigma_r)^{-1/2}

    so that ``W.T @ V = I_r``.

    Parameters
    ----------
    S : (n, k1) ndarray
        Factor of the observability Gramian.
    R : (n, k2) ndarray
        Factor of the controllability Gramian.
    order : int or float
        Explicit reduced order, or relative tolerance on the singular values
        (see :func:`order_from_tolerance`).

    Returns
    -------
    W, V : (n, r) ndarray
    sigma : (r,) ndarray
        Retained singular values, all strictly positive.

    Raises
    ------
    RankDeficient
        If an explicit `order` exceeds the number of nonzero singular values.
    """
    order = check_order_spec(order)
    n = S.shape[0]
    if R.shape[1] == 0 or S.shape[1] == 0:
        return np.zeros((n, 0)), np.zeros((n, 0)), np.zeros(0)
    U, sigma, X = svd_decompose(S.T @ R)
    n_pos = int(np.count_nonzero(sigma > sigma[0] * RANK_RTOL)) if sigma[0] > 0 else 0
    if isinstance(order, int):
        r = order
        if r > n_pos:
            raise RankDeficient(
                f"requested order {r} exceeds the {n_pos} nonzero Hankel singular values")
    else:
        r = min(order_from_tolerance(sigma, order), n_pos)
    scale = 1.0 / np.sqrt(sigma[:r])
    W = (S @ U[:, :r]) * scale
    V = (R @ X[:, :r]) * scale
    return W, V, sigma[:r].copy()


@dataclass(frozen=True, eq=False)
class ReducedModel:
    """Projected second-order model
    ``M_r = W^T M V``, ``D_r = W^T D V``, ``K_r = W^T K V``,
    ``B_r = W^T B``, ``C_r = C V``, ``X0_r = W^T X0``, ``V0_r = W^T V0``.
    """

    M: np.ndarray
    D: np.ndarray
    K: np.ndarray
    B: np.ndarray
    C: np.ndarray
    X0: np.ndarray
    V0: np.ndarray
    sigma: np.ndarray
    scheme: str
    W: np.ndarray = field(default=None, repr=False)
    V: np.ndarray = field(default=None, repr=False)

    @property
    def order(self):
        return self.M.shape[0]

    @property
    def system(self):
        """The reduced model as a :class:`SecondOrderSystem`."""
        return SecondOrderSystem(self.M, self.D, self.K, self.B, self.C,
                                 X0=self.X0, V0=self.V0, require_stable=False)

    def is_stable(self):
        if self.order == 0:
            return True
        return stability_check(companion(self.system))[0]


@dataclass(frozen=True, eq=False)
class SplitReduction:
    """Independent reduced models of the three superposed subsystems."""

    rom_so: ReducedModel
    rom_x0: ReducedModel
    rom_v0: ReducedModel

    def __getitem__(self, tag):
        tag = Subsystem.coerce(tag)
        return {Subsystem.SO: self.rom_so, Subsystem.X0: self.rom_x0,
                Subsystem.V0: self.rom_v0}[tag]

    @property
    def orders(self):
        return self.rom_so.order, self.rom_x0.order, self.rom_v0.order


def _project(sos, W, V, sigma, scheme, keep_x0=True, keep_v0=True):
    r = W.shape[1]
    X0 = W.T @ sos.X0 if keep_x0 else np.zeros((r, 0))
    V0 = W.T @ sos.V0 if keep_v0 else np.zeros((r, 0))
    rom = ReducedModel(
        M=W.T @ sos.M @ V, D=W.T @ sos.D @ V, K=W.T @ sos.K @ V,
        B=W.T @ sos.B, C=sos.C @ V, X0=X0, V0=V0,
        sigma=sigma, scheme=scheme, W=W, V=V)
    if not rom.is_stable():
        warnings.warn(f"reduced model ({scheme}, r={r}) is not asymptotically stable",
                      UnstableReducedModelWarning, stacklevel=3)
    return rom


def _split_orders(orders):
    if isinstance(orders, (tuple, list)):
        if len(orders) != 3:
            raise InvalidParameter(f"expected three order specs (so, x0, v0), got {len(orders)}")
        return tuple(check_order_spec(o) for o in orders)
    order = check_order_spec(orders)
    return order, order, order


def reduce_split(sos, factors, orders):
    """Reduce the input-, position- and velocity-driven subsystems separately.

    Parameters
    ----------
    sos : SecondOrderSystem
    factors : GramianFactors
        Factors computed from `sos`.
    orders : int, float or 3-tuple of those
        Order spec per subsystem in the order (so, x0, v0); a single value
        applies to all three.

    Returns
    -------
    SplitReduction
        Only `rom_x0` carries a reduced initial-position basis and only
        `rom_v0` a reduced initial-velocity basis.
    """
    specs = _split_orders(orders)
    roms = {}
    for tag, spec in zip(Subsystem, specs):
        W, V, sigma = bt_project(factors.S, factors[tag], spec)
        roms[tag] = _project(sos, W, V, sigma, f"split-{tag.value}",
                             keep_x0=tag is Subsystem.X0, keep_v0=tag is Subsystem.V0)
    return SplitReduction(roms[Subsystem.SO], roms[Subsystem.X0], roms[Subsystem.V0])


def reduce_combined(sos, factors, order):
    """Reduce with one projection built from ``P_so + P_x0 + P_v0``."""
    W, V, sigma = bt_project(factors.S, combined_factor(factors), order)
    return _project(sos, W, V, sigma, "combined")


def reduce_homogeneous(sos, order, factors=None):
    """Standard second-order BT that ignores the initial-condition subspaces.

    The initial bases are still projected with the same `W` so the reduced
    model can be simulated from the same initial data.
    """
    if factors is None:
        factors = controllability_factors(sos)
    W, V, sigma = bt_project(factors.S, factors.R_so, order)
    return _project(sos, W, V, sigma, "homogeneous")
