"""Estimator front end in the scikit-learn style.

Each estimator is configured through ``__init__`` keyword arguments (so
``get_params``/``set_params``/``clone`` work), learns its reduced model in
``fit(system)`` and stores fitted state in trailing-underscore attributes::

    est = SplitBalancedTruncation(tol=1e-4).fit(sos)
    y_hat = est.predict(ExponentialInput(0.2, -1.0), TimeGrid(20, 1e-3), z0=[1], w0=[1])
    est.error_bound(u_hinf=0.2, z0=[1], w0=[1]).total
"""

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .analysis import bound_combined, bound_split, hankel_report
from .exceptions import InvalidParameter, ValidationError
from .gramians import controllability_factors
from .reduction import order_from_tolerance, reduce_combined, reduce_homogeneous, reduce_split
from .simulate import simulate_split, simulate_system
from .system import SecondOrderSystem, Subsystem, eval_transfer
from .validation import check_order_spec

__all__ = [
    "HomogeneousBalancedTruncation",
    "SplitBalancedTruncation",
    "CombinedBalancedTruncation",
]


def _check_system(system):
    if not isinstance(system, SecondOrderSystem):
        raise ValidationError(
            f"expected a SecondOrderSystem, got {type(system).__name__}")
    if system.n == 0:
        raise ValidationError("cannot reduce an empty system")
    return system


def _resolve(order, tol, sigma):
    """Turn `order` and `tol` into one order spec for
    :func:`~somor.reduction.bt_project`.

    With both set, `tol` picks the order and `order` caps it.
    """
    if order is None and tol is None:
        raise InvalidParameter("set either order or tol")
    if tol is None:
        return check_order_spec(order)
    tol = check_order_spec(float(tol), "tol")
    if order is None:
        return tol
    order = check_order_spec(order)
    if sigma.size == 0:
        return 0
    return min(order, order_from_tolerance(sigma, tol))


class _BalancedTruncation(BaseEstimator):
    """Shared parameters and fitting logic; subclasses pick the scheme."""

    def __init__(self, order=None, tol=None, gramian_tol=1e-12):
        self.order = order
        self.tol = tol
        self.gramian_tol = gramian_tol

    def fit(self, system, y=None):
        """Compute Gramian factors of `system` and its reduced model.

        `y` is ignored and only present for API compatibility.
        """
        system = _check_system(system)
        self.system_ = system
        self.factors_ = controllability_factors(system, rel_tol=self.gramian_tol)
        self.hankel_singular_values_ = hankel_report(self.factors_)
        self._reduce(system)
        return self

    def _reduce(self, system):
        raise NotImplementedError

    def error_bound(self, u_hinf, z0=None, w0=None):
        """A-posteriori L2 output-error bound for the fitted reduced model.

        Parameters
        ----------
        u_hinf : float
            Hinf norm of the Laplace transform of the input, e.g. from
            :func:`~somor.analysis.hinf_exp_input` or an input's ``hinf``.
        z0, w0 : array_like, optional
            Initial-condition coefficients; omitted means zero.

        Returns
        -------
        ErrorBoundReport
        """
        check_is_fitted(self, "system_")
        return self._bound(u_hinf, z0, w0)


class _SingleModel(_BalancedTruncation):

    def predict(self, u, grid, z0=None, w0=None):
        """Simulated output trajectory of the reduced model.

        The reduced model starts from ``X0_r z0`` and ``V0_r w0``.
        """
        check_is_fitted(self, "rom_")
        return simulate_system(self.rom_.system, u, grid, z0, w0)

    def transfer(self, s, tag="so"):
        """Reduced transfer function of one subsystem at `s`."""
        check_is_fitted(self, "rom_")
        return eval_transfer(self.rom_.system, tag, s)

    def _bound(self, u_hinf, z0, w0):
        return bound_combined(self.system_, self.rom_, u_hinf, z0, w0)


class HomogeneousBalancedTruncation(_SingleModel):
    """Second-order balanced truncation from the input-driven Gramian only.

    This is the classical scheme that assumes zero initial conditions; the
    initial bases are projected along so the model can still be simulated
    from nonzero initial data.

    Parameters
    ----------
    order : int, optional
        Reduced order (maximum order if `tol` is also given).
    tol : float, optional
        Keep Hankel singular values ``>= tol * sigma_1``.
    gramian_tol : float, default 1e-12
        Relative eigenvalue cutoff when factoring the Gramians.

    Attributes
    ----------
    rom_ : ReducedModel
    factors_ : GramianFactors
    hankel_singular_values_ : dict
    """

    def _reduce(self, system):
        spec = _resolve(self.order, self.tol, self.hankel_singular_values_["so"])
        self.rom_ = reduce_homogeneous(system, spec, self.factors_)


class CombinedBalancedTruncation(_SingleModel):
    """One projection from the sum of the input, initial-position and
    initial-velocity Gramians.

    Parameters are those of :class:`HomogeneousBalancedTruncation`.
    """

    def _reduce(self, system):
        spec = _resolve(self.order, self.tol, self.hankel_singular_values_["c"])
        self.rom_ = reduce_combined(system, self.factors_, spec)


class SplitBalancedTruncation(_BalancedTruncation):
    """Reduce the three superposed subsystems independently.

    Parameters
    ----------
    order : int or tuple of 3 ints, optional
        Reduced orders for the (input, initial position, initial velocity)
        subsystems; a single int applies to all three.
    tol : float, optional
        Relative Hankel singular value tolerance, applied per subsystem.
    gramian_tol : float, default 1e-12

    Attributes
    ----------
    split_ : SplitReduction
    """

    def _reduce(self, system):
        orders = self.order
        if isinstance(orders, (tuple, list)):
            if len(orders) != 3:
                raise InvalidParameter(f"order needs three entries, got {len(orders)}")
        else:
            orders = (orders,) * 3
        specs = tuple(_resolve(o, self.tol, self.hankel_singular_values_[tag.value])
                      for tag, o in zip(Subsystem, orders))
        self.split_ = reduce_split(system, self.factors_, specs)

    @property
    def orders_(self):
        check_is_fitted(self, "split_")
        return self.split_.orders

    def predict(self, u, grid, z0=None, w0=None):
        """Sum of the three reduced subsystem outputs."""
        check_is_fitted(self, "split_")
        return simulate_split(self.split_, u, grid, z0, w0)

    def transfer(self, s, tag="so"):
        """Transfer function of the reduced model for subsystem `tag`."""
        check_is_fitted(self, "split_")
        return eval_transfer(self.split_[tag].system, tag, s)

    def _bound(self, u_hinf, z0, w0):
        return bound_split(self.system_, self.split_, u_hinf, z0, w0)
