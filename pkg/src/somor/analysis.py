"""H2 errors of reduced models and a-posteriori L2 output-error bounds.

For a stable input ``u`` with bounded Laplace transform,
``||y||_L2 <= ||H||_H2 * ||L(u)||_Hinf``. Applied to the three superposed
error systems this yields

    ||y - y_r||_L2 <= ||H_so - H_so_r|| ||L(u)||_Hinf
                      + ||H_x0 - H_x0_r|| ||z0|| + ||H_v0 - H_v0_r|| ||w0||

for the split scheme, and ``||H - H_r|| (||L(u)||_Hinf + ||z0|| + ||w0||)``
with the stacked input for a single reduced model.
"""

from dataclasses import dataclass, field

import numpy as np

from .exceptions import NonDecayingInput, NumericalInconsistency
from .gramians import RESIDUAL_RTOL, _lyapunov, _StandardForm, _sylvester, combined_factor
from .linalg import svd_decompose
from .system import FirstOrderSystem, Subsystem, subsystem_realization

__all__ = [
    "ErrorBoundReport",
    "h2_error",
    "h2_norm",
    "hinf_exp_input",
    "bound_split",
    "bound_combined",
    "hankel_report",
]

# the trace expression may dip below zero by this much (relative) from
# cancellation before it is treated as an inconsistency
CLAMP_TOL = 1e-10


def h2_error(full, red, rtol=RESIDUAL_RTOL):
    """H2 norm of ``H - H_r`` for two first-order realizations.

    Uses ``tr(C P C^T) - 2 tr(C X C_r^T) + tr(C_r P_r C_r^T)`` where `P`,
    `P_r` are the controllability Gramians and `X` the mixed Gramian from
    :func:`~somor.gramians.solve_sylvester_cross`.

    Raises
    ------
    UnstablePencil
        If either realization is unstable.
    NumericalInconsistency
        If the trace expression is negative beyond round-off.
    """
    if full.C.shape[0] != red.C.shape[0]:
        raise ValueError(
            f"output dimensions differ: {full.C.shape[0]} vs {red.C.shape[0]}")
    if full.B.shape[1] != red.B.shape[1]:
        raise ValueError(
            f"input dimensions differ: {full.B.shape[1]} vs {red.B.shape[1]}")
    terms = [0.0, 0.0, 0.0]
    form = None
    if full.order:
        form = _StandardForm(full.E, full.A)
        P = _lyapunov(form, full.B, rtol)
        terms[0] = np.trace(full.C @ P @ full.C.T)
    if red.order:
        form_r = _StandardForm(red.E, red.A)
        P_r = _lyapunov(form_r, red.B, rtol)
        terms[2] = np.trace(red.C @ P_r @ red.C.T)
        if form is not None:
            X = _sylvester(form, form_r, full.B, red.B, rtol)
            terms[1] = np.trace(full.C @ X @ red.C.T)
    value = terms[0] - 2.0 * terms[1] + terms[2]
    if value < 0.0:
        if value < -CLAMP_TOL * max(1.0, terms[0], terms[2]):
            raise NumericalInconsistency(
                f"squared H2 error is negative ({value:.3e}); Gramians are inconsistent")
        value = 0.0
    return float(np.sqrt(value))


def h2_norm(fos, rtol=RESIDUAL_RTOL):
    """H2 norm of a single realization."""
    empty = FirstOrderSystem(np.zeros((0, 0)), np.zeros((0, 0)),
                             np.zeros((0, fos.B.shape[1])), np.zeros((fos.C.shape[0], 0)))
    return h2_error(fos, empty, rtol)


def hinf_exp_input(alpha, beta):
    """Hinf norm of the Laplace transform of ``u(t) = alpha * exp(beta t)``.

    ``sup_w |alpha / (i w - beta)| = |alpha| / |beta|``, attained at ``w = 0``.
    A vector `alpha` (one amplitude per input channel) uses its 2-norm.
    """
    if beta >= 0:
        raise NonDecayingInput(f"exponential input needs beta < 0, got {beta}")
    return float(np.linalg.norm(np.atleast_1d(alpha)) / abs(beta))


@dataclass
class ErrorBoundReport:
    """Per-term H2 errors, the amplitudes they multiply and the total bound."""

    h2: dict
    u_hinf: float
    z0_norm: float
    w0_norm: float
    total: float
    scheme: str = field(default="split")

    def items(self):
        """Flat ``(key, value)`` pairs, e.g. for ``key=value`` output."""
        out = [(f"h2_{k}", v) for k, v in self.h2.items()]
        out += [("u_hinf", self.u_hinf), ("z0_norm", self.z0_norm),
                ("w0_norm", self.w0_norm), ("bound", self.total)]
        return out


def _norm(v):
    return 0.0 if v is None else float(np.linalg.norm(np.atleast_1d(v)))


def bound_split(sos, split, u_hinf, z0=None, w0=None):
    """Error bound for the superposition of three separately reduced models.

    Each term compares the companion realization of one subsystem with the
    companion realization of its reduced model driven by the matching
    (reduced) input matrix.
    """
    amplitude = {Subsystem.SO: float(u_hinf), Subsystem.X0: _norm(z0),
                 Subsystem.V0: _norm(w0)}
    h2 = {}
    total = 0.0
    for tag in Subsystem:
        full = subsystem_realization(sos, tag)
        red = subsystem_realization(split[tag].system, tag)
        h2[tag.value] = h2_error(full, red)
        total += h2[tag.value] * amplitude[tag]
    return ErrorBoundReport(h2, amplitude[Subsystem.SO], amplitude[Subsystem.X0],
                            amplitude[Subsystem.V0], total, scheme="split")


def bound_combined(sos, rom, u_hinf, z0=None, w0=None, scheme=None):
    """Error bound for a single reduced model using the stacked input
    ``[[0, X0, 0], [B, 0, M V0]]`` and its projected counterpart."""
    full = subsystem_realization(sos, None)
    red = subsystem_realization(rom.system, None)
    err = h2_error(full, red)
    u_hinf, z0n, w0n = float(u_hinf), _norm(z0), _norm(w0)
    return ErrorBoundReport({"c": err}, u_hinf, z0n, w0n, err * (u_hinf + z0n + w0n),
                            scheme=scheme or rom.scheme)


def hankel_report(factors):
    """Singular values of ``S^T R`` for every subsystem and the combined factor.

    Returns a dict with keys ``"so"``, ``"x0"``, ``"v0"`` and ``"c"``.
    """
    out = {}
    for tag in Subsystem:
        R = factors[tag]
        out[tag.value] = svd_decompose(factors.S.T @ R)[1] if R.shape[1] else np.zeros(0)
    out["c"] = svd_decompose(factors.S.T @ combined_factor(factors))[1]
    return out
