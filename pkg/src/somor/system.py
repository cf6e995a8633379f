"""Second-order LTI systems, their companion first-order form, and the three
transfer functions the response with nonzero initial data decomposes into.

A second-order system

    M x''(t) + D x'(t) + K x(t) = B u(t),   y(t) = C x(t),
    x(0) = X0 z0,   x'(0) = V0 w0,

has Laplace-domain output

    Y(s) = H_so(s) U(s) + H_x0(s) z0 + H_v0(s) w0

with ``Lambda(s) = (s^2 M + s D + K)^{-1}`` and

    H_so(s) = C Lambda(s) B
    H_x0(s) = C Lambda(s) (D + s M) X0
    H_v0(s) = C Lambda(s) M V0
"""

import enum
from dataclasses import dataclass, field

import numpy as np

from .exceptions import (
    DimensionMismatch, SingularMatrix, SingularPencil, UnstablePencil, ValidationError)
from .linalg import solve_linear
from .validation import check_matrix, check_rows

__all__ = [
    "Subsystem",
    "SecondOrderSystem",
    "FirstOrderSystem",
    "companion",
    "subsystem_input_matrix",
    "combined_input_matrix",
    "subsystem_realization",
    "eval_transfer",
    "stability_check",
]


class Subsystem(enum.Enum):
    """Which of the three superposed subsystems is meant."""

    SO = "so"
    X0 = "x0"
    V0 = "v0"

    @classmethod
    def coerce(cls, tag):
        if isinstance(tag, cls):
            return tag
        try:
            return cls(str(tag).lower())
        except ValueError:
            raise ValidationError(f"unknown subsystem tag {tag!r}") from None


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class FirstOrderSystem:
    """Descriptor realization ``E z' = A z + B u``, ``y = C z``.

    The transfer function uses the convention ``C (sE - A)^{-1} B``.
    """

    E: np.ndarray
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray

    def __post_init__(self):
        E = check_matrix(self.E, "E", square=True, allow_empty=True)
        A = check_matrix(self.A, "A", square=True, allow_empty=True)
        B = check_matrix(self.B, "B", allow_empty=True)
        C = check_matrix(self.C, "C", allow_empty=True)
        if E.shape != A.shape:
            raise ValidationError(f"E vs A: shapes {E.shape} and {A.shape} differ")
        check_rows(B, A, "B", "A")
        if C.shape[1] != A.shape[0]:
            raise ValidationError(
                f"C vs A: C has {C.shape[1]} columns, A has order {A.shape[0]}")
        for name, val in zip("EABC", (E, A, B, C)):
            object.__setattr__(self, name, _frozen(val))

    @property
    def order(self):
        return self.A.shape[0]

    def transfer(self, s):
        s = complex(s)
        try:
            x = solve_linear(s * self.E - self.A, self.B.astype(complex))
        except SingularMatrix as exc:
            raise SingularPencil(f"sE - A is singular at s={s}") from exc
        return self.C @ x


@dataclass(frozen=True, eq=False)
class SecondOrderSystem:
    """Second-order system with initial-condition subspaces.

    Parameters
    ----------
    M, D, K : (n, n) array_like
        Mass, damping and stiffness matrices. `M` must be nonsingular.
    B : (n, m) array_like
    C : (p, n) array_like
    X0, V0 : (n, k) array_like, optional
        Bases of the initial position and initial velocity subspaces.
        Omitted bases are stored with zero columns.
    require_stable : bool, default True
        Check asymptotic stability of the quadratic pencil at construction.
        Turn this off for systems that are only simulated (or for reduced
        models, which balanced truncation does not guarantee to be stable).
    """

    M: np.ndarray
    D: np.ndarray
    K: np.ndarray
    B: np.ndarray
    C: np.ndarray
    X0: np.ndarray = None
    V0: np.ndarray = None
    require_stable: bool = field(default=True, repr=False)

    def __post_init__(self):
        M = check_matrix(self.M, "M", square=True, allow_empty=True)
        n = M.shape[0]
        D = check_matrix(self.D, "D", square=True, allow_empty=True)
        K = check_matrix(self.K, "K", square=True, allow_empty=True)
        B = check_matrix(self.B, "B", allow_empty=True)
        C = check_matrix(self.C, "C", allow_empty=True)
        X0 = np.zeros((n, 0)) if self.X0 is None else check_matrix(self.X0, "X0", allow_empty=True)
        V0 = np.zeros((n, 0)) if self.V0 is None else check_matrix(self.V0, "V0", allow_empty=True)
        for name, val in (("D", D), ("K", K)):
            if val.shape != M.shape:
                raise DimensionMismatch(
                    f"{name} vs M: shapes {val.shape} and {M.shape} differ")
        for name, val in (("B", B), ("X0", X0), ("V0", V0)):
            check_rows(val, M, name, "M")
        if C.shape[1] != n:
            raise DimensionMismatch(f"C vs M: C has {C.shape[1]} columns, M has order {n}")
        for name, val in zip(("M", "D", "K", "B", "C", "X0", "V0"), (M, D, K, B, C, X0, V0)):
            object.__setattr__(self, name, _frozen(val))
        if n and self.require_stable:
            stable, abscissa = stability_check(companion(self))
            if not stable:
                raise UnstablePencil(
                    f"quadratic pencil is not asymptotically stable "
                    f"(spectral abscissa {abscissa:.3e})")

    @property
    def n(self):
        return self.M.shape[0]

    @property
    def n_inputs(self):
        return self.B.shape[1]

    @property
    def n_outputs(self):
        return self.C.shape[0]

    def with_initial_bases(self, X0=None, V0=None):
        """Copy with replaced initial-condition bases (stability not rechecked)."""
        return SecondOrderSystem(self.M, self.D, self.K, self.B, self.C,
                                 X0=X0, V0=V0, require_stable=False)


def companion(sos):
    """First-order companion form with state ``[x; x']``.

    ``E = [[I, 0], [0, M]]``, ``A = [[0, I], [-K, -D]]``, ``B = [0; B]``,
    ``C = [C, 0]``.
    """
    n = sos.n
    eye, zero = np.eye(n), np.zeros((n, n))
    E = np.block([[eye, zero], [zero, sos.M]])
    A = np.block([[zero, eye], [-sos.K, -sos.D]])
    B = np.vstack([np.zeros_like(sos.B), sos.B])
    C = np.hstack([sos.C, np.zeros_like(sos.C)])
    return FirstOrderSystem(E, A, B, C)


def subsystem_input_matrix(sos, tag):
    """Companion-form input matrix driving one of the three subsystems.

    ``[0; B]`` for the input-driven part, ``[X0; 0]`` for the initial
    position part and ``[0; M V0]`` for the initial velocity part. The last
    two equal ``E`` times the initial companion state, which is why the
    impulse response of the companion form reproduces the free response.
    """
    tag = Subsystem.coerce(tag)
    if tag is Subsystem.SO:
        return np.vstack([np.zeros_like(sos.B), sos.B])
    if tag is Subsystem.X0:
        return np.vstack([sos.X0, np.zeros_like(sos.X0)])
    return np.vstack([np.zeros_like(sos.V0), sos.M @ sos.V0])


def combined_input_matrix(sos):
    """Stacked input ``[[0, X0, 0], [B, 0, M V0]]`` covering all three parts."""
    return np.hstack([subsystem_input_matrix(sos, tag) for tag in Subsystem])


def subsystem_realization(sos, tag=None):
    """Companion realization driven by one subsystem input (or all, if None)."""
    fos = companion(sos)
    B = combined_input_matrix(sos) if tag is None else subsystem_input_matrix(sos, tag)
    return FirstOrderSystem(fos.E, fos.A, B, fos.C)


def eval_transfer(sos, tag, s):
    """Evaluate ``H_so``, ``H_x0`` or ``H_v0`` at the complex point `s`.

    Returns a complex ``(p, k)`` array where `k` is the number of inputs,
    initial-position or initial-velocity directions respectively.

    Raises
    ------
    SingularPencil
        If ``s^2 M + s D + K`` is singular at `s`.
    """
    tag = Subsystem.coerce(tag)
    s = complex(s)
    if tag is Subsystem.SO:
        rhs = sos.B
    elif tag is Subsystem.X0:
        rhs = (sos.D + s * sos.M) @ sos.X0
    else:
        rhs = sos.M @ sos.V0
    if rhs.shape[1] == 0 or sos.n == 0:
        return np.zeros((sos.n_outputs, rhs.shape[1]), dtype=complex)
    pencil = s * s * sos.M + s * sos.D + sos.K
    try:
        x = solve_linear(pencil, rhs.astype(complex))
    except SingularMatrix as exc:
        raise SingularPencil(f"s^2 M + s D + K is singular at s={s}") from exc
    return sos.C @ x


def stability_check(fos):
    """Return ``(stable, abscissa)`` for the pencil ``(E, A)``.

    `abscissa` is the largest real part of the eigenvalues of ``E^{-1} A``
    and `stable` is true iff it is negative.
    """
    if fos.order == 0:
        return True, -np.inf
    eigs = np.linalg.eigvals(solve_linear(fos.E, fos.A))
    abscissa = float(np.max(eigs.real))
    return abscissa < 0.0, abscissa
