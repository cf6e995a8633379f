"""Fixed-step time simulation of second-order systems and reduced models.

The companion first-order system ``E z' = A z + B u`` is integrated with the
implicit trapezoidal rule

    (E - h/2 A) z_{k+1} = (E + h/2 A) z_k + h/2 B (u_k + u_{k+1}),

which is A-stable and second-order accurate. The step matrix is factored
once per simulation.
"""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .exceptions import GridMismatch, InvalidParameter, SingularMatrix, SingularStepMatrix
from .analysis import hinf_exp_input
from .linalg import lu_factor, lu_solve
from .validation import check_matrix, check_vector

__all__ = [
    "TimeGrid",
    "Trajectory",
    "ExponentialInput",
    "ZeroInput",
    "TabulatedInput",
    "simulate",
    "simulate_system",
    "simulate_split",
    "superpose",
    "l2_error_integral",
]

DEFAULT_T_END = 20.0
DEFAULT_STEP = 1e-3


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid ``t0, t0 + h, ..., t_end``."""

    t_end: float = DEFAULT_T_END
    h: float = DEFAULT_STEP
    t0: float = 0.0

    def __post_init__(self):
        if not self.h > 0:
            raise InvalidParameter(f"step must be positive, got {self.h}")
        if not self.t_end > self.t0:
            raise InvalidParameter(f"t_end ({self.t_end}) must exceed t0 ({self.t0})")
        steps = (self.t_end - self.t0) / self.h
        if abs(steps - round(steps)) > 1e-8 * max(1.0, steps):
            raise InvalidParameter(
                f"horizon {self.t_end - self.t0} is not a whole number of steps {self.h}")

    @property
    def n_steps(self):
        return int(round((self.t_end - self.t0) / self.h))

    @property
    def times(self):
        return self.t0 + self.h * np.arange(self.n_steps + 1)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Output samples on a time grid, one row per grid point."""

    grid: TimeGrid
    samples: np.ndarray

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim == 1:
            samples = samples[:, None]
        if samples.shape[0] != self.grid.n_steps + 1:
            raise GridMismatch(
                f"{samples.shape[0]} samples for a grid of {self.grid.n_steps + 1} points")
        if not np.all(np.isfinite(samples)):
            raise ValueError("trajectory contains NaN or Inf samples")
        object.__setattr__(self, "samples", samples)

    @property
    def times(self):
        return self.grid.times

    @property
    def final(self):
        return self.samples[-1]


class ExponentialInput:
    """``u(t) = alpha * exp(beta t)`` in every input channel.

    `alpha` may be a scalar (same amplitude on all channels) or one value
    per channel.
    """

    kind = "exponential"

    def __init__(self, alpha=0.2, beta=-1.0):
        self.alpha = alpha
        self.beta = float(beta)

    def __call__(self, t, m=1):
        amp = np.broadcast_to(np.atleast_1d(np.asarray(self.alpha, dtype=float)), (m,))
        return np.exp(self.beta * np.asarray(t, dtype=float))[:, None] * amp

    @property
    def hinf(self):
        return hinf_exp_input(self.alpha, self.beta)

    def __repr__(self):
        return f"ExponentialInput(alpha={self.alpha!r}, beta={self.beta!r})"


class ZeroInput:
    kind = "zero"
    hinf = 0.0

    def __call__(self, t, m=1):
        return np.zeros((np.size(t), m))

    def __repr__(self):
        return "ZeroInput()"


class TabulatedInput:
    """Piecewise-linear input through samples ``(t_i, u_i)``.

    Its Hinf norm is not derived here; pass it to the bound functions
    yourself.
    """

    kind = "tabulated"
    hinf = None

    def __init__(self, t, values):
        self.t = check_vector(t, "t")
        values = np.asarray(values, dtype=float)
        self.values = values[:, None] if values.ndim == 1 else values
        if self.values.shape[0] != self.t.size:
            raise GridMismatch("tabulated input: times and values differ in length")

    def __call__(self, t, m=1):
        t = np.asarray(t, dtype=float)
        cols = [np.interp(t, self.t, self.values[:, j]) for j in range(self.values.shape[1])]
        out = np.column_stack(cols)
        if out.shape[1] == 1 and m > 1:
            out = np.repeat(out, m, axis=1)
        return out


def _trapezoid(E, A, B, C, z0, u_samples, h):
    """Integrate ``E z' = A z + B u`` and return ``C z`` at every grid point."""
    try:
        lu = lu_factor(E - 0.5 * h * A)
    except SingularMatrix as exc:
        raise SingularStepMatrix(f"E - h/2 A is singular for h={h}") from exc
    step = lu_solve(lu, E + 0.5 * h * A)
    n_pts = u_samples.shape[0]
    Z = np.empty((n_pts, E.shape[0]))
    Z[0] = z0
    if B.shape[1] and u_samples.any():
        forcing = lu_solve(lu, 0.5 * h * B) @ (u_samples[:-1] + u_samples[1:]).T
        z = Z[0]
        for k in range(n_pts - 1):
            z = step @ z + forcing[:, k]
            Z[k + 1] = z
    else:
        z = Z[0]
        for k in range(n_pts - 1):
            z = step @ z
            Z[k + 1] = z
    return Z @ C.T


def simulate(M, D, K, B, C, x0, v0, u, grid):
    """Simulate ``M x'' + D x' + K x = B u``, ``y = C x``.

    Parameters
    ----------
    M, D, K, B, C : array_like
        System matrices; `M` must be nonsingular.
    x0, v0 : array_like or None
        Initial position and velocity (``X0 @ z0`` and ``V0 @ w0``); None
        means zero.
    u : callable or None
        Input signal, called as ``u(times, m)`` and returning an ``(N, m)``
        array (see :class:`ExponentialInput`). None means no input.
    grid : TimeGrid

    Returns
    -------
    Trajectory
    """
    M = check_matrix(M, "M", square=True, allow_empty=True)
    n = M.shape[0]
    B = check_matrix(B, "B", allow_empty=True)
    C = check_matrix(C, "C", allow_empty=True)
    times = grid.times
    p = C.shape[0]
    if n == 0:
        return Trajectory(grid, np.zeros((times.size, p)))
    D = check_matrix(D, "D", square=True)
    K = check_matrix(K, "K", square=True)
    x0 = np.zeros(n) if x0 is None else check_vector(x0, "x0", n)
    v0 = np.zeros(n) if v0 is None else check_vector(v0, "v0", n)
    m = B.shape[1]
    u_samples = np.zeros((times.size, m)) if u is None or m == 0 else np.asarray(u(times, m), float)
    eye, zero = np.eye(n), np.zeros((n, n))
    E = np.block([[eye, zero], [zero, M]])
    A = np.block([[zero, eye], [-K, -D]])
    Bf = np.vstack([np.zeros((n, m)), B])
    Cf = np.hstack([C, np.zeros((p, n))])
    y = _trapezoid(E, A, Bf, Cf, np.concatenate([x0, v0]), u_samples, grid.h)
    return Trajectory(grid, y)


def _coefficients(basis, coef, name):
    k = basis.shape[1]
    if coef is None:
        return np.zeros(k)
    if k == 0:
        return np.zeros(0)
    return check_vector(coef, name, k)


def simulate_system(sos, u, grid, z0=None, w0=None):
    """Simulate a :class:`~somor.system.SecondOrderSystem` from
    ``x(0) = X0 z0``, ``x'(0) = V0 w0``."""
    z0 = _coefficients(sos.X0, z0, "z0")
    w0 = _coefficients(sos.V0, w0, "w0")
    return simulate(sos.M, sos.D, sos.K, sos.B, sos.C,
                    sos.X0 @ z0, sos.V0 @ w0, u, grid)


def simulate_split(split, u, grid, z0=None, w0=None):
    """Superposed output of the three reduced models of a split reduction:
    the input-driven model from rest, the position model from ``X0_r z0``
    and the velocity model from ``V0_r w0``, the latter two unforced."""
    rom_so, rom_x0, rom_v0 = split.rom_so, split.rom_x0, split.rom_v0
    y_so = simulate(rom_so.M, rom_so.D, rom_so.K, rom_so.B, rom_so.C, None, None, u, grid)
    z0 = _coefficients(rom_x0.X0, z0, "z0")
    w0 = _coefficients(rom_v0.V0, w0, "w0")
    y_x0 = simulate(rom_x0.M, rom_x0.D, rom_x0.K, rom_x0.B, rom_x0.C,
                    rom_x0.X0 @ z0, None, None, grid)
    y_v0 = simulate(rom_v0.M, rom_v0.D, rom_v0.K, rom_v0.B, rom_v0.C,
                    None, rom_v0.V0 @ w0, None, grid)
    return superpose(y_so, y_x0, y_v0)


def _same_grid(trajs):
    grid = trajs[0].grid
    for tr in trajs[1:]:
        if tr.grid != grid:
            raise GridMismatch(f"grids differ: {grid} vs {tr.grid}")
        if tr.samples.shape != trajs[0].samples.shape:
            raise GridMismatch("trajectories have different output dimensions")
    return grid


def superpose(*trajectories):
    """Pointwise sum of trajectories on identical grids."""
    grid = _same_grid(trajectories)
    return Trajectory(grid, np.sum([tr.samples for tr in trajectories], axis=0))


def l2_error_integral(y, y_hat):
    """Running ``sqrt(int_0^t ||y - y_hat||^2 dtau)`` (trapezoidal rule)."""
    grid = _same_grid((y, y_hat))
    sq = np.sum((y.samples - y_hat.samples) ** 2, axis=1)
    running = np.sqrt(cumulative_trapezoid(sq, dx=grid.h, initial=0.0))
    return Trajectory(grid, running)
