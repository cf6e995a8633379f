"""Balanced truncation of second-order systems with nonzero initial
conditions.

The response of ``M x'' + D x' + K x = B u``, ``y = C x`` with
``x(0) = X0 z0``, ``x'(0) = V0 w0`` is the sum of an input-driven part and
two free responses. The package reduces these parts either separately
(split scheme) or with one projection from the summed Gramians (combined
scheme), and bounds the L2 output error of the result a posteriori.
"""

__version__ = "0.1.0"

from .analysis import (
    ErrorBoundReport, bound_combined, bound_split, h2_error, h2_norm, hankel_report,
    hinf_exp_input)
from .benchmarks import building_init_from_projection, generate_msd
from .estimators import (
    CombinedBalancedTruncation, HomogeneousBalancedTruncation, SplitBalancedTruncation)
from .exceptions import NumericalError, SomorError, ValidationError
from .gramians import (
    GramianFactors, controllability_factors, solve_gen_lyapunov, solve_gen_lyapunov_obs,
    solve_sylvester_cross)
from .io import read_manifest, read_mtx, read_rom, write_mtx, write_rom
from .reduction import (
    ReducedModel, SplitReduction, bt_project, reduce_combined, reduce_homogeneous,
    reduce_split)
from .simulate import (
    ExponentialInput, TabulatedInput, TimeGrid, Trajectory, ZeroInput, l2_error_integral,
    simulate, simulate_split, simulate_system, superpose)
from .system import (
    FirstOrderSystem, SecondOrderSystem, Subsystem, companion, eval_transfer,
    stability_check)

__all__ = [
    "CombinedBalancedTruncation", "ErrorBoundReport", "ExponentialInput", "FirstOrderSystem",
    "GramianFactors", "HomogeneousBalancedTruncation", "NumericalError", "ReducedModel",
    "SecondOrderSystem", "SomorError", "SplitBalancedTruncation", "SplitReduction",
    "Subsystem", "TabulatedInput", "TimeGrid", "Trajectory", "ValidationError", "ZeroInput",
    "bound_combined", "bound_split", "bt_project", "building_init_from_projection",
    "companion", "controllability_factors", "eval_transfer", "generate_msd", "h2_error",
    "h2_norm", "hankel_report", "hinf_exp_input", "l2_error_integral", "read_manifest",
    "read_mtx", "read_rom", "reduce_combined", "reduce_homogeneous", "reduce_split",
    "simulate", "simulate_split", "simulate_system", "solve_gen_lyapunov",
    "solve_gen_lyapunov_obs", "solve_sylvester_cross", "stability_check", "superpose",
    "write_mtx", "write_rom",
]
