"""Command-line interface: ``somor <command> [options]``.

Commands
--------
reduce        reduce a manifest system and write the reduced model directory
simulate      simulate full and reduced model, write a trajectory CSV
bound         print per-term H2 errors and the total error bound
hsv           print (or write) Hankel singular values per subsystem
generate-msd  write a mass-spring-damper chain as Matrix Market + manifest

Exit status is 0 on success, 1 for invalid input and 2 for numerical
failure; errors go to stderr prefixed with ``error:``.
"""

import argparse
import os
import sys
from contextlib import nullcontext
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import bound_combined, bound_split
from .benchmarks import MSD_DEFAULTS, generate_msd
from .estimators import (
    CombinedBalancedTruncation, HomogeneousBalancedTruncation, SplitBalancedTruncation)
from .exceptions import InvalidParameter, NumericalError, SomorError, ValidationError
from .io import read_manifest, read_rom, write_csv, write_manifest, write_mtx, write_rom
from .reduction import SplitReduction
from .simulate import l2_error_integral, simulate_split, simulate_system

ESTIMATORS = {
    "split": SplitBalancedTruncation,
    "combined": CombinedBalancedTruncation,
    "homogeneous": HomogeneousBalancedTruncation,
}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 by default, which is reserved here for
    # numerical failures
    def error(self, message):
        raise _UsageError(message)


def parse_order(text):
    """``"10"`` -> 10, ``"10,8,4"`` -> (10, 8, 4)."""
    parts = [p.strip() for p in text.split(",")]
    try:
        values = [int(p) for p in parts]
    except ValueError:
        raise InvalidParameter(f"--order expects integers, got {text!r}") from None
    if len(values) == 1:
        return values[0]
    if len(values) != 3:
        raise InvalidParameter(f"--order takes one value or three (so,x0,v0), got {text!r}")
    return tuple(values)


def _reduce(args):
    if args.order is None and args.tol is None:
        raise InvalidParameter("give --order, --tol or both")
    order = None if args.order is None else parse_order(args.order)
    if isinstance(order, tuple) and args.scheme != "split":
        raise InvalidParameter(f"scheme {args.scheme!r} takes a single --order")
    manifest = read_manifest(args.manifest)
    est = ESTIMATORS[args.scheme](order=order, tol=args.tol).fit(manifest.system)
    result = est.split_ if args.scheme == "split" else est.rom_
    write_rom(args.out, result)
    orders = result.orders if isinstance(result, SplitReduction) else (result.order,)
    print("order=" + ",".join(str(r) for r in orders))
    return 0


def _simulate_rom(rom, manifest):
    if isinstance(rom, SplitReduction):
        return simulate_split(rom, manifest.signal, manifest.grid, manifest.z0, manifest.w0)
    return simulate_system(rom.system, manifest.signal, manifest.grid, manifest.z0, manifest.w0)


def _simulate(args):
    manifest = read_manifest(args.manifest, require_stable=False)
    y = simulate_system(manifest.system, manifest.signal, manifest.grid,
                        manifest.z0, manifest.w0)
    cols = [y.times] + list(y.samples.T)
    header = ["t"] + [f"y_{i + 1}" for i in range(y.samples.shape[1])]
    if args.rom is not None:
        y_hat = _simulate_rom(read_rom(args.rom), manifest)
        err = l2_error_integral(y, y_hat)
        cols += list(y_hat.samples.T) + [err.samples[:, 0]]
        header += [f"yhat_{i + 1}" for i in range(y_hat.samples.shape[1])]
        header += ["l2err_running"]
    write_csv(args.out, header, cols)
    if args.rom is not None:
        print(f"l2err_final={err.samples[-1, 0]:.17g}")
    return 0


def _bound(args):
    manifest = read_manifest(args.manifest)
    rom = read_rom(args.rom)
    u_hinf = manifest.signal.hinf
    if u_hinf is None:
        raise InvalidParameter("input has no known Hinf norm")
    if isinstance(rom, SplitReduction):
        report = bound_split(manifest.system, rom, u_hinf, manifest.z0, manifest.w0)
    else:
        report = bound_combined(manifest.system, rom, u_hinf, manifest.z0, manifest.w0)
    print(f"scheme={report.scheme}")
    for key, value in report.items():
        print(f"{key}={value:.17g}")
    return 0


def _hsv(args):
    manifest = read_manifest(args.manifest)
    est = SplitBalancedTruncation(order=0).fit(manifest.system)
    hsv = est.hankel_singular_values_
    if args.out is not None:
        width = max(s.size for s in hsv.values())
        header = ["i"] + [f"sigma_{k}" for k in hsv]
        cols = [np.arange(1, width + 1)]
        cols += [np.pad(s, (0, width - s.size), constant_values=np.nan) for s in hsv.values()]
        write_csv(args.out, header, cols)
    else:
        for key, sigma in hsv.items():
            print(f"{key}=" + ",".join(f"{s:.17g}" for s in sigma))
    return 0


def _generate_msd(args):
    sos = generate_msd(args.n, mass=args.mass, stiffness=args.stiffness,
                       alpha=args.alpha, beta=args.beta, damper=args.damper)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name in ("M", "D", "K", "B", "C", "X0", "V0"):
        write_mtx(out / f"{name}.mtx", getattr(sos, name))
    entries = [(name, f"{name}.mtx") for name in ("M", "D", "K", "B", "C", "X0", "V0")]
    entries += [("input.kind", "exponential"), ("input.alpha", 0.2), ("input.beta", -1.0),
                ("grid.t_end", 20.0), ("grid.h", 1e-3)]
    write_manifest(out / "manifest.toml", entries)
    print(out / "manifest.toml")
    return 0


def build_parser():
    parser = _Parser(prog="somor", description="Second-order balanced truncation "
                     "with inhomogeneous initial conditions.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("reduce", help="reduce a system and write the reduced model")
    p.add_argument("--manifest", required=True)
    p.add_argument("--scheme", choices=sorted(ESTIMATORS), default="split")
    p.add_argument("--order", help="reduced order, or so,x0,v0 orders for split")
    p.add_argument("--tol", type=float, help="relative Hankel singular value tolerance")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_reduce)

    p = sub.add_parser("simulate", help="simulate full (and reduced) model to CSV")
    p.add_argument("--manifest", required=True)
    p.add_argument("--rom", help="reduced model directory written by 'reduce'")
    p.add_argument("--out", required=True, help="output CSV file")
    p.set_defaults(func=_simulate)

    p = sub.add_parser("bound", help="print H2 errors and the output-error bound")
    p.add_argument("--manifest", required=True)
    p.add_argument("--rom", required=True)
    p.set_defaults(func=_bound)

    p = sub.add_parser("hsv", help="Hankel singular values per subsystem")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", help="write a CSV instead of printing")
    p.set_defaults(func=_hsv)

    p = sub.add_parser("generate-msd", help="write the mass-spring-damper benchmark")
    p.add_argument("--n", type=int, required=True, help="number of masses")
    for name in ("mass", "stiffness", "alpha", "beta", "damper"):
        p.add_argument(f"--{name}", type=float, default=MSD_DEFAULTS[name])
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_generate_msd)
    return parser


def _thread_limit():
    value = os.environ.get("SOMOR_THREADS")
    if not value:
        return nullcontext()
    try:
        n = int(value)
    except ValueError:
        raise InvalidParameter(f"SOMOR_THREADS must be an integer, got {value!r}") from None
    if n < 1:
        raise InvalidParameter(f"SOMOR_THREADS must be positive, got {n}")
    from threadpoolctl import threadpool_limits
    return threadpool_limits(limits=n)


def main(argv=None):
    """Run the CLI and return the exit status."""
    try:
        args = build_parser().parse_args(argv)
        with _thread_limit():
            return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SomorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
