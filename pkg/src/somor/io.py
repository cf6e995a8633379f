"""File formats: Matrix Market matrices, system manifests, reduced-model
directories and trajectory CSV.

Manifest grammar
----------------
A manifest is a flat TOML document. Matrix paths are resolved relative to
the manifest's directory::

    M = "M.mtx"
    D = "D.mtx"
    K = "K.mtx"
    B = "B.mtx"
    C = "C.mtx"
    X0 = "X0.mtx"          # optional, omitted => no initial position
    V0 = "V0.mtx"          # optional
    input.kind = "exponential"   # or "zero"
    input.alpha = 0.2
    input.beta = -1.0
    grid.t_end = 20.0
    grid.h = 1e-3
    z0 = [1.0]             # optional, defaults to ones
    w0 = [1.0]
"""

import csv
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .exceptions import DimensionMismatch, ParseError, ValidationError
from .reduction import ReducedModel, SplitReduction
from .simulate import DEFAULT_STEP, DEFAULT_T_END, ExponentialInput, TimeGrid, ZeroInput
from .system import SecondOrderSystem

__all__ = [
    "read_mtx",
    "write_mtx",
    "Manifest",
    "read_manifest",
    "write_manifest",
    "write_rom",
    "read_rom",
    "write_csv",
]

_FIELDS = ("real", "double", "integer")
_SYMMETRIES = ("general", "symmetric")


def _fmt(x):
    return "%.17g" % x


def read_mtx(path):
    """Read a dense real matrix from a Matrix Market file.

    Supports the ``array`` and ``coordinate`` formats with ``real`` (or
    ``integer``) entries and ``general`` or ``symmetric`` storage; symmetric
    storage is expanded.

    Raises
    ------
    ParseError
        With the file name and the 1-based line number of the problem.
    """
    path = Path(path)
    try:
        lines = path.read_text().splitlines()
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", path) from exc
    if not lines:
        raise ParseError("empty file", path, 1)
    header = lines[0].split()
    if len(header) != 5 or header[0].lower() != "%%matrixmarket" or header[1].lower() != "matrix":
        raise ParseError("missing '%%MatrixMarket matrix' header", path, 1)
    fmt, fld, sym = (h.lower() for h in header[2:])
    if fmt not in ("array", "coordinate"):
        raise ParseError(f"unsupported format {fmt!r}", path, 1)
    if fld not in _FIELDS:
        raise ParseError(f"unsupported field {fld!r} (only real matrices)", path, 1)
    if sym not in _SYMMETRIES:
        raise ParseError(f"unsupported symmetry {sym!r}", path, 1)

    body = [(i + 1, ln.split()) for i, ln in enumerate(lines[1:], start=1)
            if ln.strip() and not ln.lstrip().startswith("%")]
    if not body:
        raise ParseError("missing size line", path, len(lines))
    size_line, size = body[0]
    try:
        dims = [int(tok) for tok in size]
    except ValueError:
        raise ParseError("malformed size line", path, size_line) from None
    entries = body[1:]

    def number(tok, lineno):
        try:
            return float(tok)
        except ValueError:
            raise ParseError(f"not a number: {tok!r}", path, lineno) from None

    if fmt == "array":
        if len(dims) != 2:
            raise ParseError("array size line needs 'rows cols'", path, size_line)
        rows, cols = dims
        if sym == "symmetric" and rows != cols:
            raise ParseError("symmetric matrix must be square", path, size_line)
        values = []
        for lineno, toks in entries:
            if len(toks) != 1:
                raise ParseError("expected one value per line", path, lineno)
            values.append(number(toks[0], lineno))
        if sym == "general":
            expected = rows * cols
        else:
            expected = rows * (rows + 1) // 2
        if len(values) != expected:
            where = entries[-1][0] if entries else size_line
            raise ParseError(f"expected {expected} entries, found {len(values)}", path, where)
        a = np.zeros((rows, cols))
        if sym == "general":
            a[:] = np.asarray(values).reshape((cols, rows)).T
        else:
            it = iter(values)
            for j in range(cols):
                for i in range(j, rows):
                    a[i, j] = a[j, i] = next(it)
        return a

    if len(dims) != 3:
        raise ParseError("coordinate size line needs 'rows cols nnz'", path, size_line)
    rows, cols, nnz = dims
    if len(entries) != nnz:
        where = entries[-1][0] if entries else size_line
        raise ParseError(f"expected {nnz} entries, found {len(entries)}", path, where)
    a = np.zeros((rows, cols))
    for lineno, toks in entries:
        if len(toks) != 3:
            raise ParseError("expected 'row col value'", path, lineno)
        try:
            i, j = int(toks[0]) - 1, int(toks[1]) - 1
        except ValueError:
            raise ParseError("malformed index", path, lineno) from None
        if not (0 <= i < rows and 0 <= j < cols):
            raise ParseError(f"index ({i + 1}, {j + 1}) out of range", path, lineno)
        v = number(toks[2], lineno)
        a[i, j] += v
        if sym == "symmetric" and i != j:
            a[j, i] += v
    return a


def write_mtx(path, a):
    """Write a dense matrix in Matrix Market ``array real general`` format
    with 17 significant digits, so reading it back is exact."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    lines = ["%%MatrixMarket matrix array real general", f"{a.shape[0]} {a.shape[1]}"]
    lines += [_fmt(v) for v in a.T.ravel()]
    Path(path).write_text("\n".join(lines) + "\n")


@dataclass
class Manifest:
    """A parsed manifest: the system plus simulation settings."""

    system: SecondOrderSystem
    signal: object = field(default_factory=lambda: ExponentialInput(0.2, -1.0))
    grid: TimeGrid = field(default_factory=TimeGrid)
    z0: np.ndarray = None
    w0: np.ndarray = None


def _signal(spec, path):
    if not spec:
        return ExponentialInput(0.2, -1.0)
    kind = spec.get("kind", "exponential")
    if kind == "zero":
        return ZeroInput()
    if kind == "exponential":
        return ExponentialInput(spec.get("alpha", 0.2), spec.get("beta", -1.0))
    raise ParseError(f"unknown input.kind {kind!r}", path)


def _coef(values, k, name, path):
    if k == 0:
        return np.zeros(0)
    if values is None:
        return np.ones(k)
    v = np.atleast_1d(np.asarray(values, dtype=float))
    if v.size != k:
        raise DimensionMismatch(f"{path}: {name} has {v.size} entries, basis has {k} columns")
    return v


def read_manifest(path, require_stable=True):
    """Read a manifest and the Matrix Market files it references.

    Returns a :class:`Manifest` holding a validated
    :class:`~somor.system.SecondOrderSystem`.
    """
    path = Path(path)
    try:
        data = tomllib.loads(path.read_text())
    except OSError as exc:
        raise ParseError(f"cannot read manifest: {exc.strerror}", path) from exc
    except tomllib.TOMLDecodeError as exc:
        raise ParseError(str(exc), path, getattr(exc, "lineno", None)) from None
    base = path.parent
    mats = {}
    for key in ("M", "D", "K", "B", "C", "X0", "V0"):
        if key not in data:
            if key in ("X0", "V0"):
                mats[key] = None
                continue
            raise ParseError(f"missing required key {key!r}", path)
        mats[key] = read_mtx(base / data[key])
    system = SecondOrderSystem(**mats, require_stable=require_stable)
    grid_spec = data.get("grid", {})
    try:
        grid = TimeGrid(t_end=float(grid_spec.get("t_end", DEFAULT_T_END)),
                        h=float(grid_spec.get("h", DEFAULT_STEP)),
                        t0=float(grid_spec.get("t0", 0.0)))
    except ValidationError as exc:
        raise ParseError(f"invalid grid: {exc}", path) from None
    return Manifest(system=system, signal=_signal(data.get("input"), path), grid=grid,
                    z0=_coef(data.get("z0"), system.X0.shape[1], "z0", path),
                    w0=_coef(data.get("w0"), system.V0.shape[1], "w0", path))


def _toml_value(v):
    if isinstance(v, str):
        return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(v, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_toml_value(x) for x in v) + "]"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_manifest(path, entries):
    """Write a flat manifest from ``(key, value)`` pairs (dotted keys allowed)."""
    items = entries.items() if isinstance(entries, dict) else entries
    text = "".join(f"{k} = {_toml_value(v)}\n" for k, v in items)
    Path(path).write_text(text)


_ROM_PARTS = ("M", "D", "K", "B", "C", "X0", "V0")


def _write_sigma(path, sigma):
    Path(path).write_text("".join(_fmt(s) + "\n" for s in sigma))


def _read_sigma(path):
    text = Path(path).read_text().split()
    return np.array([float(t) for t in text])


def _write_one(directory, rom):
    directory.mkdir(parents=True, exist_ok=True)
    for name in _ROM_PARTS:
        write_mtx(directory / f"{name}.mtx", getattr(rom, name))


def _read_one(directory, sigma, scheme):
    parts = {name: read_mtx(directory / f"{name}.mtx") for name in _ROM_PARTS}
    return ReducedModel(**parts, sigma=sigma, scheme=scheme)


def write_rom(out_dir, result):
    """Write a reduced model (or a :class:`SplitReduction`) to `out_dir`.

    Layout: ``scheme.txt`` naming the scheme; one subdirectory per reduced
    model (``so/``, ``x0/``, ``v0/`` for split, ``rom/`` otherwise) holding
    ``M.mtx ... V0.mtx``; retained singular values in ``sigma_<part>.csv``.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if isinstance(result, SplitReduction):
        (out / "scheme.txt").write_text("split\n")
        for tag in ("so", "x0", "v0"):
            rom = result[tag]
            _write_one(out / tag, rom)
            _write_sigma(out / f"sigma_{tag}.csv", rom.sigma)
    else:
        (out / "scheme.txt").write_text(result.scheme + "\n")
        _write_one(out / "rom", result)
        _write_sigma(out / "sigma.csv", result.sigma)


def read_rom(rom_dir):
    """Inverse of :func:`write_rom`."""
    d = Path(rom_dir)
    try:
        scheme = (d / "scheme.txt").read_text().strip()
    except OSError as exc:
        raise ParseError("not a reduced-model directory (scheme.txt missing)", d) from exc
    if scheme == "split":
        roms = [_read_one(d / tag, _read_sigma(d / f"sigma_{tag}.csv"), f"split-{tag}")
                for tag in ("so", "x0", "v0")]
        return SplitReduction(*roms)
    return _read_one(d / "rom", _read_sigma(d / "sigma.csv"), scheme)


def write_csv(path, header, columns):
    """Write equal-length columns as CSV with 17 significant digits."""
    columns = [np.asarray(c, dtype=float) for c in columns]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in zip(*columns):
            w.writerow([_fmt(v) for v in row])
    return os.fspath(path)
