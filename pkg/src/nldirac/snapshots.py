"""Field snapshot files and delimited diagnostic output.

Snapshot format: one ASCII header line

    NLDIRAC1 dims=<d> n=<n0>[,n1,n2] L=<l0>[,l1,l2] t=<time>

terminated by a newline, followed by raw little-endian binary64 values,
point-major, component-major within each point, with real and imaginary
parts interleaved.  That byte order is exactly a C-contiguous complex128
array, so reading and writing are single buffer operations.

CSV numbers are printed with 17 significant digits so binary64 values
round-trip exactly.
"""

from __future__ import annotations

import numpy as np

from .dynamics import FieldState, Grid

MAGIC = "NLDIRAC1"


def _fmt(x: float) -> str:
    return "%.17g" % x


def write_snapshot(path, state: FieldState):
    grid = state.grid
    header = "{} dims={} n={} L={} t={}\n".format(
        MAGIC,
        grid.dims,
        ",".join(str(n) for n in grid.points),
        ",".join(_fmt(l) for l in grid.lengths),
        _fmt(state.time),
    )
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(np.ascontiguousarray(state.values, dtype="<c16").tobytes())
    return path


def read_snapshot(path) -> FieldState:
    with open(path, "rb") as fh:
        raw = fh.read()
    nl = raw.find(b"\n")
    if nl < 0:
        raise ValueError("snapshot has no header line")
    header = raw[:nl].decode("ascii")
    fields = header.split()
    if not fields or fields[0] != MAGIC:
        raise ValueError(f"not a {MAGIC} snapshot: {header!r}")
    kv = {}
    for tok in fields[1:]:
        key, _, val = tok.partition("=")
        kv[key] = val
    dims = int(kv["dims"])
    points = [int(v) for v in kv["n"].split(",")]
    lengths = [float(v) for v in kv["L"].split(",")]
    time = float(kv["t"])
    grid = Grid(dims, points, lengths)
    expected = int(np.prod(points)) * 4
    values = np.frombuffer(raw[nl + 1 :], dtype="<c16")
    if values.size != expected:
        raise ValueError(
            f"snapshot payload holds {values.size} values, expected {expected}"
        )
    values = values.reshape(*points, 4).astype(np.complex128)
    return FieldState(grid, time, values)


class CsvWriter:
    """Tiny deterministic CSV writer (%.17g everywhere)."""

    def __init__(self, path, fields):
        self.path = path
        self.fields = tuple(fields)
        self._fh = open(path, "w", encoding="ascii", newline="\n")
        self._fh.write(",".join(self.fields) + "\n")

    def row(self, values):
        if len(values) != len(self.fields):
            raise ValueError(
                f"row has {len(values)} values for {len(self.fields)} fields"
            )
        self._fh.write(",".join(_fmt(float(v)) for v in values) + "\n")

    def close(self):
        if self._fh is not None:
            self._fh.close()
            self._fh = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def write_csv(path, fields, rows):
    with CsvWriter(path, fields) as out:
        for row in rows:
            out.row(row)
    return path


def read_csv(path):
    """Read one of our CSVs back: (fields, float array of shape (rows, cols))."""
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().strip()
        fields = header.split(",") if header else []
        body = fh.read()
    if body.strip():
        data = np.loadtxt(body.splitlines(), delimiter=",", ndmin=2)
    else:
        data = np.empty((0, len(fields)))
    return fields, data
