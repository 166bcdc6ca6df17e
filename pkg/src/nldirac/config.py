"""Run configuration: a small sectioned key = value format.

Example::

    # free Dirac plane wave on a 256-point line
    [grid]
    dims = 1
    points = 256
    lengths = 16

    [nonlinearity]
    variant = dirac_mass 1.0

    [initial]
    variant = plane_wave 2 1.0 positive

    [run]
    dt = 0.001
    steps = 2000

Lines starting with '#' (or blank) are skipped.  Unknown sections or keys,
missing required keys, and malformed values all raise ConfigError carrying
the offending line number.  ``echo_text`` writes back a canonical copy with
every default resolved, and reparsing that copy reproduces the same
configuration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .errors import ConfigError
from .dynamics import (
    DERIVATIVE_METHODS,
    Grid,
    PotentialSpec,
    gaussian_state,
    homogeneous_solution,
    homogeneous_state,
    make_plane_wave,
    parse_potential_spec,
    plane_wave_solution,
)
from .nonlinearity import NonlinearitySpec, parse_nonlinearity_spec


@dataclass(frozen=True)
class InitialSpec:
    """Initial data: which family plus its parameters.

    Text forms (the [initial] variant value):

        plane_wave <k-index[,k,k]> <m> <branch>
        gaussian <center|default> <width> <base-index> <momentum-index>
        homogeneous <c>

    Plane-wave momentum is given as integer mode indices, so it is always
    commensurate with the box: p_i = 2*pi*k_i / L_i.  A gaussian center of
    ``default`` puts the packet at the box midpoint.
    """

    kind: str
    indices: tuple = ()
    m: float = 0.0
    branch: str = "positive"
    center: tuple = None
    width: float = 1.0
    base: int = 0
    momentum_index: int = 0
    c: float = 1.0

    @classmethod
    def plane_wave(cls, indices, m, branch="positive"):
        return cls("plane_wave", indices=tuple(int(k) for k in indices),
                   m=float(m), branch=branch)

    @classmethod
    def gaussian(cls, width, momentum_index, center=None, base=0):
        if center is not None:
            center = tuple(float(c) for c in center)
        return cls("gaussian", center=center, width=float(width),
                   base=int(base), momentum_index=int(momentum_index))

    @classmethod
    def homogeneous(cls, c):
        return cls("homogeneous", c=float(c))

    def momentum(self, grid):
        if self.kind != "plane_wave":
            raise ValueError("only plane waves carry a momentum vector")
        if len(self.indices) != grid.dims:
            raise ValueError(
                f"plane wave has {len(self.indices)} mode indices for a "
                f"{grid.dims}D grid"
            )
        return [2.0 * math.pi * k / l
                for k, l in zip(self.indices, grid.lengths)]

    def build(self, grid):
        """Sample this initial condition on a grid."""
        if self.kind == "plane_wave":
            return make_plane_wave(grid, self.momentum(grid), self.m,
                                   self.branch)
        if self.kind == "gaussian":
            center = None if self.center is None else list(self.center)
            return gaussian_state(grid, width=self.width,
                                  momentum_index=self.momentum_index,
                                  center=center, base=self.base)
        if self.kind == "homogeneous":
            return homogeneous_state(grid, self.c)
        raise ValueError(f"unknown initial kind {self.kind!r}")

    def solution(self, grid, nonlinearity, potential=None):
        """Matching continuum solution, for families that have one."""
        if self.kind == "plane_wave":
            p = self.momentum(grid)
            p3 = [0.0, 0.0, p[0]] if grid.dims == 1 else list(p)
            return plane_wave_solution(p3, self.m, self.branch,
                                       potential=potential)
        if self.kind == "homogeneous":
            return homogeneous_solution(nonlinearity, self.c,
                                        potential=potential)
        raise ValueError(
            f"no closed-form solution for {self.kind!r} initial data"
        )

    def text(self):
        if self.kind == "plane_wave":
            return "plane_wave {} {} {}".format(
                ",".join(str(k) for k in self.indices),
                "%.17g" % self.m, self.branch)
        if self.kind == "gaussian":
            center = ("default" if self.center is None
                      else ",".join("%.17g" % c for c in self.center))
            return "gaussian %s %.17g %d %d" % (
                center, self.width, self.base, self.momentum_index)
        return "homogeneous %.17g" % self.c


def parse_initial_spec(tokens) -> InitialSpec:
    if isinstance(tokens, str):
        tokens = tokens.split()
    if not tokens:
        raise ValueError("empty initial spec")
    kind, args = tokens[0], tokens[1:]
    if kind == "plane_wave":
        if len(args) != 3:
            raise ValueError("plane_wave takes <k-indices> <m> <branch>")
        indices = [int(tok) for tok in args[0].split(",")]
        branch = args[2]
        if branch not in ("positive", "negative"):
            raise ValueError(f"branch must be positive or negative, got {branch!r}")
        return InitialSpec.plane_wave(indices, float(args[1]), branch)
    if kind == "gaussian":
        if len(args) != 4:
            raise ValueError(
                "gaussian takes <center|default> <width> <base-index> "
                "<momentum-index>"
            )
        center = (None if args[0] == "default"
                  else [float(tok) for tok in args[0].split(",")])
        base = int(args[2])
        if not 0 <= base <= 3:
            raise ValueError("base spinor index must be 0..3")
        return InitialSpec.gaussian(float(args[1]), int(args[3]),
                                    center=center, base=base)
    if kind == "homogeneous":
        if len(args) != 1:
            raise ValueError("homogeneous takes <c>")
        return InitialSpec.homogeneous(float(args[0]))
    raise ValueError(f"unknown initial variant {kind!r}")


@dataclass
class RunConfig:
    grid: Grid
    nonlinearity: NonlinearitySpec
    initial: InitialSpec
    dt: float
    steps: int
    potential: PotentialSpec = field(default_factory=PotentialSpec.zero)
    output_every: int = 1
    method: str = "spectral"
    threads: int = 1
    out_dir: str = "out"
    series_name: str = "series"
    snapshots: bool = False
    figures: bool = True

    def with_out_dir(self, out_dir):
        return replace(self, out_dir=str(out_dir))


_SECTIONS = ("grid", "potential", "nonlinearity", "initial", "run", "output")
_KEYS = {
    "grid": ("dims", "points", "lengths"),
    "potential": ("variant",),
    "nonlinearity": ("variant",),
    "initial": ("variant",),
    "run": ("dt", "steps", "output-every", "method", "threads"),
    "output": ("directory", "series-name", "snapshots", "figures"),
}


def _split_lines(text):
    """Yield (line_number, section, key, value) for every assignment."""
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in _SECTIONS:
                raise ConfigError(f"unknown section [{section}]", line=lineno)
            continue
        if "=" not in line:
            raise ConfigError(f"expected key = value, got {line!r}", line=lineno)
        if section is None:
            raise ConfigError("assignment before any [section] header",
                              line=lineno)
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _KEYS[section]:
            raise ConfigError(f"unknown key {key!r} in [{section}]",
                              line=lineno)
        yield lineno, section, key, value


def _collect(text):
    table = {}
    for lineno, section, key, value in _split_lines(text):
        if (section, key) in table:
            raise ConfigError(f"duplicate key {key!r} in [{section}]",
                              line=lineno)
        table[(section, key)] = (value, lineno)
    return table


def _take(table, section, key, default=None, required=False):
    if (section, key) in table:
        return table.pop((section, key))
    if required:
        raise ConfigError(f"missing required key {key!r} in [{section}]")
    return default, None


def _converted(conv, raw, lineno, what):
    try:
        return conv(raw)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"bad {what}: {exc}", line=lineno) from None


def _parse_bool(raw):
    low = raw.strip().lower()
    if low in ("on", "true", "yes", "1"):
        return True
    if low in ("off", "false", "no", "0"):
        return False
    raise ValueError(f"expected on/off, got {raw!r}")


def _int_list(raw):
    return [int(tok) for tok in raw.split(",")]


def _float_list(raw):
    return [float(tok) for tok in raw.split(",")]


def parse_config(text) -> RunConfig:
    table = _collect(text)

    raw, ln = _take(table, "grid", "dims", required=True)
    dims = _converted(int, raw, ln, "grid dims")
    raw, ln_pts = _take(table, "grid", "points", required=True)
    points = _converted(_int_list, raw, ln_pts, "grid points")
    raw, ln_len = _take(table, "grid", "lengths", required=True)
    lengths = _converted(_float_list, raw, ln_len, "grid lengths")
    if dims == 3 and len(points) == 1:
        points = points * 3
    if dims == 3 and len(lengths) == 1:
        lengths = lengths * 3
    grid = _converted(lambda _: Grid(dims, points, lengths), None, ln_pts,
                      "grid")

    raw, ln = _take(table, "potential", "variant", default="zero")
    potential = _converted(parse_potential_spec, raw, ln, "potential variant")

    raw, ln = _take(table, "nonlinearity", "variant", required=True)
    nonlinearity = _converted(parse_nonlinearity_spec, raw, ln,
                              "nonlinearity variant")

    raw, ln = _take(table, "initial", "variant", required=True)
    initial = _converted(parse_initial_spec, raw, ln, "initial variant")
    if initial.kind == "plane_wave" and len(initial.indices) != grid.dims:
        raise ConfigError(
            f"plane wave has {len(initial.indices)} mode indices for a "
            f"{grid.dims}D grid", line=ln)

    raw, ln = _take(table, "run", "dt", required=True)
    dt = _converted(float, raw, ln, "dt")
    if dt <= 0:
        raise ConfigError("dt must be positive", line=ln)
    raw, ln = _take(table, "run", "steps", required=True)
    steps = _converted(int, raw, ln, "steps")
    if steps < 0:
        raise ConfigError("steps must be nonnegative", line=ln)
    raw, ln = _take(table, "run", "output-every", default="1")
    output_every = _converted(int, raw, ln, "output-every")
    if output_every < 1:
        raise ConfigError("output-every must be at least 1", line=ln)
    raw, ln = _take(table, "run", "method", default="spectral")
    if raw not in DERIVATIVE_METHODS:
        raise ConfigError(
            f"method must be one of {', '.join(DERIVATIVE_METHODS)}", line=ln)
    method = raw
    raw, ln = _take(table, "run", "threads", default="1")
    threads = _converted(int, raw, ln, "threads")
    if threads < 1:
        raise ConfigError("threads must be at least 1", line=ln)

    out_dir, _ = _take(table, "output", "directory", default="out")
    series_name, _ = _take(table, "output", "series-name", default="series")
    raw, ln = _take(table, "output", "snapshots", default="off")
    snapshots = _converted(_parse_bool, raw, ln, "snapshots flag")
    raw, ln = _take(table, "output", "figures", default="on")
    figures = _converted(_parse_bool, raw, ln, "figures flag")

    # _take pops as it goes, so leftovers cannot occur; keep the guard anyway
    if table:
        (section, key), (_, lineno) = next(iter(table.items()))
        raise ConfigError(f"unhandled key {key!r} in [{section}]", line=lineno)

    return RunConfig(grid=grid, nonlinearity=nonlinearity, initial=initial,
                     dt=dt, steps=steps, potential=potential,
                     output_every=output_every, method=method,
                     threads=threads, out_dir=out_dir,
                     series_name=series_name, snapshots=snapshots,
                     figures=figures)


def load_config(path) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)


def echo_text(cfg: RunConfig) -> str:
    """Canonical round-trippable dump of a configuration, defaults resolved."""
    g = cfg.grid
    lines = [
        "[grid]",
        f"dims = {g.dims}",
        "points = " + ",".join(str(n) for n in g.points),
        "lengths = " + ",".join("%.17g" % l for l in g.lengths),
        "",
        "[potential]",
        f"variant = {cfg.potential.text()}",
        "",
        "[nonlinearity]",
        f"variant = {cfg.nonlinearity.text()}",
        "",
        "[initial]",
        f"variant = {cfg.initial.text()}",
        "",
        "[run]",
        "dt = %.17g" % cfg.dt,
        f"steps = {cfg.steps}",
        f"output-every = {cfg.output_every}",
        f"method = {cfg.method}",
        f"threads = {cfg.threads}",
        "",
        "[output]",
        f"directory = {cfg.out_dir}",
        f"series-name = {cfg.series_name}",
        "snapshots = " + ("on" if cfg.snapshots else "off"),
        "figures = " + ("on" if cfg.figures else "off"),
    ]
    return "\n".join(lines) + "\n"
