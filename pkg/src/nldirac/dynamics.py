"""Method-of-lines evolution of the field equation on a periodic lattice.

Space is discretized on a periodic grid (1 or 3 spatial axes), time is
integrated with classical RK4.  The 1+1D reduction lives in the (x0, x3)
plane: the single spatial axis is x3 and derivatives couple through
gamma^3, which is real in this representation.  In 3+1D the axes map to
x1, x2, x3.

The evolution form is

    d_t psi = -gamma^0 gamma^k d_k psi + i gamma^0 gamma^mu a_mu psi
              - i gamma^0 T(psi)

which is the field equation solved for the time derivative.
"""

from __future__ import annotations

import math

import numpy as np

from .clifford import G0_F, GAMMA_F, field_j0, gammas
from .errors import (
    AmplitudeCollapseError,
    IntegrationFault,
    StabilityFault,
)
from .nalgebra import NElement, apply_function
from .nonlinearity import NonlinearitySpec, equation_lhs, mass_term

DERIVATIVE_METHODS = ("spectral", "central2", "central4")

# -gamma^0 gamma^mu and +gamma^0 gamma^mu, transposed for row-spinor matmul
_G0G_T = np.stack([(G0_F @ GAMMA_F[mu]).T.copy() for mu in range(4)])
_NEG_G0G_T = (-_G0G_T).copy()
for _m in (_G0G_T, _NEG_G0G_T):
    _m.flags.writeable = False


class Grid:
    """Periodic spatial lattice: 1 or 3 axes, uniform spacing per axis."""

    __slots__ = ("dims", "points", "lengths", "_ik_cache")

    def __init__(self, dims, points, lengths):
        dims = int(dims)
        if dims not in (1, 3):
            raise ValueError("dims must be 1 or 3")
        points = tuple(int(n) for n in (points if hasattr(points, "__len__") else [points]))
        lengths = tuple(float(l) for l in (lengths if hasattr(lengths, "__len__") else [lengths]))
        if len(points) != dims or len(lengths) != dims:
            raise ValueError(f"need {dims} point counts and lengths")
        if any(n < 8 for n in points):
            raise ValueError("need at least 8 points per active axis")
        if any(l <= 0 for l in lengths):
            raise ValueError("box lengths must be positive")
        self.dims = dims
        self.points = points
        self.lengths = lengths
        self._ik_cache = {}

    @property
    def dx(self):
        return tuple(l / n for l, n in zip(self.lengths, self.points))

    @property
    def cell_volume(self):
        v = 1.0
        for d in self.dx:
            v *= d
        return v

    def spatial_gamma_indices(self):
        """Which gamma^mu couples to each spatial axis."""
        return (3,) if self.dims == 1 else (1, 2, 3)

    def physical_axis(self, axis):
        """Map a grid axis to its spacetime coordinate index (1..3)."""
        return 3 if self.dims == 1 else axis + 1

    def axis_coordinates(self, axis):
        n, l = self.points[axis], self.lengths[axis]
        return np.arange(n) * (l / n)

    def open_coordinates(self):
        """Per-axis coordinate arrays shaped for broadcasting over points."""
        out = []
        for axis in range(self.dims):
            shape = [1] * self.dims
            shape[axis] = self.points[axis]
            out.append(self.axis_coordinates(axis).reshape(shape))
        return out

    def ik(self, axis):
        """Spectral derivative factor i*k along an axis, broadcast-ready."""
        key = axis
        if key not in self._ik_cache:
            n = self.points[axis]
            k = 2.0 * np.pi * np.fft.fftfreq(n, d=self.dx[axis])
            shape = [1] * (self.dims + 1)
            shape[axis] = n
            self._ik_cache[key] = (1j * k).reshape(shape)
        return self._ik_cache[key]

    def __eq__(self, other):
        if not isinstance(other, Grid):
            return NotImplemented
        return (self.dims, self.points, self.lengths) == (
            other.dims,
            other.points,
            other.lengths,
        )

    __hash__ = None

    def __repr__(self):
        return f"Grid(dims={self.dims}, points={self.points}, lengths={self.lengths})"


class FieldState:
    """Spinor field on a grid at one instant; values shape (*points, 4)."""

    __slots__ = ("grid", "time", "values")

    def __init__(self, grid, time, values):
        values = np.asarray(values, dtype=np.complex128)
        if values.shape != (*grid.points, 4):
            raise ValueError(
                f"values shape {values.shape} does not match grid {grid.points}"
            )
        self.grid = grid
        self.time = float(time)
        self.values = values

    def copy(self):
        return FieldState(self.grid, self.time, self.values.copy())


class PotentialSpec:
    """Background covector potential a_mu: zero, constant, or a sine
    profile on one component along one grid axis."""

    __slots__ = ("kind", "values", "component", "axis", "amplitude", "k_index")

    def __init__(self, kind, values=None, component=None, axis=None,
                 amplitude=None, k_index=None):
        if kind not in ("zero", "constant", "axis_sine"):
            raise ValueError(f"unknown potential kind {kind!r}")
        if kind == "constant":
            values = tuple(float(v) for v in values)
            if len(values) != 4:
                raise ValueError("constant potential needs four components")
        if kind == "axis_sine":
            component = int(component)
            axis = int(axis)
            amplitude = float(amplitude)
            k_index = int(k_index)
            if component not in (0, 1, 2, 3):
                raise ValueError("potential component must be 0..3")
        self.kind = kind
        self.values = values
        self.component = component
        self.axis = axis
        self.amplitude = amplitude
        self.k_index = k_index

    @classmethod
    def zero(cls):
        return cls("zero")

    @classmethod
    def constant(cls, values):
        return cls("constant", values=values)

    @classmethod
    def axis_sine(cls, axis, amplitude, k_index, component):
        return cls("axis_sine", component=component, axis=axis,
                   amplitude=amplitude, k_index=k_index)

    def text(self):
        if self.kind == "zero":
            return "zero"
        if self.kind == "constant":
            return "constant " + " ".join(repr(v) for v in self.values)
        return (f"axis_sine {self.axis} {self.amplitude!r} "
                f"{self.k_index} {self.component}")

    def __eq__(self, other):
        if not isinstance(other, PotentialSpec):
            return NotImplemented
        return self.text() == other.text()

    __hash__ = None

    def __repr__(self):
        return f"PotentialSpec({self.text()!r})"


def parse_potential_spec(tokens) -> PotentialSpec:
    """Parse ``zero``, ``constant a0 a1 a2 a3``, or
    ``axis_sine <axis> <amplitude> <k-index> <component>``."""
    if isinstance(tokens, str):
        tokens = tokens.split()
    if not tokens:
        raise ValueError("empty potential spec")
    head, rest = tokens[0], tokens[1:]
    if head == "zero":
        if rest:
            raise ValueError("zero takes no arguments")
        return PotentialSpec.zero()
    if head == "constant":
        if len(rest) != 4:
            raise ValueError("constant takes four components")
        return PotentialSpec.constant([float(v) for v in rest])
    if head == "axis_sine":
        if len(rest) != 4:
            raise ValueError("axis_sine takes axis, amplitude, k-index, component")
        return PotentialSpec.axis_sine(
            int(rest[0]), float(rest[1]), int(rest[2]), int(rest[3])
        )
    raise ValueError(f"unknown potential spec {head!r}")


def sample_potential(pot, grid):
    """a_mu on the lattice: a list of four scalars or point-shaped arrays.

    Accepts a PotentialSpec, None (zero), or an already-sampled list of
    four components (passed through unchanged).
    """
    if isinstance(pot, (list, tuple)):
        if len(pot) != 4:
            raise ValueError("sampled potential needs four components")
        return list(pot)
    if pot is None or pot.kind == "zero":
        return [0.0, 0.0, 0.0, 0.0]
    if pot.kind == "constant":
        return list(pot.values)
    out = [0.0, 0.0, 0.0, 0.0]
    x = grid.open_coordinates()[pot.axis]
    k = 2.0 * np.pi * pot.k_index / grid.lengths[pot.axis]
    profile = pot.amplitude * np.sin(k * x)
    out[pot.component] = np.broadcast_to(profile, grid.points)
    return out


def potential_callables(pot, grid=None):
    """a_mu as four functions of the spacetime point x = (x0, x1, x2, x3)."""
    if pot is None or pot.kind == "zero":
        return tuple((lambda x: 0.0) for _ in range(4))
    if pot.kind == "constant":
        return tuple((lambda x, v=v: v) for v in pot.values)
    if grid is None:
        raise ValueError("axis_sine potential needs a grid for its wavelength")
    k = 2.0 * np.pi * pot.k_index / grid.lengths[pot.axis]
    coord = grid.physical_axis(pot.axis)
    amp = pot.amplitude
    funcs = []
    for mu in range(4):
        if mu == pot.component:
            funcs.append(lambda x, k=k, c=coord, A=amp: A * math.sin(k * x[c]))
        else:
            funcs.append(lambda x: 0.0)
    return tuple(funcs)


class AnalyticSolution:
    """A closed-form field: value plus its four exact partial derivatives.

    ``value(x)`` and each ``derivs[mu](x)`` take a spacetime point
    (4-array) and return a 4-spinor.  ``potential`` is an optional tuple of
    four callables a_mu(x) that travels with the solution under
    transformations.
    """

    __slots__ = ("value", "derivs", "potential")

    def __init__(self, value, derivs, potential=None):
        if len(derivs) != 4:
            raise ValueError("need exactly four partial derivatives")
        self.value = value
        self.derivs = tuple(derivs)
        self.potential = None if potential is None else tuple(potential)


# ---------------------------------------------------------------------------
# discrete derivatives and the evolution right-hand side
# ---------------------------------------------------------------------------

def spatial_derivative(values, grid, axis, method):
    if method == "spectral":
        spec = np.fft.fft(values, axis=axis)
        spec *= grid.ik(axis)
        return np.fft.ifft(spec, axis=axis)
    dx = grid.dx[axis]
    if method == "central2":
        return (np.roll(values, -1, axis) - np.roll(values, 1, axis)) / (2.0 * dx)
    if method == "central4":
        return (
            8.0 * (np.roll(values, -1, axis) - np.roll(values, 1, axis))
            - (np.roll(values, -2, axis) - np.roll(values, 2, axis))
        ) / (12.0 * dx)
    raise ValueError(f"unknown derivative method {method!r}")


def _check_finite(values, grid):
    finite = np.isfinite(values)
    if not finite.all():
        idx = tuple(int(v) for v in np.argwhere(~finite)[0][: grid.dims])
        raise IntegrationFault(f"non-finite field value at grid index {idx}", idx)


def rhs(state, pot, spec, method="spectral"):
    """d_t psi over the whole grid."""
    grid = state.grid
    v = state.values
    _check_finite(v, grid)
    out = np.zeros_like(v)
    for axis, mu in enumerate(grid.spatial_gamma_indices()):
        out += spatial_derivative(v, grid, axis, method) @ _NEG_G0G_T[mu]
    a = sample_potential(pot, grid)
    for mu in range(4):
        a_mu = a[mu]
        if isinstance(a_mu, np.ndarray):
            out += (1j * a_mu[..., None]) * (v @ _G0G_T[mu])
        elif a_mu != 0.0:
            out += (1j * float(a_mu)) * (v @ _G0G_T[mu])
    out -= 1j * (mass_term(spec, v) @ G0_F)
    return out


def step_rk4(state, pot, spec, dt, method="spectral"):
    """One classical Runge-Kutta step; raises on blowup."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    v = state.values
    k1 = rhs(state, pot, spec, method)
    g = state.grid
    k2 = rhs(FieldState(g, state.time + 0.5 * dt, v + (0.5 * dt) * k1), pot, spec, method)
    k3 = rhs(FieldState(g, state.time + 0.5 * dt, v + (0.5 * dt) * k2), pot, spec, method)
    k4 = rhs(FieldState(g, state.time + dt, v + dt * k3), pot, spec, method)
    new = v + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
    finite = np.isfinite(new)
    if not finite.all() or np.max(np.abs(new)) > 1e12:
        raise StabilityFault(
            f"field blew up at t = {state.time + dt:.6g}",
            time=state.time + dt,
        )
    return FieldState(g, state.time + dt, new)


def stability_bound(state, pot, spec):
    """Largest safe RK4 step: 2.5 / (pi/dx_min + m_eff + max|a|)."""
    grid = state.grid
    v = state.values
    norms = np.sqrt(np.sum(np.abs(v) ** 2, axis=-1))
    t_norms = np.sqrt(np.sum(np.abs(mass_term(spec, v)) ** 2, axis=-1))
    mask = norms > 1e-300
    m_eff = float(np.max(t_norms[mask] / norms[mask])) if mask.any() else 0.0
    a_max = 0.0
    for a_mu in sample_potential(pot, grid):
        a_max = max(a_max, float(np.max(np.abs(a_mu))))
    return 2.5 / (np.pi / min(grid.dx) + m_eff + a_max)


# ---------------------------------------------------------------------------
# initial conditions and exact solutions
# ---------------------------------------------------------------------------

def _momentum_vector(grid, p):
    """Normalize momentum input to per-axis components; check commensurability."""
    if np.isscalar(p):
        if grid.dims != 1:
            raise ValueError("3D grids need a 3-component momentum")
        p = [p]
    p = [float(c) for c in p]
    if len(p) != grid.dims:
        raise ValueError(f"momentum needs {grid.dims} components")
    for c, l in zip(p, grid.lengths):
        idx = c * l / (2.0 * np.pi)
        if abs(idx - round(idx)) > 1e-9:
            raise ValueError(
                f"momentum component {c} is not a multiple of 2*pi/L = {2*np.pi/l}"
            )
    return p


def _plane_wave_spinor(q_low, m, base_index):
    """w = (gamma^mu q_mu + m) e_base and its squared norm."""
    gam = gammas(exact=False)
    slash = sum(q_low[mu] * gam[mu].a for mu in range(4))
    w = (slash + m * np.eye(4))[:, base_index].copy()
    return w, float(np.real(np.vdot(w, w)))


def _resolve_plane_wave(grid_dims, p, m, branch, base=None):
    """Common plane-wave setup: returns (w normalized, q lowered 4-vector)."""
    if m < 0:
        raise ValueError("mass must be nonnegative")
    # embed the grid momentum into spacetime components (x1, x2, x3)
    if grid_dims == 1:
        p3 = [0.0, 0.0, p[0]]
    else:
        p3 = list(p)
    e = math.sqrt(sum(c * c for c in p3) + m * m)
    if e == 0.0:
        raise ValueError("plane wave needs (p, m) != (0, 0)")
    if branch == "positive":
        q = [e, *p3]
        base_index = 0 if base is None else base
    elif branch == "negative":
        q = [-e, *(-c for c in p3)]
        base_index = 2 if base is None else base
    else:
        raise ValueError(f"branch must be positive or negative, got {branch!r}")
    q_low = np.array([q[0], -q[1], -q[2], -q[3]])
    w, n2 = _plane_wave_spinor(q_low, m, base_index)
    if n2 < 1e-12 * (1.0 + e * e):
        other = {0: 2, 2: 0}.get(base_index, 0)
        raise ValueError(
            f"degenerate projector for base spinor e_{base_index + 1}; "
            f"try base spinor e_{other + 1}"
        )
    w = w / math.sqrt(n2)
    return w, q_low


def make_plane_wave(grid, p, m, branch="positive", time=0.0, base=None):
    """Normalized plane-wave FieldState (psi^dagger psi = 1 per point)."""
    p = _momentum_vector(grid, p)
    w, q_low = _resolve_plane_wave(grid.dims, p, m, branch, base)
    coords = grid.open_coordinates()
    # q.x = q^0 t - qvec . xvec; spatial q components are -q_low[1:]
    phase_arg = -q_low[0] * time
    for axis in range(grid.dims):
        mu = grid.physical_axis(axis)
        phase_arg = phase_arg - q_low[mu] * coords[axis]
    phase = np.exp(1j * np.broadcast_to(phase_arg, grid.points))
    values = phase[..., None] * w
    return FieldState(grid, time, values)


def plane_wave_solution(p3, m, branch="positive", base=None, potential=None):
    """Continuum plane wave as an AnalyticSolution; p3 has 3 components."""
    p3 = [float(c) for c in p3]
    w, q_low = _resolve_plane_wave(3, p3, m, branch, base)

    def value(x, w=w, q=q_low):
        # q.x with lowered q against raised x is q_mu x^mu
        return w * np.exp(-1j * (q @ np.asarray(x, dtype=float)))

    derivs = tuple(
        (lambda x, mu=mu, w=w, q=q_low:
         (-1j * q[mu]) * w * np.exp(-1j * (q @ np.asarray(x, dtype=float))))
        for mu in range(4)
    )
    return AnalyticSolution(value, derivs, potential)


def homogeneous_effective_mass(spec: NonlinearitySpec, c):
    """Phase-rotation frequency of psi(t) = c e^{-i w t} e_1, when one exists."""
    c = float(c)
    if spec.kind == "dirac_mass":
        return spec.m
    if spec.kind == "heisenberg":
        return 2.0 * c * c
    w = apply_function(spec.function, NElement(c * c, 0.0))
    if abs(w.beta) > 1e-12 * (1.0 + abs(w.alpha)):
        raise ValueError(
            "F(Z) has a pseudoscalar part on this data; no pure phase rotation"
        )
    return w.alpha


def homogeneous_state(grid, c, time=0.0):
    """Spatially constant initial data c * e_1."""
    values = np.zeros((*grid.points, 4), dtype=np.complex128)
    values[..., 0] = c
    return FieldState(grid, time, values)


def homogeneous_solution(spec, c, potential=None):
    """Exact phase-rotation solution for spatially constant data c * e_1."""
    m_eff = homogeneous_effective_mass(spec, c)
    base = np.zeros(4, dtype=np.complex128)
    base[0] = c

    def value(x, b=base, w=m_eff):
        return b * np.exp(-1j * w * x[0])

    def d0(x, b=base, w=m_eff):
        return (-1j * w) * b * np.exp(-1j * w * x[0])

    zero = lambda x: np.zeros(4, dtype=np.complex128)
    return AnalyticSolution(value, (d0, zero, zero, zero), potential)


def gaussian_state(grid, width=1.0, momentum_index=0, center=None, base=0,
                   time=0.0):
    """Gaussian envelope times a plane-wave phase on one base spinor.

    The envelope uses the minimum-image distance to the center, and the
    phase momentum 2*pi*momentum_index/L runs along the last grid axis.
    """
    if width <= 0:
        raise ValueError("width must be positive")
    if center is None:
        center = [l / 2.0 for l in grid.lengths]
    elif np.isscalar(center):
        center = [float(center)] * grid.dims
    coords = grid.open_coordinates()
    dist_sq = 0.0
    for axis in range(grid.dims):
        d = coords[axis] - center[axis]
        l = grid.lengths[axis]
        d = d - l * np.round(d / l)  # minimum image
        dist_sq = dist_sq + d * d
    envelope = np.exp(-dist_sq / (2.0 * width * width))
    axis = grid.dims - 1
    k = 2.0 * np.pi * momentum_index / grid.lengths[axis]
    phase = np.exp(1j * k * coords[axis])
    values = np.zeros((*grid.points, 4), dtype=np.complex128)
    values[..., base] = np.broadcast_to(envelope * phase, grid.points)
    return FieldState(grid, time, values)


def sample_solution(sol: AnalyticSolution, grid, time=0.0) -> FieldState:
    """Evaluate an analytic solution on the lattice at one instant."""
    values = np.empty((*grid.points, 4), dtype=np.complex128)
    coords = [grid.axis_coordinates(axis) for axis in range(grid.dims)]
    x = np.zeros(4)
    x[0] = time
    for idx in np.ndindex(*grid.points):
        for axis in range(grid.dims):
            x[grid.physical_axis(axis)] = coords[axis][idx[axis]]
        values[idx] = sol.value(x)
    return FieldState(grid, time, values)


# ---------------------------------------------------------------------------
# diagnostics
# ---------------------------------------------------------------------------

def pairwise_sum(values):
    """Fixed-order pairwise reduction; deterministic for any thread count."""
    buf = np.asarray(values, dtype=np.float64).ravel().copy()
    n = buf.size
    if n == 0:
        return 0.0
    while n > 1:
        half = n // 2
        buf[:half] = buf[0 : 2 * half : 2] + buf[1 : 2 * half : 2]
        if n % 2:
            buf[half] = buf[n - 1]
            n = half + 1
        else:
            n = half
    return float(buf[0])


def total_charge(state: FieldState) -> float:
    """Q = sum over points of psi^dagger psi times the cell volume."""
    return pairwise_sum(field_j0(state.values)) * state.grid.cell_volume


def bilinear_integrals(state: FieldState):
    """Grid integrals of psibar psi and psibar I psi."""
    from .clifford import field_bilinears

    s, p = field_bilinears(state.values)
    vol = state.grid.cell_volume
    return pairwise_sum(s) * vol, pairwise_sum(p) * vol


def charge_series(states):
    """(t, Q) pairs for an iterable of FieldStates."""
    return [(st.time, total_charge(st)) for st in states]


def measure_frequency(series, dt=None, times=None):
    """Oscillation frequency of one complex component series.

    Least-squares slope of the unwrapped phase against time; returns the
    magnitude.  The component must stay clear of zero or the phase is
    meaningless.
    """
    series = np.asarray(series, dtype=np.complex128)
    if series.ndim != 1 or series.size < 2:
        raise ValueError("need a 1D series with at least two samples")
    if times is None:
        if dt is None:
            raise ValueError("pass dt or times")
        times = np.arange(series.size) * float(dt)
    amp_min = float(np.min(np.abs(series)))
    if amp_min < 1e-6:
        raise AmplitudeCollapseError(
            f"probe amplitude fell to {amp_min:.3e}; frequency fit unusable"
        )
    phase = np.unwrap(np.angle(series))
    slope = np.polyfit(times, phase, 1)[0]
    return float(abs(slope))


def residual_norm(sol: AnalyticSolution, pot, spec, points, grid=None):
    """Max norm of the equation's left-hand side over sample points.

    ``pot`` may be None (use the potential attached to the solution, or
    zero), a PotentialSpec, or a tuple of four callables.
    """
    if pot is None:
        a_funcs = sol.potential or potential_callables(None)
    elif isinstance(pot, PotentialSpec):
        a_funcs = potential_callables(pot, grid)
    else:
        a_funcs = tuple(pot)
    worst = 0.0
    for x in points:
        x = np.asarray(x, dtype=float)
        psi = sol.value(x)
        dpsi = np.stack([sol.derivs[mu](x) for mu in range(4)])
        a = np.array([float(f(x)) for f in a_funcs])
        r = equation_lhs(spec, psi, dpsi, a)
        worst = max(worst, float(np.linalg.norm(r)))
    return worst


def lattice_residual(prev: FieldState, mid: FieldState, nxt: FieldState,
                     pot, spec, method="spectral"):
    """Equation residual on the lattice with a centered time derivative."""
    span = nxt.time - prev.time
    if span <= 0:
        raise ValueError("states must be time-ordered")
    dtpsi = (nxt.values - prev.values) / span
    return residual_from_dtpsi(mid, dtpsi, pot, spec, method)


def residual_from_dtpsi(mid: FieldState, dtpsi, pot, spec, method="spectral"):
    """Residual given an externally supplied time derivative.

    The left-hand side equals i gamma^0 (dtpsi - rhs), since rhs is the
    equation solved for the time derivative.
    """
    diff = dtpsi - rhs(mid, pot, spec, method)
    r = 1j * (diff @ G0_F)  # gamma^0 is symmetric
    norms = np.sqrt(np.sum(np.abs(r) ** 2, axis=-1))
    return float(np.max(norms))
