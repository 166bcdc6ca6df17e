"""Spin group elements, the double-cover map, and solution transformations.

A LorentzPair couples S (acting on spinor indices) with the induced real
matrix P (acting on coordinates) through S^-1 gamma^mu S = P[mu][nu] gamma^nu.
Solutions transform as psi'(x) = S psi(P^-1 x); gauge transformations
multiply by a phase e^{i lambda(x)} and shift the potential by the
gradient of lambda.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .clifford import ETA, FLOAT_TOL, GAMMA_F, Matrix4C, gamma, gammas
from .dynamics import (
    AnalyticSolution,
    FieldState,
    sample_potential,
)
from .errors import NotASpinElementError

_ETA_F = np.diag([1.0, -1.0, -1.0, -1.0])


class LorentzPair:
    """(S, P) with S in Spin (or the parity element of Pin) and P the
    induced Lorentz matrix."""

    __slots__ = ("S", "P")

    def __init__(self, S: Matrix4C, P):
        self.S = S
        self.P = P

    def __repr__(self):
        return f"LorentzPair(S=..., P=\n{self.P})"


def spin_to_lorentz(S: Matrix4C):
    """P[mu][nu] = 1/4 trace(S^-1 gamma^mu S gamma_nu).

    Exact matrices give an exact P (Fraction entries); float matrices give
    a float P.  Raises when the traces fail to be real or P fails the
    Lorentz condition P^T eta P = eta.
    """
    if S.exact:
        s_inv = S.inv()
        gam = gammas(exact=True)
        quarter = Fraction(1, 4)
        P = np.empty((4, 4), dtype=object)
        for mu in range(4):
            left = s_inv @ gam[mu] @ S
            for nu in range(4):
                tr = (left @ gam[nu]).trace() * ETA[nu]
                if tr.im != 0:
                    raise NotASpinElementError(
                        f"trace at ({mu},{nu}) has imaginary part {tr.im}"
                    )
                P[mu, nu] = tr.re * quarter
        # Lorentz condition, exactly
        for al in range(4):
            for be in range(4):
                val = sum(P[mu, al] * ETA[mu] * P[mu, be] for mu in range(4))
                if val != (ETA[al] if al == be else 0):
                    raise NotASpinElementError("P^T eta P != eta on exact backend")
        return P
    a = S.a
    s_inv = np.linalg.inv(a)
    scale = max(1.0, float(np.max(np.abs(a))) ** 2)
    P = np.empty((4, 4), dtype=np.float64)
    for mu in range(4):
        left = s_inv @ GAMMA_F[mu] @ a
        for nu in range(4):
            tr = 0.25 * ETA[nu] * np.trace(left @ GAMMA_F[nu])
            if abs(tr.imag) > FLOAT_TOL * scale:
                raise NotASpinElementError(
                    f"trace at ({mu},{nu}) has imaginary part {tr.imag:.3e}"
                )
            P[mu, nu] = tr.real
    defect = np.max(np.abs(P.T @ _ETA_F @ P - _ETA_F))
    if defect > 1e-10 * scale:
        raise NotASpinElementError(f"P^T eta P deviates by {defect:.3e}")
    return P


def lorentz_pair(S: Matrix4C) -> LorentzPair:
    return LorentzPair(S, spin_to_lorentz(S))


def spin_from_plane(a: int, b: int, theta: float) -> LorentzPair:
    """S = exp(theta/2 gamma^a gamma^b) in closed form, with its P.

    (gamma^a gamma^b)^2 = -eta^aa eta^bb for a != b, so the exponential
    collapses to cos/sin for spatial planes and cosh/sinh for mixed
    (boost) planes.  theta is the rotation angle or the rapidity.
    """
    if a == b:
        raise ValueError("plane needs two distinct indices")
    if a not in (0, 1, 2, 3) or b not in (0, 1, 2, 3):
        raise IndexError("plane indices must be 0..3")
    B = GAMMA_F[a] @ GAMMA_F[b]
    square_sign = -ETA[a] * ETA[b]
    half = 0.5 * theta
    if square_sign < 0:
        S = math.cos(half) * np.eye(4) + math.sin(half) * B
    else:
        S = math.cosh(half) * np.eye(4) + math.sinh(half) * B
    S = Matrix4C(S, exact=False)
    return lorentz_pair(S)


def parity_pair(exact=False) -> LorentzPair:
    """The Pin representative S = gamma^0, P = diag(1, -1, -1, -1)."""
    S = gamma(0, exact)
    return LorentzPair(S, spin_to_lorentz(S))


def transform_solution(sol: AnalyticSolution, lp: LorentzPair) -> AnalyticSolution:
    """psi'(x) = S psi(P^-1 x), derivatives by the chain rule, potential
    pulled back as a covector."""
    S = lp.S.to_complex().a
    P = np.asarray(lp.P, dtype=np.float64)
    p_inv = np.linalg.inv(P)

    def value(x, S=S, p_inv=p_inv, f=sol.value):
        return S @ f(p_inv @ np.asarray(x, dtype=float))

    def make_deriv(mu):
        def deriv(x, S=S, p_inv=p_inv, derivs=sol.derivs, mu=mu):
            y = p_inv @ np.asarray(x, dtype=float)
            acc = np.zeros(4, dtype=np.complex128)
            for nu in range(4):
                c = p_inv[nu, mu]
                if c != 0.0:
                    acc += c * derivs[nu](y)
            return S @ acc

        return deriv

    potential = None
    if sol.potential is not None:
        def make_pot(mu):
            def a_mu(x, p_inv=p_inv, pots=sol.potential, mu=mu):
                y = p_inv @ np.asarray(x, dtype=float)
                return sum(p_inv[nu, mu] * pots[nu](y) for nu in range(4))

            return a_mu

        potential = tuple(make_pot(mu) for mu in range(4))
    return AnalyticSolution(value, tuple(make_deriv(mu) for mu in range(4)), potential)


class GaugeFunction:
    """lambda : R^{1,3} -> R in one of three shapes: constant, linear
    (lambda = k.x componentwise), or a sine along one grid axis."""

    __slots__ = ("kind", "value", "k", "axis", "amplitude", "k_index")

    def __init__(self, kind, value=None, k=None, axis=None, amplitude=None,
                 k_index=None):
        if kind not in ("constant", "linear", "sine"):
            raise ValueError(f"unknown gauge function {kind!r}")
        if kind == "constant":
            value = float(value)
        if kind == "linear":
            k = tuple(float(c) for c in k)
            if len(k) != 4:
                raise ValueError("linear gauge needs a 4-vector")
        if kind == "sine":
            axis = int(axis)
            amplitude = float(amplitude)
            k_index = int(k_index)
        self.kind = kind
        self.value = value
        self.k = k
        self.axis = axis
        self.amplitude = amplitude
        self.k_index = k_index

    @classmethod
    def constant(cls, value):
        return cls("constant", value=value)

    @classmethod
    def linear(cls, k):
        return cls("linear", k=k)

    @classmethod
    def sine(cls, axis, amplitude, k_index):
        return cls("sine", axis=axis, amplitude=amplitude, k_index=k_index)

    def text(self):
        if self.kind == "constant":
            return f"constant {self.value!r}"
        if self.kind == "linear":
            return "linear " + " ".join(repr(c) for c in self.k)
        return f"sine {self.axis} {self.amplitude!r} {self.k_index}"

    def __repr__(self):
        return f"GaugeFunction({self.text()!r})"

    def callables(self, grid=None):
        """(lambda(x), tuple of d_mu lambda(x)) as functions of the
        spacetime point."""
        if self.kind == "constant":
            lam = lambda x, v=self.value: v
            grads = tuple((lambda x: 0.0) for _ in range(4))
            return lam, grads
        if self.kind == "linear":
            kvec = np.asarray(self.k)

            def lam(x, k=kvec):
                return float(k @ np.asarray(x, dtype=float))

            grads = tuple((lambda x, c=c: c) for c in self.k)
            return lam, grads
        if grid is None:
            raise ValueError("sine gauge needs a grid for its wavelength")
        kappa = 2.0 * np.pi * self.k_index / grid.lengths[self.axis]
        coord = grid.physical_axis(self.axis)
        amp = self.amplitude

        def lam(x, kp=kappa, c=coord, A=amp):
            return A * math.sin(kp * x[c])

        def make_grad(mu):
            if mu != coord:
                return lambda x: 0.0
            return lambda x, kp=kappa, c=coord, A=amp: A * kp * math.cos(kp * x[c])

        return lam, tuple(make_grad(mu) for mu in range(4))

    def negated(self):
        """The inverse gauge function (-lambda)."""
        if self.kind == "constant":
            return GaugeFunction.constant(-self.value)
        if self.kind == "linear":
            return GaugeFunction.linear([-c for c in self.k])
        return GaugeFunction.sine(self.axis, -self.amplitude, self.k_index)


def parse_gauge(tokens) -> GaugeFunction:
    """Parse ``constant v``, ``linear k0 k1 k2 k3``, ``sine axis amp k``."""
    if isinstance(tokens, str):
        tokens = tokens.split()
    if not tokens:
        raise ValueError("empty gauge spec")
    head, rest = tokens[0], tokens[1:]
    if head == "constant":
        if len(rest) != 1:
            raise ValueError("constant gauge takes one value")
        return GaugeFunction.constant(float(rest[0]))
    if head == "linear":
        if len(rest) != 4:
            raise ValueError("linear gauge takes four components")
        return GaugeFunction.linear([float(c) for c in rest])
    if head == "sine":
        if len(rest) != 3:
            raise ValueError("sine gauge takes axis, amplitude, k-index")
        return GaugeFunction.sine(int(rest[0]), float(rest[1]), int(rest[2]))
    raise ValueError(f"unknown gauge function {head!r}")


def gauge_transform(target, pot, g: GaugeFunction, grid=None):
    """Apply psi -> e^{i lambda} psi, a_mu -> a_mu + d_mu lambda.

    For a FieldState, returns (FieldState, sampled potential list).  For an
    AnalyticSolution, returns a new solution with the shifted potential
    attached.
    """
    if isinstance(target, AnalyticSolution):
        lam, grads = g.callables(grid)
        if pot is not None and not isinstance(pot, (list, tuple)):
            from .dynamics import potential_callables

            pot = potential_callables(pot, grid)
        if pot is None:
            pot = target.potential
        base = pot if pot is not None else tuple((lambda x: 0.0) for _ in range(4))

        def value(x, f=target.value, lam=lam):
            return np.exp(1j * lam(x)) * f(x)

        def make_deriv(mu):
            def deriv(x, f=target.value, d=target.derivs[mu], lam=lam,
                      dl=grads[mu]):
                return np.exp(1j * lam(x)) * (d(x) + 1j * dl(x) * f(x))

            return deriv

        def make_pot(mu):
            def a_mu(x, base=base[mu], dl=grads[mu]):
                return base(x) + dl(x)

            return a_mu

        return AnalyticSolution(
            value,
            tuple(make_deriv(mu) for mu in range(4)),
            tuple(make_pot(mu) for mu in range(4)),
        )

    if not isinstance(target, FieldState):
        raise TypeError("gauge_transform expects a FieldState or AnalyticSolution")
    grid = target.grid
    lam, grads = g.callables(grid)
    # sample lambda over the lattice at the state's instant
    lam_grid = np.zeros(grid.points)
    if g.kind == "constant":
        lam_grid += g.value
    elif g.kind == "linear":
        lam_grid += g.k[0] * target.time
        for axis in range(grid.dims):
            coord = grid.open_coordinates()[axis]
            c = g.k[grid.physical_axis(axis)]
            if c != 0.0:
                lam_grid = lam_grid + c * coord
    else:
        kappa = 2.0 * np.pi * g.k_index / grid.lengths[g.axis]
        coord = grid.open_coordinates()[g.axis]
        lam_grid = lam_grid + g.amplitude * np.sin(kappa * coord)
    new_values = target.values * np.exp(1j * lam_grid)[..., None]
    new_state = FieldState(grid, target.time, new_values)
    # shift the sampled potential by the gradient of lambda
    shifted = sample_potential(pot, grid)
    if g.kind == "constant":
        pass
    elif g.kind == "linear":
        for mu in range(4):
            shifted[mu] = shifted[mu] + g.k[mu]
    else:
        kappa = 2.0 * np.pi * g.k_index / grid.lengths[g.axis]
        coord = grid.open_coordinates()[g.axis]
        mu = grid.physical_axis(g.axis)
        grad = g.amplitude * kappa * np.cos(kappa * coord)
        shifted[mu] = shifted[mu] + np.broadcast_to(grad, grid.points)
    return new_state, shifted


def parse_transform(text):
    """CLI transform forms: ``rot a b theta``, ``boost k chi``, ``parity``,
    ``gauge <gauge spec>``.  Returns ("lorentz", LorentzPair) or
    ("gauge", GaugeFunction)."""
    tokens = text.split() if isinstance(text, str) else list(text)
    if not tokens:
        raise ValueError("empty transform spec")
    head, rest = tokens[0], tokens[1:]
    if head == "rot":
        if len(rest) != 3:
            raise ValueError("rot takes two axes and an angle")
        a, b = int(rest[0]), int(rest[1])
        if a not in (1, 2, 3) or b not in (1, 2, 3):
            raise ValueError("rotation plane needs two spatial indices")
        return "lorentz", spin_from_plane(a, b, float(rest[2]))
    if head == "boost":
        if len(rest) != 2:
            raise ValueError("boost takes an axis and a rapidity")
        k = int(rest[0])
        if k not in (1, 2, 3):
            raise ValueError("boost axis must be 1..3")
        return "lorentz", spin_from_plane(0, k, float(rest[1]))
    if head == "parity":
        if rest:
            raise ValueError("parity takes no arguments")
        return "lorentz", parity_pair()
    if head == "gauge":
        return "gauge", parse_gauge(rest)
    raise ValueError(f"unknown transform {head!r}")
