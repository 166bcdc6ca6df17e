"""The pluggable mass-term family T(psi).

The field equation is normalized as  i gamma^mu (d_mu psi - i a_mu psi) = T(psi)
with T on the right.  Three variants are supported:

* ``dirac_mass m``     T = m psi                      (linear equation)
* ``f_of_z <fn>``      T = F(Z) psi  with Z from the spinor bilinears
* ``heisenberg``       T = (psibar gamma_mu psi) gamma^mu psi
                          + (psibar gamma_mu I psi) gamma^mu I psi

All mass-term evaluation here is on the float backend and vectorized over
leading axes, so a full grid can be fed at once.
"""

from __future__ import annotations

import numpy as np

from .clifford import (
    ETA,
    GAMMA_F,
    PSEUDO_F,
    dirac_adjoint,
    field_axial,
    field_bilinears,
    field_current,
    gammas,
)
from .errors import UnsupportedLagrangianError
from .nalgebra import FunctionSpec, apply_function_arrays, parse_function_spec

# transposed constant matrices: row-vector form (psi @ M.T) applies M to columns
_GT = np.stack([GAMMA_F[mu].T.copy() for mu in range(4)])
_GIT = np.stack([(GAMMA_F[mu] @ PSEUDO_F).T.copy() for mu in range(4)])
_PSEUDO_T = PSEUDO_F.T.copy()
for _m in (_GT, _GIT, _PSEUDO_T):
    _m.flags.writeable = False


class NonlinearitySpec:
    """Which mass term the field equation carries."""

    __slots__ = ("kind", "m", "function")

    def __init__(self, kind, m=None, function=None):
        if kind not in ("dirac_mass", "f_of_z", "heisenberg"):
            raise ValueError(f"unknown nonlinearity {kind!r}")
        if kind == "dirac_mass":
            m = float(m)
            if not np.isfinite(m):
                raise ValueError("dirac_mass needs a finite mass")
        if kind == "f_of_z" and not isinstance(function, FunctionSpec):
            raise ValueError("f_of_z needs a FunctionSpec")
        self.kind = kind
        self.m = m
        self.function = function

    @classmethod
    def dirac_mass(cls, m):
        return cls("dirac_mass", m=m)

    @classmethod
    def f_of_z(cls, function):
        return cls("f_of_z", function=function)

    @classmethod
    def heisenberg(cls):
        return cls("heisenberg")

    def text(self) -> str:
        if self.kind == "dirac_mass":
            return f"dirac_mass {self.m!r}"
        if self.kind == "f_of_z":
            return f"f_of_z {self.function.text()}"
        return "heisenberg"

    def __eq__(self, other):
        if not isinstance(other, NonlinearitySpec):
            return NotImplemented
        return (self.kind, self.m, self.function) == (
            other.kind,
            other.m,
            other.function,
        )

    __hash__ = None

    def __repr__(self):
        return f"NonlinearitySpec({self.text()!r})"


def parse_nonlinearity_spec(tokens) -> NonlinearitySpec:
    """Parse ``dirac_mass 1.0``, ``f_of_z identity_Z``, ``f_of_z poly ...``,
    or ``heisenberg``."""
    if isinstance(tokens, str):
        tokens = tokens.split()
    if not tokens:
        raise ValueError("empty nonlinearity spec")
    head, rest = tokens[0], tokens[1:]
    if head == "dirac_mass":
        if len(rest) != 1:
            raise ValueError("dirac_mass takes exactly one value")
        return NonlinearitySpec.dirac_mass(float(rest[0]))
    if head == "f_of_z":
        return NonlinearitySpec.f_of_z(parse_function_spec(rest))
    if head == "heisenberg":
        if rest:
            raise ValueError("heisenberg takes no arguments")
        return NonlinearitySpec.heisenberg()
    raise ValueError(f"unknown nonlinearity spec {head!r}")


def mass_term(spec: NonlinearitySpec, psi):
    """T(psi) for a complex128 spinor or spinor field of shape (..., 4)."""
    if spec.kind == "dirac_mass":
        return spec.m * psi
    if spec.kind == "f_of_z":
        s, p = field_bilinears(psi)
        alpha, beta = apply_function_arrays(spec.function, s, -p)
        if beta is None:
            # constant f: same arithmetic as the dirac_mass path, so the
            # two specs agree bit for bit
            return alpha * psi
        return (
            np.asarray(alpha)[..., None] * psi
            + np.asarray(beta)[..., None] * (psi @ _PSEUDO_T)
        )
    # heisenberg cubic
    j = field_current(psi)
    c = field_axial(psi)
    out = np.zeros_like(psi)
    for mu in range(4):
        out += (ETA[mu] * j[..., mu])[..., None] * (psi @ _GT[mu])
        out += (1j * c[..., mu])[..., None] * (psi @ _GIT[mu])
    return out


def _lagrangian_free_adjoint(spec, pb, psi, dpsi, a):
    """Lagrangian density with the adjoint row treated as independent."""
    gam = gammas(exact=False)
    kin = 0j
    for mu in range(4):
        kin += pb @ (gam[mu].a @ (1j * dpsi[mu] + a[mu] * psi))
    if spec.kind == "dirac_mass":
        return kin - spec.m * (pb @ psi)
    if spec.kind == "f_of_z" and spec.function.kind == "identity":
        s = pb @ psi
        p = pb @ (PSEUDO_F @ psi)
        return kin - 0.5 * s * s + 0.5 * p * p
    raise UnsupportedLagrangianError(
        f"no Lagrangian for nonlinearity {spec.text()!r}"
    )


def lagrangian_density(spec, psi, dpsi, a):
    """L at one point: psi (4,), dpsi (4, 4) rows d_mu psi, a real 4-vector."""
    return _lagrangian_free_adjoint(spec, dirac_adjoint(psi), psi, dpsi, a)


def equation_lhs(spec, psi, dpsi, a):
    """i gamma^mu (d_mu psi - i a_mu psi) - T(psi) at one point."""
    gam = gammas(exact=False)
    acc = np.zeros(4, dtype=np.complex128)
    for mu in range(4):
        acc += gam[mu].a @ (1j * dpsi[mu] + a[mu] * psi)
    return acc - mass_term(spec, psi)


def euler_lagrange_residual_check(spec, psi, dpsi, a, h=1e-5):
    """How well the Lagrangian generates the field equation at one point.

    Varies each component of the independent adjoint row by +-h, takes the
    central difference of L, and compares against the corresponding
    component of the equation's left-hand side.  Returns the max absolute
    deviation.  The densities are at most quadratic in each adjoint
    component, so central differences carry no truncation error here.
    """
    if h <= 0:
        raise ValueError("step h must be positive")
    pb0 = dirac_adjoint(psi)
    target = equation_lhs(spec, psi, dpsi, a)
    worst = 0.0
    for comp in range(4):
        step = np.zeros(4, dtype=np.complex128)
        step[comp] = h
        plus = _lagrangian_free_adjoint(spec, pb0 + step, psi, dpsi, a)
        minus = _lagrangian_free_adjoint(spec, pb0 - step, psi, dpsi, a)
        deriv = (plus - minus) / (2.0 * h)
        worst = max(worst, abs(deriv - target[comp]))
    return worst
