"""The commutative subalgebra N = {alpha*1 + beta*I} and function lifting.

N is isomorphic to the complex plane through alpha + i*beta, so a scalar
function f of one complex variable lifts to F on N by acting on the
isomorphic image.  Everything here works for exact rational components as
well as floats; nothing forces a backend.
"""

from __future__ import annotations

import re
from fractions import Fraction

import numpy as np

from .clifford import FLOAT_TOL, Matrix4C, bilinear_invariants, pseudoscalar
from .errors import SubalgebraError
from .exact import gq


class NElement:
    """alpha*1 + beta*I with real alpha, beta."""

    __slots__ = ("alpha", "beta")

    def __init__(self, alpha, beta):
        self.alpha = alpha
        self.beta = beta

    def __iter__(self):
        yield self.alpha
        yield self.beta

    def __eq__(self, other):
        if not isinstance(other, NElement):
            return NotImplemented
        return self.alpha == other.alpha and self.beta == other.beta

    __hash__ = None

    def __repr__(self):
        return f"NElement({self.alpha}, {self.beta})"


def n_add(a: NElement, b: NElement) -> NElement:
    return NElement(a.alpha + b.alpha, a.beta + b.beta)


def n_mul(a: NElement, b: NElement) -> NElement:
    # the product law of N is complex multiplication in disguise
    return NElement(
        a.alpha * b.alpha - a.beta * b.beta,
        a.alpha * b.beta + a.beta * b.alpha,
    )


def n_conj(a: NElement) -> NElement:
    return NElement(a.alpha, -a.beta)


def n_modsq(a: NElement):
    return a.alpha * a.alpha + a.beta * a.beta


def compute_Z(psi) -> NElement:
    """Z = (psibar psi) 1 - (psibar I psi) I for a single spinor."""
    s, p = bilinear_invariants(psi)
    return NElement(s, -p)


def to_matrix(Z: NElement, exact=True) -> Matrix4C:
    one = Matrix4C.identity(exact)
    return one.scaled(Z.alpha) + pseudoscalar(exact).scaled(Z.beta)


def from_matrix(M: Matrix4C) -> NElement:
    """Invert to_matrix; reject matrices outside N.

    alpha sits in the (1,1) entry and beta in the (1,3) entry (times -i),
    so solve from those and demand exact (or tolerance-level)
    reconstruction with real coefficients.
    """
    a_c = M[0, 0]
    # entry (1,3) of alpha*1 + beta*I is -i*beta
    if M.exact:
        b_c = M[0, 2] * gq(0, 1)
        if a_c.im != 0 or b_c.im != 0:
            raise SubalgebraError("solved coefficients are not real")
        cand = NElement(a_c.re, b_c.re)
        if not (M - to_matrix(cand, exact=True)).is_zero():
            raise SubalgebraError("matrix has a component outside span{1, I}")
        return cand
    a_c = complex(a_c)
    b_c = complex(M[0, 2]) * 1j
    scale = max(1.0, float(np.max(np.abs(M.a))))
    if abs(a_c.imag) > FLOAT_TOL * scale or abs(b_c.imag) > FLOAT_TOL * scale:
        raise SubalgebraError("solved coefficients are not real")
    cand = NElement(a_c.real, b_c.real)
    resid = M.a - to_matrix(cand, exact=False).a
    if float(np.max(np.abs(resid))) > FLOAT_TOL * scale:
        raise SubalgebraError("matrix has a component outside span{1, I}")
    return cand


class FunctionSpec:
    """A scalar function f : C -> C in one of three shapes.

    kind is one of "constant" (value m), "identity" (f(z) = z), or "poly"
    (complex coefficients, ascending powers of z).
    """

    __slots__ = ("kind", "m", "coeffs")

    def __init__(self, kind, m=None, coeffs=None):
        if kind not in ("constant", "identity", "poly"):
            raise ValueError(f"unknown function kind {kind!r}")
        if kind == "constant" and m is None:
            raise ValueError("constant spec needs a value")
        if kind == "poly":
            if not coeffs:
                raise ValueError("poly spec needs at least one coefficient")
            coeffs = tuple((re, im) for re, im in coeffs)
        self.kind = kind
        self.m = m
        self.coeffs = coeffs

    @classmethod
    def constant(cls, m):
        return cls("constant", m=m)

    @classmethod
    def identity_Z(cls):
        return cls("identity")

    @classmethod
    def poly(cls, coeffs):
        return cls("poly", coeffs=coeffs)

    def has_real_coefficients(self) -> bool:
        if self.kind == "poly":
            return all(im == 0 for _, im in self.coeffs)
        return True

    def __eq__(self, other):
        if not isinstance(other, FunctionSpec):
            return NotImplemented
        return (self.kind, self.m, self.coeffs) == (other.kind, other.m, other.coeffs)

    __hash__ = None

    def __repr__(self):
        return f"FunctionSpec({self.text()!r})"

    def text(self) -> str:
        """Round-trippable config form."""
        if self.kind == "constant":
            return f"constant {self.m!r}"
        if self.kind == "identity":
            return "identity_Z"
        parts = " ".join(_format_complex(re, im) for re, im in self.coeffs)
        return f"poly {parts}"


def apply_function(spec: FunctionSpec, Z: NElement) -> NElement:
    """Lift f through N ~ C: map Z to z, apply f, map back."""
    if spec.kind == "constant":
        return NElement(spec.m, 0 * Z.beta)
    if spec.kind == "identity":
        return NElement(Z.alpha, Z.beta)
    # Horner in N; coefficients (re, im) enter as re*1 + im*I
    acc = NElement(spec.coeffs[-1][0], spec.coeffs[-1][1])
    for re_c, im_c in reversed(spec.coeffs[:-1]):
        acc = n_add(n_mul(acc, Z), NElement(re_c, im_c))
    return acc


def apply_function_arrays(spec: FunctionSpec, alpha, beta):
    """Vectorized lift for float fields: alpha, beta are real ndarrays."""
    if spec.kind == "constant":
        return spec.m, None  # beta identically zero; caller takes the shortcut
    if spec.kind == "identity":
        return alpha, beta
    z = alpha + 1j * beta
    w = np.zeros_like(z)
    for re_c, im_c in reversed(spec.coeffs):
        w = w * z + complex(re_c, im_c)
    return w.real, w.imag


_NUM = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX_RE = re.compile(rf"^({_NUM})({_NUM})i$")
_REAL_RE = re.compile(rf"^{_NUM}$")


def _parse_complex_pair(token: str):
    """Parse ``a+bi`` (or a bare real) into an (a, b) float pair."""
    m = _COMPLEX_RE.match(token)
    if m:
        return float(m.group(1)), float(m.group(2))
    if _REAL_RE.match(token):
        return float(token), 0.0
    raise ValueError(f"bad complex literal {token!r} (expected a+bi)")


def _format_complex(re_c, im_c) -> str:
    sign = "+" if im_c >= 0 else "-"
    return f"{re_c!r}{sign}{abs(im_c)!r}i"


def parse_function_spec(tokens) -> FunctionSpec:
    """Parse the textual FunctionSpec forms used in config files.

    Accepted: ``constant 1.0``, ``identity_Z``, ``poly 0+0i 1+0i``.
    """
    if isinstance(tokens, str):
        tokens = tokens.split()
    if not tokens:
        raise ValueError("empty function spec")
    head, rest = tokens[0], tokens[1:]
    if head == "constant":
        if len(rest) != 1:
            raise ValueError("constant takes exactly one value")
        return FunctionSpec.constant(float(rest[0]))
    if head == "identity_Z":
        if rest:
            raise ValueError("identity_Z takes no arguments")
        return FunctionSpec.identity_Z()
    if head == "poly":
        if not rest:
            raise ValueError("poly needs coefficients")
        return FunctionSpec.poly([_parse_complex_pair(t) for t in rest])
    raise ValueError(f"unknown function spec {head!r}")
