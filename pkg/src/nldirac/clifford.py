"""Dirac-representation gamma matrices, the pseudoscalar, and spinor bilinears.

One matrix type, two scalar backends.  The exact backend stores Gaussian
rationals and supports zero-tolerance equality, which is what the algebraic
identity suite runs on.  The float backend stores complex128 and is what the
field solver runs on.  Backends are never mixed inside one matrix.

Index conventions: Greek index mu runs 0..3, metric eta = diag(1,-1,-1,-1).
Lowered gamma_mu = eta_mumu * gamma^mu (no sum).  The Dirac adjoint is the
row psibar = psi^dagger gamma^0.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import BilinearRealityError
from .exact import GaussianRational, gq

ETA = (1, -1, -1, -1)

#: default float comparison tolerance, scaled by entry magnitude
FLOAT_TOL = 1e-12


def _coerce_exact(value) -> GaussianRational:
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, (int, Fraction)):
        return GaussianRational(value)
    raise TypeError(f"exact backend got a {type(value).__name__} entry")


class Matrix4C:
    """4x4 complex matrix over the exact or the float scalar backend."""

    __slots__ = ("a", "exact")

    def __init__(self, entries, exact=None):
        if isinstance(entries, np.ndarray) and exact is None:
            exact = entries.dtype == object
        if exact is None:
            flat = [v for row in entries for v in row]
            exact = all(
                isinstance(v, (GaussianRational, int, Fraction)) for v in flat
            )
        if exact:
            a = np.empty((4, 4), dtype=object)
            for i in range(4):
                for j in range(4):
                    a[i, j] = _coerce_exact(entries[i][j])
        else:
            a = np.array(entries, dtype=np.complex128)
            if a.shape != (4, 4):
                raise ValueError(f"expected 4x4 entries, got shape {a.shape}")
        self.a = a
        self.exact = bool(exact)

    @classmethod
    def _wrap(cls, a, exact):
        out = object.__new__(cls)
        out.a = a
        out.exact = exact
        return out

    @classmethod
    def zero(cls, exact=True):
        if exact:
            return cls([[0] * 4 for _ in range(4)], exact=True)
        return cls._wrap(np.zeros((4, 4), dtype=np.complex128), False)

    @classmethod
    def identity(cls, exact=True):
        if exact:
            return cls([[int(i == j) for j in range(4)] for i in range(4)], True)
        return cls._wrap(np.eye(4, dtype=np.complex128), False)

    def _check_backend(self, other):
        if self.exact != other.exact:
            raise TypeError("cannot mix exact and float matrices")

    def __matmul__(self, other):
        if not isinstance(other, Matrix4C):
            return NotImplemented
        self._check_backend(other)
        return Matrix4C._wrap(self.a @ other.a, self.exact)

    def __add__(self, other):
        if not isinstance(other, Matrix4C):
            return NotImplemented
        self._check_backend(other)
        return Matrix4C._wrap(self.a + other.a, self.exact)

    def __sub__(self, other):
        if not isinstance(other, Matrix4C):
            return NotImplemented
        self._check_backend(other)
        return Matrix4C._wrap(self.a - other.a, self.exact)

    def __neg__(self):
        return Matrix4C._wrap(-self.a, self.exact)

    def scaled(self, s):
        """Scalar multiple; the scalar must match the backend."""
        if self.exact:
            s = s if isinstance(s, GaussianRational) else GaussianRational(s)
            out = np.empty((4, 4), dtype=object)
            for i in range(4):
                for j in range(4):
                    out[i, j] = s * self.a[i, j]
            return Matrix4C._wrap(out, True)
        return Matrix4C._wrap(self.a * complex(s), False)

    def __mul__(self, s):
        return self.scaled(s)

    __rmul__ = __mul__

    def dagger(self):
        """Hermitian conjugate (conjugate transpose)."""
        if self.exact:
            out = np.empty((4, 4), dtype=object)
            for i in range(4):
                for j in range(4):
                    out[i, j] = self.a[j, i].conjugate()
            return Matrix4C._wrap(out, True)
        return Matrix4C._wrap(self.a.conj().T.copy(), False)

    def trace(self):
        t = self.a[0, 0]
        for i in range(1, 4):
            t = t + self.a[i, i]
        return t

    def apply(self, vec):
        """Matrix times column spinor (plain ndarray in, ndarray out)."""
        return self.a @ vec

    def inv(self):
        if not self.exact:
            return Matrix4C._wrap(np.linalg.inv(self.a), False)
        # Gauss-Jordan over Gaussian rationals
        work = [[self.a[i, j] for j in range(4)] for i in range(4)]
        unit = [[gq(int(i == j)) for j in range(4)] for i in range(4)]
        for col in range(4):
            piv = next((r for r in range(col, 4) if work[r][col]), None)
            if piv is None:
                raise ZeroDivisionError("matrix is singular on exact backend")
            work[col], work[piv] = work[piv], work[col]
            unit[col], unit[piv] = unit[piv], unit[col]
            inv_p = 1 / work[col][col]
            work[col] = [inv_p * v for v in work[col]]
            unit[col] = [inv_p * v for v in unit[col]]
            for r in range(4):
                if r == col or not work[r][col]:
                    continue
                factor = work[r][col]
                work[r] = [a - factor * b for a, b in zip(work[r], work[col])]
                unit[r] = [a - factor * b for a, b in zip(unit[r], unit[col])]
        return Matrix4C(unit, exact=True)

    def to_complex(self):
        """Convert to the float backend (identity on float matrices)."""
        if not self.exact:
            return self
        a = np.empty((4, 4), dtype=np.complex128)
        for i in range(4):
            for j in range(4):
                a[i, j] = complex(self.a[i, j])
        return Matrix4C._wrap(a, False)

    def is_zero(self):
        if self.exact:
            return not any(self.a[i, j] for i in range(4) for j in range(4))
        return bool(np.all(self.a == 0))

    def __eq__(self, other):
        if not isinstance(other, Matrix4C):
            return NotImplemented
        if self.exact != other.exact:
            return False
        if self.exact:
            return all(
                self.a[i, j] == other.a[i, j] for i in range(4) for j in range(4)
            )
        return bool(np.array_equal(self.a, other.a))

    __hash__ = None  # mutable payload; not meant for dict keys

    def isclose(self, other, tol=FLOAT_TOL):
        """Entrywise comparison at ``tol`` scaled by the largest entry."""
        a = self.to_complex().a
        b = other.to_complex().a
        scale = max(1.0, float(np.max(np.abs(a))), float(np.max(np.abs(b))))
        return float(np.max(np.abs(a - b))) <= tol * scale

    def __getitem__(self, idx):
        return self.a[idx]

    def __repr__(self):
        tag = "exact" if self.exact else "float"
        rows = "\n ".join(str(list(r)) for r in self.a)
        return f"Matrix4C<{tag}>[\n {rows}\n]"


_I = gq(0, 1)  # exact imaginary unit

_GAMMA_ROWS = (
    # gamma^0
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]],
    # gamma^1
    [[0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0], [-1, 0, 0, 0]],
    # gamma^2
    [[0, 0, 0, -_I], [0, 0, _I, 0], [0, _I, 0, 0], [-_I, 0, 0, 0]],
    # gamma^3
    [[0, 0, 1, 0], [0, 0, 0, -1], [-1, 0, 0, 0], [0, 1, 0, 0]],
)

_GAMMA_EXACT = tuple(Matrix4C(rows, exact=True) for rows in _GAMMA_ROWS)
_PSEUDO_EXACT = (
    _GAMMA_EXACT[0] @ _GAMMA_EXACT[1] @ _GAMMA_EXACT[2] @ _GAMMA_EXACT[3]
)
_GAMMA_FLOAT = tuple(g.to_complex() for g in _GAMMA_EXACT)
_PSEUDO_FLOAT = _PSEUDO_EXACT.to_complex()

for _m in (*_GAMMA_FLOAT, _PSEUDO_FLOAT):
    _m.a.flags.writeable = False


def gamma(mu, exact=True) -> Matrix4C:
    """The Dirac-representation gamma^mu on the requested backend."""
    if mu not in (0, 1, 2, 3):
        raise IndexError(f"gamma index must be 0..3, got {mu}")
    return _GAMMA_EXACT[mu] if exact else _GAMMA_FLOAT[mu]


def gammas(exact=True):
    """All four gamma matrices as a tuple."""
    return _GAMMA_EXACT if exact else _GAMMA_FLOAT


def pseudoscalar(exact=True) -> Matrix4C:
    """I = gamma^0 gamma^1 gamma^2 gamma^3 (squares to -1)."""
    return _PSEUDO_EXACT if exact else _PSEUDO_FLOAT


def gamma_lower(mu, exact=True) -> Matrix4C:
    """gamma_mu = eta_mumu gamma^mu."""
    g = gamma(mu, exact)
    return g if ETA[mu] == 1 else -g


# read-only complex128 constant stacks for the vectorized field paths
GAMMA_F = np.stack([g.a for g in _GAMMA_FLOAT])
G0_F = GAMMA_F[0]
PSEUDO_F = _PSEUDO_FLOAT.a
# psibar gamma^mu psi = psi^* . (gamma^0 gamma^mu) . psi
CURRENT_MATS = np.stack([G0_F @ GAMMA_F[mu] for mu in range(4)])
# Im(psi^* . AXIAL_MATS[mu] . psi) = lowered c_mu
AXIAL_MATS = np.stack(
    [ETA[mu] * (G0_F @ GAMMA_F[mu] @ PSEUDO_F) for mu in range(4)]
)
for _arr in (GAMMA_F, CURRENT_MATS, AXIAL_MATS):
    _arr.flags.writeable = False


def as_exact_spinor(components):
    """Build an exact spinor from ints, Fractions, (re, im) pairs, or
    GaussianRational entries."""
    out = np.empty(4, dtype=object)
    for k, v in enumerate(components):
        if isinstance(v, GaussianRational):
            out[k] = v
        elif isinstance(v, (int, Fraction)):
            out[k] = gq(v)
        elif isinstance(v, tuple) and len(v) == 2:
            out[k] = gq(v[0], v[1])
        else:
            raise TypeError(f"cannot build exact component from {v!r}")
    return out


def basis_spinor(k, exact=False):
    if exact:
        return as_exact_spinor([int(j == k) for j in range(4)])
    e = np.zeros(4, dtype=np.complex128)
    e[k] = 1.0
    return e


def _is_exact_vec(psi) -> bool:
    return isinstance(psi, np.ndarray) and psi.dtype == object


def dirac_adjoint(psi):
    """psibar = psi^dagger gamma^0, returned as a 4-component row."""
    exact = _is_exact_vec(psi)
    g0 = gamma(0, exact).a
    return np.conjugate(psi) @ g0


def _require_real(value, scale, what):
    """Extract the real part, checking the imaginary part vanishes."""
    if isinstance(value, GaussianRational):
        if value.im != 0:
            raise BilinearRealityError(f"{what} has imaginary part {value.im}")
        return value.re
    value = complex(value)
    if abs(value.imag) > FLOAT_TOL * scale:
        raise BilinearRealityError(
            f"{what} has imaginary part {value.imag:.3e} (scale {scale:.3e})"
        )
    return value.real


def _scale_of(psi) -> float:
    if _is_exact_vec(psi):
        return 1.0
    return 1.0 + float(np.sum(np.abs(psi) ** 2))


def bilinear_invariants(psi):
    """(s, p) = (psibar psi, psibar I psi); both are real for any spinor."""
    exact = _is_exact_vec(psi)
    row = dirac_adjoint(psi)
    scale = _scale_of(psi)
    s = _require_real(row @ psi, scale, "psibar psi")
    p = _require_real(row @ (pseudoscalar(exact).a @ psi), scale, "psibar I psi")
    return s, p


def current(psi):
    """Vector current j^mu = psibar gamma^mu psi (4 reals, raised index)."""
    exact = _is_exact_vec(psi)
    row = dirac_adjoint(psi)
    scale = _scale_of(psi)
    return [
        _require_real(row @ (gamma(mu, exact).a @ psi), scale, f"j^{mu}")
        for mu in range(4)
    ]


def axial_current(psi):
    """Lowered components c_mu with psibar gamma_mu I psi = i c_mu.

    The bilinear is purely imaginary for every spinor, so the real list
    c_mu carries all of it.
    """
    exact = _is_exact_vec(psi)
    row = dirac_adjoint(psi)
    scale = _scale_of(psi)
    out = []
    for mu in range(4):
        val = row @ (gamma_lower(mu, exact).a @ (pseudoscalar(exact).a @ psi))
        if exact:
            if val.re != 0:
                raise BilinearRealityError(
                    f"psibar gamma_{mu} I psi has real part {val.re}"
                )
            out.append(val.im)
        else:
            val = complex(val)
            if abs(val.real) > FLOAT_TOL * scale:
                raise BilinearRealityError(
                    f"psibar gamma_{mu} I psi has real part {val.real:.3e}"
                )
            out.append(val.imag)
    return out


def su22_member(X: Matrix4C) -> bool:
    """Membership in su(2,2) with respect to the form gamma^0:
    X^dagger gamma^0 + gamma^0 X = 0 and trace X = 0."""
    g0 = gamma(0, X.exact)
    cond = X.dagger() @ g0 + g0 @ X
    tr = X.trace()
    if X.exact:
        return cond.is_zero() and not tr
    scale = max(1.0, float(np.max(np.abs(X.a))))
    return (
        float(np.max(np.abs(cond.a))) <= FLOAT_TOL * scale
        and abs(complex(tr)) <= FLOAT_TOL * scale
    )


# ---------------------------------------------------------------------------
# vectorized bilinears for complex128 fields of shape (..., 4)
# ---------------------------------------------------------------------------

def field_adjoint(values):
    """Rowwise Dirac adjoint of a spinor field, shape-preserving."""
    return values.conj() @ G0_F


def field_bilinears(values, check=True):
    """Pointwise (s, p) arrays for a complex128 spinor field."""
    pb = field_adjoint(values)
    s = np.einsum("...a,...a->...", pb, values)
    p = np.einsum("...a,...a->...", pb @ PSEUDO_F, values)
    if check:
        scale = 1.0 + float(np.max(np.abs(s))) if s.size else 1.0
        worst = max(float(np.max(np.abs(s.imag))), float(np.max(np.abs(p.imag)))) if s.size else 0.0
        if worst > FLOAT_TOL * scale:
            raise BilinearRealityError(
                f"field bilinear imaginary part {worst:.3e} exceeds tolerance"
            )
    return s.real, p.real


def field_current(values):
    """Pointwise j^mu, shape (..., 4) real, index raised."""
    vc = values.conj()
    comps = [
        np.einsum("...a,...a->...", vc @ CURRENT_MATS[mu], values).real
        for mu in range(4)
    ]
    return np.stack(comps, axis=-1)


def field_axial(values):
    """Pointwise lowered c_mu (psibar gamma_mu I psi = i c_mu), shape (..., 4)."""
    vc = values.conj()
    comps = [
        np.einsum("...a,...a->...", vc @ AXIAL_MATS[mu], values).imag
        for mu in range(4)
    ]
    return np.stack(comps, axis=-1)


def field_j0(values):
    """Charge density psi^dagger psi per point."""
    return np.einsum("...a,...a->...", values.conj(), values).real
