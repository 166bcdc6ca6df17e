"""Exact Gaussian-rational scalars for the zero-tolerance algebra backend.

A :class:`GaussianRational` is a complex number whose real and imaginary
parts are arbitrary-precision rationals.  All arithmetic is closed and
exact; equality is decidable.  Floats are rejected on construction so the
exact backend can never be contaminated silently.
"""

from __future__ import annotations

from fractions import Fraction

_ZERO = Fraction(0)


def _coerce(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(
        f"exact scalars are built from int/Fraction, not {type(value).__name__}"
    )


class GaussianRational:
    """Complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _coerce(re)
        self.im = _coerce(im)

    @classmethod
    def _make(cls, re: Fraction, im: Fraction) -> "GaussianRational":
        out = object.__new__(cls)
        out.re = re
        out.im = im
        return out

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational._make(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, Fraction)):
            return GaussianRational._make(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational._make(self.re - other.re, self.im - other.im)
        if isinstance(other, (int, Fraction)):
            return GaussianRational._make(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussianRational._make(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            # zero fast paths keep sparse matrix products cheap
            if not (self.re or self.im) or not (other.re or other.im):
                return _GQ_ZERO
            return GaussianRational._make(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        if isinstance(other, (int, Fraction)):
            if not other:
                return _GQ_ZERO
            return GaussianRational._make(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussianRational._make(self.re / other, self.im / other)
        if isinstance(other, GaussianRational):
            d = other.re * other.re + other.im * other.im
            if not d:
                raise ZeroDivisionError("division by zero Gaussian rational")
            return GaussianRational._make(
                (self.re * other.re + self.im * other.im) / d,
                (self.im * other.re - self.re * other.im) / d,
            )
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other) / self
        return NotImplemented

    def __neg__(self):
        return GaussianRational._make(-self.re, -self.im)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._make(self.re, -self.im)

    # -- comparison / conversion ---------------------------------------

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if self.im == 0:
            return f"{self.re}"
        if self.re == 0:
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}*i"


_GQ_ZERO = GaussianRational._make(_ZERO, _ZERO)


def gq(re=0, im=0) -> GaussianRational:
    """Shorthand constructor for exact complex rationals."""
    return GaussianRational(re, im)
