"""Scalar conventions shared by every module.

Two scalar kinds are supported and never mixed inside one object:

* exact: ``gmpy2.mpq`` rationals. Complex values are stored as ``(re, im)``
  pairs of rationals.
* float: Python ``float`` pairs, used by the time integrator.

Integrals over the torus produce a factor ``(2*pi)**d`` that is not rational;
exact integrals are therefore returned as :class:`VolumeScalar`, a Gaussian
rational multiple of the torus volume.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

import gmpy2
from gmpy2 import mpq

MPQ_TYPE = type(mpq(0))
ZERO = mpq(0)
ONE = mpq(1)


def to_exact(x) -> mpq:
    """Convert an int/Fraction/mpq/"num/den" string to ``mpq``."""
    if isinstance(x, MPQ_TYPE):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, Fraction)) or type(x).__name__ == "mpz":
        return mpq(x)
    if isinstance(x, Rational):
        return mpq(int(x.numerator), int(x.denominator))
    if isinstance(x, str):
        return mpq(Fraction(x))
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def is_exact_scalar(x) -> bool:
    return isinstance(x, (MPQ_TYPE, int, Fraction)) and not isinstance(x, bool)


def coerce_like(x, exact: bool):
    """Coerce a real scalar to the requested kind."""
    if exact:
        if isinstance(x, float):
            raise TypeError("float scalar used with exact coefficients")
        return to_exact(x)
    return float(x)


def rational_to_str(x) -> str:
    x = to_exact(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def scalar_to_json(x):
    if isinstance(x, float):
        return x
    return rational_to_str(x)


def scalar_from_json(v, exact: bool | None = None):
    """Strings are rationals, JSON numbers are floats unless ``exact`` says so."""
    if isinstance(v, str):
        q = to_exact(v)
        return float(q) if exact is False else q
    if isinstance(v, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(v, int):
        return float(v) if exact is False else mpq(v)
    if isinstance(v, float):
        if exact:
            raise TypeError("float value in exact data")
        return v
    raise TypeError(f"unsupported scalar literal {v!r}")


class VolumeScalar:
    """Exact number ``(re + i*im) * (2*pi)**dim``."""

    __slots__ = ("re", "im", "dim")

    def __init__(self, re, im=0, dim: int = 1):
        self.re = to_exact(re)
        self.im = to_exact(im)
        self.dim = int(dim)

    def _check(self, other: VolumeScalar):
        if other.dim != self.dim:
            raise ValueError("volume factors of different dimension")

    def __add__(self, other):
        if isinstance(other, VolumeScalar):
            self._check(other)
            return VolumeScalar(self.re + other.re, self.im + other.im, self.dim)
        if other == 0:
            return self
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return VolumeScalar(-self.re, -self.im, self.dim)

    def __sub__(self, other):
        if isinstance(other, VolumeScalar):
            return self + (-other)
        if other == 0:
            return self
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, c):
        if isinstance(c, VolumeScalar):
            return NotImplemented
        c = to_exact(c)
        return VolumeScalar(self.re * c, self.im * c, self.dim)

    __rmul__ = __mul__

    def __truediv__(self, c):
        c = to_exact(c)
        return VolumeScalar(self.re / c, self.im / c, self.dim)

    def __eq__(self, other):
        if isinstance(other, VolumeScalar):
            return (self.re, self.im, self.dim) == (other.re, other.im, other.dim) or (
                self.is_zero() and other.is_zero()
            )
        if isinstance(other, (int, Fraction, MPQ_TYPE)) and other == 0:
            return self.is_zero()
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im, self.dim))

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    @property
    def coefficient(self):
        """The Gaussian-rational multiplier of ``(2*pi)**dim`` as ``(re, im)``."""
        return (self.re, self.im)

    def __complex__(self):
        v = (2 * math.pi) ** self.dim
        return complex(float(self.re) * v, float(self.im) * v)

    def __float__(self):
        if self.im != 0:
            raise TypeError("complex volume scalar has no float value")
        return float(self.re) * (2 * math.pi) ** self.dim

    def __abs__(self):
        return abs(complex(self))

    def __repr__(self):
        if self.im == 0:
            return f"VolumeScalar({rational_to_str(self.re)}*(2pi)^{self.dim})"
        return (
            f"VolumeScalar(({rational_to_str(self.re)} + {rational_to_str(self.im)}i)"
            f"*(2pi)^{self.dim})"
        )


def is_finite(x) -> bool:
    if isinstance(x, float):
        return math.isfinite(x)
    return True


__all__ = [
    "MPQ_TYPE",
    "ONE",
    "VolumeScalar",
    "ZERO",
    "coerce_like",
    "gmpy2",
    "is_exact_scalar",
    "is_finite",
    "mpq",
    "rational_to_str",
    "scalar_from_json",
    "scalar_to_json",
    "to_exact",
]
