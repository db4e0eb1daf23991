"""Scalar backends.

Two fields are supported. Floating point uses plain ``complex`` (or
``complex128`` arrays). The exact backend is :class:`GaussianRational`, a
complex number with rational real and imaginary parts. Every algebraic routine
in the package is written with ordinary arithmetic operators so either backend
(or numpy arrays of either) can flow through it unchanged.
"""

from __future__ import annotations

import numbers
from fractions import Fraction

import numpy as np

try:
    from gmpy2 import mpq as _Rational
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    _Rational = Fraction


def _is_rational(value) -> bool:
    return isinstance(value, numbers.Rational) or type(value) is _Rational


def rational(value) -> "_Rational":
    """Convert an int, Fraction, mpq or ``"p/q"`` string to the rational type."""
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational string")
        try:
            frac = Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse rational {value!r}") from exc
        return _Rational(frac.numerator, frac.denominator)
    if isinstance(value, float):
        if not value.is_integer():
            raise TypeError(f"refusing to convert inexact float {value!r} to a rational")
        return _Rational(int(value))
    if isinstance(value, numbers.Rational) or type(value) is _Rational:
        return _Rational(value)
    if isinstance(value, numbers.Integral):
        return _Rational(int(value))
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


class GaussianRational:
    """Element of Q(i): ``re + im*i`` with exact rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is _Rational else rational(re)
        self.im = im if type(im) is _Rational else rational(im)

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, complex):
            return cls(rational(value.real), rational(value.imag))
        if isinstance(value, tuple) and len(value) == 2:
            return cls(rational(value[0]), rational(value[1]))
        return cls(rational(value))

    @property
    def real(self):
        return self.re

    @property
    def imag(self):
        return self.im

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs2(self):
        """Squared modulus, an exact rational."""
        return self.re * self.re + self.im * self.im

    def __add__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational(self.re + other.re, self.im + other.im)
        if _is_rational(other):
            return GaussianRational(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational(self.re - other.re, self.im - other.im)
        if _is_rational(other):
            return GaussianRational(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        if _is_rational(other):
            return GaussianRational(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        if _is_rational(other):
            return GaussianRational(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, GaussianRational):
            den = other.abs2()
            if den == 0:
                raise ZeroDivisionError("division by exact zero")
            return GaussianRational(
                (self.re * other.re + self.im * other.im) / den,
                (self.im * other.re - self.re * other.im) / den,
            )
        if _is_rational(other):
            if other == 0:
                raise ZeroDivisionError("division by exact zero")
            return GaussianRational(self.re / other, self.im / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if _is_rational(other):
            return GaussianRational(other) / self
        return NotImplemented

    def __pow__(self, exponent):
        if not isinstance(exponent, int) or exponent < 0:
            return NotImplemented
        result = GaussianRational(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if _is_rational(other):
            return self.im == 0 and self.re == other
        if isinstance(other, complex):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(Fraction(int(self.re.numerator), int(self.re.denominator)))
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({format_rational(self.re)!r}, {format_rational(self.im)!r})"

    def __str__(self):
        if self.im == 0:
            return format_rational(self.re)
        return f"({format_rational(self.re)}{'+' if self.im >= 0 else '-'}{format_rational(abs(self.im))}i)"


def format_rational(value) -> str:
    """Render a rational as ``"p"`` or ``"p/q"``."""
    num, den = int(value.numerator), int(value.denominator)
    return str(num) if den == 1 else f"{num}/{den}"


def exact_array(values) -> np.ndarray:
    """Object array of :class:`GaussianRational` built from ints/rationals/pairs."""
    if isinstance(values, (list, tuple)) and any(isinstance(v, tuple) for v in values):
        # keep (re, im) pairs as single entries instead of a second axis
        arr = np.empty(len(values), dtype=object)
        for i, v in enumerate(values):
            arr[i] = v
    else:
        arr = np.asarray(values, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = GaussianRational.coerce(v)
    return out


def is_exact(values) -> bool:
    return isinstance(values, np.ndarray) and values.dtype == object


def to_complex(values) -> np.ndarray:
    """Project an exact (or float) array onto complex128."""
    arr = np.asarray(values)
    if arr.dtype == object:
        return np.vectorize(complex, otypes=[np.complex128])(arr)
    return arr.astype(np.complex128)


def abs2(values):
    """Elementwise squared modulus; exact for object arrays."""
    if is_exact(values):
        return np.vectorize(lambda z: GaussianRational(z.abs2()), otypes=[object])(values)
    arr = np.asarray(values)
    return arr.real**2 + arr.imag**2
