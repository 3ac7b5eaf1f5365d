"""Exact Gaussian-rational scalars."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

__all__ = ["Coefficient", "ONE", "ZERO", "I"]


class Coefficient:
    """A Gaussian rational ``re + im*i`` with :class:`~fractions.Fraction` parts.

    Instances are immutable and hashable.  Floats are accepted on input and
    converted exactly (``Coefficient(0.1)`` is the binary value of ``0.1``, not
    ``1/10``), so pass strings or fractions when the decimal value matters.
    """

    __slots__ = ("_re", "_im")

    def __init__(self, re=0, im=0):
        if isinstance(re, complex):
            if im:
                raise TypeError("complex real part together with an imaginary part")
            re, im = re.real, re.imag
        object.__setattr__(self, "_re", Fraction(re))
        object.__setattr__(self, "_im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("Coefficient is immutable")

    @classmethod
    def coerce(cls, value) -> Coefficient:
        if isinstance(value, Coefficient):
            return value
        if isinstance(value, (int, Rational, float, complex, str)):
            return cls(value)
        raise TypeError(f"cannot use {type(value).__name__} as a coefficient")

    @property
    def re(self) -> Fraction:
        return self._re

    @property
    def im(self) -> Fraction:
        return self._im

    def is_real(self) -> bool:
        return self._im == 0

    def conjugate(self) -> Coefficient:
        return Coefficient(self._re, -self._im)

    def __complex__(self) -> complex:
        return complex(float(self._re), float(self._im))

    def __bool__(self) -> bool:
        return bool(self._re) or bool(self._im)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Coefficient):
            try:
                other = Coefficient.coerce(other)
            except TypeError:
                return NotImplemented
        return self._re == other._re and self._im == other._im

    def __hash__(self) -> int:
        return hash((self._re, self._im))

    def __neg__(self) -> Coefficient:
        return Coefficient(-self._re, -self._im)

    def __add__(self, other) -> Coefficient:
        other = Coefficient.coerce(other)
        return Coefficient(self._re + other._re, self._im + other._im)

    __radd__ = __add__

    def __sub__(self, other) -> Coefficient:
        other = Coefficient.coerce(other)
        return Coefficient(self._re - other._re, self._im - other._im)

    def __rsub__(self, other) -> Coefficient:
        return Coefficient.coerce(other) - self

    def __mul__(self, other) -> Coefficient:
        other = Coefficient.coerce(other)
        a, b, c, d = self._re, self._im, other._re, other._im
        return Coefficient(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other) -> Coefficient:
        other = Coefficient.coerce(other)
        norm = other._re * other._re + other._im * other._im
        if norm == 0:
            raise ZeroDivisionError("division by a zero coefficient")
        num = self * other.conjugate()
        return Coefficient(num._re / norm, num._im / norm)

    def __rtruediv__(self, other) -> Coefficient:
        return Coefficient.coerce(other) / self

    def __repr__(self) -> str:
        return f"Coefficient({self._re!s}, {self._im!s})"

    def __str__(self) -> str:
        return format_coefficient(self)


def format_coefficient(c: Coefficient) -> str:
    """Render in the expression syntax: ``3/2``, ``-1/2*i``, ``(1 + 2*i)``."""
    if c.im == 0:
        return str(c.re)
    imag = "i" if abs(c.im) == 1 else f"{abs(c.im)}*i"
    if c.re == 0:
        return f"-{imag}" if c.im < 0 else imag
    sign = "-" if c.im < 0 else "+"
    return f"({c.re} {sign} {imag})"


ZERO = Coefficient(0)
ONE = Coefficient(1)
I = Coefficient(0, 1)  # noqa: E741
