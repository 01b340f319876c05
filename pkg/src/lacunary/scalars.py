"""Scalar backends.

``"rational"`` coefficients are :class:`GaussianRational` (exact elements of
Q(i)); ``"float"`` coefficients are Python ``complex``.  The two are never
mixed silently.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from .errors import BackendMismatch, SpecParseError

RATIONAL = "rational"
FLOAT = "float"
BACKENDS = (RATIONAL, FLOAT)


class GaussianRational:
    """Exact complex rational ``re + im*i``."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is Fraction else Fraction(re)
        self.im = im if type(im) is Fraction else Fraction(im)

    @classmethod
    def _make(cls, re: Fraction, im: Fraction) -> "GaussianRational":
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Rational)):
            return cls._make(Fraction(x), _ZERO)
        if isinstance(x, (float, complex)):
            raise BackendMismatch(f"float value {x!r} given to the rational backend")
        raise TypeError(f"cannot make an exact scalar from {x!r}")

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Rational)):
            return self.im == 0 and self.re == other
        if isinstance(other, complex):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        return hash(self.re) if self.im == 0 else hash((self.re, self.im))

    def __repr__(self):
        if self.im == 0:
            return f"GaussianRational({self.re})"
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i)"

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __neg__(self):
        return GaussianRational._make(-self.re, -self.im)

    def __add__(self, other):
        if not isinstance(other, GaussianRational):
            other = GaussianRational.coerce(other)
        return GaussianRational._make(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, GaussianRational):
            other = GaussianRational.coerce(other)
        return GaussianRational._make(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, GaussianRational):
            other = GaussianRational.coerce(other)
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return GaussianRational._make(a * c, _ZERO)
        return GaussianRational._make(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, GaussianRational):
            other = GaussianRational.coerce(other)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) * self.reciprocal()

    def reciprocal(self) -> "GaussianRational":
        if not self:
            raise ZeroDivisionError("reciprocal of zero")
        if not self.im:
            return GaussianRational._make(1 / self.re, _ZERO)
        n = self.abs2()
        return GaussianRational._make(self.re / n, -self.im / n)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._make(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __abs__(self) -> float:
        return abs(complex(self))


_ZERO = Fraction(0)
ZERO = GaussianRational()
ONE = GaussianRational(1)


def parse_number(x, backend: str):
    """JSON scalar component: number or ``"p/q"`` string."""
    if backend == RATIONAL:
        if isinstance(x, float):
            raise BackendMismatch(f"float literal {x!r} in a rational series")
        try:
            return Fraction(x)
        except (ValueError, TypeError) as exc:
            raise SpecParseError(f"bad rational {x!r}") from exc
    try:
        return float(Fraction(x)) if isinstance(x, str) else float(x)
    except (ValueError, TypeError) as exc:
        raise SpecParseError(f"bad number {x!r}") from exc


def make_scalar(re, im, backend: str):
    if backend == RATIONAL:
        return GaussianRational(parse_number(re, backend), parse_number(im, backend))
    return complex(parse_number(re, backend), parse_number(im, backend))


def coerce(x, backend: str):
    if backend == RATIONAL:
        return GaussianRational.coerce(x)
    if isinstance(x, GaussianRational):
        raise BackendMismatch("exact scalar given to the float backend")
    return complex(x)


def dump_scalar(x) -> tuple:
    """(re, im) for JSON: rationals as "p/q" strings, floats as numbers."""
    if isinstance(x, GaussianRational):
        return str(x.re), str(x.im)
    return x.real, x.imag
