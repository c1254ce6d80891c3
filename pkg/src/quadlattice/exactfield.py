"""Exact scalar arithmetic: big rationals, Gaussian rationals, Pochhammer symbols.

Every quantity in this package is either a ``fractions.Fraction`` (arbitrary
precision rational, always reduced, positive denominator) or a
:class:`GaussianRational` (a + b*i with exact rational parts).  No floats,
ever.
"""

from __future__ import annotations

from fractions import Fraction


Rational = Fraction


def rat(value) -> Fraction:
    """Parse an exact rational from an int, string ("p/q" or "p") or Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, GaussianRational):
        if value.im != 0:
            raise ValueError("cannot coerce a non-real Gaussian rational to Rational")
        return value.re
    raise TypeError(f"cannot build an exact rational from {value!r}")


def rat_str(value) -> str:
    """Serialize a rational as "p/q", or "p" when the denominator is one."""
    q = rat(value)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class GaussianRational:
    """An element of Q(i), kept in exact canonical form.

    Mixed arithmetic with ints and Fractions is supported so that code which
    happens to stay real never needs explicit wrapping.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    # -- basic protocol ----------------------------------------------------

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"

    def __str__(self):
        if self.im == 0:
            return rat_str(self.re)
        return f"({rat_str(self.re)} + {rat_str(self.im)}i)"

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        norm = other.re * other.re + other.im * other.im
        if norm == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational(
            (self.re * other.re + self.im * other.im) / norm,
            (self.im * other.re - self.re * other.im) / norm,
        )

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, exponent):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("only nonnegative integer powers are supported")
        result = GaussianRational(1)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- structure ---------------------------------------------------------

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    @property
    def is_real(self):
        return self.im == 0

    def to_json(self):
        return {"re": rat_str(self.re), "im": rat_str(self.im)}

    @classmethod
    def from_json(cls, obj):
        return cls(Fraction(obj["re"]), Fraction(obj["im"]))


I = GaussianRational(0, 1)


def _coerce(value):
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, (int, Fraction)):
        return GaussianRational(value)
    return NotImplemented


def gauss(value) -> GaussianRational:
    """Coerce an int/Fraction/GaussianRational into Q(i)."""
    out = _coerce(value)
    if out is NotImplemented:
        raise TypeError(f"cannot coerce {value!r} into Q(i)")
    return out


def real_part(value) -> Fraction:
    if isinstance(value, GaussianRational):
        return value.re
    return Fraction(value)


def imag_part(value) -> Fraction:
    if isinstance(value, GaussianRational):
        return value.im
    return Fraction(0)


def demote(value):
    """Return a Fraction when the value is exactly real, else the Gaussian."""
    if isinstance(value, GaussianRational) and value.im == 0:
        return value.re
    return value


def field_str(value) -> str:
    value = demote(value)
    if isinstance(value, GaussianRational):
        return f"{rat_str(value.re)}+{rat_str(value.im)}i"
    return rat_str(value)


def field_arithmetic(a, b, op: str):
    """Exact field arithmetic on rationals / Gaussian rationals.

    ``op`` is one of "add", "sub", "mul", "div".  Division by zero raises
    ZeroDivisionError; there is no sentinel value.
    """
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if not b:
            raise ZeroDivisionError("exact division by zero")
        return a / b
    raise ValueError(f"unknown field operation {op!r}")


def pochhammer(a, n: int):
    """Rising factorial (a)_n = a (a+1) ... (a+n-1), with (a)_0 = 1."""
    if n < 0:
        raise ValueError("pochhammer needs n >= 0")
    out = a - a + 1 if not isinstance(a, int) else Fraction(1)
    for k in range(n):
        out = out * (a + k)
    return out


def factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def binomial(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    out = 1
    for j in range(k):
        out = out * (n - j) // (j + 1)
    return out
