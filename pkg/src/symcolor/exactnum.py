"""Exact scalars: rationals and the quadratic ring Q[sqrt(q)].

Rationals are GMP ``mpq`` values when gmpy2 is importable and
:class:`fractions.Fraction` otherwise; both are always reduced with a
positive denominator and compare equal to each other. :class:`QAdjoined` holds ``a + b*sqrt(q)`` with rational
``a`` and ``b``; it is immutable and compares structurally.
"""

from __future__ import annotations

import numbers
from math import isqrt
import operator
from fractions import Fraction
from typing import Union

try:
    from gmpy2 import mpq as Rational
except ImportError:  # pragma: no cover
    Rational = Fraction

RATIONAL_BACKEND = "gmpy2.mpq" if Rational is not Fraction else "fractions.Fraction"

Scalar = Union[int, numbers.Rational]

__all__ = [
    "Rational",
    "RATIONAL_BACKEND",
    "to_rational",
    "QAdjoined",
    "ParameterError",
    "IrrationalityError",
    "InvariantViolation",
    "rat_arith",
    "qadj_arith",
    "qadj_div_exact",
    "as_rational",
    "format_rational",
    "parse_rational",
]


class ParameterError(ValueError):
    """Raised for an invalid ring parameter or a mismatch between operands."""


class IrrationalityError(ArithmeticError):
    """Raised when a value expected to be rational has a sqrt(q) component."""


class InvariantViolation(ArithmeticError):
    """An internal invariant was broken. Always indicates a bug."""


_RAT_OPS = {
    "add": operator.add,
    "sub": operator.sub,
    "mul": operator.mul,
    "div": operator.truediv,
}


def to_rational(v) -> Rational:
    if type(v) is Rational:
        return v
    if isinstance(v, bool) or not isinstance(v, numbers.Rational):
        raise TypeError(f"expected an exact rational, got {v!r}")
    return Rational(int(v.numerator), int(v.denominator))


def rat_arith(x: Scalar, y: Scalar, kind: str) -> Rational:
    try:
        op = _RAT_OPS[kind]
    except KeyError:
        raise ValueError(f"unknown operation {kind!r}") from None
    if kind == "div" and y == 0:
        raise ZeroDivisionError("rational division by zero")
    return op(to_rational(x), to_rational(y))


def format_rational(x: Scalar) -> str:
    """``"num/den"`` in lowest terms, or ``"n"`` for integers."""
    x = to_rational(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Rational:
    return to_rational(Fraction(text.strip()))


def _check_q(q: int) -> int:
    if isinstance(q, bool) or not isinstance(q, int):
        raise ParameterError(f"q must be an integer, got {q!r}")
    if q < 4:
        raise ParameterError(f"q must be >= 4, got {q}")
    return q


_ZERO = Rational(0)


class QAdjoined:
    """An element ``a + b*sqrt(q)`` of Q[sqrt(q)].

    The pair ``(a, b)`` is kept as is even when ``q`` is a perfect square, so
    every ``q`` goes through the same arithmetic.
    """

    __slots__ = ("q", "a", "b")

    def __init__(self, q: int, a: Scalar = 0, b: Scalar = 0):
        object.__setattr__(self, "q", _check_q(q))
        object.__setattr__(self, "a", to_rational(a))
        object.__setattr__(self, "b", to_rational(b))

    @classmethod
    def _raw(cls, q: int, a: Rational, b: Rational) -> QAdjoined:
        # trusted constructor for the hot path: q already validated
        self = object.__new__(cls)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        return self

    @classmethod
    def sqrt(cls, q: int) -> QAdjoined:
        return cls(q, 0, 1)

    def __setattr__(self, name, value):
        raise AttributeError("QAdjoined is immutable")

    def __delattr__(self, name):
        raise AttributeError("QAdjoined is immutable")

    def __reduce__(self):
        return (QAdjoined, (self.q, self.a, self.b))

    def _coerce(self, other) -> QAdjoined:
        if isinstance(other, QAdjoined):
            if other.q != self.q:
                raise ParameterError(
                    f"cannot combine elements of Q[sqrt({self.q})] and Q[sqrt({other.q})]"
                )
            return other
        if isinstance(other, numbers.Rational) and not isinstance(other, bool):
            return QAdjoined._raw(self.q, to_rational(other), _ZERO)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QAdjoined._raw(self.q, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QAdjoined._raw(self.q, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        return QAdjoined._raw(self.q, -self.a, -self.b)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, numbers.Rational) and not isinstance(other, bool):
            return self.scale(to_rational(other))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a1, b1, a2, b2 = self.a, self.b, o.a, o.b
        return QAdjoined._raw(self.q, a1 * a2 + self.q * b1 * b2, a1 * b2 + a2 * b1)

    __rmul__ = __mul__

    def scale(self, r: Scalar) -> QAdjoined:
        """Multiply by a rational."""
        return QAdjoined._raw(self.q, self.a * r, self.b * r)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return qadj_div_exact(self, o)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return qadj_div_exact(o, self)

    def conjugate(self) -> QAdjoined:
        return QAdjoined._raw(self.q, self.a, -self.b)

    def norm(self) -> Rational:
        """``a**2 - q*b**2``, the product with the conjugate."""
        return self.a * self.a - self.q * self.b * self.b

    def is_zero(self) -> bool:
        return not self.a and not self.b

    def is_rational(self) -> bool:
        return not self.b

    def collapse(self) -> Rational:
        """The value as a rational when ``q`` is a perfect square.

        Explicit normalization only; arithmetic never collapses on its own.
        """
        r = isqrt(self.q)
        if r * r != self.q:
            raise IrrationalityError(f"sqrt({self.q}) is irrational")
        return self.a + self.b * r

    def sign(self) -> int:
        """Exact sign of the real number ``a + b*sqrt(q)``."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sa == sb or sb == 0:
            return sa
        if sa == 0:
            return sb
        # mixed signs: compare a**2 with q*b**2
        d = self.a * self.a - self.q * self.b * self.b
        if d == 0:
            return 0
        return sa if d > 0 else sb

    def __eq__(self, other):
        if isinstance(other, QAdjoined):
            return self.q == other.q and self.a == other.a and self.b == other.b
        if isinstance(other, numbers.Rational):
            return not self.b and self.a == other
        return NotImplemented

    def __hash__(self):
        return hash((self.q, self.a, self.b))

    def __float__(self):
        return float(self.a) + float(self.b) * self.q**0.5

    def __repr__(self):
        return f"QAdjoined(q={self.q}, a={format_rational(self.a)}, b={format_rational(self.b)})"

    def __str__(self):
        return f"{format_rational(self.a)} + {format_rational(self.b)}*sqrt({self.q})"

    @classmethod
    def parse(cls, text: str) -> QAdjoined:
        """Inverse of ``str()``: ``"a + b*sqrt(q)"``."""
        try:
            left, right = text.split(" + ", 1)
            coeff, rest = right.split("*sqrt(", 1)
            q = int(rest.rstrip(")"))
        except ValueError:
            raise ValueError(f"not a Q[sqrt(q)] literal: {text!r}") from None
        return cls(q, parse_rational(left), parse_rational(coeff))


def qadj_arith(x: QAdjoined, y: QAdjoined, kind: str) -> QAdjoined:
    if x.q != y.q:
        raise ParameterError(f"mismatched ring parameters {x.q} and {y.q}")
    if kind == "add":
        return x + y
    if kind == "sub":
        return x - y
    if kind == "mul":
        return x * y
    raise ValueError(f"unknown operation {kind!r}")


def qadj_div_exact(x: QAdjoined, y: QAdjoined) -> QAdjoined:
    """Exact quotient ``x / y`` via the conjugate of ``y``."""
    if x.q != y.q:
        raise ParameterError(f"mismatched ring parameters {x.q} and {y.q}")
    q = x.q
    if not y.b:
        if not y.a:
            raise ZeroDivisionError("division by zero in Q[sqrt(q)]")
        return QAdjoined._raw(q, x.a / y.a, x.b / y.a)
    if not y.a:
        # (a + b r) / (c r) = b/c + (a/(c q)) r
        return QAdjoined._raw(q, x.b / y.b, x.a / (y.b * q))
    n = y.norm()
    if n == 0:
        raise InvariantViolation(
            f"zero norm for nonzero divisor {y!r}; q={q} is a perfect square"
        )
    num = x * y.conjugate()
    return QAdjoined._raw(q, num.a / n, num.b / n)


def as_rational(x: QAdjoined) -> Rational:
    if x.b:
        raise IrrationalityError(f"{x} has a nonzero sqrt({x.q}) component")
    return x.a
