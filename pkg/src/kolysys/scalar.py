"""Exact scalars: rationals, optionally extended by one square root.

Rationals are plain :class:`fractions.Fraction` values.  Elements of a real
quadratic field ``Q(sqrt(d))`` are :class:`QuadraticNumber` instances; they
mix freely with ints and Fractions but never with a different ``d``.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational
from typing import Union


class ExtensionMismatch(ValueError):
    """Raised when scalars from two different quadratic fields meet."""


def _squarefree_part(d: int) -> int:
    if d <= 0:
        raise ValueError(f"d must be a positive integer, got {d}")
    out, p = 1, 2
    while p * p <= d:
        while d % (p * p) == 0:
            d //= p * p
        if d % p == 0:
            out *= p
            d //= p
        p += 1
    return out * d


class QuadraticNumber:
    """``a + b*sqrt(d)`` with rational ``a``, ``b`` and square-free ``d > 1``."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d: int):
        if _squarefree_part(d) != d or d == 1:
            raise ValueError(f"d must be square-free and > 1, got {d}")
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.d = d

    # -- coercion ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, QuadraticNumber):
            if other.d != self.d:
                raise ExtensionMismatch(f"sqrt({self.d}) vs sqrt({other.d})")
            return other
        if isinstance(other, (int, Rational)):
            return QuadraticNumber(other, 0, self.d)
        return NotImplemented

    def _wrap(self, a, b):
        if b == 0:
            return Fraction(a)
        return QuadraticNumber(a, b, self.d)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.a * o.a + self.d * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def conjugate(self) -> "QuadraticNumber":
        return QuadraticNumber(self.a, -self.b, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        nrm = o.norm()
        if nrm == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        num = self * o.conjugate()
        if isinstance(num, QuadraticNumber):
            return self._wrap(num.a / nrm, num.b / nrm)
        return Fraction(num) / nrm

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return 1 / (self ** (-k))
        out = Fraction(1)
        base = self
        while k:
            if k & 1:
                out = base * out
            base = base * base
            k >>= 1
        return out

    # -- comparison / hashing ---------------------------------------------
    def __eq__(self, other):
        if isinstance(other, QuadraticNumber):
            if other.d != self.d:
                # distinct fields only meet at rationals
                return self.b == 0 and other.b == 0 and self.a == other.a
            return self.a == other.a and self.b == other.b
        if isinstance(other, (int, Rational)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __repr__(self):
        return f"QuadraticNumber({self.a}, {self.b}, d={self.d})"

    def __str__(self):
        return format_scalar(self)


Scalar = Union[int, Fraction, QuadraticNumber]


def as_scalar(x) -> Scalar:
    """Normalise ints and rationals to Fraction; pass quadratic numbers through."""
    if isinstance(x, QuadraticNumber):
        return x if x.b != 0 else Fraction(x.a)
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return parse_scalar(x)
    raise TypeError(f"not an exact scalar: {x!r}")


def is_zero(x) -> bool:
    return x == 0


def _fmt_frac(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def format_scalar(x) -> str:
    """Serialise as ``"p/q"`` or ``"p/q+r/s*sqrt(d)"``."""
    if isinstance(x, QuadraticNumber):
        if x.b == 0:
            return _fmt_frac(x.a)
        return f"{_fmt_frac(x.a)}+{_fmt_frac(x.b)}*sqrt({x.d})"
    return _fmt_frac(Fraction(x))


_RAT = r"[+-]?\d+(?:/\d+)?"
_QUAD_RE = re.compile(rf"^\s*({_RAT})\s*\+\s*({_RAT})\s*\*\s*sqrt\(\s*(\d+)\s*\)\s*$")
_RAT_RE = re.compile(rf"^\s*({_RAT})\s*$")


def parse_scalar(text: str) -> Scalar:
    """Inverse of :func:`format_scalar`; plain integers are accepted too."""
    m = _RAT_RE.match(text)
    if m:
        return Fraction(m.group(1))
    m = _QUAD_RE.match(text)
    if m:
        a, b, d = Fraction(m.group(1)), Fraction(m.group(2)), int(m.group(3))
        return QuadraticNumber(a, b, d) if b != 0 else a
    raise ValueError(f"malformed scalar: {text!r}")


def _rational_sqrt(x: Fraction):
    if x < 0:
        return None
    p, q = x.numerator, x.denominator
    rp, rq = math.isqrt(p), math.isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rp, rq)
    return None


def exact_sqrt(x, d: int | None = None) -> Scalar:
    """Positive square root of a rational, inside Q or Q(sqrt(d)).

    Raises ``ValueError`` when the root lives in neither field.
    """
    x = as_scalar(x)
    if isinstance(x, QuadraticNumber):
        raise ValueError("square roots of irrational scalars are not supported")
    r = _rational_sqrt(x)
    if r is not None:
        return r
    if d is not None:
        s = _rational_sqrt(x / d)
        if s is not None:
            return QuadraticNumber(0, s, d)
    where = "Q" if d is None else f"Q(sqrt({d}))"
    raise ValueError(f"{x} has no square root in {where}")
