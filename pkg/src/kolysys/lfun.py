"""L-factors of Frobenius-type maps and their central derivatives.

Everything is expressed in ``u = q^{-s}``; the elementary symmetric
functions come from the characteristic polynomial, so no eigenvalues are
ever needed.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from . import linalg
from .scalar import QuadraticNumber, as_scalar, format_scalar
from .superlin import SuperMap, superdet


class LaurentPoly:
    """Finite Laurent polynomial in one variable ``u``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        coeffs = coeffs or {}
        if not isinstance(coeffs, dict):
            coeffs = dict(enumerate(coeffs))
        self.coeffs = {int(k): as_scalar(v) for k, v in coeffs.items() if v != 0}

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        out: dict = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                out[i + j] = out.get(i + j, 0) + a * b
        return LaurentPoly(out)

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return LaurentPoly(out)

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __getitem__(self, k: int):
        return self.coeffs.get(k, Fraction(0))

    def __call__(self, u):
        return sum((c * Fraction(u) ** k for k, c in self.coeffs.items()), Fraction(0))

    def __repr__(self):
        return f"LaurentPoly({self.serialize()})"

    def serialize(self) -> list:
        return [[k, format_scalar(self.coeffs[k])] for k in sorted(self.coeffs)]


def _det_one_minus(block) -> LaurentPoly:
    e = linalg.elementary_symmetric(block)
    return LaurentPoly({k: (-1) ** k * c for k, c in enumerate(e)})


def l_function(f: SuperMap):
    """``sdet(1 - uF)^{-1}``: a polynomial for purely odd spaces, else ``(num, den)``."""
    if not f.is_square() or f.parity != 0:
        raise ValueError("L-factor needs an even endomorphism")
    num = _det_one_minus(f.odd_block())
    den = _det_one_minus(f.even_block())
    if not f.source.even:
        return num
    return num, den


def elementary_symmetric(f) -> list:
    m = f.matrix if isinstance(f, SuperMap) else f
    return linalg.elementary_symmetric(m)


def root_number(f: SuperMap):
    return 1 / superdet(f)


def epsilon_sign(n: int, r: int) -> int:
    return -1 if (r * (r - 1) // 2 + n) % 2 else 1


def central_derivative(f, r: int):
    """``D_r = Σ_k (-1)^k e_k(F) (n-k)^r`` for ``F`` on a space of dimension ``2n``."""
    return derivative_from_symmetric(elementary_symmetric(f), r)


def derivative_from_symmetric(e: list, r: int):
    """``D_r`` from the list ``e_0..e_{2n}``."""
    if r < 0:
        raise ValueError("r must be non-negative")
    dim = len(e) - 1
    if dim % 2:
        raise ValueError("space must have even dimension")
    n = dim // 2
    return sum(((-1) ** k * c * (n - k) ** r for k, c in enumerate(e)), Fraction(0))


def _to_sympy(x):
    import sympy

    if isinstance(x, QuadraticNumber):
        return _to_sympy(x.a) + _to_sympy(x.b) * sympy.sqrt(x.d)
    x = Fraction(x)
    return sympy.Rational(x.numerator, x.denominator)


def _from_sympy(x):
    import sympy

    x = sympy.nsimplify(sympy.simplify(x))
    if x.is_Rational:
        return Fraction(int(x.p), int(x.q))
    rad = [p for p in x.atoms(sympy.Pow) if p.exp == sympy.Rational(1, 2)]
    if len(rad) != 1:
        raise ValueError(f"cannot convert {x} to an exact scalar")
    root = rad[0]
    coeff = sympy.expand(x).coeff(root)
    rest = sympy.expand(x - coeff * root)
    return QuadraticNumber(_from_sympy(rest), _from_sympy(coeff), int(root.base))


def central_derivative_symbolic(f, r: int, q=2):
    """Differentiate ``q^{ns} L(M, F, s)`` in ``s`` with sympy and strip ``(ln q)^r``."""
    import sympy

    s = sympy.Symbol("s")
    q = _to_sympy(q)
    e = elementary_symmetric(f)
    n = (len(e) - 1) // 2
    expr = sum(((-1) ** k * _to_sympy(c) * q ** ((n - k) * s) for k, c in enumerate(e)), sympy.Integer(0))
    val = sympy.diff(expr, s, r).subs(s, 0) / sympy.log(q) ** r
    return _from_sympy(sympy.expand_log(sympy.simplify(val), force=True))


def orthogonal_from_lagrangian(fl, off=None) -> np.ndarray:
    """``F = [[F_L, F_L B], [0, F_L^{-T}]]`` with ``B`` antisymmetric, preserving the standard odd form."""
    fl = linalg.to_object(fl)
    n = fl.shape[0]
    out = linalg.zeros(2 * n, 2 * n)
    out[:n, :n] = fl
    out[n:, n:] = linalg.inverse(fl).T
    if off is not None:
        b = linalg.to_object(off)
        if not linalg.equal(b, -b.T):
            raise ValueError("off-diagonal part must be antisymmetric")
        out[:n, n:] = fl @ b
    return out
