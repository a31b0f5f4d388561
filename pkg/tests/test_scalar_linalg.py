from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from kolysys import linalg
from kolysys.scalar import QuadraticNumber, exact_sqrt, format_scalar, parse_scalar

from conftest import fractions, rational_matrix


@given(fractions)
def test_format_parse_roundtrip(x):
    assert parse_scalar(format_scalar(x)) == x


def test_quadratic_format_roundtrip():
    q = QuadraticNumber(Fraction(1, 2), Fraction(-3, 4), 2)
    assert parse_scalar(format_scalar(q)) == q
    assert q * q.conjugate() == q.norm()


def test_exact_sqrt():
    assert exact_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    r = exact_sqrt(Fraction(8), 2)
    assert r * r == 8
    with pytest.raises(ValueError):
        exact_sqrt(Fraction(2))


@given(rational_matrix(3, 3))
def test_charpoly_matches_sympy(a):
    import sympy

    m = sympy.Matrix(a.tolist())
    t = sympy.Symbol("t")
    expected = sympy.Poly(m.charpoly(t).as_expr(), t).all_coeffs()
    got = linalg.charpoly(a)
    assert [sympy.Rational(x.numerator, x.denominator) for x in got] == expected


@given(rational_matrix(3, 3))
def test_det_and_inverse(a):
    d = linalg.det(a)
    if d == 0:
        with pytest.raises(linalg.SingularMatrixError):
            linalg.inverse(a)
        assert linalg.rank(a) < 3
    else:
        assert linalg.equal(a @ linalg.inverse(a), linalg.identity(3))


@given(rational_matrix(2, 4))
def test_nullspace(a):
    ns = linalg.nullspace(a)
    assert len(ns) == 4 - linalg.rank(a)
    for v in ns:
        assert linalg.is_zero_matrix(a @ v)


def test_elementary_symmetric_diag():
    a = linalg.matrix([[2, 0, 0], [0, 3, 0], [0, 0, 5]])
    assert linalg.elementary_symmetric(a) == [1, 10, 31, 30]


def test_exterior_power_is_multiplicative():
    a = linalg.matrix([[1, 2, 0], [0, 1, 3], [4, 0, 1]])
    b = linalg.matrix([[2, 1, 1], [1, 0, 1], [0, 1, 2]])
    subs = linalg.subsets_by_degree(3)
    assert linalg.equal(linalg.exterior_power(a @ b, subs), linalg.exterior_power(a, subs) @ linalg.exterior_power(b, subs))
