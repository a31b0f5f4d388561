import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from kolysys import linalg
from kolysys.lfun import (
    LaurentPoly,
    central_derivative,
    central_derivative_symbolic,
    epsilon_sign,
    l_function,
    orthogonal_from_lagrangian,
    root_number,
)
from kolysys.superlin import SuperMap, SuperSpace

from conftest import invertible_int, nonzero_fractions


def test_l_factor_odd_line_pair():
    a = Fraction(3)
    space = SuperSpace((), ("e", "e*"))
    f = SuperMap(space, space, 0, linalg.matrix([[a, 0], [0, 1 / a]]))
    assert l_function(f) == LaurentPoly([1, -(a + 1 / a), 1])


def test_l_factor_mixed_space():
    space = SuperSpace(("v",), ("e",))
    num, den = l_function(SuperMap.from_blocks(space, [[2]], [[3]]))
    assert num == LaurentPoly([1, -3]) and den == LaurentPoly([1, -2])


def test_root_number():
    space = SuperSpace(("v",), ("e",))
    assert root_number(SuperMap.from_blocks(space, [[2]], [[3]])) == Fraction(3, 2)


@pytest.mark.parametrize("n,r,sign", [(1, 0, -1), (1, 2, 1), (2, 4, 1), (2, 1, 1), (1, 1, -1)])
def test_epsilon(n, r, sign):
    assert epsilon_sign(n, r) == sign


def test_dimension_two_values():
    a = Fraction(5)
    f = linalg.matrix([[a, 0], [0, 1 / a]])
    assert central_derivative(f, 0) == 2 - a - 1 / a
    assert central_derivative(f, 2) == 2
    assert central_derivative(f, 1) == 0


@given(st.integers(1, 3), st.integers(0, 3), st.integers(0, 6))
def test_vanishing_below_fixed_multiplicity(n, m, r):
    m = min(m, n)
    diag = [Fraction(1)] * m + [Fraction(k + 2) for k in range(n - m)]
    fl = linalg.zeros(n, n)
    for i, x in enumerate(diag):
        fl[i, i] = x
    f = orthogonal_from_lagrangian(fl)
    d = central_derivative(f, r)
    if r < 2 * m:
        assert d == 0
    if m == n and r == 2 * n:
        assert d != 0


@pytest.mark.parametrize("seed", range(10))
def test_symbolic_oracle(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    while True:
        fl = linalg.matrix([[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)])
        if linalg.det(fl) != 0:
            break
    f = orthogonal_from_lagrangian(fl)
    for q in (2, 3):
        for r in range(5):
            assert central_derivative(f, r) == central_derivative_symbolic(f, r, q)


@given(invertible_int(2, 3))
def test_orthogonal_from_lagrangian_preserves_form(fl):
    b = linalg.matrix([[0, 1], [-1, 0]])
    f = orthogonal_from_lagrangian(fl, b)
    g = linalg.block_diag(linalg.zeros(2, 2), linalg.zeros(2, 2))
    for i in range(2):
        g[i, 2 + i] = g[2 + i, i] = Fraction(1)
    assert linalg.equal(f.T @ g @ f, g)


def test_laurent_arithmetic():
    p = LaurentPoly({-1: 1, 1: 2})
    assert (p * p)[0] == 4 and (p + p)[1] == 4
    assert p(Fraction(2)) == Fraction(9, 2)
