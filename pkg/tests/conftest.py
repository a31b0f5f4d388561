import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import settings, strategies as st

from kolysys import linalg

settings.register_profile("default", max_examples=25, deadline=None)
settings.load_profile("default")

fractions = st.builds(
    Fraction,
    st.integers(-6, 6),
    st.integers(1, 4),
)
nonzero_fractions = fractions.filter(lambda x: x != 0)


@st.composite
def invertible_int(draw, n, bound=3):
    """Integer matrix ``P L U`` with unit-free triangular factors, so always invertible."""
    ints = st.integers(-bound, bound)
    diag = st.sampled_from([1, -1, 2, -2, 3])
    low = linalg.identity(n)
    up = linalg.zeros(n, n)
    for i in range(n):
        for j in range(i):
            low[i, j] = Fraction(draw(ints))
        up[i, i] = Fraction(draw(diag))
        for j in range(i + 1, n):
            up[i, j] = Fraction(draw(ints))
    perm = draw(st.permutations(list(range(n))))
    return (low @ up)[perm, :]


@st.composite
def rational_matrix(draw, r, c):
    return linalg.matrix([[draw(fractions) for _ in range(c)] for _ in range(r)])


def random_orthogonal(rng: random.Random, n: int):
    """Random element of O(M) as [[F_L, F_L B],[0, F_L^{-T}]] followed by a random symmetric-form change."""
    from kolysys.lfun import orthogonal_from_lagrangian

    while True:
        fl = linalg.matrix([[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)])
        if linalg.det(fl) != 0:
            break
    b = linalg.zeros(n, n)
    for i in range(n):
        for j in range(i + 1, n):
            v = Fraction(rng.randint(-2, 2))
            b[i, j], b[j, i] = v, -v
    return orthogonal_from_lagrangian(fl, b)


@pytest.fixture
def rng():
    return random.Random(1234)


ACCEPTANCE_LINES: list = []


@pytest.fixture
def report_line():
    def record(criterion: int, ok: bool, detail: str):
        line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'} ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
