"""Exact dense linear algebra on numpy object arrays.

Entries are Fractions or :class:`~kolysys.scalar.QuadraticNumber`; every
routine works over whatever field the entries live in.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import lcm

import numpy as np

from .scalar import QuadraticNumber, as_scalar


class SingularMatrixError(ArithmeticError):
    pass


def matrix(rows) -> np.ndarray:
    """Build an object-dtype matrix, coercing entries (strings allowed)."""
    rows = [[as_scalar(x) for x in row] for row in rows]
    if not rows:
        return np.empty((0, 0), dtype=object)
    out = np.empty((len(rows), len(rows[0])), dtype=object)
    for i, row in enumerate(rows):
        if len(row) != out.shape[1]:
            raise ValueError("ragged matrix")
        for j, x in enumerate(row):
            out[i, j] = x
    return out


def zeros(r: int, c: int) -> np.ndarray:
    out = np.empty((r, c), dtype=object)
    out.fill(Fraction(0))
    return out


def identity(n: int) -> np.ndarray:
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = Fraction(1)
    return out


def to_object(a) -> np.ndarray:
    a = np.asarray(a)
    if a.dtype == object:
        return a
    out = np.empty(a.shape, dtype=object)
    flat = out.reshape(-1)
    for k, x in enumerate(a.reshape(-1).tolist()):
        flat[k] = Fraction(x)
    return out


def block_diag(*blocks) -> np.ndarray:
    n = sum(b.shape[0] for b in blocks)
    m = sum(b.shape[1] for b in blocks)
    out = zeros(n, m)
    i = j = 0
    for b in blocks:
        out[i : i + b.shape[0], j : j + b.shape[1]] = b
        i += b.shape[0]
        j += b.shape[1]
    return out


def is_zero_matrix(a) -> bool:
    return all(x == 0 for x in np.asarray(a).reshape(-1))


def equal(a, b) -> bool:
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        return False
    return all(x == y for x, y in zip(a.reshape(-1), b.reshape(-1)))


def _rref(a: np.ndarray):
    """Reduced row echelon form; returns (R, pivot_columns)."""
    r = a.copy()
    rows, cols = r.shape
    pivots = []
    row = 0
    for col in range(cols):
        if row >= rows:
            break
        piv = next((i for i in range(row, rows) if r[i, col] != 0), None)
        if piv is None:
            continue
        if piv != row:
            r[[row, piv]] = r[[piv, row]]
        inv = 1 / r[row, col]
        r[row] = r[row] * inv
        for i in range(rows):
            if i != row and r[i, col] != 0:
                r[i] = r[i] - r[i, col] * r[row]
        pivots.append(col)
        row += 1
    return r, pivots


def rank(a) -> int:
    a = to_object(a)
    if a.size == 0:
        return 0
    return len(_rref(a)[1])


def nullspace(a) -> list[np.ndarray]:
    """Basis of ``{v : a @ v = 0}`` as a list of column vectors."""
    a = to_object(a)
    cols = a.shape[1]
    if a.shape[0] == 0:
        basis = []
        for j in range(cols):
            v = np.array([Fraction(0)] * cols, dtype=object)
            v[j] = Fraction(1)
            basis.append(v)
        return basis
    r, pivots = _rref(a)
    free = [j for j in range(cols) if j not in pivots]
    basis = []
    for f in free:
        v = np.array([Fraction(0)] * cols, dtype=object)
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -r[i, f]
        basis.append(v)
    return basis


def det(a) -> object:
    """Determinant by Gaussian elimination (exact field arithmetic)."""
    a = to_object(a).copy()
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("det of non-square matrix")
    out = Fraction(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i, col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[[col, piv]] = a[[piv, col]]
            out = -out
        p = a[col, col]
        out = out * p
        for i in range(col + 1, n):
            if a[i, col] != 0:
                a[i, col:] = a[i, col:] - (a[i, col] / p) * a[col, col:]
    return out


def solve(a, b) -> np.ndarray:
    """Solve ``a @ x = b`` for square invertible ``a``; ``b`` may be a matrix."""
    a = to_object(a)
    b = to_object(b)
    n = a.shape[0]
    vec = b.ndim == 1
    bb = b.reshape(n, -1)
    aug = np.concatenate([a, bb], axis=1)
    r, pivots = _rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) > n:
        raise SingularMatrixError("matrix is singular")
    x = r[:n, n:]
    return x.reshape(-1) if vec else x


def inverse(a) -> np.ndarray:
    a = to_object(a)
    return solve(a, identity(a.shape[0]))


def charpoly(a) -> list:
    """Coefficients ``[c0, ..., cn]`` of ``det(t*I - a) = sum c_k t^(n-k)``.

    Berkowitz's algorithm: division free, so it is exact over any
    commutative ring the entries belong to.
    """
    a = to_object(a)
    n = a.shape[0]
    if n == 0:
        return [Fraction(1)]
    # vect holds the coefficient column for the leading principal submatrix
    vect = [Fraction(1), -a[0, 0]]
    for r in range(1, n):
        R = a[:r, r]  # column above the diagonal
        S = a[r, :r]  # row left of the diagonal
        A = a[:r, :r]
        # Toeplitz column: [1, -a_rr, -S R, -S A R, ..., -S A^{r-1} R]
        col = [Fraction(1), -a[r, r]]
        v = R
        for _ in range(r):
            col.append(-sum((S[i] * v[i] for i in range(r)), Fraction(0)))
            v = A @ v
        # multiply lower-triangular Toeplitz matrix (r+2 x r+1) by vect
        new = []
        for i in range(r + 2):
            acc = Fraction(0)
            for j in range(min(i, r) + 1):
                acc = acc + col[i - j] * vect[j]
            new.append(acc)
        vect = new
    return vect


def elementary_symmetric(a) -> list:
    """``[e_0, ..., e_n]`` of the eigenvalues, read off the char. polynomial."""
    c = charpoly(a)
    return [c[k] if k % 2 == 0 else -c[k] for k in range(len(c))]


def minor(a, rows, cols):
    if not rows:
        return Fraction(1)
    return det(a[np.ix_(list(rows), list(cols))])


def exterior_power(a, subsets) -> np.ndarray:
    """Matrix of the induced map on exterior powers, in the given subset basis.

    Entry ``(S, T)`` is the minor on rows ``S`` and columns ``T`` when
    ``|S| == |T|`` and zero otherwise.
    """
    a = to_object(a)
    m = len(subsets)
    out = zeros(m, m)
    for i, s in enumerate(subsets):
        for j, t in enumerate(subsets):
            if len(s) == len(t):
                out[i, j] = minor(a, s, t)
    return out


def subsets_by_degree(n: int) -> list[tuple[int, ...]]:
    return [s for k in range(n + 1) for s in combinations(range(n), k)]


def common_denominator(a) -> int:
    """Least common denominator of a rational array (1 for an empty array)."""
    den = 1
    for x in np.asarray(a).reshape(-1):
        if isinstance(x, QuadraticNumber):
            raise TypeError("quadratic entries have no rational denominator")
        den = lcm(den, Fraction(x).denominator)
    return den


def integer_form(a):
    """``(N, den)`` with ``a = N / den`` and ``N`` holding Python ints, or None over Q(sqrt d)."""
    a = np.asarray(a, dtype=object)
    try:
        den = common_denominator(a)
    except TypeError:
        return None
    flat = [int(Fraction(x) * den) for x in a.reshape(-1)]
    return np.array(flat, dtype=object).reshape(a.shape), den


def split_quadratic(a):
    """Split an array over Q(sqrt d) into rational parts ``(A0, A1, d)``.

    ``d`` is ``None`` when every entry is rational.
    """
    a = np.asarray(a)
    d = None
    for x in a.reshape(-1):
        if isinstance(x, QuadraticNumber):
            if d is not None and x.d != d:
                raise ValueError("entries from different quadratic fields")
            d = x.d
    a0 = np.empty(a.shape, dtype=object)
    a1 = np.empty(a.shape, dtype=object)
    f0, f1 = a0.reshape(-1), a1.reshape(-1)
    for k, x in enumerate(a.reshape(-1)):
        if isinstance(x, QuadraticNumber):
            f0[k], f1[k] = x.a, x.b
        else:
            f0[k], f1[k] = Fraction(x), Fraction(0)
    return a0, a1, d
