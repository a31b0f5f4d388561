"""Super linear algebra over exact scalars.

Graded spaces carry an ordered basis, even vectors first.  Maps and forms
are dense object matrices in that basis; every sign that appears when odd
vectors move past each other is the Koszul sign.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import permutations, product
from math import factorial, lcm

import numpy as np

from . import linalg
from .scalar import QuadraticNumber


def _dual_name(name: str) -> str:
    return name[:-1] if name.endswith("*") else name + "*"


@dataclass(frozen=True)
class SuperSpace:
    even: tuple[str, ...] = ()
    odd: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "even", tuple(self.even))
        object.__setattr__(self, "odd", tuple(self.odd))
        names = self.even + self.odd
        if len(set(names)) != len(names):
            raise ValueError("basis names must be distinct")

    @classmethod
    def odd_space(cls, n: int, prefix: str = "e") -> "SuperSpace":
        return cls((), tuple(f"{prefix}{i + 1}" for i in range(n)))

    @property
    def basis(self) -> tuple[str, ...]:
        return self.even + self.odd

    @property
    def parities(self) -> tuple[int, ...]:
        return (0,) * len(self.even) + (1,) * len(self.odd)

    @property
    def sdim(self) -> tuple[int, int]:
        return len(self.even), len(self.odd)

    def __len__(self) -> int:
        return len(self.even) + len(self.odd)

    def index(self, name: str) -> int:
        return self.basis.index(name)

    def dual(self) -> "SuperSpace":
        return SuperSpace(
            tuple(_dual_name(x) for x in self.even), tuple(_dual_name(x) for x in self.odd)
        )

    def direct_sum(self, other: "SuperSpace") -> "SuperSpace":
        return SuperSpace(self.even + other.even, self.odd + other.odd)

    def is_purely_odd(self) -> bool:
        return not self.even


def _check_parity(mat, source: SuperSpace, target: SuperSpace, parity: int):
    for i, pi in enumerate(target.parities):
        for j, pj in enumerate(source.parities):
            if (pi - pj - parity) % 2 and mat[i, j] != 0:
                raise ValueError(
                    f"parity-{parity} map has an entry at ({target.basis[i]}, {source.basis[j]})"
                )


@dataclass(frozen=True, eq=False)
class SuperMap:
    """Homogeneous map; ``matrix[i, j]`` is the coefficient of target vector i in the image of source vector j."""

    source: SuperSpace
    target: SuperSpace
    parity: int
    matrix: np.ndarray

    def __post_init__(self):
        mat = linalg.to_object(self.matrix)
        if mat.shape != (len(self.target), len(self.source)):
            raise ValueError(f"matrix shape {mat.shape} does not match spaces")
        if self.parity not in (0, 1):
            raise ValueError("parity must be 0 or 1")
        _check_parity(mat, self.source, self.target, self.parity)
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def identity(cls, space: SuperSpace) -> "SuperMap":
        return cls(space, space, 0, linalg.identity(len(space)))

    @classmethod
    def from_blocks(cls, space: SuperSpace, even_block, odd_block) -> "SuperMap":
        return cls(space, space, 0, linalg.block_diag(linalg.matrix(even_block), linalg.matrix(odd_block)))

    def __matmul__(self, other: "SuperMap") -> "SuperMap":
        if other.target != self.source:
            raise ValueError("composition of incompatible maps")
        return SuperMap(other.source, self.target, (self.parity + other.parity) % 2, self.matrix @ other.matrix)

    def is_square(self) -> bool:
        return self.source == self.target

    def even_block(self):
        p = len(self.source.even)
        return self.matrix[:p, :p]

    def odd_block(self):
        p = len(self.source.even)
        return self.matrix[p:, p:]


def supertrace(a: SuperMap):
    if not a.is_square():
        raise ValueError("supertrace of a non-square map")
    if a.parity == 1:
        return Fraction(0)
    even, odd = a.even_block(), a.odd_block()
    return sum(np.diagonal(even), Fraction(0)) - sum(np.diagonal(odd), Fraction(0))


def superdet(a: SuperMap):
    if not a.is_square():
        raise ValueError("superdeterminant of a non-square map")
    if a.parity != 0:
        raise ValueError("superdeterminant needs an even map")
    d0 = linalg.det(a.even_block())
    d1 = linalg.det(a.odd_block())
    if d0 == 0 or d1 == 0:
        raise linalg.SingularMatrixError("diagonal block is singular")
    return d0 / d1


def koszul_sign(parities, order) -> int:
    """Sign of reordering factors with the given parities into ``order``."""
    odd = [parities[k] for k in order]
    inv = 0
    for a in range(len(order)):
        if not odd[a]:
            continue
        for b in range(a + 1, len(order)):
            if odd[b] and order[a] > order[b]:
                inv += 1
    return -1 if inv % 2 else 1


def koszul_swap(i: int, tensor, space: SuperSpace) -> np.ndarray:
    """Swap tensor factors ``i`` and ``i+1`` (1-based) with the Koszul sign."""
    tensor = np.asarray(tensor, dtype=object)
    r = tensor.ndim
    if not 1 <= i <= r - 1:
        raise IndexError(f"swap index {i} out of range for rank {r}")
    par = np.array(space.parities)
    shape = [1] * r
    shape[i - 1] = shape[i] = len(space)
    sign = 1 - 2 * np.multiply.outer(par, par).reshape([len(space)] * 2)
    sign = sign.reshape([len(space) if k in (i - 1, i) else 1 for k in range(r)])
    return np.swapaxes(tensor * sign, i - 1, i)


_MOD_PRIME = 2147483629


def _modular_full_rank(gram) -> bool | None:
    """True if the rational matrix is invertible mod a large prime; None if inconclusive."""
    n = gram.shape[0]
    flat = gram.reshape(-1)
    if any(isinstance(x, QuadraticNumber) for x in flat):
        return None
    den = 1
    for x in flat:
        den = lcm(den, Fraction(x).denominator)
    if den % _MOD_PRIME == 0:
        return None
    m = np.array([int(Fraction(x) * den) % _MOD_PRIME for x in flat], dtype=np.int64).reshape(n, n)
    p = _MOD_PRIME
    for col in range(n):
        nz = np.nonzero(m[col:, col])[0]
        if nz.size == 0:
            return None
        piv = col + nz[0]
        if piv != col:
            m[[col, piv]] = m[[piv, col]]
        inv = pow(int(m[col, col]), p - 2, p)
        m[col] = (m[col] * inv) % p
        below = m[col + 1 :, col].copy()
        if below.any():
            m[col + 1 :] = (m[col + 1 :] - (below[:, None] * m[col][None, :]) % p) % p
    return True


@dataclass(frozen=True, eq=False)
class BilinearForm:
    """``gram[i, j] = b(v_i, v_j)``; ``kind`` is "symplectic", "orthogonal" or "general"."""

    space: SuperSpace
    gram: np.ndarray
    kind: str = "general"
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        g = linalg.to_object(self.gram)
        if g.shape != (len(self.space), len(self.space)):
            raise ValueError("gram shape does not match space")
        if self.kind not in ("symplectic", "orthogonal", "general"):
            raise ValueError(f"unknown form class {self.kind!r}")
        object.__setattr__(self, "gram", g)

    def __call__(self, i, j):
        if isinstance(i, str):
            i = self.space.index(i)
        if isinstance(j, str):
            j = self.space.index(j)
        return self.gram[i, j]

    def is_even(self) -> bool:
        par = self.space.parities
        return all(
            self.gram[i, j] == 0
            for i, j in product(range(len(par)), repeat=2)
            if par[i] != par[j]
        )

    @cached_property
    def nondegenerate(self) -> bool:
        n = len(self.space)
        if n == 0:
            return True
        if n > 40 and _modular_full_rank(self.gram):
            return True
        return linalg.det(self.gram) != 0

    @cached_property
    def inverse_gram(self) -> np.ndarray:
        if not self.nondegenerate:
            raise linalg.SingularMatrixError("form is degenerate")
        return linalg.inverse(self.gram)


def canonical_symplectic(space: SuperSpace) -> BilinearForm:
    """The form ev - ev∘sw on ``space ⊕ space*``."""
    n = len(space)
    pairing = linalg.identity(n)
    return symplectic_from_pairing(space, space.dual(), pairing)


def symplectic_from_pairing(left: SuperSpace, right: SuperSpace, pairing) -> BilinearForm:
    """Extend an even non-degenerate pairing ``left ⊗ right -> k`` to a form on the sum."""
    b = linalg.matrix(pairing) if not isinstance(pairing, np.ndarray) else linalg.to_object(pairing)
    if b.shape != (len(left), len(right)):
        raise ValueError("pairing shape does not match spaces")
    for i, pi in enumerate(left.parities):
        for j, pj in enumerate(right.parities):
            if pi != pj and b[i, j] != 0:
                raise ValueError("pairing must be even")
    if b.shape[0] != b.shape[1] or linalg.det(b) == 0:
        raise linalg.SingularMatrixError("pairing is degenerate")
    n, m = len(left), len(right)
    # interleave so that the even parts of both summands come first
    total = left.direct_sum(right)
    pos_left = [total.index(x) for x in left.basis]
    pos_right = [total.index(x) for x in right.basis]
    g = linalg.zeros(n + m, n + m)
    for i, pi in enumerate(left.parities):
        for j, pj in enumerate(right.parities):
            g[pos_left[i], pos_right[j]] = b[i, j]
            g[pos_right[j], pos_left[i]] = (-1) ** (1 + pi * pj) * b[i, j]
    return BilinearForm(total, g, "symplectic")


def _tensor_space(space: SuperSpace, r: int) -> SuperSpace:
    even, odd = [], []
    for word in product(range(len(space)), repeat=r):
        name = "⊗".join(space.basis[k] for k in word) if word else "1"
        (odd if sum(space.parities[k] for k in word) % 2 else even).append(name)
    return SuperSpace(tuple(even), tuple(odd))


def tensor_form_value(form: BilinearForm, left, right):
    """``b(m_1⊗…⊗m_r, m'_1⊗…⊗m'_r)`` for basis index words."""
    par = form.space.parities
    sign = 1
    value = Fraction(1)
    for i, (a, b) in enumerate(zip(left, right)):
        for c in right[:i]:
            if par[a] and par[c]:
                sign = -sign
        value = value * form.gram[a, b]
        if value == 0:
            return Fraction(0)
    return sign * value


def induced_tensor_form(form: BilinearForm, r: int) -> BilinearForm:
    if r < 0:
        raise ValueError("order must be non-negative")
    tspace = _tensor_space(form.space, r)
    words = list(product(range(len(form.space)), repeat=r))
    names = ["⊗".join(form.space.basis[k] for k in w) if w else "1" for w in words]
    pos = {name: k for k, name in enumerate(tspace.basis)}
    g = linalg.zeros(len(words), len(words))
    for w, nw in zip(words, names):
        for v, nv in zip(words, names):
            val = tensor_form_value(form, w, v)
            if val != 0:
                g[pos[nw], pos[nv]] = val
    return BilinearForm(tspace, g, form.kind)


def sym_form_value(form: BilinearForm, left, right):
    """Value of the n!-normalised form on ``v_1⋯v_n`` and ``v'_1⋯v'_n``."""
    if len(left) != len(right):
        return Fraction(0)
    par = form.space.parities
    rpar = [par[k] for k in right]
    out = Fraction(0)
    for order in permutations(range(len(right))):
        val = tensor_form_value(form, left, [right[k] for k in order])
        if val != 0:
            out += koszul_sign(rpar, order) * val
    return out


def sym_basis(space: SuperSpace, n: int) -> list[tuple[int, ...]]:
    """Weakly increasing index words with no repeated odd index."""
    par = space.parities
    out = []

    def rec(start, word):
        if len(word) == n:
            out.append(tuple(word))
            return
        for k in range(start, len(space)):
            if par[k] and word and word[-1] == k:
                continue
            rec(k, word + [k])

    rec(0, [])
    return out


def sym_power_form(form: BilinearForm, n: int) -> BilinearForm:
    words = sym_basis(form.space, n)
    par = form.space.parities
    even, odd = [], []
    for w in words:
        name = "·".join(form.space.basis[k] for k in w) if w else "1"
        (odd if sum(par[k] for k in w) % 2 else even).append((name, w))
    ordered = even + odd
    g = linalg.zeros(len(ordered), len(ordered))
    for i, (_, w) in enumerate(ordered):
        for j, (_, v) in enumerate(ordered):
            g[i, j] = sym_form_value(form, w, v)
    space = SuperSpace(tuple(x for x, _ in even), tuple(x for x, _ in odd))
    return BilinearForm(space, g, form.kind)


def sym_restriction_factor(n: int) -> int:
    return factorial(n)


def dual_identify(form: BilinearForm) -> SuperMap:
    """``m -> form(-, m)`` as a map into the dual space."""
    if not form.nondegenerate:
        raise linalg.SingularMatrixError("form is degenerate")
    return SuperMap(form.space, form.space.dual(), 0, form.gram.copy())


def dual_identify_inverse(form: BilinearForm) -> SuperMap:
    return SuperMap(form.space.dual(), form.space, 0, form.inverse_gram.copy())


def coev_of_form(form: BilinearForm) -> np.ndarray:
    """The element of ``M*⊗M*`` paired with the Kolyvagin iteration.

    Components are taken in the dual basis: ``C[j, k] = form(m_k, m_j)``.
    """
    if not form.nondegenerate:
        raise linalg.SingularMatrixError("form is degenerate")
    return form.gram.T.copy()
