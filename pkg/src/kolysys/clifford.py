"""Clifford algebra of an odd symplectic space, its spinor module, and Pin lifts.

The space M has basis ``l1..ln, l1*..ln*`` (indices ``0..2n-1``) with
``ω(l_i, l*_j) = δ_ij`` unless a different symmetric Gram matrix is given.
Elements are dicts from strictly increasing index words to scalars.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from itertools import combinations

import numpy as np

from . import linalg
from .scalar import as_scalar, exact_sqrt, format_scalar
from .superlin import BilinearForm, SuperMap, SuperSpace


class CliffordContext:
    """Cl(M, ω) for ``M`` of dimension ``(0|2n)``.

    ``parity`` is the sign of the chosen square root of ω_top; +1 is the one
    induced by the standard polarization.
    """

    def __init__(self, n: int, gram=None, parity: int = 1):
        if n < 0:
            raise ValueError("n must be non-negative")
        if parity not in (1, -1):
            raise ValueError("parity choice must be +1 or -1")
        self.n = n
        self.parity = parity
        self.space = SuperSpace((), tuple(f"l{i + 1}" for i in range(n)) + tuple(f"l{i + 1}*" for i in range(n)))
        if gram is None:
            g = linalg.zeros(2 * n, 2 * n)
            for i in range(n):
                g[i, n + i] = g[n + i, i] = Fraction(1)
            self.standard = True
        else:
            g = linalg.to_object(gram)
            if not linalg.equal(g, g.T):
                raise ValueError("an odd symplectic form has a symmetric Gram matrix")
            self.standard = False
        self.form = BilinearForm(self.space, g, "symplectic")
        if not self.form.nondegenerate:
            raise linalg.SingularMatrixError("form is degenerate")
        self.gram = g
        self._word_cache: dict = {}

    @property
    def dim(self) -> int:
        return 2 * self.n

    def with_parity(self, parity: int) -> "CliffordContext":
        if not self.standard:
            return CliffordContext(self.n, self.gram, parity)
        return CliffordContext(self.n, None, parity)

    def same_algebra(self, other: "CliffordContext") -> bool:
        return self is other or (self.n == other.n and linalg.equal(self.gram, other.gram))

    # -- construction helpers ---------------------------------------------
    def scalar(self, c) -> "CliffordElement":
        c = as_scalar(c)
        return CliffordElement(self, {(): c} if c != 0 else {})

    def zero(self) -> "CliffordElement":
        return CliffordElement(self, {})

    def one(self) -> "CliffordElement":
        return self.scalar(1)

    def gen(self, i) -> "CliffordElement":
        if isinstance(i, str):
            i = self.space.index(i)
        return CliffordElement(self, {(i,): Fraction(1)})

    def l(self, i: int) -> "CliffordElement":
        return self.gen(i)

    def lstar(self, i: int) -> "CliffordElement":
        return self.gen(self.n + i)

    def vector(self, coeffs) -> "CliffordElement":
        coeffs = [as_scalar(c) for c in coeffs]
        if len(coeffs) != self.dim:
            raise ValueError("vector length must equal dim M")
        return CliffordElement(self, {(i,): c for i, c in enumerate(coeffs) if c != 0})

    def word(self, indices) -> "CliffordElement":
        """The product of generators in the given order, normalised."""
        return CliffordElement(self, dict(self.normalize(tuple(indices))))

    # -- normal form ------------------------------------------------------
    def normalize(self, word: tuple) -> dict:
        """Rewrite a product of generators into increasing words."""
        hit = self._word_cache.get(word)
        if hit is not None:
            return hit
        for k in range(len(word) - 1):
            a, b = word[k], word[k + 1]
            if a < b:
                continue
            rest = word[:k] + word[k + 2 :]
            out: dict = {}
            if a == b:
                c = self.gram[a, a] / 2
                if c != 0:
                    _accumulate(out, self.normalize(rest), c)
            else:
                c = self.gram[a, b]
                if c != 0:
                    _accumulate(out, self.normalize(rest), c)
                _accumulate(out, self.normalize(word[:k] + (b, a) + word[k + 2 :]), -1)
            break
        else:
            out = {word: Fraction(1)}
        self._word_cache[word] = out
        return out

    # -- module -----------------------------------------------------------
    @cached_property
    def module(self) -> "CliffordModule":
        return clifford_module(self)


def _accumulate(target: dict, source: dict, coeff) -> None:
    for w, c in source.items():
        v = target.get(w, 0) + coeff * c
        if v == 0:
            target.pop(w, None)
        else:
            target[w] = v


class CliffordElement:
    """An element of Cl(M) in normal form.  Treat as immutable."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: CliffordContext, terms: dict):
        self.ctx = ctx
        self.terms = {w: c for w, c in terms.items() if c != 0}

    def _check(self, other):
        if not isinstance(other, CliffordElement):
            return self.ctx.scalar(other)
        if not self.ctx.same_algebra(other.ctx):
            raise ValueError("elements from different Clifford algebras")
        return other

    def __add__(self, other):
        other = self._check(other)
        out = dict(self.terms)
        _accumulate(out, other.terms, 1)
        return CliffordElement(self.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        return CliffordElement(self.ctx, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if not isinstance(other, CliffordElement):
            c = as_scalar(other)
            return CliffordElement(self.ctx, {w: c * v for w, v in self.terms.items()})
        other = self._check(other)
        out: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                _accumulate(out, self.ctx.normalize(w1 + w2), c1 * c2)
        return CliffordElement(self.ctx, out)

    def __rmul__(self, other):
        c = as_scalar(other)
        return CliffordElement(self.ctx, {w: c * v for w, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, CliffordElement):
            return self.ctx.same_algebra(other.ctx) and self.terms == other.terms
        try:
            return self.terms == self.ctx.scalar(other).terms
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms, key=lambda w: (len(w), w)):
            name = "·".join(self.ctx.space.basis[i] for i in w) or "1"
            parts.append(f"({format_scalar(self.terms[w])})*{name}")
        return " + ".join(parts)

    # -- structure ----------------------------------------------------------
    def scalar_part(self):
        return self.terms.get((), Fraction(0))

    def degree(self) -> int:
        """Filtration degree: the longest word present (-1 for zero)."""
        return max((len(w) for w in self.terms), default=-1)

    def parity(self) -> int | None:
        ps = {len(w) % 2 for w in self.terms}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else 0

    def is_vector(self) -> bool:
        return all(len(w) == 1 for w in self.terms)

    def as_vector(self) -> np.ndarray:
        if not self.is_vector():
            raise ValueError("element does not lie in M")
        v = np.array([Fraction(0)] * self.ctx.dim, dtype=object)
        for (i,), c in self.terms.items():
            v[i] = c
        return v

    def transpose(self) -> "CliffordElement":
        out: dict = {}
        for w, c in self.terms.items():
            _accumulate(out, self.ctx.normalize(tuple(reversed(w))), c)
        return CliffordElement(self.ctx, out)

    def serialize(self) -> list:
        return [[list(w), format_scalar(self.terms[w])] for w in sorted(self.terms)]

    def inverse(self) -> "CliffordElement":
        mod = self.ctx.module
        a = mod.action(self)
        if linalg.det(a) == 0:
            raise ZeroDivisionError("element is not invertible")
        return mod.element_from_operator(linalg.inverse(a))


def multiply(x: CliffordElement, y: CliffordElement) -> CliffordElement:
    return x * y


def transpose(x: CliffordElement) -> CliffordElement:
    return x.transpose()


# -- spinor module ------------------------------------------------------------


class CliffordModule:
    """S = Λ(L*) with basis the subsets of ``{0..n-1}`` ordered by size then lexicographically."""

    def __init__(self, ctx: CliffordContext):
        if not ctx.standard:
            raise ValueError("the spinor module needs the standard polarization")
        self.ctx = ctx
        n = ctx.n
        self.basis = linalg.subsets_by_degree(n)
        self.index = {s: k for k, s in enumerate(self.basis)}
        self.parities = np.array([len(s) % 2 for s in self.basis], dtype=np.int64)
        self.signs = 1 - 2 * self.parities
        dim = len(self.basis)
        gens = []
        for i in range(n):  # l_i contracts
            m = np.zeros((dim, dim), dtype=np.int64)
            for s in self.basis:
                if i in s:
                    pos = s.index(i)
                    t = s[:pos] + s[pos + 1 :]
                    m[self.index[t], self.index[s]] = -1 if pos % 2 else 1
            gens.append(m)
        for i in range(n):  # l*_i wedges on the left
            m = np.zeros((dim, dim), dtype=np.int64)
            for s in self.basis:
                if i not in s:
                    before = sum(1 for x in s if x < i)
                    t = tuple(sorted(s + (i,)))
                    m[self.index[t], self.index[s]] = -1 if before % 2 else 1
            gens.append(m)
        self.generators = gens
        self._word_mats: dict = {(): np.eye(dim, dtype=np.int64)}
        self._units: dict = {}

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def space(self) -> SuperSpace:
        names = ["·".join(f"l{i + 1}*" for i in s) or "1" for s in self.basis]
        even = tuple(nm for nm, p in zip(names, self.parities) if p == 0)
        odd = tuple(nm for nm, p in zip(names, self.parities) if p == 1)
        return SuperSpace(even, odd)

    def word_matrix(self, word: tuple) -> np.ndarray:
        m = self._word_mats.get(word)
        if m is None:
            m = self.generators[word[0]] @ self.word_matrix(word[1:])
            self._word_mats[word] = m
        return m

    def action(self, x: CliffordElement) -> np.ndarray:
        if not x.ctx.same_algebra(self.ctx):
            raise ValueError("element from a different algebra")
        out = linalg.zeros(self.dim, self.dim)
        for w, c in x.terms.items():
            m = self.word_matrix(w)
            nz = np.nonzero(m)
            for i, j in zip(*nz):
                out[i, j] += c * int(m[i, j])
        return out

    def vector_action(self, v) -> np.ndarray:
        out = linalg.zeros(self.dim, self.dim)
        for i, c in enumerate(v):
            if c != 0:
                out = out + self.generators[i].astype(object) * c
        return out

    def supertrace(self, op) -> object:
        return sum((int(s) * op[k, k] for k, s in enumerate(self.signs)), Fraction(0))

    def _unit(self, s: tuple, t: tuple) -> CliffordElement:
        """The element acting as the matrix unit sending ``t`` to ``s``."""
        key = (s, t)
        hit = self._units.get(key)
        if hit is None:
            ctx, n = self.ctx, self.ctx.n
            vac = ctx.one()
            for i in range(n):
                vac = vac * ctx.word((i, n + i))
            up = ctx.word(tuple(n + i for i in s))
            down = ctx.word(tuple(reversed(t)))
            hit = up * vac * down
            self._units[key] = hit
        return hit

    def element_from_operator(self, op) -> CliffordElement:
        op = linalg.to_object(op)
        if op.shape != (self.dim, self.dim):
            raise ValueError("operator has the wrong size")
        out: dict = {}
        for i, s in enumerate(self.basis):
            for j, t in enumerate(self.basis):
                c = op[i, j]
                if c != 0:
                    _accumulate(out, self._unit(s, t).terms, c)
        return CliffordElement(self.ctx, out)

    def check_relations(self) -> bool:
        g = self.ctx.gram
        for a in range(self.ctx.dim):
            for b in range(self.ctx.dim):
                lhs = self.generators[a] @ self.generators[b] + self.generators[b] @ self.generators[a]
                if not np.array_equal(lhs, int(g[a, b]) * np.eye(self.dim, dtype=np.int64)):
                    return False
        return True


def clifford_module(ctx: CliffordContext) -> CliffordModule:
    return CliffordModule(ctx)


def module_action(x: CliffordElement) -> np.ndarray:
    return x.ctx.module.action(x)


def element_from_operator(ctx: CliffordContext, op) -> CliffordElement:
    return ctx.module.element_from_operator(op)


def element_from_operator_generic(ctx: CliffordContext, op) -> CliffordElement:
    """Solve the full ``4^n``-unknown linear system; slow, kept as an independent check."""
    mod = ctx.module
    words = [w for k in range(ctx.dim + 1) for w in combinations(range(ctx.dim), k)]
    cols = [mod.word_matrix(w).reshape(-1) for w in words]
    a = linalg.to_object(np.stack(cols, axis=1))
    coeffs = linalg.solve(a, linalg.to_object(op).reshape(-1))
    return CliffordElement(ctx, {w: c for w, c in zip(words, coeffs) if c != 0})


# -- traces -------------------------------------------------------------------


def top_trace(x: CliffordElement):
    """Trace map Cl(M) -> k, via the supertrace on the spinor module."""
    mod = x.ctx.module
    return x.ctx.parity * mod.supertrace(mod.action(x))


def top_sign(n: int) -> int:
    """Value of the polarization-induced ω_top^{1/2} on the word ``l1…ln l1*…ln*``."""
    return -1 if (n * (n - 1) // 2) % 2 else 1


def top_trace_graded(x: CliffordElement):
    """Trace map read off the top graded piece: the top-word coefficient."""
    ctx = x.ctx
    top = tuple(range(ctx.dim))
    return ctx.parity * top_sign(ctx.n) * x.terms.get(top, Fraction(0))


# -- Pin group ----------------------------------------------------------------


def _conjugate(g: CliffordElement, ginv: CliffordElement, i: int) -> CliffordElement:
    return g * g.ctx.gen(i) * ginv


def reflection_action(g: CliffordElement, m) -> np.ndarray:
    """``det(g) g m g^{-1}`` for a parity-pure invertible ``g``."""
    par = g.parity()
    if par is None:
        raise ValueError("element is not parity-pure")
    ginv = g.inverse()
    mv = g.ctx.vector(m) if not isinstance(m, CliffordElement) else m
    out = g * mv * ginv
    if not out.is_vector():
        raise ValueError("conjugation leaves M: element is not in GPin")
    v = out.as_vector()
    return -v if par else v


def reflection_matrix(g: CliffordElement) -> np.ndarray:
    """Matrix of ``m -> R_g(m)`` in the basis of M (columns are images)."""
    ctx = g.ctx
    cols = []
    for i in range(ctx.dim):
        e = [0] * ctx.dim
        e[i] = 1
        cols.append(reflection_action(g, e))
    return np.stack(cols, axis=1) if cols else linalg.zeros(0, 0)


def gpin_check(g: CliffordElement) -> bool:
    if g.parity() is None:
        return False
    try:
        ginv = g.inverse()
    except ZeroDivisionError:
        return False
    return all(_conjugate(g, ginv, i).is_vector() for i in range(g.ctx.dim))


def spinor_norm(g: CliffordElement):
    """λ(g), the scalar ``g^t g``; zero for the zero element."""
    if not g:
        return Fraction(0)
    prod = g.transpose() * g
    if any(w != () for w in prod.terms):
        raise ValueError("g^t g is not a scalar: element is not in GPin")
    return prod.scalar_part()


# -- explicit lifts of semisimple orthogonal maps -----------------------------


def is_orthogonal(ctx: CliffordContext, f) -> bool:
    f = linalg.to_object(f)
    return linalg.equal(f.T @ ctx.gram @ f, ctx.gram)


def _form(ctx, u, v):
    return u @ ctx.gram @ v


def _rational_eigenspaces(f, basis) -> dict:
    """Eigenspaces of ``f`` restricted to the span of ``basis`` (columns).

    Requires every eigenvalue to be rational and ``f`` semisimple there.
    """
    import sympy

    if basis.shape[1] == 0:
        return {}
    # coordinates of f on the subspace
    coords = linalg.solve(basis.T @ basis, basis.T @ f @ basis)
    t = sympy.Symbol("t")
    cp = linalg.charpoly(coords)
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in map(Fraction, cp)], t)
    roots = sympy.roots(poly, filter="Q")
    if sum(roots.values()) != coords.shape[0]:
        raise ValueError("eigenvalues are not rational")
    out = {}
    for root, mult in roots.items():
        alpha = Fraction(int(root.p), int(root.q))
        ker = linalg.nullspace(coords - alpha * linalg.identity(coords.shape[0]))
        if len(ker) != mult:
            raise ValueError("map is not semisimple")
        out[alpha] = basis @ np.stack(ker, axis=1)
    return out


def _isotropic_vector(ctx, space):
    """A nonzero isotropic vector in the column span of ``space``, or None."""
    cols = [space[:, k] for k in range(space.shape[1])]
    for v in cols:
        if _form(ctx, v, v) == 0:
            return v
    for a in range(len(cols)):
        for b in range(a + 1, len(cols)):
            u, v = cols[a], cols[b]
            A, B, C = _form(ctx, v, v), _form(ctx, u, v), _form(ctx, u, u)
            # C + 2 B t + A t^2 = 0
            disc = B * B - A * C
            try:
                root = exact_sqrt(disc)
            except ValueError:
                continue
            if not isinstance(root, Fraction):
                continue
            t = (-B + root) / A
            return u + t * v
    return None


def _lagrangian(ctx, space):
    """Split a non-degenerate subspace into isotropic halves ``(U, W)`` with ``ω(U_i, W_j) = δ``."""
    us, ws = [], []
    cur = space
    while cur.shape[1]:
        u = _isotropic_vector(ctx, cur)
        if u is None:
            raise ValueError("no rational polarization of the fixed subspace")
        cols = [cur[:, k] for k in range(cur.shape[1])]
        w0 = next((c for c in cols if _form(ctx, u, c) != 0), None)
        if w0 is None:
            raise ValueError("degenerate subspace")
        w0 = w0 / _form(ctx, u, w0)
        w = w0 - (_form(ctx, w0, w0) / 2) * u
        us.append(u)
        ws.append(w)
        # orthogonal complement of <u, w> inside cur
        rest = []
        for c in cols:
            c = c - _form(ctx, w, c) * u - _form(ctx, u, c) * w
            rest.append(c)
        basis = _column_basis(np.stack(rest, axis=1))
        cur = basis
    return us, ws


def _column_basis(a):
    r, pivots = linalg._rref(a.T.copy())
    return np.stack([r[k] for k in range(len(pivots))], axis=1) if pivots else linalg.zeros(a.shape[0], 0)


def _dual_partners(ctx, us, space):
    """Vectors ``w_j`` in ``space`` with ``ω(u_i, w_j) = δ_ij``."""
    h = np.stack(us, axis=0) @ ctx.gram @ space  # m x k
    r, pivots = linalg._rref(h.copy())
    if len(pivots) != len(us):
        raise ValueError("pairing is degenerate on the eigenspaces")
    # pick the pivot columns: square invertible subsystem
    sub = h[:, pivots]
    x = linalg.inverse(sub)
    return [space[:, pivots] @ x[:, j] for j in range(len(us))]


def _polarized_eigenbasis(ctx, f, basis):
    """Eigenvectors ``u_i`` spanning an f-stable Lagrangian of ``span(basis)``, with isotropic duals ``w_i``."""
    spaces = _rational_eigenspaces(f, basis)
    us, alphas = [], []
    n_amb = ctx.n
    full = basis.shape[1] == ctx.dim
    std_l = full and all(f[n_amb + i, j] == 0 for i in range(n_amb) for j in range(n_amb))
    for alpha, e in sorted(spaces.items()):
        if std_l:
            inter = _intersection(e, _std_l(ctx))
            vecs = [inter[:, k] for k in range(inter.shape[1])]
        elif alpha * alpha == 1:
            vecs, _ = _lagrangian(ctx, e)
        elif abs(alpha) > 1:
            vecs = [e[:, k] for k in range(e.shape[1])]
        else:
            vecs = []
        us.extend(vecs)
        alphas.extend([alpha] * len(vecs))
    if 2 * len(us) != basis.shape[1]:
        raise ValueError("could not find an f-stable polarization")
    ws = [None] * len(us)
    for alpha in sorted(set(alphas)):
        idx = [k for k, a in enumerate(alphas) if a == alpha]
        partner = spaces[1 / alpha]
        dual = _dual_partners(ctx, [us[k] for k in idx], partner)
        for k, w in zip(idx, dual):
            ws[k] = w
    # make the duals isotropic without leaving their eigenspaces
    m = len(us)
    gw = [[_form(ctx, ws[j], ws[k]) for k in range(m)] for j in range(m)]
    ws = [ws[j] - sum((gw[j][k] / 2 * us[k] for k in range(m)), 0 * ws[j]) for j in range(m)]
    return us, ws, alphas


def _std_l(ctx):
    out = linalg.zeros(ctx.dim, ctx.n)
    for i in range(ctx.n):
        out[i, i] = Fraction(1)
    return out


def _intersection(a, b):
    """Basis of span(a) ∩ span(b)."""
    ker = linalg.nullspace(np.concatenate([a, -b], axis=1))
    if not ker:
        return linalg.zeros(a.shape[0], 0)
    vecs = np.stack([a @ k[: a.shape[1]] for k in ker], axis=1)
    return _column_basis(vecs)


def _lift_from_eigenbasis(ctx, us, ws, alphas, sqrt_d=None):
    g = ctx.one()
    for u, w, alpha in zip(us, ws, alphas):
        if alpha <= 0:
            raise ValueError("eigenvalue has no real square root")
        s = exact_sqrt(alpha, sqrt_d)
        cu, cw = ctx.vector(u), ctx.vector(w)
        g = g * (s * (cu * cw) + (1 / s) * (cw * cu))
    return g


def _find_scaled(ctx, space, target):
    """A vector ``v`` in ``span(space)`` with ``ω(v, v) = target`` (None if the search fails)."""
    cols = [space[:, k] for k in range(space.shape[1])]
    cands = list(cols)
    for a in range(len(cols)):
        for b in range(a + 1, len(cols)):
            cands += [cols[a] + cols[b], cols[a] - cols[b]]
    for v in cands:
        q = _form(ctx, v, v)
        if q == 0 or (target / q) < 0:
            continue
        try:
            s = exact_sqrt(target / q)
        except ValueError:
            continue
        return s * v
    return None


def pin_lift_semisimple(ctx: CliffordContext, f, y=None, x=None, sqrt_d: int | None = None) -> CliffordElement:
    """Pin lift of a semisimple orthogonal ``f`` (matrix on M, columns are images).

    For ``det f = -1`` a reflection vector ``y`` (``f y = -y``, ``ω(y, y) = 2``)
    and a fixed non-isotropic ``x`` orthogonal to it are found automatically
    unless supplied.  Square roots of eigenvalues must be rational or lie in
    ``Q(sqrt(sqrt_d))``.
    """
    if isinstance(f, SuperMap):
        f = f.matrix
    f = linalg.to_object(f) if isinstance(f, np.ndarray) else linalg.matrix(f)
    if not is_orthogonal(ctx, f):
        raise ValueError("map does not preserve the form")
    d = linalg.det(f)
    ident = linalg.identity(ctx.dim)
    if d == 1:
        us, ws, alphas = _polarized_eigenbasis(ctx, f, ident)
        return _lift_from_eigenbasis(ctx, us, ws, alphas, sqrt_d)
    if d != -1:
        raise ValueError("orthogonal map with determinant other than ±1")
    if y is None:
        ker = linalg.nullspace(f + ident)
        y = _find_scaled(ctx, np.stack(ker, axis=1), Fraction(2)) if ker else None
        if y is None:
            raise ValueError("no reflection vector with ω(y, y) = 2 over the field")
    else:
        y = np.array([as_scalar(c) for c in y], dtype=object)
    if x is None:
        ker = linalg.nullspace(f - ident)
        fixed = np.stack(ker, axis=1) if ker else linalg.zeros(ctx.dim, 0)
        x = None
        for k in range(fixed.shape[1]):
            if _form(ctx, fixed[:, k], fixed[:, k]) != 0:
                x = fixed[:, k]
                break
        if x is None and fixed.shape[1] >= 2:
            x = fixed[:, 0] + fixed[:, 1]
            if _form(ctx, x, x) == 0:
                x = None
        if x is None:
            raise ValueError("no non-isotropic fixed vector")
    else:
        x = np.array([as_scalar(c) for c in x], dtype=object)
    if not linalg.equal(f @ y, -y) or _form(ctx, y, y) != 2:
        raise ValueError("y must satisfy f y = -y and ω(y, y) = 2")
    if not linalg.equal(f @ x, x) or _form(ctx, x, x) == 0 or _form(ctx, x, y) != 0:
        raise ValueError("x must be fixed, non-isotropic and orthogonal to y")
    pair = np.stack([x, y], axis=0)
    comp = linalg.nullspace(pair @ ctx.gram)
    g = ctx.one()
    if comp:
        basis = np.stack(comp, axis=1)
        us, ws, alphas = _polarized_eigenbasis(ctx, f, basis)
        g = _lift_from_eigenbasis(ctx, us, ws, alphas, sqrt_d)
    return g * ctx.vector(y)
