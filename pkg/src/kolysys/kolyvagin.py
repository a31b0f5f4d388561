"""Kolyvagin trace sequences and the identity relating them to L-factors.

A sequence is stored as a list of dense arrays ``z[r]`` of shape
``(2n,)*r`` in the dual basis of M.  Both constructions reduce to
supertraces ``str(A_{i1}⋯A_{ir} X)`` of spinor-module operators, which is
how every entry is computed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import numpy as np

from . import linalg
from .clifford import (
    CliffordContext,
    CliffordElement,
    gpin_check,
    reflection_matrix,
    spinor_norm,
)
from .lfun import derivative_from_symmetric, elementary_symmetric, epsilon_sign
from .scalar import QuadraticNumber, format_scalar
from .superlin import coev_of_form, dual_identify_inverse


class IntertwiningError(ValueError):
    pass


# -- inputs -------------------------------------------------------------------


@dataclass
class KolyvaginPolarization:
    ctx: CliffordContext
    F: np.ndarray
    Ftilde: CliffordElement
    check: bool = True

    def __post_init__(self):
        self.F = linalg.to_object(self.F)
        if self.check and self.Ftilde:
            if not gpin_check(self.Ftilde):
                raise ValueError("F̃ is not in GPin")
            if not linalg.equal(reflection_matrix(self.Ftilde), self.F):
                raise ValueError("F̃ does not cover F")


@dataclass
class EquivariantModule:
    """A Clifford module T with action matrices, a compatible ``F_T`` and a parity per basis vector."""

    ctx: CliffordContext
    F: np.ndarray
    actions: list
    FT: np.ndarray
    parities: np.ndarray
    grading: np.ndarray | None = None
    check: bool = True

    def __post_init__(self):
        self.F = linalg.to_object(self.F)
        self.FT = linalg.to_object(self.FT)
        self.parities = np.asarray(self.parities, dtype=np.int64)
        if self.check:
            self.check_intertwining()

    @property
    def dim(self) -> int:
        return self.FT.shape[0]

    def action_of_vector(self, v) -> np.ndarray:
        out = linalg.zeros(self.dim, self.dim)
        for c, a in zip(v, self.actions):
            if c != 0:
                out = out + linalg.to_object(a) * c
        return out

    def check_intertwining(self) -> None:
        f_int, ft_int = linalg.integer_form(self.F), linalg.integer_form(self.FT)
        exact = f_int is not None and ft_int is not None
        for i in range(self.ctx.dim):
            if exact:
                # clear denominators so the comparison runs on integers
                (fi, df), (ft, _) = f_int, ft_int
                a = np.zeros((self.dim, self.dim), dtype=object)
                for c, act in zip(fi[:, i], self.actions):
                    if c != 0:
                        a = a + np.asarray(act, dtype=object) * c
                ok = linalg.equal(a @ ft, (ft @ np.asarray(self.actions[i], dtype=object)) * df)
            else:
                lhs = self.action_of_vector(self.F[:, i]) @ self.FT
                ok = linalg.equal(lhs, self.FT @ linalg.to_object(self.actions[i]))
            if not ok:
                raise IntertwiningError(f"F_T does not intertwine basis vector {self.ctx.space.basis[i]}")
        self._intertwines = True

    @classmethod
    def spinor(cls, ctx: CliffordContext, fl, scale=1) -> "EquivariantModule":
        """T = S for ``F = F_L ⊕ F_L^{-T}``, with ``F_T`` the induced map on Λ(L*)."""
        fl = linalg.to_object(fl) if isinstance(fl, np.ndarray) else linalg.matrix(fl)
        mod = ctx.module
        finv_t = linalg.inverse(fl).T
        ft = linalg.exterior_power(finv_t, mod.basis) * scale
        f = linalg.block_diag(fl, finv_t)
        grading = np.array([len(b) for b in mod.basis], dtype=np.int64)
        return cls(ctx, f, list(mod.generators), ft, mod.parities.copy(), grading)

    @classmethod
    def from_lift(cls, ctx: CliffordContext, f, ftilde: CliffordElement) -> "EquivariantModule":
        mod = ctx.module
        return cls(ctx, f, list(mod.generators), mod.action(ftilde), mod.parities.copy(), mod.parities.copy())

    def direct_sum(self, other: "EquivariantModule", shift_parity: bool = False) -> "EquivariantModule":
        """``self ⊕ other``, or ``self ⊕ Π other`` when ``shift_parity``."""
        acts = [linalg.block_diag(linalg.to_object(a), linalg.to_object(b)) for a, b in zip(self.actions, other.actions)]
        if shift_parity:
            # on ΠT the odd generators pick up a sign so the action stays even
            acts = [
                linalg.block_diag(linalg.to_object(a), -linalg.to_object(b))
                for a, b in zip(self.actions, other.actions)
            ]
        par = np.concatenate([self.parities, (other.parities + int(shift_parity)) % 2])
        return EquivariantModule(self.ctx, self.F, acts, linalg.block_diag(self.FT, other.FT), par)


@dataclass
class KolyvaginSequence:
    ctx: CliffordContext
    z: list = field(default_factory=list)

    @property
    def r_max(self) -> int:
        return len(self.z) - 1

    def __getitem__(self, r: int) -> np.ndarray:
        return self.z[r]

    def scaled(self, c) -> "KolyvaginSequence":
        return KolyvaginSequence(self.ctx, [arr * c for arr in self.z])


# -- dense sequences ----------------------------------------------------------


def _rational_split(vec):
    """Write an object vector as ``(ints, den)``, or None if it has irrational entries."""
    if any(isinstance(x, QuadraticNumber) for x in vec):
        return None
    den = 1
    for x in vec:
        den = math.lcm(den, Fraction(x).denominator)
    return [int(Fraction(x) * den) for x in vec], den


def _exact_matvec(mat_int: np.ndarray, vec) -> np.ndarray:
    """``mat_int @ vec`` for an integer matrix and an exact vector."""
    split = _rational_split(vec)
    if split is not None:
        ints, den = split
        bound = max((abs(x) for x in ints), default=0) * int(np.abs(mat_int).sum(axis=1).max(initial=0))
        if bound < 2**62:
            res = mat_int @ np.array(ints, dtype=np.int64)
            return np.array([Fraction(int(x), den) for x in res], dtype=object)
        res = mat_int.astype(object) @ np.array(ints, dtype=object)
        return np.array([Fraction(int(x), den) for x in res], dtype=object)
    return mat_int.astype(object) @ np.asarray(vec, dtype=object)


def _word_tensor(actions, r: int) -> np.ndarray:
    """All products ``A_{i1}⋯A_{ir}``, shape ``(m**r, d, d)``."""
    acts = np.stack([np.asarray(a, dtype=np.int64) for a in actions])
    m, d, _ = acts.shape
    cur = np.eye(d, dtype=np.int64)[None]
    for _ in range(r):
        cur = np.einsum("wab,ibc->wiac", cur, acts).reshape(-1, d, d)
    return cur


def _supertrace_vector(x, signs) -> np.ndarray:
    """``u`` with ``str(A X) = vec(A) · u``."""
    x = linalg.to_object(x)
    return (x.T * np.asarray(signs, dtype=object)[:, None]).reshape(-1)


def _sequence(actions, x, signs, dim_m: int, r_max: int, scale=1) -> list:
    u = _supertrace_vector(x, signs)
    d = x.shape[0]
    out = []
    for r in range(r_max + 1):
        if r % 2 and _is_even_operator(x, signs):
            out.append(np.full((dim_m,) * r, Fraction(0), dtype=object))
            continue
        words = _word_tensor(actions, r).reshape(-1, d * d)
        vals = _exact_matvec(words, u)
        if scale != 1:
            vals = vals * scale
        out.append(vals.reshape((dim_m,) * r) if r else np.array(vals[0], dtype=object))
    return out


def _is_even_operator(x, signs) -> bool:
    s = np.asarray(signs)
    return all(x[i, j] == 0 for i in range(len(s)) for j in range(len(s)) if s[i] != s[j])


def sequence_from_polarization(pol: KolyvaginPolarization, r_max: int) -> KolyvaginSequence:
    """``z_r(m_{i1}⊗…⊗m_{ir}) = tr(m_{i1}⋯m_{ir} F̃)``."""
    if r_max < 0:
        raise ValueError("r_max must be non-negative")
    mod = pol.ctx.module
    x = mod.action(pol.Ftilde)
    z = _sequence(mod.generators, x, mod.signs, pol.ctx.dim, r_max, pol.ctx.parity)
    return KolyvaginSequence(pol.ctx, z)


def sequence_from_module(t: EquivariantModule, r_max: int) -> KolyvaginSequence:
    """``z_{T,r} = str(a(m_{i1})⋯a(m_{ir}) F_T)``."""
    if r_max < 0:
        raise ValueError("r_max must be non-negative")
    t.check_intertwining()
    signs = 1 - 2 * t.parities
    z = _sequence(t.actions, t.FT, signs, t.ctx.dim, r_max)
    return KolyvaginSequence(t.ctx, z)


# -- characterizing properties ------------------------------------------------


def _insert_pair(c: np.ndarray, z: np.ndarray, i: int) -> np.ndarray:
    """Tensor with ``c`` occupying axes ``i-1, i`` and ``z`` the others."""
    outer = np.multiply.outer(c, z)
    return np.moveaxis(outer, (0, 1), (i - 1, i))


def check_iteration(seq: KolyvaginSequence):
    """``z_r - sw_{i,i+1} z_r = coev_{i,i+1}(z_{r-2})`` for every r and i.

    Returns ``(True, None)`` or ``(False, (r, i))`` at the first failure.
    """
    coev = coev_of_form(seq.ctx.form)
    for r in range(2, seq.r_max + 1):
        zr = seq[r]
        for i in range(1, r):
            # odd factors: the Koszul swap is minus the plain transpose
            lhs = zr + np.swapaxes(zr, i - 1, i)
            rhs = _insert_pair(coev, seq[r - 2], i)
            if not linalg.equal(lhs, rhs):
                return False, (r, i)
    return True, None


def frobenius_pull(z: np.ndarray, f) -> np.ndarray:
    """``(-1)^{r-1} F(m_r^*) ⊗ m_1^* ⊗ ⋯`` in components, with F acting on M* by the inverse transpose."""
    r = z.ndim
    if r == 0:
        return z
    finv = linalg.inverse(linalg.to_object(f))
    out = np.moveaxis(z, 0, -1) @ finv
    return out if (r - 1) % 2 == 0 else -out


def check_frobenius(seq: KolyvaginSequence, f):
    for r in range(1, seq.r_max + 1):
        if not linalg.equal(frobenius_pull(seq[r], f), seq[r]):
            return False, r
    return True, None


def order(seq: KolyvaginSequence):
    for r in range(seq.r_max + 1):
        if any(x != 0 for x in np.asarray(seq[r]).reshape(-1)):
            return r
    return math.inf


def fixed_space_dim(f) -> int:
    f = linalg.to_object(f)
    return f.shape[0] - linalg.rank(f - linalg.identity(f.shape[0]))


def reconstruct_structure(seq: KolyvaginSequence) -> CliffordElement:
    """The element T with ``tr(m_{i1}⋯m_{ir} T) = z_r`` on increasing words."""
    ctx = seq.ctx
    dim = ctx.dim
    if seq.r_max < dim:
        raise ValueError(f"need z_r up to r = {dim}")
    mod = ctx.module
    words = [w for k in range(dim + 1) for w in combinations(range(dim), k)]
    mats = [mod.word_matrix(w) for w in words]
    signs = mod.signs
    pair = np.zeros((len(words), len(words)), dtype=np.int64)
    for a, ma in enumerate(mats):
        for b, mb in enumerate(mats):
            pair[a, b] = ctx.parity * int(np.einsum("i,ii->", signs, ma @ mb))
    rhs = np.array([seq[len(w)][w] if w else seq[0][()] for w in words], dtype=object)
    coeffs = linalg.solve(linalg.to_object(pair), rhs)
    return CliffordElement(ctx, {w: c for w, c in zip(words, coeffs) if c != 0})


# -- module invariants --------------------------------------------------------


def _common_kernel(mats) -> list:
    stacked = np.concatenate([linalg.to_object(m) for m in mats], axis=0)
    return linalg.nullspace(stacked)


def _det_is_one(f) -> bool:
    return linalg.det(linalg.to_object(f)) == 1


def vacuum_space(t: EquivariantModule) -> list:
    """Vectors of T killed by every ``l_i``, each of pure parity."""
    n = t.ctx.n
    out = []
    for p in (0, 1):
        mask = t.parities == p
        basis = _common_kernel([linalg.to_object(a)[:, mask] for a in t.actions[:n]]) if n else [
            np.array([Fraction(int(k == j)) for k in range(int(mask.sum()))], dtype=object)
            for j in range(int(mask.sum()))
        ]
        for v in basis:
            full = np.array([Fraction(0)] * t.dim, dtype=object)
            full[mask] = v
            out.append((full, p))
    return out


def tr_koly(t: EquivariantModule) -> CliffordElement:
    """Partial supertrace of ``F_T`` over the multiplicity space of ``T ≅ S ⊗ V``."""
    if not _det_is_one(t.F):
        raise ValueError("module route needs det F = 1")
    if not getattr(t, "_intertwines", False):
        t.check_intertwining()
    ctx = t.ctx
    mod = ctx.module
    n, d = ctx.n, mod.dim
    vac = vacuum_space(t)
    if len(vac) * d != t.dim:
        raise ValueError("module is not a sum of spinor modules")
    acts = [linalg.to_object(a) for a in t.actions]
    cols = []
    for v, _ in vac:
        for s in mod.basis:
            w = v
            for i in reversed(s):
                w = acts[n + i] @ w
            cols.append(w)
    psi = np.stack(cols, axis=1)
    c = linalg.solve(psi, t.FT @ psi)
    x = linalg.zeros(d, d)
    for j, (_, p) in enumerate(vac):
        blk = c[j * d : (j + 1) * d, j * d : (j + 1) * d]
        x = x + (-blk if p else blk)
    return ctx.parity * mod.element_from_operator(x)


def spinor_norm_via_module(g: CliffordElement):
    """λ(g) from ``a(g^t) a(g) = λ·id``."""
    if not g:
        return Fraction(0)
    mod = g.ctx.module
    prod = mod.action(g.transpose()) @ mod.action(g)
    lam = prod[0, 0]
    if not linalg.equal(prod, lam * linalg.identity(mod.dim)):
        raise ValueError("g^t g is not a scalar: element is not in GPin")
    return lam


def lambda_of_module(t: EquivariantModule):
    return spinor_norm_via_module(tr_koly(t))


def standard_lambda(ctx: CliffordContext, fl):
    """λ of Λ(L*) with its induced ``F``: computed, not assumed."""
    return lambda_of_module(EquivariantModule.spinor(ctx, fl))


def lambda_via_highest_vector(t: EquivariantModule):
    """``α² λ₀`` from an ``F_T``-eigenvector killed by L."""
    ctx, n = t.ctx, t.ctx.n
    f = t.F
    if any(f[n + i, j] != 0 for i in range(n) for j in range(n)):
        raise ValueError("F does not preserve the polarization")
    vac = vacuum_space(t)
    if not vac:
        raise ValueError("no vector killed by L")
    if len(vac) != 1:
        raise ValueError("highest-vector formula needs a module of rank one")
    v, _ = vac[0]
    image = t.FT @ v
    k = next(i for i, x in enumerate(v) if x != 0)
    alpha = image[k] / v[k]
    if not linalg.equal(image, alpha * v):
        raise ValueError("the L-killed vector is not an F_T eigenvector")
    return alpha * alpha * standard_lambda(ctx, f[:n, :n])


# -- the identity -------------------------------------------------------------


def _transfer_matrix(actions, ginv, r: int) -> np.ndarray:
    """``R`` with ``Σ_{I,J} Π G^{-1}[i_t,j_t] Z(I) Z(J) = u·R·u`` where ``Z(I) = vec(A_I)·u``."""
    acts = [np.asarray(a, dtype=np.int64) for a in actions]
    d = acts[0].shape[0]
    den = 1
    for x in ginv.reshape(-1):
        den = math.lcm(den, Fraction(x).denominator)
    k = np.zeros((d * d, d * d), dtype=np.int64)
    for i in range(len(acts)):
        for j in range(len(acts)):
            if ginv[i, j] != 0:
                k += int(ginv[i, j] * den) * np.kron(acts[i], acts[j])
    bound = int(np.abs(k).sum(axis=1).max(initial=0)) ** max(r, 1)
    if bound < 2**62:
        kr = np.linalg.matrix_power(k, r) if r else np.eye(d * d, dtype=np.int64)
    else:
        kr = np.eye(d * d, dtype=np.int64).astype(object)
        ko = k.astype(object)
        for _ in range(r):
            kr = kr @ ko
    # reorder ((a1,a2),(b1,b2)) -> ((a1,b1),(a2,b2))
    kr = kr.reshape(d, d, d, d).transpose(0, 2, 1, 3).reshape(d * d, d * d)
    return kr, den**r


@lru_cache(maxsize=None)
def _spinor_transfer(n: int, r: int):
    ctx = CliffordContext(n)
    return _transfer_matrix(ctx.module.generators, ctx.form.inverse_gram, r)


def _is_standard_action(ctx: CliffordContext, actions) -> bool:
    gens = ctx.module.generators
    if len(actions) != len(gens):
        return False
    return all(a is g or (np.shape(a) == g.shape and np.array_equal(np.asarray(a), g)) for a, g in zip(actions, gens))


def tensor_sign(r: int) -> int:
    return -1 if (r * (r - 1) // 2) % 2 else 1


def pairing_transfer(ctx: CliffordContext, x, signs, r: int, actions=None):
    """``ω_r(z_r, z_r)`` for ``z_r = str(A_I X)`` without materialising ``z_r``.

    ``actions`` defaults to the spinor module of a standard context.
    """
    u = _supertrace_vector(x, signs)
    if actions is not None and ctx.standard and _is_standard_action(ctx, actions):
        actions = None
    if actions is None:
        if not ctx.standard:
            raise ValueError("pass the action matrices for a non-standard form")
        rmat, den = _spinor_transfer(ctx.n, r)
    else:
        rmat, den = _transfer_matrix(actions, ctx.form.inverse_gram, r)
    w = rmat @ u if rmat.dtype == object else _exact_matvec(rmat, u)
    val = sum((a * b for a, b in zip(u, w)), Fraction(0))
    return tensor_sign(r) * val / den


def pairing_dense(seq: KolyvaginSequence, r: int):
    """``ω_r(z_r, z_r)`` by transporting ``z_r`` into ``M^{⊗r}`` factor by factor."""
    form = seq.ctx.form
    ginv = dual_identify_inverse(form).matrix
    z = seq[r]
    zhat = z
    for axis in range(r):
        zhat = np.moveaxis(np.tensordot(ginv, zhat, axes=([1], [axis])), 0, axis)
    w = zhat
    for axis in range(r):
        w = np.moveaxis(np.tensordot(form.gram, w, axes=([1], [axis])), 0, axis)
    val = np.sum(zhat * w) if r else zhat * w
    return tensor_sign(r) * (val if not isinstance(val, np.ndarray) else val[()])


@dataclass
class KolylfunRow:
    r: int
    lhs: object
    rhs: object

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs

    def as_dict(self) -> dict:
        return {"r": self.r, "lhs": format_scalar(self.lhs), "rhs": format_scalar(self.rhs), "equal": self.equal}


def verify_kolylfun(source, r_max: int, lam=None, method: str = "auto") -> list[KolylfunRow]:
    """Compare ``ω_r(z_r, z_r)`` with ``λ ε_{n,r} D_r`` for ``r = 0..r_max``.

    ``source`` is a :class:`KolyvaginPolarization` or an
    :class:`EquivariantModule`.  ``method`` picks how the left side is
    computed: "transfer", "dense" or "auto".
    """
    if isinstance(source, KolyvaginPolarization):
        ctx, f = source.ctx, source.F
        if lam is None:
            lam = spinor_norm_via_module(source.Ftilde) if ctx.standard else spinor_norm(source.Ftilde)
        x = ctx.module.action(source.Ftilde)
        signs = ctx.module.signs
    elif isinstance(source, EquivariantModule):
        ctx, f = source.ctx, source.F
        if lam is None:
            lam = lambda_of_module(source)
        x = source.FT
        signs = 1 - 2 * source.parities
    else:
        raise TypeError("expected a polarization or an equivariant module")
    n = ctx.n
    if method not in ("auto", "transfer", "dense"):
        raise ValueError(f"unknown method {method!r}")
    use_transfer = method != "dense"
    actions = source.actions if isinstance(source, EquivariantModule) else None
    seq = None
    if not use_transfer:
        seq = (
            sequence_from_polarization(source, r_max)
            if isinstance(source, KolyvaginPolarization)
            else sequence_from_module(source, r_max)
        )
    e = elementary_symmetric(f)
    rows = []
    for r in range(r_max + 1):
        if use_transfer:
            lhs = pairing_transfer(ctx, x, signs, r, actions)
        else:
            lhs = pairing_dense(seq, r)
        rhs = lam * epsilon_sign(n, r) * derivative_from_symmetric(e, r)
        rows.append(KolylfunRow(r, lhs, rhs))
    return rows
