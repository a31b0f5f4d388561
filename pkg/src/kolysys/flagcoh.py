"""Polynomial-ring model of the GL_n × GL_{n-1} bimodules and the scalar κ.

Module elements are polynomials in ``x, y`` whose coefficients lie in the
natural base ring ``k[c_1..c_n, d_1..d_{n-1}, ħ]``, reduced modulo
``χ_n(x; c)`` and ``χ_{n-1}(y; d)`` where ``χ_m(t; a) = Σ_j (-t)^j a_{m-j}``.
The barred generators are never stored: ``c̄_i = Σ_j (-x)^j c_{i-j}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from sympy import QQ
from sympy.polys.orderings import lex
from sympy.polys.rings import ring


class FlagModel:
    """All rings and maps for a fixed ``n ≥ 2``."""

    def __init__(self, n: int):
        if n < 2:
            raise ValueError("n must be at least 2")
        self.n = n
        names = ["x", "y", "w", "v", "z", "hbar"]
        names += [f"c{i}" for i in range(1, n + 1)]
        names += [f"d{i}" for i in range(1, n)]
        names += [f"e{i}" for i in range(1, n)]
        names += [f"eb{i}" for i in range(1, n - 1)]
        self.R, *gens = ring(",".join(names), QQ, lex)
        g = dict(zip(names, gens))
        self.x, self.y, self.w, self.v, self.z, self.hbar = (g[k] for k in ["x", "y", "w", "v", "z", "hbar"])
        one = self.R.one
        zero = self.R.zero
        self.c = [one] + [g[f"c{i}"] for i in range(1, n + 1)]
        self.d = [one] + [g[f"d{i}"] for i in range(1, n)]
        self.e = [one] + [g[f"e{i}"] for i in range(1, n)]
        self.eb = [one] + [g[f"eb{i}"] for i in range(1, n - 1)]
        self._zero = zero

    # -- helpers ------------------------------------------------------------
    def _seq(self, seq, i):
        return seq[i] if 0 <= i < len(seq) else self._zero

    def chi(self, t, a, m):
        """``Σ_{j=0}^{m} (-t)^j a_{m-j}``."""
        return sum(((-t) ** j * self._seq(a, m - j) for j in range(m + 1)), self._zero)

    def bar(self, t, a, i):
        """``ā_i = Σ_{j=0}^{i} (-t)^j a_{i-j}``, the inverse of ``a_i = t ā_{i-1} + ā_i``."""
        if i < 0:
            return self._zero
        return sum(((-t) ** j * self._seq(a, i - j) for j in range(i + 1)), self._zero)

    @cached_property
    def relations(self):
        n = self.n
        return [self.chi(self.x, self.c, n), self.chi(self.y, self.d, n - 1)]

    # -- module structure ---------------------------------------------------
    def reduce(self, p):
        """Normal form in the basis ``x^i y^j`` (``i < n``, ``j < n-1``)."""
        return p.rem(self.relations)

    def is_reduced(self, p) -> bool:
        return all(m[0] < self.n and m[1] < self.n - 1 for m in p.monoms())

    def cbar(self, i):
        return self.bar(self.x, self.c, i)

    def dbar(self, i):
        return self.bar(self.y, self.d, i)

    def _twist_images(self, sign: int):
        """Images of ``c_i, d_i`` under ``x -> x + sign ħ`` with the barred generators fixed."""
        h = self.hbar
        subs = []
        for i in range(1, self.n + 1):
            subs.append((self.c[i], self.c[i] + sign * h * self.cbar(i - 1)))
        for i in range(1, self.n):
            subs.append((self.d[i], self.d[i] + sign * h * self.dbar(i - 1)))
        return subs

    def shift(self, p, sign: int):
        """The ring automorphism ``x -> x + sign·ħ``, ``y -> y + sign·ħ``, barred generators fixed."""
        subs = [(self.x, self.x + sign * self.hbar), (self.y, self.y + sign * self.hbar)]
        return self.reduce(p.compose(subs + self._twist_images(sign)))

    def base_twist(self, f, sign: int):
        """``ĩ_{G,±λ}(f)`` written in the natural coordinates: ``c_i -> c_i ∓ ħ c̄_{i-1}``."""
        return f.compose(self._twist_images(-sign))

    def left_action(self, f, m, sign: int = 1):
        """Act by ``f ∈ R_G`` on ``m`` through ``ĩ_{G,sign·λ}``."""
        return self.reduce(self.base_twist(f, sign) * m)

    def right_action(self, m, f):
        return self.reduce(m * f)

    # -- push maps to R_H -----------------------------------------------------
    def _enat(self, i):
        """``e_i`` of ``k[z, ē]`` in the natural structure."""
        n = self.n
        if i > n - 1:
            return self._zero
        return self.z * self._seq(self.eb, i - 1) + self._seq(self.eb, i)

    def restrict(self, a, h=None):
        """First map: ``x, y -> z`` and every base generator to its natural image in ``k[z, ē, ħ]``."""
        subs = [(self.x, self.z), (self.y, self.z)]
        subs += [(self.c[i], self._enat(i)) for i in range(1, self.n + 1)]
        subs += [(self.d[i], self._enat(i)) for i in range(1, self.n)]
        out = a.compose(subs)
        if h is not None:
            out = out * self.h_natural(h)
        return out

    def h_natural(self, h):
        return h.compose([(self.e[i], self._enat(i)) for i in range(1, self.n)])

    def h_twisted(self, h, sign: int):
        """``ĩ_{H,sign·λ}(h)``: ``e_i -> (z - sign ħ) ē_{i-1} + ē_i``."""
        zt = self.z - sign * self.hbar
        subs = [
            (self.e[i], zt * self._seq(self.eb, i - 1) + self._seq(self.eb, i)) for i in range(1, self.n)
        ]
        return h.compose(subs)

    def push(self, p, sign: int, normalization):
        """Second map: the ``ĩ_{H,sign·λ}``-linear map with ``z^{n-2} -> normalization``."""
        n = self.n
        w = self.w
        subs = [(self.z, w + sign * self.hbar)]
        subs += [(self.eb[i], self.bar(w, self.e, i)) for i in range(1, n - 1)]
        q = p.compose(subs)
        q = q.rem([self.chi(w, self.e, n - 1)])
        coeff = self._zero
        for mon, cf in q.terms():
            if mon[2] == n - 2:
                m = list(mon)
                m[2] = 0
                coeff += self.R({tuple(m): cf})
        return normalization * coeff

    def c_v(self, a, h=None):
        self._require_reduced(a)
        return self.push(self.restrict(a, h), 1, (-1) ** self.n)

    def c_w(self, a, h=None):
        self._require_reduced(a)
        return self.push(self.restrict(a, h), -1, 1)

    def b_geo(self, a1, a2):
        """``-(coefficient of x^{n-1} y^{n-2})`` of ``a1 · σ(a2)`` in the ``ĩ_{G,λ}``-twisted basis."""
        self._require_reduced(a1)
        self._require_reduced(a2)
        prod = self.reduce(self.shift(a1, 1) * a2)
        n = self.n
        coeff = self._zero
        for mon, cf in prod.terms():
            if mon[0] == n - 1 and mon[1] == n - 2:
                m = list(mon)
                m[0] = m[1] = 0
                coeff += self.R({tuple(m): cf})
        return -coeff

    def restrict_base(self, f):
        """``R_G -> R_H``: ``c_i -> e_i`` (``c_n -> 0``), ``d_i -> e_i``."""
        subs = [(self.c[i], self._seq(self.e, i) if i < self.n else self._zero) for i in range(1, self.n + 1)]
        subs += [(self.d[i], self.e[i]) for i in range(1, self.n)]
        return f.compose(subs)

    def _require_reduced(self, a):
        if not self.is_reduced(a):
            raise ValueError("module element is not reduced")

    # -- tensors --------------------------------------------------------------
    def monomial(self, i: int, j: int):
        return self.x**i * self.y**j

    def swap_allowed(self, i, s, j, t) -> bool:
        return i + j <= self.n - 1 and s + t <= self.n - 2

    def swap(self, terms: dict) -> dict:
        """``x^i y^s ⊗ x^j y^t -> x^j y^t ⊗ x^i y^s`` in the range where it is determined."""
        out = {}
        for (i, s, j, t), h in terms.items():
            if not self.swap_allowed(i, s, j, t):
                raise ValueError(f"swap is not determined on x^{i}y^{s} ⊗ x^{j}y^{t}")
            out[(j, t, i, s)] = out.get((j, t, i, s), self._zero) + h
        return out

    def cv_after_cw(self, terms: dict):
        total = self._zero
        for (i, s, j, t), h in terms.items():
            inner = self.c_w(self.monomial(j, t), h)
            total += self.c_v(self.monomial(i, s), inner)
        return total

    def cw_after_cv(self, terms: dict):
        total = self._zero
        for (i, s, j, t), h in terms.items():
            inner = self.c_v(self.monomial(j, t), h)
            total += self.c_w(self.monomial(i, s), inner)
        return total

    def b_geo_tensor(self, terms: dict):
        total = self._zero
        for (i, s, j, t), h in terms.items():
            total += self.restrict_base(self.b_geo(self.monomial(i, s), self.monomial(j, t))) * h
        return total

    def witness(self) -> dict:
        return {(self.n - 1, 0, 0, self.n - 2): self.R.one}

    def fmt(self, p) -> str:
        return str(p.as_expr()).replace("hbar", "ħ") if p else "0"


@dataclass
class KappaReport:
    n: int
    kappa: Fraction
    gln1: str
    gln2: str
    gln3: str
    residuals: int | None = None
    checked: int | None = None

    def as_dict(self) -> dict:
        out = {
            "n": self.n,
            "kappa": f"{self.kappa.numerator}/{self.kappa.denominator}",
            "gln1": self.gln1,
            "gln2": self.gln2,
            "gln3": self.gln3,
        }
        if self.residuals is not None:
            out["full_basis"] = {"checked": self.checked, "residuals": self.residuals}
        return out


def compute_kappa(n: int, full_basis: bool = False) -> KappaReport:
    """Solve ``c_V c_W - c_W c_V sw = κ ħ b_geo`` on the witness ``x^{n-1} ⊗ y^{n-2} ⊗ 1``."""
    model = FlagModel(n)
    wit = model.witness()
    first = model.cv_after_cw(wit)
    second = model.cw_after_cv(model.swap(wit))
    geo = model.b_geo_tensor(wit)
    if not geo:
        raise ArithmeticError("geometric pairing vanishes on the witness")
    diff = first - second
    ratio = diff.exquo(model.hbar * geo)
    if not ratio.is_ground:
        raise ArithmeticError("commutator is not a scalar multiple of ħ b_geo")
    k = ratio.LC if ratio else QQ(0)
    kappa = Fraction(int(k.numerator), int(k.denominator))
    report = KappaReport(n, kappa, model.fmt(first), model.fmt(second), model.fmt(geo))
    if full_basis:
        bad = checked = 0
        for i in range(n):
            for s in range(n - 1):
                for j in range(n - i):
                    for t in range(n - 1 - s):
                        term = {(i, s, j, t): model.R.one}
                        lhs = model.cv_after_cw(term) - model.cw_after_cv(model.swap(term))
                        rhs = model.R(k) * model.hbar * model.b_geo_tensor(term)
                        checked += 1
                        bad += lhs != rhs
        report.residuals, report.checked = bad, checked
    return report
