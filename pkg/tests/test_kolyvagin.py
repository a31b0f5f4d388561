import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from kolysys import linalg
from kolysys.clifford import CliffordContext, pin_lift_semisimple
from kolysys.kolyvagin import (
    EquivariantModule,
    IntertwiningError,
    KolyvaginPolarization,
    check_frobenius,
    check_iteration,
    fixed_space_dim,
    lambda_of_module,
    lambda_via_highest_vector,
    order,
    pairing_dense,
    pairing_transfer,
    reconstruct_structure,
    sequence_from_module,
    sequence_from_polarization,
    tr_koly,
    verify_kolylfun,
)

from conftest import invertible_int, nonzero_fractions


def diag_orthogonal(alphas):
    n = len(alphas)
    f = linalg.zeros(2 * n, 2 * n)
    for i, a in enumerate(alphas):
        f[i, i], f[n + i, n + i] = Fraction(a), 1 / Fraction(a)
    return f


def polarization(alphas):
    ctx = CliffordContext(len(alphas))
    f = diag_orthogonal(alphas)
    return KolyvaginPolarization(ctx, f, pin_lift_semisimple(ctx, f))


def test_module_route_dimension_two():
    a = Fraction(3)
    t = EquivariantModule.spinor(CliffordContext(1), [[a]])
    seq = sequence_from_module(t, 2)
    assert seq[0] == 1 - 1 / a
    assert seq[2][0, 1] == 1 and seq[2][1, 0] == -1 / a
    assert seq[2][0, 0] == 0 and seq[2][1, 1] == 0
    assert not seq[1].any()


def test_pin_route_dimension_two():
    t = Fraction(2)
    seq = sequence_from_polarization(polarization([t * t]), 6)
    assert seq[0] == t - 1 / t
    for r in (2, 4, 6):
        assert seq[r][(0, 1) * (r // 2)] == t
        assert seq[r][(1, 0) * (r // 2)] == -1 / t


def test_identity_rows_dimension_two():
    alpha = Fraction(9, 4)
    rows = verify_kolylfun(polarization([alpha]), 8)
    assert rows[0].lhs == -(2 - alpha - 1 / alpha)
    for row in rows:
        assert row.equal
        if row.r > 0 and row.r % 2 == 0:
            assert row.lhs == (-1) ** (row.r * (row.r - 1) // 2 + 1) * 2
    a = Fraction(3)
    rows = verify_kolylfun(EquivariantModule.spinor(CliffordContext(1), [[a]]), 2)
    assert rows[0].lhs == (1 - 1 / a) ** 2 and rows[2].lhs == 2 / a


@given(invertible_int(2))
def test_module_route_identity(fl):
    t = EquivariantModule.spinor(CliffordContext(2), fl)
    assert all(row.equal for row in verify_kolylfun(t, 6))


@pytest.mark.parametrize("seed", range(4))
def test_transfer_matches_dense(seed):
    rng = random.Random(seed)
    n = 1 + seed % 3
    fl = linalg.matrix([[rng.randint(-3, 3) + (3 if i == j else 0) for j in range(n)] for i in range(n)])
    t = EquivariantModule.spinor(CliffordContext(n), fl)
    seq = sequence_from_module(t, 5)
    for r in range(6):
        assert pairing_dense(seq, r) == pairing_transfer(t.ctx, t.FT, 1 - 2 * t.parities, r)


@given(invertible_int(2))
def test_characterization_on_module_sequences(fl):
    t = EquivariantModule.spinor(CliffordContext(2), fl)
    seq = sequence_from_module(t, 5)
    assert check_iteration(seq)[0]
    assert check_frobenius(seq, t.F)[0]


def test_characterization_detects_damage():
    t = EquivariantModule.spinor(CliffordContext(1), [[Fraction(3)]])
    seq = sequence_from_module(t, 4)
    seq.z[2] = seq.z[2].copy()
    seq.z[2][0, 1] += 1
    assert not check_iteration(seq)[0]


@given(st.lists(nonzero_fractions.map(lambda x: x * x), min_size=2, max_size=2))
def test_reconstruct_roundtrip(alphas):
    pol = polarization(alphas)
    seq = sequence_from_polarization(pol, 4)
    assert check_iteration(seq)[0] and check_frobenius(seq, pol.F)[0]
    assert reconstruct_structure(seq) == pol.Ftilde


def test_reconstruct_from_module():
    t = EquivariantModule.spinor(CliffordContext(2), [[2, 1], [0, 1]])
    seq = sequence_from_module(t, 4)
    assert reconstruct_structure(seq) == t.ctx.module.element_from_operator(t.FT)


def test_order_examples():
    ctx = CliffordContext(2)
    f = linalg.identity(4)
    seq = sequence_from_polarization(KolyvaginPolarization(ctx, f, ctx.one()), 4)
    assert order(seq) == 4 == fixed_space_dim(f)
    seq = sequence_from_polarization(polarization([4]), 2)
    assert order(seq) == 0
    seq = sequence_from_polarization(polarization([4, 1]), 4)
    assert order(seq) == 2 == fixed_space_dim(diag_orthogonal([4, 1]))


def test_order_of_zero_sequence():
    ctx = CliffordContext(1)
    seq = sequence_from_polarization(KolyvaginPolarization(ctx, linalg.identity(2), ctx.zero(), check=False), 2)
    assert order(seq) == math.inf


def test_tr_koly_sums():
    ctx = CliffordContext(1)
    a, c = Fraction(3), Fraction(5)
    s = EquivariantModule.spinor(ctx, [[a]])
    s2 = EquivariantModule.spinor(ctx, [[a]], scale=c)
    base = ctx.module.element_from_operator(s.FT)
    assert tr_koly(s) == base
    assert tr_koly(s.direct_sum(s2)) == (1 + c) * base
    assert not tr_koly(s.direct_sum(s, shift_parity=True))


def test_intertwining_is_checked():
    ctx = CliffordContext(1)
    s = EquivariantModule.spinor(ctx, [[3]])
    with pytest.raises(IntertwiningError):
        EquivariantModule(ctx, s.F, s.actions, linalg.matrix([[1, 1], [0, 1]]), s.parities)


@given(invertible_int(2), nonzero_fractions)
def test_lambda_routes_agree(fl, c):
    ctx = CliffordContext(2)
    t = EquivariantModule.spinor(ctx, fl, scale=c)
    lam = lambda_of_module(t)
    assert lam == lambda_via_highest_vector(t)
    assert lam == c * c / linalg.det(fl)


def test_lambda_dimension_two():
    a = Fraction(7)
    assert lambda_of_module(EquivariantModule.spinor(CliffordContext(1), [[a]])) == 1 / a


def test_highest_vector_needs_rank_one():
    ctx = CliffordContext(1)
    s = EquivariantModule.spinor(ctx, [[3]])
    with pytest.raises(ValueError):
        lambda_via_highest_vector(s.direct_sum(s))


@given(invertible_int(2), st.sampled_from([1, -1]))
def test_parity_flip(fl, _):
    ctx = CliffordContext(2)
    t = EquivariantModule.spinor(ctx, fl)
    g = ctx.module.element_from_operator(t.FT)
    pol = KolyvaginPolarization(ctx, t.F, g, check=False)
    flip = KolyvaginPolarization(ctx.with_parity(-1), t.F, g, check=False)
    s1, s2 = sequence_from_polarization(pol, 4), sequence_from_polarization(flip, 4)
    for r in range(5):
        assert linalg.equal(-np.asarray(s1[r]), np.asarray(s2[r]))
        assert pairing_dense(s1, r) == pairing_dense(s2, r)


@given(st.lists(nonzero_fractions.map(lambda x: x * x), min_size=2, max_size=2), nonzero_fractions)
def test_scaling(alphas, c):
    pol = polarization(alphas)
    scaled = KolyvaginPolarization(pol.ctx, pol.F, c * pol.Ftilde)
    for a, b in zip(verify_kolylfun(pol, 4), verify_kolylfun(scaled, 4)):
        assert b.lhs == c * c * a.lhs and b.rhs == c * c * a.rhs and b.equal


def test_block_diagonal():
    fl1, fl2 = linalg.matrix([[2, 1], [1, 1]]), linalg.matrix([[3]])
    whole = linalg.block_diag(fl1, fl2)
    runs = [EquivariantModule.spinor(CliffordContext(m.shape[0]), m) for m in (fl1, fl2, whole)]
    assert all(all(row.equal for row in verify_kolylfun(t, 6)) for t in runs)
    # a wrong λ on one block is seen by the block and by the sum
    bad = lambda_of_module(runs[1]) * 2
    assert not all(row.equal for row in verify_kolylfun(runs[1], 6, lam=bad))
    lam_whole = lambda_of_module(runs[0]) * bad
    assert not all(row.equal for row in verify_kolylfun(runs[2], 6, lam=lam_whole))


def test_det_minus_one_pin_route():
    ctx = CliffordContext(2)
    f = diag_orthogonal([1, 4])
    f[0, 0] = f[2, 2] = Fraction(0)
    f[0, 2] = f[2, 0] = Fraction(-1)
    pol = KolyvaginPolarization(ctx, f, pin_lift_semisimple(ctx, f))
    assert all(row.equal for row in verify_kolylfun(pol, 6))
    seq = sequence_from_polarization(pol, 4)
    assert order(seq) == fixed_space_dim(f) == 1
