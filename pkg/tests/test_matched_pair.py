from fractions import Fraction

import numpy as np
import pytest

from conftest import const, cos, cov, sin, vec
from schouten_ep.euler_poincare import (
    ep_rhs_generic,
    ep_rhs_matched,
    ep_rhs_semidirect_left,
    ep_rhs_semidirect_right,
)
from schouten_ep.matched_pair import (
    DualOps,
    MatchedDual,
    MatchedElement,
    MatchedPair,
    coad_matched,
    derive_actions,
    join,
    proj_n,
    proj_s,
    split,
    tq_ambient_pair,
    tq_cross_a,
    tq_cross_b,
    tq_dual_left,
    tq_dual_ops,
    tq_dual_right,
    tq_left,
    tq_matched_pair,
    tq_right,
)
from schouten_ep.random_fields import random_cov_field, random_tensor_field
from schouten_ep.tensor_calculus import SymCovField, SymTensorField, lie_derivative, pair, schouten_graded
from schouten_ep.verify import mode_partners, partner_freqs

# ---------------------------------------------------------------------------
# finite-dimensional smoke tests


def _vec(*xs):
    return np.array([Fraction(x) for x in xs], dtype=object)


def _bracket_from_constants(c):
    """Bracket from structure constants ``c[i][j] = [e_i, e_j]``."""

    def bracket(x, y):
        out = _vec(*([0] * len(x)))
        for i in range(len(x)):
            for j in range(len(y)):
                if x[i] and y[j]:
                    out = out + x[i] * y[j] * c[i][j]
        return out

    return bracket


def _mask(keep):
    return lambda x: np.array([x[i] if i in keep else Fraction(0) for i in range(len(x))], dtype=object)


# ax+b: [e1, e2] = e2
AXB = [[_vec(0, 0), _vec(0, 1)], [_vec(0, -1), _vec(0, 0)]]
# sl2 in the basis (h, e, f)
SL2 = [
    [_vec(0, 0, 0), _vec(0, 2, 0), _vec(0, 0, -2)],
    [_vec(0, -2, 0), _vec(0, 0, 0), _vec(1, 0, 0)],
    [_vec(0, 0, 2), _vec(-1, 0, 0), _vec(0, 0, 0)],
]


def test_two_dimensional_pair_actions_and_bracket():
    br = _bracket_from_constants(AXB)
    pg, ph = _mask({0}), _mask({1})
    mp = MatchedPair.from_ambient(br, pg, ph)
    eta, xi = _vec(0, 3), _vec(2, 0)
    left, right = derive_actions(br, pg, ph, eta, xi)
    assert not any(left)
    assert list(right) == [0, -6]
    a = MatchedElement(_vec(1, 0), _vec(0, 2))
    b = MatchedElement(_vec(5, 0), _vec(0, 7))
    c = mp.bracket(a, b)
    assert list(join(c)) == list(br(join(a), join(b)))
    rg, rh = mp.compatibility(eta, _vec(0, 5), xi, _vec(-1, 0))
    assert not any(rg) and not any(rh)


def test_two_dimensional_ep_rhs_matches_hand_derivation():
    """``[y, x] = (y1 x2 - y2 x1) e2`` gives ``ad*_x mu = (mu2 x2, -mu2 x1)``."""
    F = Fraction
    zero = lambda *_: F(0)  # noqa: E731
    ops = DualOps(
        coad_g=zero,
        coad_h=zero,
        dual_left=zero,
        dual_right=lambda xi, n: -n * xi,
        cross_a=lambda eta, n: -n * eta,
        cross_b=zero,
    )
    x1, x2, m1, m2 = F(2), F(-3), F(5), F(7)
    rhs = ep_rhs_matched(ops, MatchedElement(x1, x2), MatchedDual(m1, m2))
    assert (rhs.g, rhs.h) == (-m2 * x2, m2 * x1)

    def coad_full(x, mu):
        return (mu[1] * x[1], -mu[1] * x[0])

    full = ep_rhs_generic((x1, x2), (m1, m2), lambda x, mu: _vec(*coad_full(x, mu)))
    assert (full[0], full[1]) == (rhs.g, rhs.h)


def test_abelian_generic_rhs_vanishes():
    assert ep_rhs_generic(_vec(1, 2), _vec(3, 4), lambda x, mu: 0) == 0


def test_sl2_borel_pair_closed_form_actions():
    br = _bracket_from_constants(SL2)
    pg, ph = _mask({0, 1}), _mask({2})
    derived = MatchedPair.from_ambient(br, pg, ph)

    def left(eta, xi):
        return _vec(-eta[2] * xi[1], 0, 0)

    def right(eta, xi):
        return _vec(0, 0, 2 * eta[2] * xi[0])

    closed = derived.with_actions(left=left, right=right)
    samples = [_vec(1, 2, 0), _vec(-3, 1, 0), _vec(0, 5, 0)]
    etas = [_vec(0, 0, 2), _vec(0, 0, -1)]
    for xi in samples:
        for eta in etas:
            assert list(derived.left(eta, xi)) == list(left(eta, xi))
            assert list(derived.right(eta, xi)) == list(right(eta, xi))
    for xi, xi2 in zip(samples, samples[1:]):
        rg, rh = closed.compatibility(etas[0], etas[1], xi, xi2)
        assert not any(rg) and not any(rh)
        a = MatchedElement(xi, etas[0])
        b = MatchedElement(xi2, etas[1])
        assert list(join(closed.bracket(a, b))) == list(br(join(a), join(b)))
    # with a one-dimensional h a rescaled left action stays compatible; rescale the right one
    bad = closed.with_actions(right=lambda eta, xi: right(eta, xi) * 2)
    rg, rh = bad.compatibility(etas[0], etas[1], samples[0], samples[1])
    assert any(rg) or any(rh)


def test_projections_must_be_complementary():
    br = _bracket_from_constants(SL2)
    with pytest.raises(ValueError):
        derive_actions(br, _mask({0, 1, 2}), _mask({2}), _vec(0, 0, 1), _vec(1, 1, 0))


def test_trivial_actions_give_direct_sum_and_zero_residuals():
    br = _bracket_from_constants(SL2)
    mp = MatchedPair(br, br, lambda eta, xi: _vec(0, 0, 0), lambda eta, xi: _vec(0, 0, 0))
    a = MatchedElement(_vec(1, 2, 0), _vec(0, 0, 3))
    b = MatchedElement(_vec(0, 1, 0), _vec(0, 0, 1))
    c = mp.bracket(a, b)
    assert list(c.g) == list(br(a.g, b.g)) and list(c.h) == list(br(a.h, b.h))
    rg, rh = mp.compatibility(a.h, b.h, a.g, b.g)
    assert not any(rg) and not any(rh)


# ---------------------------------------------------------------------------
# symmetric tensor instance


def test_left_action_example():
    f, g = cos(1), sin(2)
    eta = vec(f, 2)
    xi = vec(g, 0)
    left, right = derive_actions(schouten_graded, proj_s, proj_n, eta, xi)
    assert left == vec((f * g.diff(0)).scale(2), 1)
    assert right.is_zero()
    assert tq_left(eta, xi) == left


def test_right_action_example():
    X2 = vec(sin(1), 2)
    Y = vec(cos(2), 1)
    assert tq_right(X2, Y) == SymTensorField.of(-lie_derivative(Y[1], X2[2]))
    assert tq_right(X2, Y) == derive_actions(schouten_graded, proj_s, proj_n, X2, Y)[1]


def test_zero_eta_has_no_action():
    xi = vec(sin(), 0)
    z = SymTensorField.zero(1, 2)
    assert tq_left(z, xi).is_zero() and tq_right(z, xi).is_zero()


def test_closed_form_actions_agree_with_projection(rng):
    amb = tq_ambient_pair()
    for _ in range(15):
        d = rng.choice([1, 2])
        eta = random_tensor_field(rng, d, 4, 2, density=0.9)
        xi = random_tensor_field(rng, d, 1, 0, density=0.9)
        assert tq_left(eta, xi) == amb.left(eta, xi)
        assert tq_right(eta, xi) == amb.right(eta, xi)


def test_reassembly_and_antisymmetry(rng):
    mp = tq_matched_pair()
    for _ in range(10):
        d = rng.choice([1, 2])
        X, Y = random_tensor_field(rng, d), random_tensor_field(rng, d)
        assert (split(schouten_graded(X, Y)) - mp.bracket(split(X), split(Y))).is_zero()
        assert mp.bracket(split(X), split(X)).is_zero()


def test_compatibility_and_mutation(rng):
    mp = tq_matched_pair()
    bad = mp.with_actions(left=lambda eta, xi: tq_left(eta, xi).scale(2))
    found = False
    for _ in range(10):
        d = rng.choice([1, 2])
        eta, eta2 = (random_tensor_field(rng, d, 3, 2, density=0.9) for _ in range(2))
        xi, xi2 = (random_tensor_field(rng, d, 1, 0, density=0.9) for _ in range(2))
        r1, r2 = mp.compatibility(eta, eta2, xi, xi2)
        assert r1.is_zero() and r2.is_zero()
        b1, b2 = bad.compatibility(eta, eta2, xi, xi2)
        found = found or not (b1.is_zero() and b2.is_zero())
    assert found


def test_dual_left_example():
    f, a = cos(1), sin(1) + const(2)
    out = tq_dual_left(cov(a, 1), vec(f, 2))
    expected = -(f * a.diff(0) + f.diff(0) * a).scale(2)
    assert out[0].get(()) == expected
    assert out[1].is_zero()
    assert tq_dual_left(cov(a, 1), SymTensorField.zero(1, 2)).is_zero()


def test_dual_right_example():
    out = tq_dual_right(vec(const(1), 1), cov(sin(), 2))
    assert out == cov(cos(), 2)
    assert tq_dual_right(SymTensorField.zero(1, 1), cov(sin(), 2)).is_zero()


def test_cross_b_example():
    a, s = cos(1), sin(2)
    out = tq_cross_b(vec(s, 0), cov(a, 1))
    assert out == cov((a * s.diff(0)).scale(2), 2)
    assert tq_cross_a(SymTensorField.zero(1, 2), cov(a, 3)).is_zero()


def test_coad_matched_specializations(rng):
    ops = tq_dual_ops()
    d = 1
    xi = random_tensor_field(rng, d, 1, 0, density=1.0)
    eta = random_tensor_field(rng, d, 3, 2, density=1.0)
    mu = random_cov_field(rng, d, 1, 0, density=1.0)
    nu = random_cov_field(rng, d, 4, 2, density=1.0)
    zs, zn = SymTensorField.zero(d, 1), SymTensorField.zero(d, 3)
    zm, zv = SymCovField.zero(d, 1), SymCovField.zero(d, 4)
    r = coad_matched(ops, MatchedElement(xi, zn), MatchedDual(mu, zv))
    assert r.g == ops.coad_g(xi, mu) and r.h == tq_cross_b(xi, mu)
    r = coad_matched(ops, MatchedElement(zs, eta), MatchedDual(zm, nu))
    assert r.g == -tq_cross_a(eta, nu) and r.h == ops.coad_h(eta, nu)


def test_coad_matched_pairing_oracle(rng):
    ops = tq_dual_ops()
    mp = tq_matched_pair()
    for _ in range(5):
        d = rng.choice([1, 2])
        X = random_tensor_field(rng, d)
        mu = random_cov_field(rng, d)
        x, m = split(X), split(mu)
        C = join(coad_matched(ops, x, m))
        for Y in mode_partners(d, range(mu.truncation + 2), partner_freqs(X, mu)):
            assert pair(C, Y) == pair(mu, join(mp.bracket(split(Y), x)))


def test_dual_and_cross_pairing_relations(rng):
    for _ in range(5):
        d = rng.choice([1, 2])
        xi = random_tensor_field(rng, d, 1, 0, density=1.0)
        eta = random_tensor_field(rng, d, 3, 2, density=1.0)
        mu = random_cov_field(rng, d, 1, 0, density=1.0)
        nu = random_cov_field(rng, d, 4, 2, density=1.0)
        for Y in mode_partners(d, range(2), partner_freqs(mu, eta)):
            assert pair(tq_dual_left(mu, eta), Y) == pair(mu, tq_left(eta, Y))
        for Y in mode_partners(d, range(2), partner_freqs(nu, eta)):
            assert pair(tq_cross_a(eta, nu), Y) == pair(nu, tq_right(eta, Y))
        for Y in mode_partners(d, range(2, 6), partner_freqs(nu, xi)):
            assert pair(tq_dual_right(xi, nu), Y) == pair(nu, tq_right(Y, xi))
        for Y in mode_partners(d, range(2, 4), partner_freqs(mu, xi)):
            assert pair(tq_cross_b(xi, mu), Y) == pair(mu, tq_left(Y, xi))


def test_semidirect_degenerations(rng):
    ops = tq_dual_ops()
    zero = lambda *args: 0  # noqa: E731
    no_left = DualOps(ops.coad_g, ops.coad_h, zero, ops.dual_right, ops.cross_a, zero)
    no_right = DualOps(ops.coad_g, ops.coad_h, ops.dual_left, zero, zero, ops.cross_b)
    for _ in range(5):
        d = rng.choice([1, 2])
        x = split(random_tensor_field(rng, d))
        mu = split(random_cov_field(rng, d))
        assert (ep_rhs_matched(no_left, x, mu) - ep_rhs_semidirect_right(ops, x, mu)).is_zero()
        assert (ep_rhs_matched(no_right, x, mu) - ep_rhs_semidirect_left(ops, x, mu)).is_zero()
    decoupled = DualOps(ops.coad_g, ops.coad_h, zero, zero, zero, zero)
    r = ep_rhs_matched(decoupled, x, mu)
    assert r.g == -ops.coad_g(x.g, mu.g) and r.h == -ops.coad_h(x.h, mu.h)
