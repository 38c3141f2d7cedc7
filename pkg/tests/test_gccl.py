import math

import pytest
from gmpy2 import mpq

from conftest import const, cos, sin, vec
from schouten_ep.field_algebra import GaussWeighted, PhaseFunction, TrigPoly, gaussian_moment
from schouten_ep.gccl import (
    GaussOneForm,
    HamVF,
    alg_bracket,
    coad_vf,
    decompose_ham,
    density_of,
    gauss_form,
    gccl,
    gccl_star,
    ham_matched_pair,
    ham_vf,
    jacobi_lie,
    kappa,
    momentum_map,
    one_form_from_potential,
    pair_phase,
    poisson,
    proj_n_ham,
    proj_s_ham,
)
from schouten_ep.matched_pair import proj_n, proj_s, tq_left, tq_right
from schouten_ep.random_fields import random_one_form, random_phase, random_tensor_field
from schouten_ep.tensor_calculus import SymTensorField, coad, pair, schouten_graded


def P(terms):
    """PhaseFunction in d=1 from ``{p-degree: TrigPoly}``."""
    return PhaseFunction(1, {(a,): f for a, f in terms.items()})


def test_kappa_examples():
    f, u, s = cos(1), sin(2), cos(3)
    assert kappa(vec(f, 2)) == P({2: f})
    assert kappa(vec(s, 0)) == P({0: s})
    assert kappa(vec(u, 1)) == P({1: u})


def test_kappa_counts_symmetric_orderings():
    from schouten_ep.tensor_calculus import SymTensor

    d = 2
    X = SymTensorField(d, [SymTensor(d, 2, {(0, 1): TrigPoly.const(d, 1)})])
    assert kappa(X) == PhaseFunction(d, {(1, 1): TrigPoly.const(d, 2)})


def test_ham_vf_examples():
    f = cos(1)
    X = ham_vf(P({2: f}))
    assert X.q == (P({1: f.scale(2)}),)
    assert X.p == (P({2: f.diff(0).scale(-1)}),)
    assert ham_vf(P({0: const(3)})).is_zero()
    Xp = ham_vf(P({1: const(1)}))
    assert Xp.q == (P({0: const(1)}),) and Xp.p[0].is_zero()


def test_poisson_examples():
    assert poisson(P({1: const(1)}), P({0: sin()})) == P({0: cos(1, -1)})
    f = P({0: sin(), 2: cos(2)})
    assert poisson(f, f).is_zero()
    with pytest.raises(ValueError):
        poisson(f, PhaseFunction.zero(2))


def test_gccl_examples():
    Xq = gccl(vec(const(1), 1))
    assert Xq.q == (P({0: const(-1)}),) and Xq.p[0].is_zero()
    s = sin(2)
    Xs = gccl(vec(s, 0))
    assert Xs.q[0].is_zero() and Xs.p == (P({0: s.diff(0)}),)
    assert gccl(SymTensorField.zero(1)).is_zero()


def test_jacobi_lie_example():
    X = HamVF(1, (P({0: const(1)}),), (PhaseFunction.zero(1),))
    Y = HamVF(1, (PhaseFunction.zero(1),), (P({0: cos()}),))
    Z = jacobi_lie(X, Y)
    assert Z.q[0].is_zero() and Z.p == (P({0: sin(1, -1)}),)
    assert jacobi_lie(X, X).is_zero()


def test_hamiltonian_bracket_and_divergence(rng):
    for _ in range(15):
        d = rng.choice([1, 2])
        h, f = random_phase(rng, d), random_phase(rng, d)
        assert alg_bracket(ham_vf(h), ham_vf(f)) == ham_vf(poisson(h, f))
        assert ham_vf(h).phase_divergence().is_zero()
        assert ham_vf(h).is_hamiltonian_of(h)


def test_homomorphism_and_antihomomorphism(rng):
    for _ in range(15):
        d = rng.choice([1, 2])
        X, Y = random_tensor_field(rng, d), random_tensor_field(rng, d)
        assert gccl(schouten_graded(X, Y)) == alg_bracket(gccl(X), gccl(Y))
        assert kappa(schouten_graded(X, Y)) == -poisson(kappa(X), kappa(Y))


def test_decompose_ham_example():
    u, f = cos(1), sin(2)
    h = P({0: sin(), 1: u, 2: f})
    s, n = decompose_ham(ham_vf(h))
    assert s == ham_vf(P({0: sin(), 1: u})) and n == ham_vf(P({2: f}))
    s0, n0 = decompose_ham(ham_vf(P({0: const(2)})))
    assert s0.is_zero() and n0.is_zero()


def test_decompose_requires_generator():
    X = HamVF(1, (P({0: const(1)}),), (PhaseFunction.zero(1),))
    with pytest.raises(ValueError):
        decompose_ham(X)
    with pytest.raises(ValueError):
        momentum_map(((0.0,), (0.0,)), X)


def test_grading_respected(rng):
    for _ in range(10):
        d = rng.choice([1, 2])
        X = random_tensor_field(rng, d)
        s, n = decompose_ham(gccl(X))
        assert s == gccl(proj_s(X)) and n == gccl(proj_n(X))


def test_actions_transport_through_lift(rng):
    amb = ham_matched_pair()
    for _ in range(10):
        d = rng.choice([1, 2])
        eta = random_tensor_field(rng, d, 3, 2, density=0.9)
        xi = random_tensor_field(rng, d, 1, 0, density=0.9)
        assert amb.left(gccl(eta), gccl(xi)) == gccl(tq_left(eta, xi))
        assert amb.right(gccl(eta), gccl(xi)) == gccl(tq_right(eta, xi))


def test_left_action_display():
    f, s = cos(1), sin(1)
    eta, xi = vec(f, 2), vec(s, 0)
    amb = ham_matched_pair()
    expected = -ham_vf(kappa(schouten_graded(eta, xi)))
    assert amb.left(gccl(eta), gccl(xi)) == expected


def test_gccl_star_example():
    f = cos(1) + sin(2, mpq(1, 2))
    Pi = gauss_form(1, dq={0: P({0: f})})
    A = gccl_star(Pi, 6)
    assert A[0].is_zero()
    assert A[1][(0,)] == -f
    for k in range(2, 7):
        expected = -f.scale(k * gaussian_moment((k - 1,)))
        assert A[k][(0,) * k] == expected
        if k % 2 == 0:
            assert A[k].is_zero()
    assert gccl_star(GaussOneForm.zero(1), 3).is_zero()


def test_gccl_star_is_adjoint_of_lift(rng):
    for _ in range(10):
        d = rng.choice([1, 2])
        Pi = random_one_form(rng, d)
        X = random_tensor_field(rng, d)
        assert pair(gccl_star(Pi, X.truncation), X) == pair_phase(Pi, gccl(X))


def test_density_examples():
    h = P({2: const(1), 1: const(3)})
    Pi = gauss_form(1, dq={0: h})
    assert density_of(Pi) == -GaussWeighted(h).diff_p(0)
    assert density_of(GaussOneForm.zero(1)).is_zero()
    psi = GaussWeighted(P({0: sin()}))
    lap = psi.diff_q(0).diff_q(0) + psi.diff_p(0).diff_p(0)
    assert density_of(one_form_from_potential(psi)) == -lap


def test_momentum_map_examples():
    h = P({1: sin()})
    q0, p0 = 0.7, -1.3
    assert math.isclose(momentum_map(((q0,), (p0,)), ham_vf(h)), p0 * math.sin(q0))
    assert momentum_map(((q0,), (p0,)), ham_vf(P({0: const(5)}))) == 5
    g = P({0: cos(2), 2: const(1)})
    lhs = momentum_map(((q0,), (p0,)), ham_vf(h + g))
    rhs = momentum_map(((q0,), (p0,)), ham_vf(h)) + momentum_map(((q0,), (p0,)), ham_vf(g))
    assert math.isclose(lhs, rhs)


def test_coad_vf_examples():
    X = HamVF(1, (P({0: const(1)}),), (PhaseFunction.zero(1),))
    Pi = gauss_form(1, dq={0: P({0: sin()})})
    assert coad_vf(X, Pi) == gauss_form(1, dq={0: P({0: cos(1, -1)})})
    assert coad_vf(HamVF.zero(1), Pi).is_zero()
    squeeze = HamVF(1, (PhaseFunction.zero(1),), (P({1: const(1)}),))
    with pytest.raises(ValueError):
        coad_vf(squeeze, Pi)


def test_coad_vf_duality(rng):
    """Integration by parts gives the sign ``+<Pi, [X, Y]_JL>``."""
    for _ in range(10):
        d = rng.choice([1, 2])
        X = ham_vf(random_phase(rng, d))
        Y = ham_vf(random_phase(rng, d))
        Pi = random_one_form(rng, d)
        assert pair_phase(coad_vf(X, Pi), Y) == pair_phase(Pi, jacobi_lie(X, Y))


def test_coadjoint_equivariance(rng):
    for _ in range(6):
        d = rng.choice([1, 2])
        X = random_tensor_field(rng, d)
        Pi = random_one_form(rng, d)
        K = 6
        left = gccl_star(coad_vf(gccl(X), Pi), K)
        right = coad(X, gccl_star(Pi, K))
        for _ in range(3):
            Z = random_tensor_field(rng, d, 3, 0, density=0.9)
            assert pair(left, Z) == pair(right, Z)


def test_projections_need_generator():
    X = HamVF(1, (P({0: const(1)}),), (PhaseFunction.zero(1),))
    with pytest.raises(ValueError):
        proj_s_ham(X)
    with pytest.raises(ValueError):
        proj_n_ham(X)
