"""Randomized verification suites for the algebraic identities.

Each suite draws seeded random instances, evaluates one or more identities as
residuals (LHS - RHS) and records whether every residual vanished exactly.
``mutate=True`` injects a deliberate error into the suite's closed form; a
correct harness must then report failure.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .euler_poincare import ep_rhs_ham, ep_rhs_matched, ep_rhs_semidirect_right, ep_rhs_tq
from .field_algebra import GaussWeighted, PhaseFunction, TrigPoly
from .gccl import (
    GaussOneForm,
    HamVF,
    alg_bracket,
    coad_vf,
    gccl,
    gccl_star,
    ham_vf,
    kappa,
    pair_phase,
    poisson,
    proj_n_ham,
    proj_s_ham,
)
from .matched_pair import (
    MatchedDual,
    MatchedElement,
    proj_n,
    proj_s,
    split,
    tq_cross_a,
    tq_cross_b,
    tq_dual_left,
    tq_dual_ops,
    tq_dual_right,
    tq_left,
    tq_matched_pair,
    tq_right,
)
from .multiindex import multisets
from .random_fields import random_cov_field, random_one_form, random_tensor_field
from .scalars import VolumeScalar
from .tensor_calculus import SymCovField, SymTensor, SymTensorField, coad, pair, schouten_graded

# ---------------------------------------------------------------------------
# residual measures


def residual_size(x) -> float:
    """Largest absolute coefficient of a residual object (0.0 iff it is zero)."""
    if x is None or (isinstance(x, int) and x == 0):
        return 0.0
    if isinstance(x, VolumeScalar):
        return abs(complex(x.re, x.im)) if not x.is_zero() else 0.0
    if isinstance(x, (int, float, complex)):
        return abs(x)
    if isinstance(x, TrigPoly):
        return x.max_abs_coeff()
    if isinstance(x, PhaseFunction):
        return max((f.max_abs_coeff() for f in x.terms.values()), default=0.0)
    if isinstance(x, GaussWeighted):
        return residual_size(x.poly)
    if isinstance(x, (SymTensorField, SymCovField)):
        return x.max_abs_coeff()
    if isinstance(x, (HamVF, GaussOneForm)):
        return max((residual_size(c) for c in x.components()), default=0.0)
    if isinstance(x, (MatchedElement, MatchedDual)):
        return max(residual_size(x.g), residual_size(x.h))
    if isinstance(x, tuple):
        return max((residual_size(c) for c in x), default=0.0)
    raise TypeError(f"cannot measure residual of {type(x).__name__}")


def is_exact_zero(x) -> bool:
    if isinstance(x, tuple):
        return all(is_exact_zero(c) for c in x)
    if isinstance(x, int):
        return x == 0
    if isinstance(x, VolumeScalar):
        return x.is_zero()
    return residual_size(x) == 0.0 and (not hasattr(x, "is_zero") or x.is_zero())


# ---------------------------------------------------------------------------
# pairing oracles


def frequencies(obj) -> set:
    """All frequency vectors appearing in any component."""
    out = set()
    if isinstance(obj, TrigPoly):
        out.update(obj.terms)
    elif isinstance(obj, (SymTensorField, SymCovField)):
        for _, _, f in obj.components():
            out.update(f.terms)
    elif isinstance(obj, (MatchedElement, MatchedDual)):
        out |= frequencies(obj.g) | frequencies(obj.h)
    return out


def mode_partners(d: int, grades: Iterable[int], freqs: Iterable[tuple]) -> list:
    """Single-component, single-mode fields spanning the given grades and frequencies."""
    out = []
    for m in grades:
        for I in multisets(d, m):
            for k in sorted(set(freqs)):
                out.append(SymTensorField(d, [SymTensor(d, m, {I: TrigPoly.mode(d, k)})]))
    return out


def partner_freqs(a, b) -> set:
    """Frequencies ``-(k_a + k_b)`` where a bilinear pairing of ``a`` and ``b`` can be nonzero."""
    fa, fb = frequencies(a), frequencies(b)
    return {tuple(-(x + y) for x, y in zip(ka, kb)) for ka in fa for kb in fb}


def oracle_residual(lhs: Callable, rhs: Callable, partners: list):
    """Largest ``|lhs(Y) - rhs(Y)|`` over partners, with an exact-zero flag."""
    worst = 0.0
    exact = True
    for Y in partners:
        r = lhs(Y) - rhs(Y)
        if not is_exact_zero(r):
            exact = False
            worst = max(worst, residual_size(r))
    return worst, exact


# ---------------------------------------------------------------------------
# report structures


@dataclass
class IdentityResult:
    name: str
    anchor: str
    cases: int = 0
    failures: int = 0
    max_residual: float = 0.0

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def record(self, residual=None, *, size: float | None = None, exact: bool | None = None):
        self.cases += 1
        if size is None:
            size = residual_size(residual)
            exact = is_exact_zero(residual)
        if not exact:
            self.failures += 1
        self.max_residual = max(self.max_residual, float(size))

    def to_json(self) -> dict:
        return {
            "identity": self.name,
            "anchor": self.anchor,
            "cases": self.cases,
            "failures": self.failures,
            "max_residual": self.max_residual,
            "exact_zero": self.failures == 0,
            "passed": self.passed,
        }


@dataclass
class VerifyReport:
    suite: str
    seed: int
    cases: int
    mutate: bool
    identities: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(i.passed for i in self.identities)

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "cases": self.cases,
            "mutate": self.mutate,
            "passed": self.passed,
            "max_residual": max((i.max_residual for i in self.identities), default=0.0),
            "exact_zero": all(i.failures == 0 for i in self.identities),
            "identities": [i.to_json() for i in self.identities],
        }


def _dim(rng: random.Random) -> int:
    return rng.choice([1, 2])


# ---------------------------------------------------------------------------
# suites


def suite_jacobi(rng, cases, mutate):
    res = IdentityResult("graded Schouten bracket satisfies Jacobi", "schouten-jacobi")
    anti = IdentityResult("graded Schouten bracket is antisymmetric", "schouten-antisymmetry")

    def bracket(X, Y):
        Z = schouten_graded(X, Y)
        if mutate:
            Z = Z + Z.restrict([0])
        return Z

    for _ in range(cases):
        d = _dim(rng)
        X, Y, Z = (random_tensor_field(rng, d) for _ in range(3))
        J = bracket(bracket(X, Y), Z) + bracket(bracket(Y, Z), X) + bracket(bracket(Z, X), Y)
        res.record(J)
        anti.record(bracket(X, Y) + bracket(Y, X))
    return [res, anti]


def suite_compatibility(rng, cases, mutate):
    mp = tq_matched_pair()
    if mutate:
        mp = mp.with_actions(left=lambda eta, xi: tq_left(eta, xi).scale(2))
    rg = IdentityResult("left action compatibility", "matched-compatibility-left")
    rh = IdentityResult("right action compatibility", "matched-compatibility-right")
    for _ in range(cases):
        d = _dim(rng)
        eta, eta2 = (random_tensor_field(rng, d, 3, 2, density=0.8) for _ in range(2))
        xi, xi2 = (random_tensor_field(rng, d, 1, 0, density=0.8) for _ in range(2))
        r1, r2 = mp.compatibility(eta, eta2, xi, xi2)
        rg.record(r1)
        rh.record(r2)
    return [rg, rh]


def suite_reassembly(rng, cases, mutate):
    mp = tq_matched_pair()
    if mutate:
        mp = mp.with_actions(right=lambda eta, xi: -tq_right(eta, xi))
    res = IdentityResult("grade split of the Schouten bracket is the matched bracket", "matched-reassembly")
    for _ in range(cases):
        d = _dim(rng)
        X, Y = random_tensor_field(rng, d), random_tensor_field(rng, d)
        lhs = split(schouten_graded(X, Y))
        rhs = mp.bracket(split(X), split(Y))
        res.record(lhs - rhs)
    return [res]


def suite_gccl_hom(rng, cases, mutate):
    lift = (lambda X: ham_vf(kappa(X))) if mutate else gccl
    res = IdentityResult("lift is a Lie algebra homomorphism", "lift-homomorphism")
    for _ in range(cases):
        d = _dim(rng)
        X, Y = random_tensor_field(rng, d), random_tensor_field(rng, d)
        res.record(lift(schouten_graded(X, Y)) - alg_bracket(lift(X), lift(Y)))
    return [res]


def suite_kappa_antihom(rng, cases, mutate):
    sign = 1 if mutate else -1
    res = IdentityResult("momentum lift reverses brackets", "kappa-antihomomorphism")
    ham = IdentityResult("Hamiltonian fields intertwine Poisson brackets", "hamiltonian-bracket")
    for _ in range(cases):
        d = _dim(rng)
        X, Y = random_tensor_field(rng, d), random_tensor_field(rng, d)
        kX, kY = kappa(X), kappa(Y)
        res.record(kappa(schouten_graded(X, Y)) - poisson(kX, kY).scale(sign))
        ham.record(alg_bracket(ham_vf(kX), ham_vf(kY)) - ham_vf(poisson(kX, kY).scale(-sign)))
    return [res, ham]


def suite_coad_oracle(rng, cases, mutate):
    res = IdentityResult("coadjoint closed form equals its pairing definition", "coadjoint-pairing")
    for _ in range(cases):
        d = _dim(rng)
        X = random_tensor_field(rng, d)
        A = random_cov_field(rng, d)
        C = coad(X, A)
        if mutate:
            C = -C
        grades = range(0, A.truncation + 2)
        partners = mode_partners(d, grades, partner_freqs(X, A))
        size, exact = oracle_residual(
            lambda Y: pair(C, Y), lambda Y: pair(A, schouten_graded(Y, X)), partners
        )
        res.record(size=size, exact=exact)
    return [res]


def suite_dual_actions(rng, cases, mutate):
    dl = IdentityResult("dual of the left action", "dual-left-action")
    dr = IdentityResult("dual of the right action", "dual-right-action")
    ca = IdentityResult("cross map a*", "cross-action-a")
    cb = IdentityResult("cross map b*", "cross-action-b")
    dual_left = (lambda mu, eta: -tq_dual_left(mu, eta)) if mutate else tq_dual_left
    for _ in range(cases):
        d = _dim(rng)
        xi = random_tensor_field(rng, d, 1, 0, density=0.9)
        eta = random_tensor_field(rng, d, 3, 2, density=0.9)
        mu = random_cov_field(rng, d, 1, 0, density=0.9)
        nu = random_cov_field(rng, d, 4, 2, density=0.9)
        low = range(0, 2)
        high = range(2, nu.truncation + 2)

        L = dual_left(mu, eta)
        size, exact = oracle_residual(
            lambda Y: pair(L, Y),
            lambda Y: pair(mu, tq_left(eta, Y)),
            mode_partners(d, low, partner_freqs(mu, eta)),
        )
        dl.record(size=size, exact=exact)
        R = tq_dual_right(xi, nu)
        size, exact = oracle_residual(
            lambda Y: pair(R, Y),
            lambda Y: pair(nu, tq_right(Y, xi)),
            mode_partners(d, high, partner_freqs(nu, xi)),
        )
        dr.record(size=size, exact=exact)
        a = tq_cross_a(eta, nu)
        size, exact = oracle_residual(
            lambda Y: pair(a, Y),
            lambda Y: pair(nu, tq_right(eta, Y)),
            mode_partners(d, low, partner_freqs(nu, eta)),
        )
        ca.record(size=size, exact=exact)
        b = tq_cross_b(xi, mu)
        size, exact = oracle_residual(
            lambda Y: pair(b, Y),
            lambda Y: pair(mu, tq_left(Y, xi)),
            mode_partners(d, range(2, 4), partner_freqs(mu, xi)),
        )
        cb.record(size=size, exact=exact)
    return [dl, dr, ca, cb]


def suite_ep_reassembly(rng, cases, mutate):
    ops = tq_dual_ops()
    rhs_fn = ep_rhs_semidirect_right if mutate else ep_rhs_matched
    res = IdentityResult(
        "grade split of the tensor EP equations equals the matched EP equations", "matched-ep-reassembly"
    )
    for _ in range(cases):
        d = _dim(rng)
        X = random_tensor_field(rng, d)
        mu = random_cov_field(rng, d)
        N = mu.truncation + 1
        lhs = split(ep_rhs_tq(X, mu, N))
        rhs = rhs_fn(ops, split(X), split(mu))
        res.record(lhs - rhs)
    return [res]


def ep_transport_residual(X: SymTensorField, Pi_s: GaussOneForm, Pi_n: GaussOneForm, top: int, mutate=False):
    """Pull back the Hamiltonian-side EP blocks and compare with the tensor-side blocks.

    Returns the residual pair ``(s-block, n-block)`` on grades up to ``top``.
    """
    d = X.dim
    K = top + X.truncation + 1
    mu = proj_s(gccl_star(Pi_s, K))
    nu = proj_n(gccl_star(Pi_n, K))
    expected = ep_rhs_matched(tq_dual_ops(), split(X), MatchedDual(mu, nu))
    s_fun, n_fun = ep_rhs_ham(gccl(X), Pi_s, Pi_n)
    bw = max((max(abs(x) for x in k) for k in frequencies(X)), default=0) + max(
        (f.max_freq() for c in Pi_s.components() + Pi_n.components() for f in c.poly.terms.values()),
        default=0,
    )
    got_s = s_fun.pullback([0, 1], bw)
    got_n = n_fun.pullback(range(2, top + 1), bw)
    if mutate:
        got_s = -got_s
    exp_s = expected.g.restrict([0, 1]) if not isinstance(expected.g, int) else SymCovField.zero(d)
    exp_n = expected.h.restrict(range(2, top + 1)) if not isinstance(expected.h, int) else SymCovField.zero(d)
    return got_s - exp_s, got_n - exp_n


def suite_transport(rng, cases, mutate):
    sign = -1 if mutate else 1
    lb = IdentityResult("pullback intertwines the cross map b*", "transport-cross-b")
    la = IdentityResult("pullback intertwines the cross map a*", "transport-cross-a")
    ll = IdentityResult("pullback intertwines the dual left action", "transport-dual-left")
    lr = IdentityResult("pullback intertwines the dual right action", "transport-dual-right")
    eq = IdentityResult("pullback intertwines coadjoint actions", "transport-coadjoint")
    adj = IdentityResult("moment map is the dual of the lift", "moment-map-adjoint")
    ep = IdentityResult("pullback of the Hamiltonian EP blocks", "transport-euler-poincare")
    for case in range(cases):
        d = _dim(rng)
        Pi = random_one_form(rng, d)
        eta = random_tensor_field(rng, d, 3, 2, density=0.9)
        xi = random_tensor_field(rng, d, 1, 0, density=0.9)
        A = gccl_star(Pi, 6)
        z = alg_bracket(gccl(eta), gccl(xi))
        lhs_s = pair_phase(Pi, proj_s_ham(z))
        lhs_n = pair_phase(Pi, proj_n_ham(z))
        lb.record(lhs_s - pair(tq_cross_b(xi, proj_s(A)), eta) * sign)
        ll.record(lhs_s - pair(tq_dual_left(proj_s(A), eta), xi) * sign)
        la.record(lhs_n - pair(tq_cross_a(eta, proj_n(A)), xi) * sign)
        lr.record(lhs_n - pair(tq_dual_right(xi, proj_n(A)), eta) * sign)

        X = random_tensor_field(rng, d)
        K = 6
        left = gccl_star(coad_vf(gccl(X), Pi), K)
        right = coad(X, gccl_star(Pi, K))
        worst, exact = 0.0, True
        for _ in range(3):
            Z = random_tensor_field(rng, d, 3, 0, density=0.9)
            r = pair(left, Z) - pair(right, Z) * sign
            if not is_exact_zero(r):
                exact = False
                worst = max(worst, residual_size(r))
        eq.record(size=worst, exact=exact)
        adj.record(pair(gccl_star(Pi, 3), X) - pair_phase(Pi, gccl(X)) * sign)

        # the pulled-back EP comparison is expensive; keep it one-dimensional
        rng1 = random.Random(rng.random())
        X1 = random_tensor_field(rng1, 1, 2, 0, density=0.9, kmax=1)
        Pi_s = random_one_form(rng1, 1, kmax=1)
        Pi_n = random_one_form(rng1, 1, kmax=1)
        ep.record(ep_transport_residual(X1, Pi_s, Pi_n, top=3, mutate=mutate))
    return [lb, la, ll, lr, eq, adj, ep]


SUITES: dict[str, Callable] = {
    "jacobi": suite_jacobi,
    "compatibility": suite_compatibility,
    "reassembly": suite_reassembly,
    "gccl-hom": suite_gccl_hom,
    "kappa-antihom": suite_kappa_antihom,
    "coad-oracle": suite_coad_oracle,
    "dual-actions": suite_dual_actions,
    "ep-reassembly": suite_ep_reassembly,
    "transport": suite_transport,
}


def run_suite(name: str, seed: int = 0, cases: int = 20, mutate: bool = False) -> VerifyReport:
    """Run one suite; raises ``KeyError`` for an unknown suite name."""
    fn = SUITES[name]
    rng = random.Random(seed)
    report = VerifyReport(name, seed, cases, mutate)
    report.identities = fn(rng, cases, mutate)
    return report


__all__ = [
    "IdentityResult",
    "SUITES",
    "VerifyReport",
    "ep_transport_residual",
    "frequencies",
    "is_exact_zero",
    "mode_partners",
    "oracle_residual",
    "partner_freqs",
    "residual_size",
    "run_suite",
]
