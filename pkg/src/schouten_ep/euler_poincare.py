"""Euler-Poincaré right-hand sides, the Helmholtz metric and an RK4 integrator.

Every right-hand side returns ``d/dt (dL/dx)``. With the coadjoint
convention ``<ad*_x mu, y> = <mu, [y, x]>`` the generic equation reads
``d mu/dt = -ad*_x mu``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .field_algebra import TrigPoly, spectral_truncation
from .gccl import GaussOneForm, HamVF, alg_bracket, coad_vf, gccl, pair_phase, proj_n_ham, proj_s_ham
from .matched_pair import DualOps, MatchedDual, MatchedElement, _add
from .multiindex import multiplicity, multisets
from .scalars import VolumeScalar, coerce_like
from .tensor_calculus import (
    SymCoTensor,
    SymCovField,
    SymTensor,
    SymTensorField,
    coad,
    contract,
    divergence,
    gen_lie,
    pair,
)


class BlowUpError(RuntimeError):
    """Raised when the integrated state stops being finite."""

    def __init__(self, message: str, last_time: float):
        super().__init__(message)
        self.last_time = last_time


# ---------------------------------------------------------------------------
# generic and matched right-hand sides


def ep_rhs_generic(xi, mu, coad_fn: Callable):
    """``-coad(xi, mu)``."""
    out = coad_fn(xi, mu)
    return -out if not (isinstance(out, int) and out == 0) else 0


def ep_rhs_matched(ops: DualOps, x: MatchedElement, mu: MatchedDual) -> MatchedDual:
    """Matched two-block right-hand side.

    ``(-ad*_xi mu + mu ◁* eta + a*_eta nu) ⊕ (-ad*_eta nu - xi ▷* nu - b*_xi mu)``
    """
    xi, eta = x.g, x.h
    m, n = mu.g, mu.h
    g = _add(-ops.coad_g(xi, m), ops.dual_left(m, eta), ops.cross_a(eta, n))
    h = _add(-ops.coad_h(eta, n), -ops.dual_right(xi, n), -ops.cross_b(xi, m))
    return MatchedDual(g, h)


def ep_rhs_semidirect_right(ops: DualOps, x: MatchedElement, mu: MatchedDual) -> MatchedDual:
    """Trivial left action: ``(-ad*_xi mu + a*_eta nu) ⊕ (-ad*_eta nu - xi ▷* nu)``."""
    xi, eta = x.g, x.h
    m, n = mu.g, mu.h
    g = _add(-ops.coad_g(xi, m), ops.cross_a(eta, n))
    h = _add(-ops.coad_h(eta, n), -ops.dual_right(xi, n))
    return MatchedDual(g, h)


def ep_rhs_semidirect_left(ops: DualOps, x: MatchedElement, mu: MatchedDual) -> MatchedDual:
    """Trivial right action: ``(-ad*_xi mu + mu ◁* eta) ⊕ (-ad*_eta nu - b*_xi mu)``."""
    xi, eta = x.g, x.h
    m, n = mu.g, mu.h
    g = _add(-ops.coad_g(xi, m), ops.dual_left(m, eta))
    h = _add(-ops.coad_h(eta, n), -ops.cross_b(xi, m))
    return MatchedDual(g, h)


# ---------------------------------------------------------------------------
# symmetric tensor hierarchy


def ep_rhs_tq(X: SymTensorField, mu: SymCovField, N: int | None = None) -> SymCovField:
    """``-coad(X, mu)`` truncated to grades ``<= N`` (default: ``mu.truncation``)."""
    if N is None:
        N = mu.truncation
    return (-coad(X, mu)).truncate(N)


def _scalar(t) -> TrigPoly | None:
    return t.get(()) if t is not None else None


def _covector_lie(Y: SymTensor, M: SymCoTensor) -> dict:
    """``(L_Y M)_i = Y^j d_j M_i + M_j d_i Y^j`` as ``{(i,): TrigPoly}``."""
    d = Y.dim
    out = {}
    for i in range(d):
        acc = TrigPoly.zero(d)
        for j in range(d):
            y = Y.get((j,))
            mi = M.get((i,))
            if y is not None and mi is not None:
                acc = acc + y * mi.diff(j)
            mj = M.get((j,))
            if y is not None and mj is not None:
                acc = acc + mj * y.diff(i)
        out[(i,)] = acc
    return out


def ep_rhs_fluid(xi: SymTensorField, mu: SymCovField) -> SymCovField:
    """Compressible-fluid block on grades 0 and 1.

    ``d rho/dt = -L_Y rho - rho div Y`` and
    ``d M/dt = -L_Y M - div Y M - rho d sigma``.
    """
    d = xi.dim
    sigma = _scalar(xi.grades.get(0))
    Y = xi.grades.get(1) or SymTensor.zero(d, 1)
    rho = _scalar(mu.grades.get(0))
    M = mu.grades.get(1) or SymCoTensor.zero(d, 1)
    divY = TrigPoly.zero(d)
    for j in range(d):
        y = Y.get((j,))
        if y is not None:
            divY = divY + y.diff(j)
    g0 = TrigPoly.zero(d)
    if rho is not None:
        for j in range(d):
            y = Y.get((j,))
            if y is not None:
                g0 = g0 + y * rho.diff(j)
        g0 = -(g0 + rho * divY)
    lie = _covector_lie(Y, M)
    g1 = {}
    for i in range(d):
        acc = lie[(i,)]
        mi = M.get((i,))
        if mi is not None:
            acc = acc + divY * mi
        if rho is not None and sigma is not None:
            acc = acc + rho * sigma.diff(i)
        g1[(i,)] = -acc
    return SymCovField(d, [SymCoTensor(d, 0, {(): g0}), SymCoTensor(d, 1, g1)], 1)


def ep_rhs_higher(X: SymTensorField, mu: SymCovField, N: int | None = None) -> SymCovField:
    """Higher block: grade ``m >= 2`` gets ``-sum_k L_{X^k} A_{m+k-1} + div X^k ⌟ A_{m+k-1}``."""
    d = X.dim
    if N is None:
        N = mu.truncation
    parts = []
    for k, x in X.grades.items():
        if k < 2:
            continue
        divx = divergence(x)
        for n, a in mu.grades.items():
            m = n - k + 1
            if n < 2 or m < 2 or m > N:
                continue
            parts.append(-(gen_lie(x, a) + contract(divx, a)))
    return SymCovField(d, parts, max(N, 2))


# ---------------------------------------------------------------------------
# Hamiltonian vector fields


class HamFunctional:
    """Linear functional on generated Hamiltonian vector fields.

    The matched blocks on the Hamiltonian side are functionals on one of the
    two subspaces; they are kept as callables and pulled back to covariant
    tensors with :meth:`pullback`.
    """

    def __init__(self, dim: int, fn: Callable[[HamVF], object]):
        self.dim = dim
        self.fn = fn

    def __call__(self, Z: HamVF):
        return self.fn(Z)

    def __add__(self, other: HamFunctional) -> HamFunctional:
        return HamFunctional(self.dim, lambda Z: self.fn(Z) + other.fn(Z))

    def __neg__(self) -> HamFunctional:
        return HamFunctional(self.dim, lambda Z: -self.fn(Z))

    def __sub__(self, other: HamFunctional) -> HamFunctional:
        return self + (-other)

    def pullback(self, grades, bandwidth: int) -> SymCovField:
        """Covariant tensor ``A`` with ``<A, X> = F(gccl(X))`` on the given grades.

        Evaluates on ``gccl`` of single Fourier modes ``exp(-i k.q)`` in each
        index slot with ``|k_i| <= bandwidth``.
        """
        from itertools import product

        d = self.dim
        tensors = []
        for m in grades:
            comps = {}
            for I in multisets(d, m):
                mu = multiplicity(I)
                terms = {}
                for k in product(range(-bandwidth, bandwidth + 1), repeat=d):
                    probe = TrigPoly.mode(d, tuple(-x for x in k))
                    Z = gccl(SymTensorField(d, [SymTensor(d, m, {I: probe})]))
                    v = self.fn(Z)
                    if isinstance(v, VolumeScalar):
                        re, im = v.coefficient
                    else:
                        c = complex(v) / (2 * math.pi) ** d
                        re, im = c.real, c.imag
                    if re != 0 or im != 0:
                        terms[k] = (re / mu, im / mu)
                if terms:
                    comps[I] = TrigPoly(d, terms)
            tensors.append(SymCoTensor(d, m, comps))
        return SymCovField(d, tensors, max(grades, default=0))


def ep_rhs_ham(X: HamVF, Pi_s: GaussOneForm, Pi_n: GaussOneForm) -> tuple[HamFunctional, HamFunctional]:
    """Matched right-hand side on Hamiltonian vector fields.

    ``Pi_s`` and ``Pi_n`` represent the momenta as functionals
    ``Z -> pair_phase(Pi_s, P_s Z)`` and ``Z -> pair_phase(Pi_n, P_n Z)``.
    Returns the s-block (a functional on s-type fields) and the n-block (on
    n-type fields). Coadjoint parts use the one-form ``-L_X Pi``; the action
    parts pair the momenta with projected brackets.
    """
    Xs, Xn = proj_s_ham(X), proj_n_ham(X)
    d = X.dim
    ad_s = coad_vf(Xs, Pi_s)
    ad_n = coad_vf(Xn, Pi_n)

    def s_block(Z: HamVF):
        z = proj_s_ham(Z)
        left = alg_bracket(Xn, z)
        return (
            -pair_phase(ad_s, z)
            + pair_phase(Pi_s, proj_s_ham(left))
            + pair_phase(Pi_n, proj_n_ham(left))
        )

    def n_block(W: HamVF):
        w = proj_n_ham(W)
        right = alg_bracket(w, Xs)
        return (
            -pair_phase(ad_n, w)
            - pair_phase(Pi_n, proj_n_ham(right))
            - pair_phase(Pi_s, proj_s_ham(right))
        )

    return HamFunctional(d, s_block), HamFunctional(d, n_block)


# ---------------------------------------------------------------------------
# metric and energy


@dataclass(frozen=True)
class QuadMetric:
    """Blockwise Helmholtz inertia ``1 + alpha^2 |k|^2`` on every grade up to ``N``."""

    alpha: object = 0
    N: int = 1

    def __post_init__(self):
        if float(self.alpha) < 0:
            raise ValueError("alpha must be non-negative")

    def symbol(self, k, exact: bool):
        a = coerce_like(self.alpha, exact)
        return 1 + a * a * sum(x * x for x in k)


def _apply_symbol(f: TrigPoly, Q: QuadMetric, invert: bool) -> TrigPoly:
    exact = f.exact
    out = {}
    for k, (re, im) in f.terms.items():
        s = Q.symbol(k, exact)
        out[k] = (re / s, im / s) if invert else (re * s, im * s)
    return TrigPoly(f.dim, out)


def metric_apply(Q: QuadMetric, X: SymTensorField) -> SymCovField:
    """Lower indices (identity on the flat torus) and multiply by the symbol."""
    tensors = [
        SymCoTensor(X.dim, k, {I: _apply_symbol(f, Q, False) for I, f in t.comps.items()})
        for k, t in X.grades.items()
    ]
    return SymCovField(X.dim, tensors, X.truncation)


def metric_invert(Q: QuadMetric, mu: SymCovField) -> SymTensorField:
    """Inverse of :func:`metric_apply`."""
    tensors = [
        SymTensor(mu.dim, k, {I: _apply_symbol(f, Q, True) for I, f in t.comps.items()})
        for k, t in mu.grades.items()
    ]
    return SymTensorField(mu.dim, tensors, mu.truncation)


def energy(mu: SymCovField, Q: QuadMetric):
    """``1/2 <mu, Q^{-1} mu>``."""
    v = pair(mu, metric_invert(Q, mu))
    if isinstance(v, VolumeScalar):
        return v / 2
    # float mode: the imaginary part is roundoff for real fields
    return (v.real if isinstance(v, complex) else v) / 2


# ---------------------------------------------------------------------------
# integration


@dataclass
class EPConfig:
    """Scenario parameters for the truncated hierarchy."""

    dim: int
    N: int
    alpha: float
    dt: float
    t_end: float
    bandwidth: int
    dealias: bool = False
    scenario: str = "custom"

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be positive")
        if self.N < 1:
            raise ValueError("N must be at least 1")
        if not self.dt > 0 or not math.isfinite(self.dt):
            raise ValueError("dt must be positive")
        if not self.t_end >= 0:
            raise ValueError("t_end must be non-negative")
        if self.bandwidth < 1:
            raise ValueError("bandwidth must be a positive integer")
        if float(self.alpha) < 0:
            raise ValueError("alpha must be non-negative")

    @property
    def metric(self) -> QuadMetric:
        return QuadMetric(float(self.alpha), self.N)

    @property
    def product_bandwidth(self) -> int:
        """Cap applied after each product (two thirds of B when de-aliasing)."""
        return (2 * self.bandwidth) // 3 if self.dealias else self.bandwidth


@dataclass
class EPState:
    momenta: SymCovField
    t: float = 0.0
    bandwidth: int | None = None


@dataclass
class Trajectory:
    times: list = field(default_factory=list)
    energies: list = field(default_factory=list)
    norms: list = field(default_factory=list)
    max_coeffs: list = field(default_factory=list)
    final: EPState | None = None


def rk4_step(rhs: Callable, y, dt: float):
    """One classical RK4 step for ``dy/dt = rhs(y)``; ``y`` needs ``+`` and ``scale``."""
    k1 = rhs(y)
    k2 = rhs(y + k1.scale(dt / 2))
    k3 = rhs(y + k2.scale(dt / 2))
    k4 = rhs(y + k3.scale(dt))
    incr = k1 + k2.scale(2) + k3.scale(2) + k4
    return y + incr.scale(dt / 6)


def tq_rhs(config: EPConfig) -> Callable[[SymCovField], SymCovField]:
    Q = config.metric
    B = config.product_bandwidth

    def rhs(mu: SymCovField) -> SymCovField:
        with spectral_truncation(B):
            out = ep_rhs_tq(metric_invert(Q, mu), mu, config.N)
        return out.spectral_truncate(B)

    return rhs


def step_rk4(state: EPState, config: EPConfig) -> EPState:
    mu = rk4_step(tq_rhs(config), state.momenta, config.dt)
    return EPState(mu, state.t + config.dt, config.bandwidth)


def _float_field(mu: SymCovField, B: int) -> SymCovField:
    return mu.to_float().spectral_truncate(B).truncate(mu.truncation)


def integrate(config: EPConfig, initial: SymCovField, record_every: int = 1) -> Trajectory:
    """Fixed-step RK4 run from ``initial`` to ``t_end``.

    Raises
    ------
    BlowUpError
        When the state becomes non-finite; ``last_time`` is the last finite time.
    """
    Q = config.metric
    mu = _float_field(initial, config.bandwidth)
    if mu.truncation > config.N:
        mu = mu.truncate(config.N)
    mu = type(mu)(mu.dim, mu.grades, config.N)
    steps = int(round(config.t_end / config.dt))
    rhs = tq_rhs(config)
    traj = Trajectory()

    def record(t, state):
        traj.times.append(t)
        traj.energies.append(float(energy(state, Q)))
        traj.norms.append(state.grade_norms())
        traj.max_coeffs.append(state.max_abs_coeff())

    record(0.0, mu)
    t = 0.0
    for n in range(1, steps + 1):
        try:
            new = rk4_step(rhs, mu, config.dt)
            finite = new.is_finite()
        except (OverflowError, FloatingPointError):
            finite = False
        if not finite:
            raise BlowUpError(f"non-finite state after t = {t:.6g}", t)
        mu = new
        t_new = n * config.dt
        if n % record_every == 0 or n == steps:
            try:
                record(t_new, mu)
            except (OverflowError, FloatingPointError):
                raise BlowUpError(f"diagnostics overflowed after t = {t:.6g}", t) from None
        t = t_new
    traj.final = EPState(mu, t, config.bandwidth)
    return traj


__all__ = [
    "BlowUpError",
    "EPConfig",
    "EPState",
    "HamFunctional",
    "QuadMetric",
    "Trajectory",
    "energy",
    "ep_rhs_fluid",
    "ep_rhs_generic",
    "ep_rhs_ham",
    "ep_rhs_higher",
    "ep_rhs_matched",
    "ep_rhs_semidirect_left",
    "ep_rhs_semidirect_right",
    "ep_rhs_tq",
    "integrate",
    "metric_apply",
    "metric_invert",
    "rk4_step",
    "step_rk4",
    "tq_rhs",
]
