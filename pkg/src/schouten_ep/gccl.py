"""Symmetric tensors as Hamiltonian vector fields on the cotangent bundle.

Conventions
-----------
Poisson bracket ``{f, g} = f_q g_p - f_p g_q`` and Hamiltonian vector field
``X_h = h_p d_q - h_q d_p``. The Lie algebra bracket on vector fields is minus
the coordinate Jacobi-Lie bracket, so ``alg_bracket(X_h, X_f) = X_{h,f}``.

The lift ``gccl(X) = -X_{kappa(X)}`` is a Lie algebra homomorphism from the
graded Schouten algebra. Its dual ``gccl_star`` turns Gaussian-weighted
one-forms on phase space into covariant moment tensors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .field_algebra import GaussWeighted, PhaseFunction, TrigPoly
from .matched_pair import MatchedPair
from .multiindex import multiplicity, multisets, splits
from .tensor_calculus import SymCoTensor, SymCovField, SymTensorField


def _exponent(index: tuple, d: int) -> tuple:
    e = [0] * d
    for i in index:
        e[i] += 1
    return tuple(e)


def kappa(X: SymTensorField) -> PhaseFunction:
    """Fiberwise polynomial ``sum_k X^{i1..ik}(q) p_{i1}..p_{ik}``."""
    d = X.dim
    terms: dict = {}
    for k, t in X.grades.items():
        for I, f in t.comps.items():
            mu = multiplicity(I)
            terms[_exponent(I, d)] = f.scale(mu) if mu != 1 else f
    return PhaseFunction(d, terms)


def poisson(f: PhaseFunction, g: PhaseFunction) -> PhaseFunction:
    """``{f, g} = sum_i f_{q_i} g_{p_i} - f_{p_i} g_{q_i}``."""
    if f.dim != g.dim:
        raise ValueError(f"dimension mismatch: {f.dim} vs {g.dim}")
    out = PhaseFunction.zero(f.dim)
    for i in range(f.dim):
        out = out + f.diff_q(i) * g.diff_p(i) - f.diff_p(i) * g.diff_q(i)
    return out


@dataclass(frozen=True, eq=False)
class HamVF:
    """Vector field on ``T^d x R^d`` with polynomial-in-p components.

    ``q[i]`` and ``p[i]`` are the coefficients of ``d/dq_i`` and ``d/dp_i``.
    ``generator`` is an optional ``h`` with ``X = X_h``; equality ignores it.
    """

    dim: int
    q: tuple
    p: tuple
    generator: PhaseFunction | None = None

    def __post_init__(self):
        if len(self.q) != self.dim or len(self.p) != self.dim:
            raise ValueError("component arrays must have length dim")

    @classmethod
    def zero(cls, dim: int) -> HamVF:
        z = PhaseFunction.zero(dim)
        return cls(dim, (z,) * dim, (z,) * dim, z)

    def __eq__(self, other):
        if isinstance(other, HamVF):
            return self.dim == other.dim and self.q == other.q and self.p == other.p
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        return NotImplemented

    __hash__ = None

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.q) and all(c.is_zero() for c in self.p)

    def _gen(self, other, op):
        if self.generator is None or other.generator is None:
            return None
        return op(self.generator, other.generator)

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        return HamVF(
            self.dim,
            tuple(a + b for a, b in zip(self.q, other.q)),
            tuple(a + b for a, b in zip(self.p, other.p)),
            self._gen(other, lambda a, b: a + b),
        )

    __radd__ = __add__

    def __neg__(self):
        g = -self.generator if self.generator is not None else None
        return HamVF(self.dim, tuple(-a for a in self.q), tuple(-a for a in self.p), g)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, re, im=0) -> HamVF:
        g = self.generator.scale(re, im) if self.generator is not None else None
        return HamVF(
            self.dim,
            tuple(a.scale(re, im) for a in self.q),
            tuple(a.scale(re, im) for a in self.p),
            g,
        )

    def apply(self, f: PhaseFunction) -> PhaseFunction:
        """Directional derivative ``X(f)``."""
        out = PhaseFunction.zero(self.dim)
        for i in range(self.dim):
            out = out + self.q[i] * f.diff_q(i) + self.p[i] * f.diff_p(i)
        return out

    def phase_divergence(self) -> PhaseFunction:
        out = PhaseFunction.zero(self.dim)
        for i in range(self.dim):
            out = out + self.q[i].diff_q(i) + self.p[i].diff_p(i)
        return out

    def is_hamiltonian_of(self, h: PhaseFunction) -> bool:
        return self == ham_vf(h)

    def components(self) -> tuple:
        """All coordinate components, q-directions first."""
        return self.q + self.p


def ham_vf(h: PhaseFunction) -> HamVF:
    """``X_h = h_p d_q - h_q d_p`` with ``h`` stored as generator."""
    d = h.dim
    return HamVF(
        d,
        tuple(h.diff_p(i) for i in range(d)),
        tuple(-h.diff_q(i) for i in range(d)),
        h,
    )


def gccl(X: SymTensorField) -> HamVF:
    """Lift ``X`` to ``-X_{kappa(X)}``."""
    return ham_vf(-kappa(X))


def jacobi_lie(X: HamVF, Y: HamVF) -> HamVF:
    """Coordinate bracket ``[X, Y]^a = X(Y^a) - Y(X^a)``."""
    if X.dim != Y.dim:
        raise ValueError(f"dimension mismatch: {X.dim} vs {Y.dim}")
    q = tuple(X.apply(b) - Y.apply(a) for a, b in zip(X.q, Y.q))
    p = tuple(X.apply(b) - Y.apply(a) for a, b in zip(X.p, Y.p))
    gen = None
    if X.generator is not None and Y.generator is not None:
        gen = -poisson(X.generator, Y.generator)
    return HamVF(X.dim, q, p, gen)


def alg_bracket(X: HamVF, Y: HamVF) -> HamVF:
    """Lie algebra bracket on vector fields: minus the Jacobi-Lie bracket."""
    return -jacobi_lie(X, Y)


def _need_generator(X: HamVF) -> PhaseFunction:
    if X.generator is None:
        raise ValueError("operation requires a Hamiltonian vector field with a stored generator")
    return X.generator


def proj_s_ham(X: HamVF) -> HamVF:
    """Part generated by the p-degree 0 and 1 terms of the generator."""
    return ham_vf(_need_generator(X).degree_part(0, 1))


def proj_n_ham(X: HamVF) -> HamVF:
    """Part generated by the p-degree >= 2 terms of the generator."""
    return ham_vf(_need_generator(X).degree_part(2))


def decompose_ham(X: HamVF) -> tuple[HamVF, HamVF]:
    """Split a generated field by generator p-degree into ``(s_part, n_part)``."""
    return proj_s_ham(X), proj_n_ham(X)


def ham_matched_pair() -> MatchedPair:
    """Matched pair structure on Hamiltonian fields read off from ``alg_bracket``."""
    return MatchedPair.from_ambient(alg_bracket, proj_s_ham, proj_n_ham)


def momentum_map(z: Sequence, X: HamVF):
    """``<J(q, p), X_h> = h(q, p)``; ``z`` is ``(q, p)`` with each a sequence of length d."""
    h = _need_generator(X)
    q, p = z
    v = h.evaluate(q, p)
    return v.real if v.imag == 0 else v


# ---------------------------------------------------------------------------
# dual side


@dataclass(frozen=True, eq=False)
class GaussOneForm:
    """One-form ``sum_i Pi_i dq_i + Pi^i dp_i`` with Gaussian-weighted components."""

    dim: int
    dq: tuple
    dp: tuple

    def __post_init__(self):
        if len(self.dq) != self.dim or len(self.dp) != self.dim:
            raise ValueError("component arrays must have length dim")
        for c in self.dq + self.dp:
            if not isinstance(c, GaussWeighted):
                raise TypeError("one-form components must be GaussWeighted")

    @classmethod
    def zero(cls, dim: int) -> GaussOneForm:
        z = GaussWeighted.zero(dim)
        return cls(dim, (z,) * dim, (z,) * dim)

    def __eq__(self, other):
        if isinstance(other, GaussOneForm):
            return self.dim == other.dim and self.dq == other.dq and self.dp == other.dp
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        return NotImplemented

    __hash__ = None

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.dq + self.dp)

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        return GaussOneForm(
            self.dim,
            tuple(a + b for a, b in zip(self.dq, other.dq)),
            tuple(a + b for a, b in zip(self.dp, other.dp)),
        )

    __radd__ = __add__

    def __neg__(self):
        return GaussOneForm(self.dim, tuple(-a for a in self.dq), tuple(-a for a in self.dp))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, re, im=0) -> GaussOneForm:
        return GaussOneForm(
            self.dim,
            tuple(a.scale(re, im) for a in self.dq),
            tuple(a.scale(re, im) for a in self.dp),
        )

    def components(self) -> tuple:
        return self.dq + self.dp


def pair_phase(Pi: GaussOneForm, X: HamVF):
    """``int_{T*Q} <Pi, X> dq dp``, exact for exact inputs."""
    if Pi.dim != X.dim:
        raise ValueError(f"dimension mismatch: {Pi.dim} vs {X.dim}")
    total = GaussWeighted.zero(Pi.dim)
    for a, x in zip(Pi.components(), X.components()):
        if not a.is_zero() and not x.is_zero():
            total = total + a * x
    return total.integrate()


def _q_divergence(Pi: GaussOneForm) -> GaussWeighted:
    out = GaussWeighted.zero(Pi.dim)
    for j in range(Pi.dim):
        out = out + Pi.dp[j].diff_q(j)
    return out


def gccl_star(Pi: GaussOneForm, K: int) -> SymCovField:
    """Covariant moments of ``Pi`` up to order ``K``.

    Grade ``k`` has components
    ``A_I = -int p^{I'} (k Pi_{i_k} + p_{i_k} d_j Pi^j) dp`` symmetrized over
    which index of ``I`` plays ``i_k``; satisfies
    ``pair(gccl_star(Pi), X) = pair_phase(Pi, gccl(X))`` for grades up to K.
    """
    d = Pi.dim
    div = _q_divergence(Pi)
    grades = []
    for k in range(K + 1):
        comps = {}
        for I in multisets(d, k):
            acc = div.fiber_integral(_exponent(I, d))
            if k:
                for rest, (i,), w in splits(I, k - 1):
                    acc = acc + Pi.dq[i].fiber_integral(_exponent(rest, d)).scale(w * k)
            if acc.terms:
                comps[I] = -acc
        grades.append(SymCoTensor(d, k, comps))
    return SymCovField(d, grades, K)


def density_of(Pi: GaussOneForm) -> GaussWeighted:
    """``f = sum_i d_{q_i} Pi^i - d_{p_i} Pi_i``."""
    out = GaussWeighted.zero(Pi.dim)
    for i in range(Pi.dim):
        out = out + Pi.dp[i].diff_q(i) - Pi.dq[i].diff_p(i)
    return out


def lie_derivative_form(X: HamVF, Pi: GaussOneForm) -> GaussOneForm:
    """``(L_X Pi)_a = X^b d_b Pi_a + Pi_b d_a X^b`` over phase-space coordinates."""
    d = X.dim
    comps = Pi.components()
    xs = X.components()

    def deriv_form(c: GaussWeighted, b: int) -> GaussWeighted:
        return c.diff_q(b) if b < d else c.diff_p(b - d)

    def deriv_field(c: PhaseFunction, a: int) -> PhaseFunction:
        return c.diff_q(a) if a < d else c.diff_p(a - d)

    out = []
    for a in range(2 * d):
        acc = GaussWeighted.zero(d)
        for b in range(2 * d):
            if not xs[b].is_zero() and not comps[a].is_zero():
                acc = acc + deriv_form(comps[a], b) * xs[b]
            if not comps[b].is_zero():
                dx = deriv_field(xs[b], a)
                if not dx.is_zero():
                    acc = acc + comps[b] * dx
        out.append(acc)
    return GaussOneForm(d, tuple(out[:d]), tuple(out[d:]))


def coad_vf(X: HamVF, Pi: GaussOneForm) -> GaussOneForm:
    """Coadjoint action ``-L_X Pi`` of a divergence-free field.

    Raises
    ------
    ValueError
        If ``X`` has nonzero phase-space divergence.
    """
    if not X.phase_divergence().is_zero():
        raise ValueError("coadjoint formula requires a divergence-free vector field")
    return -lie_derivative_form(X, Pi)


def one_form_from_potential(psi: GaussWeighted) -> GaussOneForm:
    """``psi_p dq - psi_q dp``."""
    d = psi.dim
    return GaussOneForm(
        d,
        tuple(psi.diff_p(i) for i in range(d)),
        tuple(-psi.diff_q(i) for i in range(d)),
    )


def gauss_form(dim: int, dq: dict | None = None, dp: dict | None = None) -> GaussOneForm:
    """Build a one-form from ``{axis: PhaseFunction}`` maps (weight applied automatically)."""
    z = PhaseFunction.zero(dim)
    dq = dq or {}
    dp = dp or {}
    return GaussOneForm(
        dim,
        tuple(GaussWeighted(dq.get(i, z)) for i in range(dim)),
        tuple(GaussWeighted(dp.get(i, z)) for i in range(dim)),
    )


def momentum_monomial(dim: int, f: TrigPoly, exponent) -> PhaseFunction:
    return PhaseFunction(dim, {tuple(exponent): f})


__all__ = [
    "GaussOneForm",
    "HamVF",
    "alg_bracket",
    "coad_vf",
    "decompose_ham",
    "density_of",
    "gauss_form",
    "gccl",
    "gccl_star",
    "ham_matched_pair",
    "ham_vf",
    "jacobi_lie",
    "kappa",
    "lie_derivative_form",
    "momentum_map",
    "momentum_monomial",
    "one_form_from_potential",
    "pair_phase",
    "poisson",
    "proj_n_ham",
    "proj_s_ham",
]
