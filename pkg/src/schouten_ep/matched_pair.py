"""Matched pairs of Lie algebras.

A matched pair ``g ⋈ h`` is specified by the two brackets and the mutual
actions ``left(eta, xi) = eta ▷ xi`` (in g) and ``right(eta, xi) = eta ◁ xi``
(in h). Values of g and h may be any objects supporting ``+`` and unary ``-``;
a value of ``0`` is accepted wherever a zero is needed.

Coadjoint convention: ``<ad*_x mu, y> = <mu, [y, x]>``.

The module also instantiates the construction on symmetric contravariant
tensors, with ``g`` the grades 0 and 1 (scalars and vector fields) and ``h``
the grades 2 and above.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

from .field_algebra import TrigPoly
from .tensor_calculus import (
    SymCovField,
    SymTensorField,
    ast,
    coad,
    contract,
    divergence,
    gen_lie,
    lie_derivative,
    schouten,
    schouten_graded,
    star,
)


def _add(*xs):
    out = 0
    for x in xs:
        if isinstance(x, int) and x == 0:
            continue
        out = x if isinstance(out, int) else out + x
    return out


def _is_zero(x) -> bool:
    if isinstance(x, int):
        return x == 0
    z = getattr(x, "is_zero", None)
    if z is not None:
        return z()
    return not any(x)


@dataclass(frozen=True)
class MatchedElement:
    """``g ⊕ h`` element."""

    g: Any
    h: Any

    def __add__(self, other):
        return MatchedElement(_add(self.g, other.g), _add(self.h, other.h))

    def __neg__(self):
        return MatchedElement(-self.g, -self.h)

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self) -> bool:
        return _is_zero(self.g) and _is_zero(self.h)


@dataclass(frozen=True)
class MatchedDual:
    """``g* ⊕ h*`` element."""

    g: Any
    h: Any

    def __add__(self, other):
        return MatchedDual(_add(self.g, other.g), _add(self.h, other.h))

    def __neg__(self):
        return MatchedDual(-self.g, -self.h)

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self) -> bool:
        return _is_zero(self.g) and _is_zero(self.h)


@dataclass(frozen=True)
class MatchedPair:
    """Brackets and mutual actions of a matched pair.

    Parameters
    ----------
    bracket_g, bracket_h : callable
        Lie brackets of the two subalgebras.
    left : callable
        ``left(eta, xi) = eta ▷ xi``, valued in g.
    right : callable
        ``right(eta, xi) = eta ◁ xi``, valued in h.
    """

    bracket_g: Callable
    bracket_h: Callable
    left: Callable
    right: Callable

    @classmethod
    def from_ambient(cls, bracket: Callable, proj_g: Callable, proj_h: Callable) -> MatchedPair:
        """Read off the actions from an ambient bracket split by two projections."""

        def left(eta, xi):
            return derive_actions(bracket, proj_g, proj_h, eta, xi)[0]

        def right(eta, xi):
            return derive_actions(bracket, proj_g, proj_h, eta, xi)[1]

        return cls(
            bracket_g=lambda a, b: proj_g(bracket(a, b)),
            bracket_h=lambda a, b: proj_h(bracket(a, b)),
            left=left,
            right=right,
        )

    def with_actions(self, left: Callable | None = None, right: Callable | None = None) -> MatchedPair:
        return MatchedPair(self.bracket_g, self.bracket_h, left or self.left, right or self.right)

    def bracket(self, a: MatchedElement, b: MatchedElement) -> MatchedElement:
        """``([xi, xi~] + eta ▷ xi~ - eta~ ▷ xi) ⊕ ([eta, eta~] + eta ◁ xi~ - eta~ ◁ xi)``."""
        xi, eta = a.g, a.h
        xi2, eta2 = b.g, b.h
        g = _add(self.bracket_g(xi, xi2), self.left(eta, xi2), -self.left(eta2, xi))
        h = _add(self.bracket_h(eta, eta2), self.right(eta, xi2), -self.right(eta2, xi))
        return MatchedElement(g, h)

    def compatibility(self, eta, eta2, xi, xi2):
        """Residuals (LHS - RHS) of the two matched-pair compatibility conditions."""
        L, R, bg, bh = self.left, self.right, self.bracket_g, self.bracket_h
        res_g = _add(
            L(eta, bg(xi, xi2)),
            -bg(L(eta, xi), xi2),
            -bg(xi, L(eta, xi2)),
            -L(R(eta, xi), xi2),
            L(R(eta, xi2), xi),
        )
        res_h = _add(
            R(bh(eta, eta2), xi),
            -bh(eta, R(eta2, xi)),
            -bh(R(eta, xi), eta2),
            -R(eta, L(eta2, xi)),
            R(eta2, L(eta, xi)),
        )
        return res_g, res_h


def derive_actions(bracket: Callable, proj_g: Callable, proj_h: Callable, eta, xi):
    """``(P_g [eta, xi], P_h [eta, xi]) = (eta ▷ xi, eta ◁ xi)``.

    Raises
    ------
    ValueError
        If the projections fail to split the bracket value.
    """
    z = bracket(eta, xi)
    zg, zh = proj_g(z), proj_h(z)
    if not _is_zero(_add(zg, zh, -z)) or not _is_zero(proj_g(zh)) or not _is_zero(proj_h(zg)):
        raise ValueError("projections are not complementary")
    return zg, zh


@dataclass(frozen=True)
class DualOps:
    """Coadjoint actions of the two subalgebras, dual actions and cross maps.

    ``coad_g(xi, mu)``, ``coad_h(eta, nu)``, ``dual_left(mu, eta) = mu ◁* eta``,
    ``dual_right(xi, nu) = xi ▷* nu``, ``cross_a(eta, nu) = a*_eta nu`` and
    ``cross_b(xi, mu) = b*_xi mu``.
    """

    coad_g: Callable
    coad_h: Callable
    dual_left: Callable
    dual_right: Callable
    cross_a: Callable
    cross_b: Callable


def coad_matched(ops: DualOps, x: MatchedElement, mu: MatchedDual) -> MatchedDual:
    """``(ad*_xi mu - mu ◁* eta - a*_eta nu) ⊕ (ad*_eta nu + xi ▷* nu + b*_xi mu)``."""
    xi, eta = x.g, x.h
    m, n = mu.g, mu.h
    g = _add(ops.coad_g(xi, m), -ops.dual_left(m, eta), -ops.cross_a(eta, n))
    h = _add(ops.coad_h(eta, n), ops.dual_right(xi, n), ops.cross_b(xi, m))
    return MatchedDual(g, h)


# ---------------------------------------------------------------------------
# symmetric tensor instance: g = grades {0, 1}, h = grades >= 2

LOW = (0, 1)


def proj_s(X):
    """Scalar and vector-field part (grades 0 and 1)."""
    return X.restrict(LOW)


def proj_n(X):
    """Higher part (grades 2 and above)."""
    return X.restrict(range(2, max(X.truncation, 1) + 1))


def split(X) -> MatchedElement | MatchedDual:
    """Split a graded field (or dual field) into its two matched components."""
    if isinstance(X, SymCovField):
        return MatchedDual(proj_s(X), proj_n(X))
    return MatchedElement(proj_s(X), proj_n(X))


def join(e):
    """Inverse of :func:`split`."""
    return _add(e.g, e.h)


def _low(X):
    return X.restrict(LOW)


def tq_left(eta: SymTensorField, xi: SymTensorField) -> SymTensorField:
    """``X ▷ (sigma, Y) = (0, [X^2, sigma])``."""
    d = xi.dim
    x2 = eta.grades.get(2)
    sigma = xi.grades.get(0)
    if x2 is None or sigma is None:
        return SymTensorField.zero(d, 1)
    return SymTensorField(d, [schouten(x2, sigma)], 1)


def tq_right(eta: SymTensorField, xi: SymTensorField, truncation: int | None = None) -> SymTensorField:
    """``X ◁ (sigma, Y) = sum_k [X^{k+1}, sigma] - L_Y X^k`` over grades ``k >= 2``."""
    d = eta.dim
    sigma = xi.grades.get(0)
    Y = xi.grades.get(1)
    parts = []
    for k, x in eta.grades.items():
        if k < 2:
            continue
        if sigma is not None and k >= 3:
            parts.append(schouten(x, sigma))
        if Y is not None:
            parts.append(-lie_derivative(Y, x))
    out = SymTensorField(d, parts, max(eta.truncation, 2))
    if truncation is not None:
        out = out.truncate(truncation)
    return out


def tq_bracket_s(a: SymTensorField, b: SymTensorField) -> SymTensorField:
    return _low(schouten_graded(a, b))


def tq_bracket_n(a: SymTensorField, b: SymTensorField) -> SymTensorField:
    return schouten_graded(a, b)


def tq_matched_pair() -> MatchedPair:
    """Closed-form actions on symmetric tensors."""
    return MatchedPair(tq_bracket_s, tq_bracket_n, tq_left, tq_right)


def tq_ambient_pair() -> MatchedPair:
    """Actions read off from the graded Schouten bracket by projection."""
    return MatchedPair.from_ambient(schouten_graded, proj_s, proj_n)


# dual side -----------------------------------------------------------------


def tq_coad_s(xi: SymTensorField, mu: SymCovField) -> SymCovField:
    return _low(coad(xi, mu))


def tq_coad_n(eta: SymTensorField, nu: SymCovField) -> SymCovField:
    return proj_n(coad(eta, nu))


def tq_dual_left(mu: SymCovField, eta: SymTensorField) -> SymCovField:
    """``(rho, M) ◁* X = (-X^2 ∗ M - div X^2 ⌟ M, 0)``."""
    d = mu.dim
    x2 = eta.grades.get(2)
    M = mu.grades.get(1)
    if x2 is None or M is None:
        return SymCovField.zero(d, 1)
    out = -(ast(x2, M) + contract(divergence(x2), M))
    return SymCovField(d, [out], 1)


def tq_dual_right(xi: SymTensorField, nu: SymCovField) -> SymCovField:
    """``(sigma, Y) ▷* A``, grade m: ``L_Y A_m + div Y A_m + A_{m-1} ⋆ sigma``."""
    d = nu.dim
    sigma = xi.grades.get(0)
    Y = xi.grades.get(1)
    parts = []
    for m, a in nu.grades.items():
        if m < 2:
            continue
        if Y is not None:
            parts.append(gen_lie(Y, a))
            parts.append(a.mul_function(divergence(Y).get(()) or _zero_poly(d)))
        if sigma is not None and m + 1 >= 3:
            parts.append(star(a, sigma))
    return proj_n(SymCovField(d, parts, nu.truncation + 1))


def _zero_poly(d):
    return TrigPoly.zero(d)


def tq_cross_a(eta: SymTensorField, nu: SymCovField) -> SymCovField:
    """``a*_X A = (-sum X^{k+1} ∗ A_k + div X^{k+1} ⌟ A_k, -sum L_{X^k} A_k + div X^k ⌟ A_k)``."""
    d = nu.dim
    parts = []
    for k, a in nu.grades.items():
        if k < 2:
            continue
        x_up = eta.grades.get(k + 1)
        if x_up is not None:
            parts.append(-(ast(x_up, a) + contract(divergence(x_up), a)))
        x = eta.grades.get(k)
        if x is not None:
            parts.append(-(gen_lie(x, a) + contract(divergence(x), a)))
    return SymCovField(d, parts, 1)


def tq_cross_b(xi: SymTensorField, mu: SymCovField) -> SymCovField:
    """``b*_(sigma, Y) (rho, M) = M ⋆ sigma`` in grade 2."""
    d = mu.dim
    sigma = xi.grades.get(0)
    M = mu.grades.get(1)
    if sigma is None or M is None:
        return SymCovField.zero(d, 2)
    return SymCovField(d, [star(M, sigma)], 2)


def tq_dual_ops() -> DualOps:
    return DualOps(
        coad_g=tq_coad_s,
        coad_h=tq_coad_n,
        dual_left=tq_dual_left,
        dual_right=tq_dual_right,
        cross_a=tq_cross_a,
        cross_b=tq_cross_b,
    )


__all__ = [
    "DualOps",
    "MatchedDual",
    "MatchedElement",
    "MatchedPair",
    "coad_matched",
    "derive_actions",
    "join",
    "proj_n",
    "proj_s",
    "split",
    "tq_ambient_pair",
    "tq_coad_n",
    "tq_coad_s",
    "tq_cross_a",
    "tq_cross_b",
    "tq_dual_left",
    "tq_dual_ops",
    "tq_dual_right",
    "tq_left",
    "tq_matched_pair",
    "tq_right",
]
