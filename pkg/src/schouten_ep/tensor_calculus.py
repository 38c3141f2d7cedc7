"""Symmetric tensor fields on the torus and the operations of the Schouten algebra.

Components are stored once per sorted multi-index and do not include the
multiplicity factor; full contractions and pairings apply
:func:`~schouten_ep.multiindex.multiplicity` explicitly. Every multi-index
output is symmetrized (averaged over orderings of its free indices).

Coadjoint convention: ``<coad(X, A), Y> = <A, [Y, X]>``.
"""

from __future__ import annotations

import math
from typing import Iterable, Mapping

from .field_algebra import TrigPoly
from .multiindex import canonical, insert, merge, multiplicity, multisets, splits
from .scalars import VolumeScalar


class _SymBase:
    """Shared storage for symmetric tensors of one order."""

    __slots__ = ("dim", "order", "comps")
    covariant = False

    def __init__(self, dim: int, order: int, comps: Mapping | None = None):
        if dim < 1:
            raise ValueError("dimension must be positive")
        if order < 0:
            raise ValueError("order must be non-negative")
        self.dim = dim
        self.order = order
        clean: dict = {}
        for idx, f in (comps or {}).items():
            idx = canonical(idx)
            if len(idx) != order or any(not 0 <= i < dim for i in idx):
                raise ValueError(f"index {idx} invalid for order {order}, dimension {dim}")
            if not isinstance(f, TrigPoly) or f.dim != dim:
                raise ValueError("components must be TrigPoly of matching dimension")
            if idx in clean and clean[idx] != f:
                raise ValueError(f"conflicting entries for symmetric index {idx}")
            if f.terms:
                clean[idx] = f
        self.comps = clean

    @classmethod
    def _raw(cls, dim, order, comps):
        obj = object.__new__(cls)
        obj.dim = dim
        obj.order = order
        obj.comps = {i: f for i, f in comps.items() if f.terms}
        return obj

    @classmethod
    def zero(cls, dim: int, order: int):
        return cls._raw(dim, order, {})

    @classmethod
    def scalar(cls, f: TrigPoly):
        return cls._raw(f.dim, 0, {(): f})

    def __getitem__(self, index) -> TrigPoly:
        return self.comps.get(canonical(index)) or TrigPoly.zero(self.dim)

    def get(self, index: tuple):
        """Component for an already-sorted index, or None when zero."""
        return self.comps.get(index)

    def is_zero(self) -> bool:
        return not self.comps

    def __eq__(self, other):
        if type(other) is type(self):
            if self.dim != other.dim:
                return False
            if not self.comps and not other.comps:
                return True
            return self.order == other.order and self.comps == other.comps
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim}, order={self.order}, {self.comps})"

    def _compatible(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} and {type(other).__name__}")
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        if other.order != self.order and self.comps and other.comps:
            raise ValueError(f"order mismatch: {self.order} vs {other.order}")

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._compatible(other)
        order = self.order if self.comps else other.order
        out = dict(self.comps)
        for i, f in other.comps.items():
            out[i] = out[i] + f if i in out else f
        return type(self)._raw(self.dim, order, out)

    __radd__ = __add__

    def __neg__(self):
        return type(self)._raw(self.dim, self.order, {i: -f for i, f in self.comps.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, re, im=0):
        return type(self)._raw(self.dim, self.order, {i: f.scale(re, im) for i, f in self.comps.items()})

    def mul_function(self, f: TrigPoly):
        """Multiply every component by a scalar field."""
        return type(self)._raw(self.dim, self.order, {i: g * f for i, g in self.comps.items()})

    def map_components(self, fn):
        return type(self)._raw(self.dim, self.order, {i: fn(f) for i, f in self.comps.items()})

    def to_float(self):
        return self.map_components(TrigPoly.to_float)


class SymTensor(_SymBase):
    """Symmetric contravariant tensor field of fixed order."""

    __slots__ = ()


class SymCoTensor(_SymBase):
    """Symmetric covariant tensor field of fixed order."""

    __slots__ = ()
    covariant = True


class _GradedBase:
    """Finite direct sum of symmetric tensors indexed by order."""

    __slots__ = ("dim", "grades", "truncation")
    single = SymTensor

    def __init__(self, dim: int, grades: Mapping | Iterable | None = None, truncation: int | None = None):
        self.dim = dim
        out: dict = {}
        items = grades.values() if isinstance(grades, Mapping) else (grades or ())
        for t in items:
            if not isinstance(t, self.single):
                raise TypeError(f"expected {self.single.__name__}, got {type(t).__name__}")
            if t.dim != dim:
                raise ValueError("all grades must share the dimension")
            if t.comps:
                out[t.order] = out[t.order] + t if t.order in out else t
        self.grades = {k: t for k, t in out.items() if t.comps}
        top = max(self.grades, default=0)
        if truncation is None:
            truncation = top
        elif truncation < top:
            raise ValueError(f"grade {top} exceeds truncation order {truncation}")
        self.truncation = truncation

    @classmethod
    def zero(cls, dim: int, truncation: int = 0):
        return cls(dim, {}, truncation)

    @classmethod
    def of(cls, *tensors, truncation: int | None = None):
        if not tensors:
            raise ValueError("need at least one tensor to infer the dimension")
        return cls(tensors[0].dim, list(tensors), truncation)

    def grade(self, k: int):
        return self.grades.get(k) or self.single.zero(self.dim, k)

    def __getitem__(self, k: int):
        return self.grade(k)

    def is_zero(self) -> bool:
        return not self.grades

    def __eq__(self, other):
        if type(other) is type(self):
            return self.dim == other.dim and self.grades == other.grades
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim}, K={self.truncation}, {self.grades})"

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        if type(other) is not type(self):
            raise TypeError(f"cannot add {type(other).__name__} to {type(self).__name__}")
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        out = dict(self.grades)
        for k, t in other.grades.items():
            out[k] = out[k] + t if k in out else t
        return type(self)(self.dim, out, max(self.truncation, other.truncation))

    __radd__ = __add__

    def __neg__(self):
        return type(self)(self.dim, {k: -t for k, t in self.grades.items()}, self.truncation)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, re, im=0):
        return type(self)(self.dim, {k: t.scale(re, im) for k, t in self.grades.items()}, self.truncation)

    def truncate(self, order: int):
        """Drop grades above ``order``."""
        return type(self)(self.dim, {k: t for k, t in self.grades.items() if k <= order}, order)

    def restrict(self, orders: Iterable[int]):
        keep = set(orders)
        return type(self)(
            self.dim, {k: t for k, t in self.grades.items() if k in keep}, self.truncation
        )

    def map_components(self, fn):
        return type(self)(
            self.dim, {k: t.map_components(fn) for k, t in self.grades.items()}, self.truncation
        )

    def spectral_truncate(self, bandwidth: int):
        return self.map_components(lambda f: f.truncate(bandwidth))

    def to_float(self):
        return self.map_components(TrigPoly.to_float)

    def components(self):
        """Iterate ``(order, index, TrigPoly)`` over stored entries."""
        for k in sorted(self.grades):
            for i, f in sorted(self.grades[k].comps.items()):
                yield k, i, f

    def is_finite(self) -> bool:
        return all(f.is_finite() for _, _, f in self.components())

    def grade_norms(self) -> dict:
        """Mean-square L2 norm per grade, weighted by multiplicity."""
        out = {}
        for k in range(self.truncation + 1):
            t = self.grades.get(k)
            s = 0.0
            if t:
                for i, f in t.comps.items():
                    s += multiplicity(i) * f.l2_sq()
            out[k] = math.sqrt(s)
        return out

    def max_abs_coeff(self) -> float:
        return max((f.max_abs_coeff() for _, _, f in self.components()), default=0.0)


class SymTensorField(_GradedBase):
    """Element of the graded algebra of symmetric contravariant tensors."""

    __slots__ = ()
    single = SymTensor


class SymCovField(_GradedBase):
    """Element of the graded dual: symmetric covariant tensors."""

    __slots__ = ()
    single = SymCoTensor


# ---------------------------------------------------------------------------
# helpers


def _check_dims(*objs):
    d = objs[0].dim
    for o in objs[1:]:
        if o.dim != d:
            raise ValueError(f"dimension mismatch: {d} vs {o.dim}")
    return d


def _acc(out: dict, key, f: TrigPoly):
    if f.terms:
        g = out.get(key)
        out[key] = f if g is None else g + f


def _derivatives(t: _SymBase) -> dict:
    """``{(index, axis): d_axis t[index]}`` for non-zero entries."""
    out = {}
    for i, f in t.comps.items():
        for ax in range(t.dim):
            g = f.diff(ax)
            if g.terms:
                out[(i, ax)] = g
    return out


# ---------------------------------------------------------------------------
# contravariant operations


def _schouten_half(X: SymTensor, dY: dict, m: int, n: int, d: int, factor: int) -> dict:
    """``factor * Sym[ X^{J' l} d_l Y^{J} ]`` with |J| = m, |J'| = k - 1."""
    out: dict = {}
    for I in multisets(d, n):
        acc = None
        for J, Jp, w in splits(I, m):
            for ax in range(d):
                x = X.get(insert(Jp, ax))
                if x is None:
                    continue
                dy = dY.get((J, ax))
                if dy is None:
                    continue
                term = (x * dy).scale(w)
                acc = term if acc is None else acc + term
        if acc is not None and acc.terms:
            out[I] = acc.scale(factor) if factor != 1 else acc
    return out


def schouten(X: SymTensor, Y: SymTensor) -> SymTensor:
    """Symmetric Schouten concomitant of two single-order tensors.

    Returns the order ``k + m - 1`` tensor
    ``k X^{..l} d_l Y^{..} - m Y^{..l} d_l X^{..}`` symmetrized over free
    indices. Two scalars bracket to zero.
    """
    d = _check_dims(X, Y)
    k, m = X.order, Y.order
    n = k + m - 1
    if n < 0:
        return SymTensor.zero(d, 0)
    out: dict = {}
    if k >= 1 and X.comps and Y.comps:
        for I, f in _schouten_half(X, _derivatives(Y), m, n, d, k).items():
            _acc(out, I, f)
    if m >= 1 and X.comps and Y.comps:
        for I, f in _schouten_half(Y, _derivatives(X), k, n, d, m).items():
            _acc(out, I, -f)
    return SymTensor._raw(d, n, out)


def schouten_graded(X: SymTensorField, Y: SymTensorField) -> SymTensorField:
    """Grade-wise bilinear extension; output truncation ``K_X + K_Y - 1``."""
    d = _check_dims(X, Y)
    out: dict = {}
    for k, x in X.grades.items():
        for m, y in Y.grades.items():
            if k + m == 0:
                continue
            z = schouten(x, y)
            if z.comps:
                out[z.order] = out[z.order] + z if z.order in out else z
    return SymTensorField(d, out, max(X.truncation + Y.truncation - 1, 0))


def lie_derivative(X: SymTensor, Y: SymTensor) -> SymTensor:
    """Lie derivative of a symmetric contravariant tensor along a vector field."""
    d = _check_dims(X, Y)
    if X.order != 1:
        raise ValueError(f"Lie derivative needs an order-1 field, got order {X.order}")
    m = Y.order
    out: dict = {}
    dY = _derivatives(Y)
    dX = _derivatives(X)
    for I in multisets(d, m):
        acc = TrigPoly.zero(d)
        for ax in range(d):
            x = X.get((ax,))
            dy = dY.get((I, ax))
            if x is not None and dy is not None:
                acc = acc + x * dy
        if m:
            for (i1,), rest, w in splits(I, 1):
                for ax in range(d):
                    y = Y.get(insert(rest, ax))
                    dx = dX.get(((i1,), ax))
                    if y is not None and dx is not None:
                        acc = acc - (y * dx).scale(w * m)
        _acc(out, I, acc)
    return SymTensor._raw(d, m, out)


def divergence(X: SymTensor) -> SymTensor:
    """``k d_l X^{l i2 .. ik}``; zero for scalars."""
    d, k = X.dim, X.order
    if k == 0:
        return SymTensor.zero(d, 0)
    out: dict = {}
    for J in multisets(d, k - 1):
        acc = TrigPoly.zero(d)
        for ax in range(d):
            x = X.get(insert(J, ax))
            if x is not None:
                acc = acc + x.diff(ax)
        if acc.terms:
            out[J] = acc.scale(k)
    return SymTensor._raw(d, k - 1, out)


def divergence_graded(X: SymTensorField) -> SymTensorField:
    return SymTensorField(X.dim, [divergence(t) for t in X.grades.values()], max(X.truncation - 1, 0))


# ---------------------------------------------------------------------------
# mixed operations


def contract(X: SymTensor, A: SymCoTensor):
    """Contract all indices of the lower-order argument into the other.

    Returns a ``SymTensor`` of order ``k - m`` when ``k > m`` and a
    ``SymCoTensor`` of order ``m - k`` otherwise (a scalar when ``k == m``).
    """
    if not isinstance(X, SymTensor) or not isinstance(A, SymCoTensor):
        raise TypeError("contract expects (SymTensor, SymCoTensor)")
    d = _check_dims(X, A)
    k, m = X.order, A.order
    small, big = (A, X) if k > m else (X, A)
    r = abs(k - m)
    out: dict = {}
    if small.comps and big.comps:
        for J in multisets(d, r):
            acc = None
            for I, s in small.comps.items():
                b = big.get(merge(I, J))
                if b is None:
                    continue
                term = s * b
                mu = multiplicity(I)
                if mu != 1:
                    term = term.scale(mu)
                acc = term if acc is None else acc + term
            if acc is not None:
                _acc(out, J, acc)
    cls = SymTensor if k > m else SymCoTensor
    return cls._raw(d, r, out)


def star(A: SymCoTensor, X: SymTensor, m: int | None = None) -> SymCoTensor:
    """``A ⋆ X`` of output order ``m = ord(A) - k + 1``.

    ``m * Sym[ A_{i1..i(m-1) J} d_{im} X^{J} ]`` with the contraction over
    ``|J| = k`` weighted by multiplicity. Vanishes when ``m == 0``.
    """
    d = _check_dims(A, X)
    k = X.order
    mm = A.order - k + 1
    if m is not None and m != mm:
        raise ValueError(f"inconsistent orders: A order {A.order}, X order {k}, output {m}")
    if mm < 0:
        raise ValueError(f"inconsistent orders: A order {A.order}, X order {k}")
    if mm == 0 or not A.comps or not X.comps:
        return SymCoTensor.zero(d, max(mm, 0))
    dX = _derivatives(X)
    out: dict = {}
    for I in multisets(d, mm):
        acc = None
        for I1, (im,), w in splits(I, mm - 1):
            for J, x in X.comps.items():
                dx = dX.get((J, im))
                if dx is None:
                    continue
                a = A.get(merge(I1, J))
                if a is None:
                    continue
                term = (a * dx).scale(w * multiplicity(J))
                acc = term if acc is None else acc + term
        if acc is not None:
            _acc(out, I, acc.scale(mm))
    return SymCoTensor._raw(d, mm, out)


def ast(X: SymTensor, A: SymCoTensor, m: int | None = None) -> SymCoTensor:
    """``X ∗ A`` of output order ``m = ord(A) - k + 1``.

    ``k * X^{L l} d_l A_{I L}`` contracted over ``|L| = k - 1`` with
    multiplicity weights. Vanishes when ``k == 0``.
    """
    d = _check_dims(A, X)
    k = X.order
    mm = A.order - k + 1
    if m is not None and m != mm:
        raise ValueError(f"inconsistent orders: A order {A.order}, X order {k}, output {m}")
    if mm < 0:
        raise ValueError(f"inconsistent orders: A order {A.order}, X order {k}")
    if k == 0 or not A.comps or not X.comps:
        return SymCoTensor.zero(d, mm)
    dA = _derivatives(A)
    out: dict = {}
    for I in multisets(d, mm):
        acc = None
        for L in multisets(d, k - 1):
            mu = multiplicity(L)
            IL = merge(I, L)
            for ax in range(d):
                x = X.get(insert(L, ax))
                if x is None:
                    continue
                da = dA.get((IL, ax))
                if da is None:
                    continue
                term = x * da
                if mu != 1:
                    term = term.scale(mu)
                acc = term if acc is None else acc + term
        if acc is not None:
            _acc(out, I, acc.scale(k))
    return SymCoTensor._raw(d, mm, out)


def gen_lie(X: SymTensor, A: SymCoTensor) -> SymCoTensor:
    """Generalized Lie derivative ``A ⋆ X + X ∗ A``."""
    return star(A, X) + ast(X, A)


def coad_single(X: SymTensor, A: SymCoTensor) -> SymCoTensor:
    """Contribution of one grade pair ``(X^k, A_{m+k-1})`` to the coadjoint action."""
    out = gen_lie(X, A)
    if X.order >= 1:
        c = contract(divergence(X), A)
        out = out + c
    return out


def coad(X: SymTensorField, A: SymCovField) -> SymCovField:
    """Coadjoint action: ``<coad(X, A), Y> = <A, schouten_graded(Y, X)>``."""
    d = _check_dims(X, A)
    out: dict = {}
    for k, x in X.grades.items():
        for n, a in A.grades.items():
            m = n - k + 1
            if m < 0:
                continue
            z = coad_single(x, a)
            if z.comps:
                out[m] = out[m] + z if m in out else z
    top = A.truncation + 1 if 0 in X.grades else A.truncation
    return SymCovField(d, out, top)


# ---------------------------------------------------------------------------
# pairing


def _zero_mode_total(pairs, d: int):
    re = im = None
    for c, f, g in pairs:
        z = f.inner_zero_mode(g)
        if z is None:
            continue
        zr, zi = z
        if c != 1:
            zr, zi = zr * c, zi * c
        if re is None:
            re, im = zr, zi
        else:
            re += zr
            im += zi
    return re, im


def volume_value(re, im, d: int, exact: bool | None):
    """Turn a zero-mode total into an integral over the torus."""
    if re is None:
        return VolumeScalar(0, 0, d)
    if isinstance(re, float):
        v = (2 * math.pi) ** d
        return re * v if im == 0 else complex(re, im) * v
    return VolumeScalar(re, im, d)


def pair_single(A: SymCoTensor, X: SymTensor):
    d = _check_dims(A, X)
    if A.order != X.order:
        return VolumeScalar(0, 0, d)
    pairs = []
    for I, a in A.comps.items():
        x = X.get(I)
        if x is not None:
            pairs.append((multiplicity(I), a, x))
    re, im = _zero_mode_total(pairs, d)
    return volume_value(re, im, d, None)


def pair(A: SymCovField, X: SymTensorField):
    """``sum_k int A_{I} X^{I} dq`` over all orderings of I; exact when inputs are."""
    if isinstance(A, SymCoTensor):
        A = SymCovField.of(A)
    if isinstance(X, SymTensor):
        X = SymTensorField.of(X)
    d = _check_dims(A, X)
    pairs = []
    for k, a in A.grades.items():
        x = X.grades.get(k)
        if x is None:
            continue
        for I, f in a.comps.items():
            g = x.get(I)
            if g is not None:
                pairs.append((multiplicity(I), f, g))
    re, im = _zero_mode_total(pairs, d)
    return volume_value(re, im, d, None)


__all__ = [
    "SymCoTensor",
    "SymCovField",
    "SymTensor",
    "SymTensorField",
    "ast",
    "coad",
    "coad_single",
    "contract",
    "divergence",
    "divergence_graded",
    "gen_lie",
    "lie_derivative",
    "pair",
    "pair_single",
    "schouten",
    "schouten_graded",
    "star",
    "volume_value",
]
