"""Exact scalar-field arithmetic on the d-torus and its cotangent bundle.

``TrigPoly``
    finite Fourier series ``sum_k c_k exp(i k.q)`` with Gaussian-rational (exact)
    or float coefficients.
``PhaseFunction``
    ``sum_alpha f_alpha(q) p**alpha`` with ``f_alpha`` a ``TrigPoly``.
``GaussWeighted``
    ``poly(q, p) * w(p)`` with ``w(p) = (2 pi)^(-d/2) exp(-|p|^2/2)``.

Coefficients are stored as ``(re, im)`` tuples of a single scalar kind
(``mpq`` or ``float``). All objects are immutable once built. Axes are 0-based.
"""

from __future__ import annotations

import contextlib
import contextvars
import math
from typing import Iterable, Iterator, Mapping

import numpy as np

from .scalars import MPQ_TYPE, VolumeScalar, coerce_like, mpq, to_exact

# Bandwidth cap applied after every TrigPoly product (None = exact, no cap).
_BANDWIDTH: contextvars.ContextVar[int | None] = contextvars.ContextVar(
    "schouten_ep_bandwidth", default=None
)


@contextlib.contextmanager
def spectral_truncation(bandwidth: int | None):
    """Discard modes with ``|k_i| > bandwidth`` after each product in this context."""
    if bandwidth is not None and bandwidth < 0:
        raise ValueError("bandwidth must be non-negative")
    token = _BANDWIDTH.set(bandwidth)
    try:
        yield
    finally:
        _BANDWIDTH.reset(token)


def current_bandwidth() -> int | None:
    return _BANDWIDTH.get()


def _kind(terms: Mapping) -> bool | None:
    """True for exact, False for float, None for an empty map."""
    for c in terms.values():
        return not isinstance(c[0], float)
    return None


def _check_kinds(a: Mapping, b: Mapping) -> None:
    ka, kb = _kind(a), _kind(b)
    if ka is not None and kb is not None and ka != kb:
        raise TypeError("cannot mix exact and float coefficients")


def _coef(re, im, exact: bool):
    return (coerce_like(re, exact), coerce_like(im, exact))


class TrigPoly:
    """Finite Fourier series on the ``dim``-torus.

    Parameters
    ----------
    dim : int
        Torus dimension.
    terms : mapping
        ``{freq_tuple: (re, im)}``. Zero coefficients are dropped.
    """

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms: Mapping | None = None):
        if dim < 1:
            raise ValueError("dimension must be positive")
        self.dim = dim
        clean = {}
        if terms:
            for k, c in terms.items():
                k = tuple(int(x) for x in k)
                if len(k) != dim:
                    raise ValueError(f"frequency {k} does not match dimension {dim}")
                if c[0] != 0 or c[1] != 0:
                    clean[k] = (c[0], c[1])
            _ = _kind(clean)
        self.terms = clean

    @classmethod
    def _raw(cls, dim: int, terms: dict) -> TrigPoly:
        obj = object.__new__(cls)
        obj.dim = dim
        obj.terms = terms
        return obj

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, dim: int) -> TrigPoly:
        return cls._raw(dim, {})

    @classmethod
    def const(cls, dim: int, c=1, exact: bool = True) -> TrigPoly:
        z = (0,) * dim
        return cls(dim, {z: _coef(c, 0, exact)})

    @classmethod
    def mode(cls, dim: int, k, re=1, im=0, exact: bool = True) -> TrigPoly:
        """Single complex exponential ``(re + i im) exp(i k.q)``."""
        return cls(dim, {tuple(k): _coef(re, im, exact)})

    @classmethod
    def cos(cls, dim: int, k, c=1, exact: bool = True) -> TrigPoly:
        k = tuple(k)
        if not any(k):
            return cls.const(dim, c, exact)
        h = coerce_like(c, exact) / 2
        mk = tuple(-x for x in k)
        return cls(dim, {k: _coef(h, 0, exact), mk: _coef(h, 0, exact)})

    @classmethod
    def sin(cls, dim: int, k, c=1, exact: bool = True) -> TrigPoly:
        k = tuple(k)
        if not any(k):
            return cls.zero(dim)
        h = coerce_like(c, exact) / 2
        mk = tuple(-x for x in k)
        # sin x = (e^{ix} - e^{-ix}) / 2i
        return cls(dim, {k: _coef(0, -h, exact), mk: _coef(0, h, exact)})

    # -- basic protocol ---------------------------------------------------
    @property
    def exact(self) -> bool | None:
        return _kind(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, TrigPoly):
            return self.dim == other.dim and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        if not self.terms:
            return f"TrigPoly(dim={self.dim}, 0)"
        parts = []
        for k in sorted(self.terms):
            re, im = self.terms[k]
            parts.append(f"{k}:({re}{'+' if im >= 0 else '-'}{abs(im)}i)")
        return f"TrigPoly(dim={self.dim}, {', '.join(parts)})"

    def _same_dim(self, other: TrigPoly):
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    # -- ring operations --------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, TrigPoly):
            if other == 0:
                return self
            return NotImplemented
        self._same_dim(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        _check_kinds(self.terms, other.terms)
        out = dict(self.terms)
        for k, (b0, b1) in other.terms.items():
            a = out.get(k)
            if a is None:
                out[k] = (b0, b1)
            else:
                r, i = a[0] + b0, a[1] + b1
                if r == 0 and i == 0:
                    del out[k]
                else:
                    out[k] = (r, i)
        return TrigPoly._raw(self.dim, out)

    __radd__ = __add__

    def __neg__(self):
        return TrigPoly._raw(self.dim, {k: (-a, -b) for k, (a, b) in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, TrigPoly):
            if other == 0:
                return self
            return NotImplemented
        return self + (-other)

    def scale(self, re, im=0) -> TrigPoly:
        """Multiply by the complex scalar ``re + i im``."""
        if not self.terms:
            return self
        exact = self.exact
        re = coerce_like(re, exact)
        im = coerce_like(im, exact)
        if re == 0 and im == 0:
            return TrigPoly.zero(self.dim)
        if im == 0:
            return TrigPoly._raw(self.dim, {k: (a * re, b * re) for k, (a, b) in self.terms.items()})
        return TrigPoly._raw(
            self.dim,
            {k: (a * re - b * im, a * im + b * re) for k, (a, b) in self.terms.items()},
        )

    def __mul__(self, other):
        if isinstance(other, TrigPoly):
            return self._convolve(other)
        if isinstance(other, (int, float, MPQ_TYPE)) or type(other).__name__ == "Fraction":
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, TrigPoly):
            return other._convolve(self)
        return self.__mul__(other)

    def _convolve(self, other: TrigPoly) -> TrigPoly:
        self._same_dim(other)
        a, b = self.terms, other.terms
        if not a or not b:
            return TrigPoly.zero(self.dim)
        _check_kinds(a, b)
        if len(a) < len(b):
            a, b = b, a
        bw = _BANDWIDTH.get()
        if len(a) * len(b) >= _DENSE_THRESHOLD and isinstance(next(iter(a.values()))[0], float):
            return _dense_convolve(self.dim, a, b, bw)
        out: dict = {}
        get = out.get
        blist = list(b.items())
        if self.dim == 1:
            for (k1,), (r1, i1) in a.items():
                for (k2,), (r2, i2) in blist:
                    k = k1 + k2
                    if bw is not None and (k > bw or k < -bw):
                        continue
                    key = (k,)
                    re = r1 * r2 - i1 * i2
                    im = r1 * i2 + i1 * r2
                    o = get(key)
                    out[key] = (re, im) if o is None else (o[0] + re, o[1] + im)
        else:
            for k1, (r1, i1) in a.items():
                for k2, (r2, i2) in blist:
                    k = tuple(x + y for x, y in zip(k1, k2))
                    if bw is not None and any(x > bw or x < -bw for x in k):
                        continue
                    re = r1 * r2 - i1 * i2
                    im = r1 * i2 + i1 * r2
                    o = get(k)
                    out[k] = (re, im) if o is None else (o[0] + re, o[1] + im)
        return TrigPoly._raw(self.dim, {k: c for k, c in out.items() if c[0] != 0 or c[1] != 0})

    # -- calculus ---------------------------------------------------------
    def diff(self, axis: int) -> TrigPoly:
        """Partial derivative along ``axis`` (0-based): multiply mode k by ``i k_axis``."""
        if not 0 <= axis < self.dim:
            raise ValueError(f"axis {axis} out of range for dimension {self.dim}")
        out = {}
        for k, (a, b) in self.terms.items():
            s = k[axis]
            if s:
                # i*s*(a + i b) = -s b + i s a
                out[k] = (-s * b, s * a)
        return TrigPoly._raw(self.dim, out)

    def zero_mode(self):
        return self.terms.get((0,) * self.dim, None)

    def integrate(self):
        """Integral over the torus with the coordinate volume ``(2 pi)^d``."""
        c = self.zero_mode()
        if c is None:
            return VolumeScalar(0, 0, self.dim) if self.exact in (True, None) else 0.0
        if isinstance(c[0], float):
            v = (2 * math.pi) ** self.dim
            return c[0] * v if c[1] == 0 else complex(c[0], c[1]) * v
        return VolumeScalar(c[0], c[1], self.dim)

    def inner_zero_mode(self, other: TrigPoly):
        """Zero mode of ``self * other`` without forming the product, as ``(re, im)``."""
        self._same_dim(other)
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        re = im = None
        for k, (r1, i1) in a.items():
            c = b.get(tuple(-x for x in k))
            if c is None:
                continue
            r2, i2 = c
            dr = r1 * r2 - i1 * i2
            di = r1 * i2 + i1 * r2
            if re is None:
                re, im = dr, di
            else:
                re += dr
                im += di
        return (re, im) if re is not None else None

    def conj(self) -> TrigPoly:
        """Complex conjugate function: c_k -> conj(c_{-k})."""
        return TrigPoly._raw(
            self.dim, {tuple(-x for x in k): (a, -b) for k, (a, b) in self.terms.items()}
        )

    def is_real(self) -> bool:
        return self == self.conj()

    def truncate(self, bandwidth: int) -> TrigPoly:
        return TrigPoly._raw(
            self.dim,
            {k: c for k, c in self.terms.items() if all(-bandwidth <= x <= bandwidth for x in k)},
        )

    def max_freq(self) -> int:
        return max((max(abs(x) for x in k) for k in self.terms), default=0)

    def max_abs_coeff(self) -> float:
        return max((math.hypot(float(a), float(b)) for a, b in self.terms.values()), default=0.0)

    def l2_sq(self) -> float:
        """Mean-square value ``sum |c_k|^2`` (float)."""
        return sum(float(a) ** 2 + float(b) ** 2 for a, b in self.terms.values())

    def is_finite(self) -> bool:
        return all(math.isfinite(float(a)) and math.isfinite(float(b)) for a, b in self.terms.values())

    def to_float(self) -> TrigPoly:
        return TrigPoly._raw(self.dim, {k: (float(a), float(b)) for k, (a, b) in self.terms.items()})

    def map_coeffs(self, fn) -> TrigPoly:
        """Apply ``fn(k, (re, im)) -> (re, im)`` to every mode."""
        return TrigPoly(self.dim, {k: fn(k, c) for k, c in self.terms.items()})

    def evaluate(self, q) -> complex:
        q = [float(x) for x in q]
        s = 0j
        for k, (a, b) in self.terms.items():
            s += complex(float(a), float(b)) * complex(
                math.cos(sum(ki * qi for ki, qi in zip(k, q))),
                math.sin(sum(ki * qi for ki, qi in zip(k, q))),
            )
        return s


# Float products with at least this many term pairs go through numpy.
_DENSE_THRESHOLD = 256


def _to_dense(d: int, terms: Mapping):
    keys = np.array(list(terms.keys()), dtype=np.int64).reshape(len(terms), d)
    lo = keys.min(axis=0)
    shape = tuple(keys.max(axis=0) - lo + 1)
    arr = np.zeros(shape, dtype=np.complex128)
    vals = np.array([complex(re, im) for re, im in terms.values()])
    arr[tuple((keys - lo).T)] = vals
    return arr, lo


def _dense_convolve(d: int, a: Mapping, b: Mapping, bw: int | None) -> TrigPoly:
    A, lo_a = _to_dense(d, a)
    B, lo_b = _to_dense(d, b)
    if d == 1:
        C = np.convolve(A, B)
    else:
        # direct (not FFT) convolution keeps structurally zero modes exactly zero
        C = np.zeros(tuple(x + y - 1 for x, y in zip(A.shape, B.shape)), dtype=np.complex128)
        for idx in zip(*np.nonzero(A)):
            sl = tuple(slice(i, i + n) for i, n in zip(idx, B.shape))
            C[sl] += A[idx] * B
    lo = lo_a + lo_b
    nz = np.nonzero(C)
    keys = np.stack(nz, axis=1) + lo
    vals = C[nz]
    if bw is not None:
        keep = np.all(np.abs(keys) <= bw, axis=1)
        keys, vals = keys[keep], vals[keep]
    out = {
        tuple(int(x) for x in k): (float(v.real), float(v.imag))
        for k, v in zip(keys.tolist(), vals.tolist())
    }
    return TrigPoly._raw(d, out)


def mul(a: TrigPoly, b: TrigPoly) -> TrigPoly:
    return a * b


def diff_q(f: TrigPoly, i: int) -> TrigPoly:
    return f.diff(i)


def integrate_torus(f: TrigPoly):
    return f.integrate()


def double_factorial(n: int) -> int:
    r = 1
    while n > 1:
        r *= n
        n -= 2
    return r


def gaussian_moment(n) -> mpq:
    """``int p**n w(p) dp`` for the normalized Gaussian weight; ``n`` int or multi-degree."""
    if isinstance(n, int):
        n = (n,)
    r = 1
    for ni in n:
        if ni < 0:
            raise ValueError("negative moment order")
        if ni % 2:
            return mpq(0)
        r *= double_factorial(ni - 1)
    return mpq(r)


def _add_exp(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def unit(d: int, i: int) -> tuple:
    return tuple(1 if j == i else 0 for j in range(d))


class PhaseFunction:
    """Function on ``T^d x R^d``, trigonometric in q and polynomial in p."""

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms: Mapping | None = None):
        self.dim = dim
        clean = {}
        if terms:
            for a, f in terms.items():
                a = tuple(int(x) for x in a)
                if len(a) != dim or any(x < 0 for x in a):
                    raise ValueError(f"bad momentum degree {a}")
                if not isinstance(f, TrigPoly) or f.dim != dim:
                    raise ValueError("coefficients must be TrigPoly of matching dimension")
                if f.terms:
                    clean[a] = clean[a] + f if a in clean else f
        self.terms = {a: f for a, f in clean.items() if f.terms}

    @classmethod
    def _raw(cls, dim, terms):
        obj = object.__new__(cls)
        obj.dim = dim
        obj.terms = terms
        return obj

    @classmethod
    def zero(cls, dim: int) -> PhaseFunction:
        return cls._raw(dim, {})

    @classmethod
    def from_trig(cls, f: TrigPoly, pdeg=None) -> PhaseFunction:
        pdeg = tuple(pdeg) if pdeg is not None else (0,) * f.dim
        return cls(f.dim, {pdeg: f})

    @classmethod
    def momentum(cls, dim: int, i: int, exact: bool = True) -> PhaseFunction:
        """The coordinate function ``p_i``."""
        return cls(dim, {unit(dim, i): TrigPoly.const(dim, 1, exact)})

    def __eq__(self, other):
        if isinstance(other, PhaseFunction):
            return self.dim == other.dim and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"PhaseFunction(dim={self.dim}, {self.terms})"

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def _same_dim(self, other):
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other):
        if not isinstance(other, PhaseFunction):
            if other == 0:
                return self
            return NotImplemented
        self._same_dim(other)
        out = dict(self.terms)
        for a, f in other.terms.items():
            g = out.get(a)
            s = f if g is None else g + f
            if s.terms:
                out[a] = s
            else:
                out.pop(a, None)
        return PhaseFunction._raw(self.dim, out)

    __radd__ = __add__

    def __neg__(self):
        return PhaseFunction._raw(self.dim, {a: -f for a, f in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, PhaseFunction):
            if other == 0:
                return self
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, PhaseFunction):
            self._same_dim(other)
            out: dict = {}
            for a, f in self.terms.items():
                for b, g in other.terms.items():
                    c = _add_exp(a, b)
                    fg = f * g
                    out[c] = out[c] + fg if c in out else fg
            return PhaseFunction._raw(self.dim, {c: f for c, f in out.items() if f.terms})
        if isinstance(other, TrigPoly):
            self._same_dim(other)
            return PhaseFunction._raw(
                self.dim, {a: f * other for a, f in self.terms.items() if (f * other).terms}
            )
        if isinstance(other, GaussWeighted):
            return GaussWeighted(self * other.poly)
        out = {a: f * other for a, f in self.terms.items()}
        return PhaseFunction._raw(self.dim, {a: f for a, f in out.items() if f.terms})

    def __rmul__(self, other):
        if isinstance(other, TrigPoly):
            return self * other
        return self.__mul__(other)

    def scale(self, re, im=0) -> PhaseFunction:
        out = {a: f.scale(re, im) for a, f in self.terms.items()}
        return PhaseFunction._raw(self.dim, {a: f for a, f in out.items() if f.terms})

    def diff_q(self, i: int) -> PhaseFunction:
        out = {a: f.diff(i) for a, f in self.terms.items()}
        return PhaseFunction._raw(self.dim, {a: f for a, f in out.items() if f.terms})

    def diff_p(self, i: int) -> PhaseFunction:
        if not 0 <= i < self.dim:
            raise ValueError(f"axis {i} out of range for dimension {self.dim}")
        out: dict = {}
        for a, f in self.terms.items():
            n = a[i]
            if n:
                b = a[:i] + (n - 1,) + a[i + 1 :]
                g = f * n
                out[b] = out[b] + g if b in out else g
        return PhaseFunction._raw(self.dim, {a: f for a, f in out.items() if f.terms})

    def times_momentum(self, i: int) -> PhaseFunction:
        """Multiply by ``p_i``."""
        e = unit(self.dim, i)
        return PhaseFunction._raw(self.dim, {_add_exp(a, e): f for a, f in self.terms.items()})

    def pdegree(self) -> int:
        return max((sum(a) for a in self.terms), default=-1)

    def degree_part(self, lo: int = 0, hi: int | None = None) -> PhaseFunction:
        """Terms whose total p-degree lies in ``[lo, hi]``."""
        return PhaseFunction._raw(
            self.dim,
            {a: f for a, f in self.terms.items() if sum(a) >= lo and (hi is None or sum(a) <= hi)},
        )

    def coefficient(self, alpha) -> TrigPoly:
        return self.terms.get(tuple(alpha), TrigPoly.zero(self.dim))

    def to_float(self) -> PhaseFunction:
        return PhaseFunction._raw(self.dim, {a: f.to_float() for a, f in self.terms.items()})

    def evaluate(self, q, p) -> complex:
        s = 0j
        for a, f in self.terms.items():
            s += f.evaluate(q) * math.prod(float(pi) ** n for pi, n in zip(p, a))
        return s


class GaussWeighted:
    """``poly(q, p) * w(p)`` with the normalized Gaussian weight in p."""

    __slots__ = ("poly",)

    def __init__(self, poly: PhaseFunction):
        if not isinstance(poly, PhaseFunction):
            raise TypeError("GaussWeighted wraps a PhaseFunction")
        self.poly = poly

    @classmethod
    def zero(cls, dim: int) -> GaussWeighted:
        return cls(PhaseFunction.zero(dim))

    @classmethod
    def weight(cls, dim: int, exact: bool = True) -> GaussWeighted:
        """The bare weight ``w(p)``."""
        return cls(PhaseFunction.from_trig(TrigPoly.const(dim, 1, exact)))

    @property
    def dim(self) -> int:
        return self.poly.dim

    def __eq__(self, other):
        if isinstance(other, GaussWeighted):
            return self.poly == other.poly
        if other == 0:
            return self.poly.is_zero()
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"GaussWeighted({self.poly!r})"

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def __add__(self, other):
        if isinstance(other, GaussWeighted):
            return GaussWeighted(self.poly + other.poly)
        if other == 0:
            return self
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return GaussWeighted(-self.poly)

    def __sub__(self, other):
        if isinstance(other, GaussWeighted):
            return GaussWeighted(self.poly - other.poly)
        if other == 0:
            return self
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, GaussWeighted):
            raise TypeError("product of two Gaussian-weighted functions leaves the weight class")
        return GaussWeighted(self.poly * other)

    __rmul__ = __mul__

    def scale(self, re, im=0) -> GaussWeighted:
        return GaussWeighted(self.poly.scale(re, im))

    def diff_q(self, i: int) -> GaussWeighted:
        return GaussWeighted(self.poly.diff_q(i))

    def diff_p(self, i: int) -> GaussWeighted:
        # d/dp_i (P w) = (dP/dp_i - p_i P) w
        return GaussWeighted(self.poly.diff_p(i) - self.poly.times_momentum(i))

    def fiber_integral(self, extra=None) -> TrigPoly:
        """``int p**extra * poly * w dp`` as a function of q."""
        d = self.dim
        extra = tuple(extra) if extra is not None else (0,) * d
        out = TrigPoly.zero(d)
        for a, f in self.poly.terms.items():
            m = gaussian_moment(_add_exp(a, extra))
            if m:
                out = out + f * m
        return out

    def integrate(self):
        return self.fiber_integral().integrate()

    def to_float(self) -> GaussWeighted:
        return GaussWeighted(self.poly.to_float())

    def evaluate(self, q, p) -> complex:
        d = self.dim
        w = (2 * math.pi) ** (-d / 2) * math.exp(-sum(float(x) ** 2 for x in p) / 2)
        return self.poly.evaluate(q, p) * w


def phase_add(a, b):
    return a + b


def phase_mul(a, b):
    return a * b


def integrate_phase(f):
    """Exact integral over ``T^d x R^d`` of a Gaussian-weighted integrand."""
    if isinstance(f, GaussWeighted):
        return f.integrate()
    if isinstance(f, PhaseFunction):
        if f.is_zero():
            return VolumeScalar(0, 0, f.dim)
        raise ValueError("momentum polynomial without Gaussian weight is not integrable")
    raise TypeError(f"cannot integrate {type(f).__name__}")


def real_modes(dim: int, bound: int) -> Iterator[tuple]:
    """All frequency vectors with ``|k_i| <= bound``."""
    import itertools

    yield from itertools.product(range(-bound, bound + 1), repeat=dim)


def sum_all(items: Iterable, zero):
    out = zero
    for x in items:
        out = out + x
    return out


__all__ = [
    "GaussWeighted",
    "PhaseFunction",
    "TrigPoly",
    "current_bandwidth",
    "diff_q",
    "double_factorial",
    "gaussian_moment",
    "integrate_phase",
    "integrate_torus",
    "mul",
    "phase_add",
    "phase_mul",
    "real_modes",
    "spectral_truncation",
    "sum_all",
    "to_exact",
    "unit",
]
