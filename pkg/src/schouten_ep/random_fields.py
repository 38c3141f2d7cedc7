"""Seeded random test objects with small supports (exact Gaussian-rational coefficients)."""

from __future__ import annotations

import random

from gmpy2 import mpq

from .field_algebra import GaussWeighted, PhaseFunction, TrigPoly
from .gccl import GaussOneForm
from .multiindex import multisets
from .tensor_calculus import SymCoTensor, SymCovField, SymTensor, SymTensorField


def _coeff(rng: random.Random):
    num = rng.choice([-3, -2, -1, 1, 2, 3])
    den = rng.choice([1, 1, 2, 3])
    return mpq(num, den)


def random_trig(rng: random.Random, d: int, terms: int = 2, kmax: int = 2) -> TrigPoly:
    out = {}
    for _ in range(rng.randint(1, terms)):
        k = tuple(rng.randint(-kmax, kmax) for _ in range(d))
        re = _coeff(rng)
        im = _coeff(rng) if rng.random() < 0.5 else mpq(0)
        out[k] = (re, im)
    return TrigPoly(d, out)


def _random_graded(rng, d, orders, cls, single, density, comps, kmax, truncation):
    tensors = []
    for k in orders:
        if rng.random() >= density:
            continue
        idxs = multisets(d, k)
        entries = {}
        for _ in range(rng.randint(1, comps)):
            entries[rng.choice(idxs)] = random_trig(rng, d, kmax=kmax)
        tensors.append(single(d, k, entries))
    return cls(d, tensors, truncation if truncation is not None else max(orders, default=0))


def random_tensor_field(
    rng: random.Random,
    d: int,
    max_order: int = 3,
    min_order: int = 0,
    density: float = 0.6,
    comps: int = 1,
    kmax: int = 2,
    truncation: int | None = None,
) -> SymTensorField:
    """Sparse random contravariant field on grades ``min_order..max_order``."""
    return _random_graded(
        rng, d, range(min_order, max_order + 1), SymTensorField, SymTensor, density, comps, kmax, truncation
    )


def random_cov_field(
    rng: random.Random,
    d: int,
    max_order: int = 4,
    min_order: int = 0,
    density: float = 0.6,
    comps: int = 1,
    kmax: int = 2,
    truncation: int | None = None,
) -> SymCovField:
    """Sparse random covariant field on grades ``min_order..max_order``."""
    return _random_graded(
        rng, d, range(min_order, max_order + 1), SymCovField, SymCoTensor, density, comps, kmax, truncation
    )


def random_phase(rng: random.Random, d: int, max_pdeg: int = 2, terms: int = 2, kmax: int = 2) -> PhaseFunction:
    out = {}
    for _ in range(rng.randint(1, terms)):
        a = tuple(rng.randint(0, max_pdeg) for _ in range(d))
        out[a] = random_trig(rng, d, kmax=kmax)
    return PhaseFunction(d, out)


def random_one_form(rng: random.Random, d: int, max_pdeg: int = 2, kmax: int = 2) -> GaussOneForm:
    """Gaussian-weighted one-form with one random component per slot (some left zero)."""

    def comp():
        if rng.random() < 0.3:
            return GaussWeighted.zero(d)
        return GaussWeighted(random_phase(rng, d, max_pdeg, terms=1, kmax=kmax))

    return GaussOneForm(d, tuple(comp() for _ in range(d)), tuple(comp() for _ in range(d)))


def make_rng(seed: int) -> random.Random:
    return random.Random(seed)


__all__ = [
    "make_rng",
    "random_cov_field",
    "random_one_form",
    "random_phase",
    "random_tensor_field",
    "random_trig",
]
