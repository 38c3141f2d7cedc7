"""Sorted multi-index bookkeeping for fully symmetric tensors.

A symmetric tensor component is addressed by a sorted tuple of axes. Sums over
all ordered index tuples are rewritten as sums over sorted multisets weighted
by :func:`multiplicity`.
"""

from __future__ import annotations

import itertools
from collections import Counter
from functools import lru_cache
from math import comb, factorial

from gmpy2 import mpq


def canonical(index) -> tuple:
    return tuple(sorted(int(i) for i in index))


@lru_cache(maxsize=None)
def multisets(dim: int, order: int) -> tuple:
    """All sorted index tuples of length ``order`` over ``range(dim)``."""
    if order < 0:
        return ()
    return tuple(itertools.combinations_with_replacement(range(dim), order))


@lru_cache(maxsize=None)
def multiplicity(index: tuple) -> int:
    """Number of distinct orderings of ``index``: ``k! / prod n_c!``."""
    r = factorial(len(index))
    for n in Counter(index).values():
        r //= factorial(n)
    return r


def merge(a: tuple, b: tuple) -> tuple:
    """Multiset union of two sorted tuples."""
    if not a:
        return b
    if not b:
        return a
    return tuple(sorted(a + b))


def insert(a: tuple, i: int) -> tuple:
    return tuple(sorted(a + (i,)))


@lru_cache(maxsize=None)
def splits(index: tuple, size: int) -> tuple:
    """Distinct ways of splitting a sorted multiset into two parts.

    Returns ``(part, rest, weight)`` triples where ``part`` has ``size``
    elements. ``weight`` is the fraction of the ``binom(n, size)`` position
    choices that produce this split, so averaging a function over all
    orderings of ``index`` that is symmetric within each part reduces to the
    weighted sum over these triples.
    """
    n = len(index)
    if size < 0 or size > n:
        return ()
    counts = sorted(Counter(index).items())
    total = comb(n, size)
    out = []
    ranges = [range(min(c, size) + 1) for _, c in counts]
    for pick in itertools.product(*ranges):
        if sum(pick) != size:
            continue
        part = []
        rest = []
        w = 1
        for (axis, c), j in zip(counts, pick):
            part.extend([axis] * j)
            rest.extend([axis] * (c - j))
            w *= comb(c, j)
        out.append((tuple(part), tuple(rest), mpq(w, total)))
    return tuple(out)


__all__ = ["canonical", "insert", "merge", "multiplicity", "multisets", "splits"]
