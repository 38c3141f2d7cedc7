import random

import pytest
from gmpy2 import mpq

from schouten_ep.field_algebra import TrigPoly
from schouten_ep.tensor_calculus import SymCoTensor, SymCovField, SymTensor, SymTensorField


def cos(k=1, c=1, d=1):
    return TrigPoly.cos(d, (k,) if d == 1 else k, c)


def sin(k=1, c=1, d=1):
    return TrigPoly.sin(d, (k,) if d == 1 else k, c)


def const(c=1, d=1):
    return TrigPoly.const(d, c)


def vec(f, order=1, d=1, index=None):
    """Single-component contravariant field in grade ``order``."""
    idx = index if index is not None else (0,) * order
    return SymTensorField(d, [SymTensor(d, order, {idx: f})])


def cov(f, order=1, d=1, index=None):
    idx = index if index is not None else (0,) * order
    return SymCovField(d, [SymCoTensor(d, order, {idx: f})])


def half():
    return mpq(1, 2)


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    try:
        import test_acceptance
    except ImportError:
        return
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[n])
