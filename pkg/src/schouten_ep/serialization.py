"""JSON encoding of fields, tensors, vector fields and one-forms.

Exact rationals are written as ``"num/den"`` strings (integers as ``"n"``) and
floats as JSON numbers. On input an object is read in float mode as soon as
any coefficient is a JSON float; otherwise it is exact.
"""

from __future__ import annotations

from typing import Any

from .field_algebra import GaussWeighted, PhaseFunction, TrigPoly
from .gccl import GaussOneForm, HamVF
from .scalars import scalar_from_json, scalar_to_json
from .tensor_calculus import SymCoTensor, SymCovField, SymTensor, SymTensorField


class FormatError(ValueError):
    """Malformed serialized input."""


def _require(obj, key, kind=None):
    if not isinstance(obj, dict) or key not in obj:
        raise FormatError(f"missing field {key!r}")
    v = obj[key]
    if kind is not None and not isinstance(v, kind):
        raise FormatError(f"field {key!r} has wrong type")
    return v


def _has_float(obj) -> bool:
    if isinstance(obj, float):
        return True
    if isinstance(obj, dict):
        return any(_has_float(obj.get(k)) for k in ("re", "im")) or any(
            _has_float(v) for k, v in obj.items() if isinstance(v, (dict, list))
        )
    if isinstance(obj, list):
        return any(_has_float(v) for v in obj)
    return False


def _dim(obj) -> int:
    d = _require(obj, "dim", int)
    if isinstance(d, bool) or d < 1:
        raise FormatError("dim must be a positive integer")
    return d


# -- scalar fields -------------------------------------------------------------


def trig_to_json(f: TrigPoly) -> dict:
    return {
        "dim": f.dim,
        "terms": [
            {"freq": list(k), "re": scalar_to_json(re), "im": scalar_to_json(im)}
            for k, (re, im) in sorted(f.terms.items())
        ],
    }


def _trig_terms(terms, d: int, exact: bool) -> dict:
    out = {}
    for t in terms:
        k = tuple(_require(t, "freq", list))
        if len(k) != d or not all(isinstance(x, int) for x in k):
            raise FormatError(f"bad frequency {list(k)}")
        re = scalar_from_json(t.get("re", 0), exact)
        im = scalar_from_json(t.get("im", 0), exact)
        if k in out:
            re, im = out[k][0] + re, out[k][1] + im
        out[k] = (re, im)
    return out


def trig_from_json(obj, exact: bool | None = None) -> TrigPoly:
    try:
        d = _dim(obj)
        terms = _require(obj, "terms", list)
        if exact is None:
            exact = not _has_float(obj)
        return TrigPoly(d, _trig_terms(terms, d, exact))
    except (TypeError, ValueError) as e:
        raise FormatError(str(e)) from e


def phase_to_json(f: PhaseFunction) -> dict:
    terms = []
    for a in sorted(f.terms):
        for k, (re, im) in sorted(f.terms[a].terms.items()):
            terms.append(
                {"freq": list(k), "pdeg": list(a), "re": scalar_to_json(re), "im": scalar_to_json(im)}
            )
    return {"dim": f.dim, "terms": terms}


def phase_from_json(obj, exact: bool | None = None) -> PhaseFunction:
    try:
        d = _dim(obj)
        terms = _require(obj, "terms", list)
        if exact is None:
            exact = not _has_float(obj)
        groups: dict = {}
        for t in terms:
            a = tuple(t.get("pdeg", [0] * d))
            if len(a) != d:
                raise FormatError(f"bad momentum degree {list(a)}")
            groups.setdefault(a, []).append(t)
        return PhaseFunction(d, {a: TrigPoly(d, _trig_terms(ts, d, exact)) for a, ts in groups.items()})
    except (TypeError, ValueError) as e:
        raise FormatError(str(e)) from e


def gauss_to_json(f: GaussWeighted) -> dict:
    out = phase_to_json(f.poly)
    out["weighted"] = True
    return out


def gauss_from_json(obj, exact: bool | None = None) -> GaussWeighted:
    if not isinstance(obj, dict) or obj.get("weighted") is not True:
        raise FormatError("Gaussian-weighted component must carry \"weighted\": true")
    return GaussWeighted(phase_from_json(obj, exact))


# -- tensor fields ------------------------------------------------------------


def field_to_json(X) -> dict:
    grades = {}
    for k in sorted(X.grades):
        grades[str(k)] = [
            {"index": list(I), "coeff": trig_to_json(f)} for I, f in sorted(X.grades[k].comps.items())
        ]
    return {"dim": X.dim, "truncation": X.truncation, "grades": grades}


def _field_from_json(obj, cls, single, exact):
    try:
        d = _dim(obj)
        grades = _require(obj, "grades", dict)
        if exact is None:
            exact = not _has_float(obj)
        tensors = []
        for key, entries in grades.items():
            try:
                k = int(key)
            except ValueError:
                raise FormatError(f"grade key {key!r} is not an integer") from None
            if isinstance(entries, dict):
                entries = [entries]
            if not isinstance(entries, list):
                raise FormatError(f"grade {k} must hold a list of components")
            comps: dict = {}
            for e in entries:
                idx = tuple(sorted(_require(e, "index", list)))
                f = trig_from_json(_require(e, "coeff", dict), exact)
                if f.dim != d:
                    raise FormatError("component dimension mismatch")
                comps[idx] = comps[idx] + f if idx in comps else f
            tensors.append(single(d, k, comps))
        trunc = obj.get("truncation")
        return cls(d, tensors, trunc)
    except FormatError:
        raise
    except (TypeError, ValueError) as e:
        raise FormatError(str(e)) from e


def tensor_field_from_json(obj, exact: bool | None = None) -> SymTensorField:
    return _field_from_json(obj, SymTensorField, SymTensor, exact)


def cov_field_from_json(obj, exact: bool | None = None) -> SymCovField:
    return _field_from_json(obj, SymCovField, SymCoTensor, exact)


# -- phase space ---------------------------------------------------------------


def hamvf_to_json(X: HamVF) -> dict:
    return {
        "dim": X.dim,
        "q": [phase_to_json(c) for c in X.q],
        "p": [phase_to_json(c) for c in X.p],
        "generator": phase_to_json(X.generator) if X.generator is not None else None,
    }


def hamvf_from_json(obj, exact: bool | None = None) -> HamVF:
    d = _dim(obj)
    if exact is None:
        exact = not _has_float(obj)
    q = tuple(phase_from_json(c, exact) for c in _require(obj, "q", list))
    p = tuple(phase_from_json(c, exact) for c in _require(obj, "p", list))
    gen = obj.get("generator")
    try:
        return HamVF(d, q, p, phase_from_json(gen, exact) if gen is not None else None)
    except ValueError as e:
        raise FormatError(str(e)) from e


def oneform_to_json(Pi: GaussOneForm) -> dict:
    return {
        "dim": Pi.dim,
        "dq": [gauss_to_json(c) for c in Pi.dq],
        "dp": [gauss_to_json(c) for c in Pi.dp],
    }


def oneform_from_json(obj, exact: bool | None = None) -> GaussOneForm:
    d = _dim(obj)
    if exact is None:
        exact = not _has_float(obj)
    try:
        dq = tuple(gauss_from_json(c, exact) for c in _require(obj, "dq", list))
        dp = tuple(gauss_from_json(c, exact) for c in _require(obj, "dp", list))
        return GaussOneForm(d, dq, dp)
    except (TypeError, ValueError) as e:
        raise FormatError(str(e)) from e


def to_json(obj: Any):
    """Dispatch on type."""
    if isinstance(obj, TrigPoly):
        return trig_to_json(obj)
    if isinstance(obj, GaussWeighted):
        return gauss_to_json(obj)
    if isinstance(obj, PhaseFunction):
        return phase_to_json(obj)
    if isinstance(obj, (SymTensorField, SymCovField)):
        return field_to_json(obj)
    if isinstance(obj, (SymTensor, SymCoTensor)):
        cls = SymCovField if obj.covariant else SymTensorField
        return field_to_json(cls.of(obj))
    if isinstance(obj, HamVF):
        return hamvf_to_json(obj)
    if isinstance(obj, GaussOneForm):
        return oneform_to_json(obj)
    raise TypeError(f"no JSON form for {type(obj).__name__}")


__all__ = [
    "FormatError",
    "cov_field_from_json",
    "field_to_json",
    "gauss_from_json",
    "gauss_to_json",
    "hamvf_from_json",
    "hamvf_to_json",
    "oneform_from_json",
    "oneform_to_json",
    "phase_from_json",
    "phase_to_json",
    "tensor_field_from_json",
    "to_json",
    "trig_from_json",
    "trig_to_json",
]
