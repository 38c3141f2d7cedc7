"""Command-line front end: verification suites, EP flows and batch derivations.

Exit codes: 0 success, 1 a verification identity failed, 2 invalid input,
3 internal error, 4 blow-up during a flow.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from .euler_poincare import BlowUpError, EPConfig, integrate
from .field_algebra import TrigPoly
from .matched_pair import derive_actions, proj_n, proj_s
from .gccl import gccl_star
from .serialization import (
    FormatError,
    cov_field_from_json,
    field_to_json,
    oneform_from_json,
    tensor_field_from_json,
)
from .tensor_calculus import SymCoTensor, SymCovField, schouten_graded
from .verify import SUITES, run_suite

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_INTERNAL = 3
EXIT_BLOWUP = 4


class ConfigError(ValueError):
    """Invalid flow scenario."""


# ---------------------------------------------------------------------------
# scenarios


def two_mode_initial(amplitudes=(4.0, 2.0)) -> SymCovField:
    """EPDiff momentum ``a cos q + b sin 2q dq`` on the circle (float mode)."""
    a, b = amplitudes
    m = TrigPoly.cos(1, (1,), a, exact=False) + TrigPoly.sin(1, (2,), b, exact=False)
    return SymCovField(1, [SymCoTensor(1, 1, {(0,): m})], 1)


BUILTIN_INITIAL = {"epdiff-two-mode": two_mode_initial}

_CONFIG_KEYS = {"dim", "N", "alpha", "dt", "t_end", "bandwidth", "dealias", "initial", "scenario", "record_every"}


def _number(obj, key, kind=(int, float), default=None):
    if key not in obj:
        if default is None:
            raise ConfigError(f"missing field {key!r}")
        return default
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, kind):
        raise ConfigError(f"field {key!r} has wrong type")
    if isinstance(v, float) and not math.isfinite(v):
        raise ConfigError(f"field {key!r} is not finite")
    return v


def parse_scenario(obj) -> tuple[EPConfig, SymCovField, int]:
    """Validate one scenario object; returns ``(config, initial momenta, record_every)``."""
    if not isinstance(obj, dict) or not obj:
        raise ConfigError("scenario must be a non-empty JSON object")
    unknown = set(obj) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown fields {sorted(unknown)}")
    scenario = obj.get("scenario", "custom")
    if not isinstance(scenario, str):
        raise ConfigError("field 'scenario' must be a string")
    try:
        cfg = EPConfig(
            dim=_number(obj, "dim", int),
            N=_number(obj, "N", int),
            alpha=float(_number(obj, "alpha")),
            dt=float(_number(obj, "dt")),
            t_end=float(_number(obj, "t_end")),
            bandwidth=_number(obj, "bandwidth", int),
            dealias=bool(obj.get("dealias", False)),
            scenario=scenario,
        )
    except ValueError as e:
        raise ConfigError(str(e)) from e
    every = _number(obj, "record_every", int, default=1)
    if every < 1:
        raise ConfigError("record_every must be positive")
    if "initial" in obj:
        try:
            mu = cov_field_from_json(obj["initial"])
        except FormatError as e:
            raise ConfigError(f"bad initial data: {e}") from e
    elif scenario in BUILTIN_INITIAL:
        mu = BUILTIN_INITIAL[scenario]()
    else:
        raise ConfigError("no initial data and no built-in scenario of that name")
    if mu.dim != cfg.dim:
        raise ConfigError("initial data dimension does not match dim")
    return cfg, mu, every


def load_scenarios(obj) -> list:
    if isinstance(obj, dict) and "scenarios" in obj:
        items = obj["scenarios"]
        if not isinstance(items, list) or not items:
            raise ConfigError("'scenarios' must be a non-empty list")
        return [parse_scenario(s) for s in items]
    return [parse_scenario(obj)]


def _run_one(job):
    cfg, mu, every = job
    try:
        return ("ok", integrate(cfg, mu, record_every=every))
    except BlowUpError as e:
        return ("blowup", e.last_time)


def trajectory_csv(cfg: EPConfig, traj, name: str | None = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    head = ["t", "energy"] + [f"norm_{k}" for k in range(cfg.N + 1)] + ["max_abs_coeff"]
    if name is not None:
        head = ["scenario"] + head
    w.writerow(head)
    for t, e, norms, mx in zip(traj.times, traj.energies, traj.norms, traj.max_coeffs):
        row = [repr(float(t)), repr(float(e))]
        row += [repr(float(norms.get(k, 0.0))) for k in range(cfg.N + 1)]
        row.append(repr(float(mx)))
        w.writerow(([name] if name is not None else []) + row)
    return buf.getvalue()


def _thread_cap() -> int:
    try:
        return max(1, int(os.environ.get("SCHOUTEN_EP_THREADS", "1")))
    except ValueError:
        return 1


# ---------------------------------------------------------------------------
# commands


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_verify(args) -> int:
    if args.suite not in SUITES:
        print(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}", file=sys.stderr)
        return EXIT_INPUT
    if args.cases < 1:
        print("--cases must be positive", file=sys.stderr)
        return EXIT_INPUT
    report = run_suite(args.suite, args.seed, args.cases, args.mutate)
    _emit(json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n", args.out)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_flow(args) -> int:
    try:
        with open(args.config, encoding="utf-8") as fh:
            obj = json.load(fh)
        jobs = load_scenarios(obj)
    except (OSError, json.JSONDecodeError, ConfigError) as e:
        print(f"bad config: {e}", file=sys.stderr)
        return EXIT_INPUT
    workers = min(_thread_cap(), len(jobs))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(j) for j in jobs]
    multi = len(jobs) > 1
    parts = []
    status = EXIT_OK
    for i, ((cfg, _, _), (kind, value)) in enumerate(zip(jobs, results)):
        name = f"{i}:{cfg.scenario}" if multi else None
        if kind == "blowup":
            print(f"blow-up in scenario {cfg.scenario!r}; last valid time t = {value!r}", file=sys.stderr)
            status = EXIT_BLOWUP
            continue
        text = trajectory_csv(cfg, value, name)
        parts.append(text if not parts else text.split("\n", 1)[1])
    _emit("".join(parts), args.out)
    return status


def _load_json(path):
    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    if not isinstance(obj, dict) or not obj:
        raise FormatError("input must be a non-empty JSON object")
    return obj


def derive_actions_json(obj: dict) -> dict:
    """Mutual actions of a higher-order field ``eta`` and a fluid field ``xi``."""
    if "eta" not in obj or "xi" not in obj:
        raise FormatError("expected fields 'eta' and 'xi'")
    eta = tensor_field_from_json(obj["eta"])
    xi = tensor_field_from_json(obj["xi"])
    if eta.dim != xi.dim:
        raise FormatError("dimension mismatch")
    if proj_s(eta).max_abs_coeff() or proj_n(xi).max_abs_coeff():
        raise FormatError("'eta' must live on grades >= 2 and 'xi' on grades 0 and 1")
    left, right = derive_actions(schouten_graded, proj_s, proj_n, eta, xi)
    return {"left": field_to_json(left), "right": field_to_json(right)}


def derive_moments_json(obj: dict) -> dict:
    """Moment hierarchy of a Gaussian-weighted one-form up to ``order`` (default 4)."""
    form = obj.get("one_form", obj)
    order = obj.get("order", 4)
    if isinstance(order, bool) or not isinstance(order, int) or order < 0:
        raise FormatError("'order' must be a non-negative integer")
    Pi = oneform_from_json(form)
    A = gccl_star(Pi, order)
    return {"moments": field_to_json(A)}


def cmd_derive(args) -> int:
    try:
        obj = _load_json(args.input)
        fn = derive_actions_json if args.what == "actions" else derive_moments_json
        result = fn(obj)
    except (OSError, json.JSONDecodeError, FormatError) as e:
        print(f"bad input: {e}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(json.dumps(result, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="schouten-ep", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a randomized identity suite")
    v.add_argument("suite", help=f"one of: {', '.join(SUITES)}")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--cases", type=int, default=20)
    v.add_argument("--mutate", action="store_true", help="inject a deliberate error (control run)")
    v.add_argument("--out", help="write the JSON report here instead of stdout")
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("flow", help="integrate EP scenarios and write a CSV trajectory")
    f.add_argument("config")
    f.add_argument("--out")
    f.set_defaults(func=cmd_flow)

    d = sub.add_parser("derive", help="compute actions or moments from JSON input")
    d.add_argument("what", choices=["actions", "moments"])
    d.add_argument("input")
    d.set_defaults(func=cmd_derive)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        return args.func(args)
    except Exception as e:  # noqa: BLE001 - contract maps any crash to exit 3
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
