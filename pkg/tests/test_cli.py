import json
import subprocess
import sys

import pytest

from schouten_ep.cli import main

EPDIFF = {"scenario": "epdiff-two-mode", "dim": 1, "N": 1, "alpha": 1.0, "dt": 0.01, "t_end": 0.05, "bandwidth": 8}


def _write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj) if not isinstance(obj, str) else obj)
    return str(p)


def test_verify_pass(capsys):
    assert main(["verify", "jacobi", "--seed", "7", "--cases", "5"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["passed"] and report["exact_zero"] and report["suite"] == "jacobi"


def test_verify_mutation_fails(capsys):
    assert main(["verify", "gccl-hom", "--cases", "3", "--mutate"]) == 1


def test_verify_unknown_suite(capsys):
    assert main(["verify", "unknown-suite"]) == 2


def test_verify_out_file_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["verify", "dual-actions", "--seed", "4", "--cases", "3", "--out", str(a)]) == 0
    assert main(["verify", "dual-actions", "--seed", "4", "--cases", "3", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_internal_error(monkeypatch, capsys):
    import schouten_ep.cli as cli

    def boom(*args, **kwargs):
        raise RuntimeError("boom")

    monkeypatch.setattr(cli, "run_suite", boom)
    assert main(["verify", "jacobi"]) == 3


def test_flow_csv(tmp_path):
    cfg = _write(tmp_path, "ep.json", EPDIFF)
    out = tmp_path / "traj.csv"
    assert main(["flow", cfg, "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "t,energy,norm_0,norm_1,max_abs_coeff"
    rows = [list(map(float, line.split(","))) for line in lines[1:]]
    ts = [r[0] for r in rows]
    assert len(rows) == 6 and all(b > a for a, b in zip(ts, ts[1:]))
    e0 = rows[0][1]
    assert all(abs(r[1] - e0) / e0 < 1e-6 for r in rows)
    again = tmp_path / "again.csv"
    assert main(["flow", cfg, "--out", str(again)]) == 0
    assert again.read_bytes() == out.read_bytes()


def test_flow_multiple_scenarios(tmp_path, monkeypatch):
    monkeypatch.setenv("SCHOUTEN_EP_THREADS", "1")
    cfg = _write(tmp_path, "many.json", {"scenarios": [EPDIFF, dict(EPDIFF, alpha=0.5)]})
    out = tmp_path / "many.csv"
    assert main(["flow", cfg, "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("scenario,t,")
    assert {line.split(",")[0] for line in lines[1:]} == {"0:epdiff-two-mode", "1:epdiff-two-mode"}


def test_flow_explicit_initial(tmp_path):
    initial = {
        "dim": 1,
        "grades": {"1": [{"index": [0], "coeff": {"dim": 1, "terms": [{"freq": [1], "re": 0.5}, {"freq": [-1], "re": 0.5}]}}]},
    }
    cfg = _write(tmp_path, "c.json", dict(EPDIFF, scenario="custom", initial=initial))
    assert main(["flow", cfg, "--out", str(tmp_path / "c.csv")]) == 0


@pytest.mark.parametrize(
    "patch",
    [
        {"dt": 0},
        {"dt": -0.1},
        {"N": 0},
        {"dt": "fast"},
        {"scenario": "nothing-builtin"},
        {"bogus": 1},
    ],
)
def test_flow_bad_config(tmp_path, patch, capsys):
    cfg = _write(tmp_path, "bad.json", dict(EPDIFF, **patch))
    assert main(["flow", cfg]) == 2


def test_flow_unreadable_config(tmp_path):
    assert main(["flow", str(tmp_path / "missing.json")]) == 2
    assert main(["flow", _write(tmp_path, "x.json", "{not json")]) == 2
    assert main(["flow", _write(tmp_path, "e.json", {})]) == 2


def test_flow_blow_up(tmp_path, capsys):
    cfg = _write(tmp_path, "blow.json", dict(EPDIFF, dt=5.0, t_end=500.0))
    assert main(["flow", cfg]) == 4
    assert "last valid time" in capsys.readouterr().err


def test_derive_actions(tmp_path, capsys):
    obj = {
        "eta": {"dim": 1, "grades": {"2": [{"index": [0, 0], "coeff": {"dim": 1, "terms": [{"freq": [0], "re": "1"}]}}]}},
        "xi": {"dim": 1, "grades": {"0": [{"index": [], "coeff": {"dim": 1, "terms": [{"freq": [1], "re": "1"}]}}]}},
    }
    assert main(["derive", "actions", _write(tmp_path, "a.json", obj)]) == 0
    out = json.loads(capsys.readouterr().out)
    left = out["left"]["grades"]["1"][0]["coeff"]["terms"]
    assert left == [{"freq": [1], "re": "0", "im": "2"}]
    assert out["right"]["grades"] == {}


def test_derive_moments(tmp_path, capsys):
    form = {
        "dim": 1,
        "dq": [{"dim": 1, "weighted": True, "terms": [{"freq": [1], "pdeg": [0], "re": "3"}]}],
        "dp": [{"dim": 1, "weighted": True, "terms": []}],
    }
    assert main(["derive", "moments", _write(tmp_path, "m.json", {"one_form": form, "order": 4})]) == 0
    grades = json.loads(capsys.readouterr().out)["moments"]["grades"]
    assert set(grades) == {"1", "3"}
    assert grades["1"][0]["coeff"]["terms"] == [{"freq": [1], "re": "-3", "im": "0"}]


def test_derive_bad_input(tmp_path, capsys):
    assert main(["derive", "moments", _write(tmp_path, "e.json", {})]) == 2
    assert main(["derive", "actions", _write(tmp_path, "x.json", {"eta": {}})]) == 2
    assert main(["derive", "actions", str(tmp_path / "none.json")]) == 2


def test_console_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "schouten_ep.cli", "verify", "nope"], capture_output=True, text=True
    )
    assert proc.returncode == 2
