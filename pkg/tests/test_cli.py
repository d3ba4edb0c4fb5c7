import json
import subprocess
import sys

import pytest

from conftest import DATA
from stokes_skeleton.cli import main, suite

CYCLE4 = str(DATA / "complexes" / "cycle4.json")
Z2 = str(DATA / "groups" / "z2.json")


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, json.loads(out.out) if out.out.strip() else None, out.err


def _strip_time(doc):
    if isinstance(doc, dict):
        return {k: _strip_time(v) for k, v in doc.items() if k != "wall_clock_s"}
    if isinstance(doc, list):
        return [_strip_time(x) for x in doc]
    return doc


def test_cocycles_report(capsys):
    code, doc, _ = _run(capsys, "cocycles", "--complex", CYCLE4, "--group", Z2, "--orbits")
    assert code == 0
    assert doc["results"]["cocycle_count"] == 16
    assert doc["results"]["orbit_count"] == 2
    assert doc["input_digests"]["group"].startswith("sha256:")
    assert doc["version"]


def test_reports_are_deterministic(capsys):
    argv = ("cocycles", "--complex", CYCLE4, "--group", Z2, "--orbits")
    _, first, _ = _run(capsys, *argv)
    _, second, _ = _run(capsys, *argv)
    assert _strip_time(first) == _strip_time(second)


def test_out_flag_writes_file(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, doc, _ = _run(capsys, "glp-check", "--trials", "20", "--out", str(out))
    assert code == 0 and doc is None
    assert json.loads(out.read_text())["results"]["pass"] is True


def test_unknown_command_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2


def test_parse_error_reports_position(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "cyclic": 2,\n}\n')
    code, doc, err = _run(capsys, "cocycles", "--complex", CYCLE4, "--group", str(bad))
    assert code == 3
    assert doc["error"]["type"] == "ParseError"
    assert "3" in doc["error"]["message"] and str(bad) in doc["error"]["message"]


def test_cap_exit_code(capsys, monkeypatch):
    monkeypatch.setenv("STOKES_CAP", "3")
    code, doc, _ = _run(capsys, "cocycles", "--complex", CYCLE4, "--group", Z2)
    assert code == 4
    assert doc["error"]["type"] == "CapExceededError"
    # the flag wins over the environment
    code, _, _ = _run(capsys, "cocycles", "--complex", CYCLE4, "--group", Z2, "--cap", "1000")
    assert code == 0


def test_bad_cap_environment(capsys, monkeypatch):
    monkeypatch.setenv("STOKES_CAP", "lots")
    code, _, err = _run(capsys, "cocycles", "--complex", CYCLE4, "--group", Z2)
    assert code == 6 and "STOKES_CAP" in err


def test_tolerance_failure_exit_code(capsys):
    code, doc, _ = _run(capsys, "glp-check", "--k", "3", "--trials", "50", "--tol", "1e-300")
    assert code == 5
    assert not doc["pass"]


def test_invalid_input_exit_code(capsys, tmp_path):
    bad = tmp_path / "g.json"
    bad.write_text(json.dumps({"table": [[0, 1], [1, 1]]}))
    code, doc, _ = _run(capsys, "cocycles", "--complex", CYCLE4, "--group", str(bad))
    assert code == 6
    assert doc["error"]["exit_code"] == 6


def test_flag_failure_exit_code(capsys, tmp_path):
    # a twisted label action makes the descent comparison unequal
    action = {"type": "cycle_rotation", "order": 2, "label_action": [[0, 1, 2], [0, 2, 1]]}
    path = tmp_path / "neg.json"
    path.write_text(json.dumps(action))
    code, doc, _ = _run(capsys, "descent", "--complex", str(DATA / "complexes" / "cycle4.json"),
                        "--group", str(DATA / "groups" / "z3.json"), "--action", str(path))
    assert code == 1
    assert doc["pass"] is False
    assert doc["results"]["label_action_trivial"] is False


def test_malformed_document_is_invalid(capsys, tmp_path):
    path = tmp_path / "a.json"
    path.write_text(json.dumps({"order": 2}))
    code, doc, _ = _run(capsys, "descent", "--complex", CYCLE4, "--group", Z2, "--action", str(path))
    assert code == 6
    assert "malformed" in doc["error"]["message"]


def test_suite_reports_expect_mismatch(tmp_path):
    manifest = {"experiments": [
        {"name": "ok", "command": "cocycles", "inputs": {"complex": CYCLE4, "group": Z2},
         "expect": {"cocycle_count": 16}},
        {"name": "wrong", "command": "cocycles", "inputs": {"complex": CYCLE4, "group": Z2},
         "expect": {"cocycle_count": 17}},
        {"name": "capped", "command": "cocycles", "inputs": {"complex": CYCLE4, "group": Z2}, "cap": 2},
    ]}
    path = tmp_path / "m.json"
    path.write_text(json.dumps(manifest))
    doc = suite(str(path), cap=10 ** 6)
    ok, wrong, capped = doc["experiments"]
    assert ok["pass"] and ok["exit_code"] == 0
    assert not wrong["pass"] and wrong["exit_code"] == 1
    assert wrong["expect_mismatch"]["cocycle_count"] == {"expected": 17, "got": 16}
    assert not capped["pass"] and capped["exit_code"] == 4
    assert (doc["total"], doc["passed"], doc["pass"]) == (3, 1, False)


def test_empty_manifest_passes(capsys):
    code, doc, _ = _run(capsys, "suite", "--manifest", str(DATA / "acceptance" / "empty.json"))
    assert code == 0
    assert doc == {"experiments": [], "total": 0, "passed": 0, "pass": True}


def test_unknown_command_in_manifest(capsys, tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"experiments": [{"command": "nope"}]}))
    code, _, _ = _run(capsys, "suite", "--manifest", str(path))
    assert code == 2


def test_parallel_suite_matches_serial():
    manifest = str(DATA / "acceptance" / "criterion2_subdivision.json")
    serial = suite(manifest, cap=10 ** 7)
    parallel = suite(manifest, cap=10 ** 7, jobs=3)
    assert _strip_time(serial) == _strip_time(parallel)


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "stokes_skeleton.cli", "unipotent-check", "--lengths", "2",
                           "--primes", "2"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["pass"] is True
