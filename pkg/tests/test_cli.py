"""End-to-end CLI tests via subprocess: exit codes, artifacts, demos."""

import json
import subprocess
import sys

import pytest

SIERPINSKI = {"n": 2, "basis": [[1]], "relation": []}
CHAIN3 = {"n": 3, "basis": [[0], [1], [2]], "relation": [[0, 1], [1, 2]]}


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "ordtop.cli", *args],
        capture_output=True, text=True, timeout=300,
    )


def write_json(path, data):
    path.write_text(json.dumps(data))
    return str(path)


def test_check_finite_flags_non_closed_graph(tmp_path):
    path = write_json(tmp_path / "s.json", SIERPINSKI)
    proc = run_cli("check-finite", path, "--json")
    assert proc.returncode == 1
    report = json.loads(proc.stdout)
    by_name = {c["name"]: c for c in report["checks"]}
    assert by_name["graph_is_closed"]["passed"] is False
    assert tuple(by_name["graph_is_closed"]["witness"]) == (0, 1)


def test_check_finite_passes_discrete_chain(tmp_path):
    path = write_json(tmp_path / "c.json", CHAIN3)
    proc = run_cli("check-finite", path)
    assert proc.returncode == 0
    assert "FAIL" not in proc.stdout


def test_check_finite_rejects_malformed_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"n": 2, "basis": [[1]')
    proc = run_cli("check-finite", str(path))
    assert proc.returncode == 2
    assert "line" in proc.stderr and "column" in proc.stderr


def test_compactify_writes_build_directory(tmp_path):
    out = tmp_path / "build"
    proc = run_cli("compactify", "--space", "half-open-interval",
                   "--resolution", "128", "--out", str(out))
    assert proc.returncode == 0, proc.stdout + proc.stderr
    for name in ("vertices.csv", "preorder.dot", "report.json"):
        assert (out / name).exists(), name
    payload = json.loads((out / "report.json").read_text())
    assert payload["counts"]["remainder"] == 1
    assert payload["complete"] is True


def test_compactify_flags_divergent_family(tmp_path):
    out = tmp_path / "build"
    proc = run_cli("compactify", "--space", "half-open-interval",
                   "--family", "id,pow64", "--out", str(out))
    assert proc.returncode == 1
    payload = json.loads((out / "report.json").read_text())
    assert payload["complete"] is False


def test_compactify_usage_errors(tmp_path):
    out = str(tmp_path / "x")
    assert run_cli("compactify", "--space", "half-open-interval",
                   "--resolution", "4", "--out", out).returncode == 2
    assert run_cli("compactify", "--space", "half-open-interval",
                   "--tail-depth", "2", "--out", out).returncode == 2
    assert run_cli("compactify", "--space", "half-open-interval",
                   "--eps-q", "0", "--out", out).returncode == 2
    assert run_cli("compactify", "--space", "no-such-space",
                   "--out", out).returncode == 2
    assert run_cli("compactify", "--space", "half-open-interval",
                   "--family", "id,nope", "--out", out).returncode == 2


def test_report_json_is_byte_identical_across_runs(tmp_path):
    args = ("compactify", "--space", "real-line-mirror",
            "--resolution", "128")
    assert run_cli(*args, "--out", str(tmp_path / "a")).returncode == 0
    assert run_cli(*args, "--out", str(tmp_path / "b")).returncode == 0
    a = (tmp_path / "a" / "report.json").read_bytes()
    b = (tmp_path / "b" / "report.json").read_bytes()
    assert a == b


def test_dominate_self_is_identity(tmp_path):
    out = tmp_path / "build"
    assert run_cli("compactify", "--space", "half-open-interval",
                   "--resolution", "128",
                   "--out", str(out)).returncode == 0
    proc = run_cli("dominate", str(out), str(out))
    assert proc.returncode == 0
    assert "dominates: PASS" in proc.stdout


def test_dominate_nested_families(tmp_path):
    big, small = tmp_path / "big", tmp_path / "small"
    run_cli("compactify", "--space", "half-open-interval",
            "--family", "id,sq", "--resolution", "128", "--out", str(big))
    run_cli("compactify", "--space", "half-open-interval",
            "--family", "id", "--resolution", "128", "--out", str(small))
    proc = run_cli("dominate", str(big), str(small))
    assert proc.returncode == 0, proc.stdout
    assert "remainder_to_remainder: PASS" in proc.stdout


def test_dominate_rejects_different_spaces(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    run_cli("compactify", "--space", "half-open-interval",
            "--resolution", "128", "--out", str(a))
    run_cli("compactify", "--space", "real-line-mirror",
            "--resolution", "128", "--out", str(b))
    proc = run_cli("dominate", str(a), str(b))
    assert proc.returncode == 2
    assert "different spaces" in proc.stderr


def test_dominate_needs_valid_build_dirs(tmp_path):
    proc = run_cli("dominate", str(tmp_path / "nope"), str(tmp_path / "nada"))
    assert proc.returncode == 2


@pytest.mark.parametrize("name", ["no-smallest", "nachbin-diagram",
                                  "one-point-suite", "misner"])
def test_demos_pass(name):
    proc = run_cli("demo", name)
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert "FAIL" not in proc.stdout
    assert "PASS" in proc.stdout


def test_demo_prints_the_no_smallest_story():
    proc = run_cli("demo", "no-smallest")
    assert "C-comp dominates Cminus-comp: PASS" in proc.stdout
    assert "C-comp dominates Cplus-comp: PASS" in proc.stdout
    assert "mutually non-dominating: PASS" in proc.stdout


def test_unknown_demo_is_usage_error():
    assert run_cli("demo", "wat").returncode == 2
