import json
import math
import subprocess
import sys

import pytest

from dqwalk.cli import main

PHI2 = json.dumps([1 / math.sqrt(2), [0, 1 / math.sqrt(2)]])


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(csv_text):
    lines = csv_text.strip().splitlines()
    return lines[0], [line.split(",") for line in lines[1:]]


def test_simulate_coin_x(capsys):
    code, out, _ = run(capsys, "simulate", "--model", "lqw2", "--coin", "x", "--initial", PHI2, "-n", "100")
    header, body = rows(out)
    assert code == 0 and header == "position,probability"
    probs = {int(x): float(p) for x, p in body}
    assert probs[0] == pytest.approx(1, abs=1e-12)
    assert sum(probs.values()) == pytest.approx(1, abs=1e-10)


def test_simulate_grover_ballistic(capsys):
    code, out, _ = run(capsys, "simulate", "--model", "grover-family", "--delta", "3pi/4", "--initial", "[1,0,0,0]", "-n", "2")
    probs = {int(x): float(p) for x, p in rows(out)[1]}
    assert probs[-2] == pytest.approx(0.5, abs=1e-12) and probs[0] == pytest.approx(0.5, abs=1e-12)


def test_simulate_zero_steps(capsys):
    code, out, _ = run(capsys, "simulate", "--model", "lqw2", "--coin", "hadamard", "--initial", "[1,0]", "-n", "0")
    assert out == "position,probability\n0,1\n"


def test_simulate_is_deterministic_and_writes_files(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"model": "dqw", "delta": "0.3pi", "initial": [[0.6, 0], [0, 0.8]], "steps": 40}))
    a, b, t = tmp_path / "a.csv", tmp_path / "b.csv", tmp_path / "t.csv"
    assert main(["simulate", "-c", str(cfg), "-o", str(a), "--trajectory", str(t)]) == 0
    assert main(["simulate", "-c", str(cfg), "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    total = sum(float(line.split(",")[1]) for line in a.read_text().splitlines()[1:])
    assert total == pytest.approx(1, abs=1e-10)
    steps = {line.split(",")[0] for line in t.read_text().splitlines()[1:]}
    assert steps == {str(i) for i in range(41)}


def test_limit_header_and_density(tmp_path, capsys):
    hdr = tmp_path / "h.json"
    code, out, _ = run(
        capsys, "limit", "--model", "grover-family", "--delta", "pi/2", "--initial", "[0.5,0.5,0.5,0.5]", "--header", str(hdr), "--samples", "11"
    )
    h = json.loads(hdr.read_text())
    assert code == 0 and h["A"] == pytest.approx(0.70711, abs=1e-5)
    header, body = rows(out)
    assert header == "x,density" and len(body) == 11
    assert all(abs(float(x)) < abs(h["p"]) for x, _ in body)
    code, out, err = run(capsys, "limit", "--model", "grover-family", "--delta", "pi/2", "--initial", "[0.5,-0.5,-0.5,0.5]")
    assert json.loads(err)["A"] == pytest.approx(0, abs=1e-14)


def test_limit_special_angle_redirects(capsys):
    code, _, err = run(capsys, "limit", "--model", "grover-family", "--delta", "pi/4", "--initial", "[1,0,0,0]")
    assert code == 1 and "exact" in err


def test_compare_pass_fail_and_mismatch(capsys):
    args = ["compare", "--model", "grover-family", "--delta", "0.5pi", "--initial", "[0.5,0.5,0.5,0.5]", "-n", "400"]
    code, out, _ = run(capsys, *args, "--max-l1", "0.05", "--max-mass-error", "0.03")
    rep = json.loads(out)
    assert code == 0 and rep["passed"] and rep["l1"] <= 0.05
    code, out, _ = run(capsys, *args, "--max-l1", "1e-9")
    assert code == 2 and not json.loads(out)["passed"]
    code, _, err = run(capsys, "compare", "--model", "dqw", "--pair", '{"m_r": "identity", "m_i": "x"}', "--initial", "[1,0]", "-n", "200")
    assert code == 1 and "no limit law" in err


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "--grover-family", "0.75pi")
    rep = json.loads(out)
    assert rep["case"] != "none" and rep["pm1_on_grid"] and rep["consistent"]
    rep = json.loads(run(capsys, "classify", "--random", "4")[1])
    assert rep["case"] == "none" and not rep["pm1_on_grid"]
    rep = json.loads(run(capsys, "classify", "--params", '{"delta": "pi/2", "alpha": 0, "beta": 1, "e": 0.6, "f": 0.8}')[1])
    assert rep["case"] == "case1" and rep["consistent"]
    code, _, err = run(capsys, "classify", "--params", '{"delta": 0, "alpha": 1, "beta": 1, "e": 1, "f": 0}')
    assert code == 1


def test_check(capsys):
    rep = json.loads(run(capsys, "check", "--m-r", "identity", "--m-i", "x")[1])
    assert rep["is_isometry"]
    s = 1 / math.sqrt(2)
    ih = json.dumps([[[0, s], [0, s]], [[0, s], [0, -s]]])
    rep = json.loads(run(capsys, "check", "--m-r", "hadamard", "--m-i", ih)[1])
    assert rep["failed"] == ["product_real"]
    rep = json.loads(run(capsys, "check", "--m-r", "[[1,1],[0,1]]", "--m-i", "identity")[1])
    assert rep["failed"] == ["unitary_r"]
    code, _, err = run(capsys, "check", "--m-r", "[[1,1],[0,'x']]", "--m-i", "identity")
    assert code == 1


def test_exact(capsys):
    code, out, _ = run(capsys, "exact", "--delta=-pi/4", "-n", "3", "--initial", "[0,1,0,0]")
    lines = {int(r[0]): r for r in rows(out)[1]}
    assert float(lines[-1][-1]) == pytest.approx(0.5) and float(lines[3][-1]) == pytest.approx(0.5)


def test_sweep(tmp_path, capsys):
    cfg = tmp_path / "s.json"
    cfg.write_text(json.dumps({
        "command": "compare",
        "base": {"model": "grover-family", "initial": [0.5, 0.5, 0.5, 0.5], "steps": 200},
        "vary": {"delta": ["0.5pi", "-pi/6"]},
    }))
    code, out, _ = run(capsys, "sweep", "-c", str(cfg), "-j", "2")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 3 and lines[0].startswith("delta,")
    assert all(line.endswith("ok,") for line in lines[1:])
    cfg.write_text(json.dumps({"command": "limit", "base": {"model": "grover-family", "initial": [1, 0, 0, 0]}, "vary": {"delta": ["pi/4"]}}))
    code, out, _ = run(capsys, "sweep", "-c", str(cfg), "-j", "1")
    assert code == 2 and "error" in out


def test_usage_errors_exit_1():
    r = subprocess.run([sys.executable, "-m", "dqwalk", "simulate", "--bogus"], capture_output=True, text=True)
    assert r.returncode == 1
    r = subprocess.run([sys.executable, "-m", "dqwalk", "--version"], capture_output=True, text=True)
    assert r.returncode == 0 and "dqwalk" in r.stdout


def test_bad_config_reports_line(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text('{"model": "lqw2",\n "steps": }')
    code, _, err = run(capsys, "simulate", "-c", str(cfg))
    assert code == 1 and "c.json:2:" in err
