import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from convrec import cli
from convrec.cli import execute, main, parse, parse_func, parse_psi, to_json


def run(capsys, args):
    status = main(args)
    return status, capsys.readouterr().out


def test_parse_examples():
    cmd = parse(["bound", "--kernel", "poisson:q=0.5", "--kernel", "poisson:q=0.5", "--s", "1"])
    assert cmd.verb == "bound" and cmd.n == 2 and cmd.s == 1 and cmd.grid == 16384
    cmd = parse(["certify", "--kernel", "poisson:q=0.5", "--s", "2", "--trials", "200",
                 "--seed", "1"])
    assert cmd.verb == "certify" and cmd.trials == 200 and cmd.seed == 1


@pytest.mark.parametrize("args", [
    ["bound"],
    ["bound", "--kernel", "poisson:q=0.5", "--bogus"],
    ["bound", "--kernel", "cauchy:q=0.5"],
    ["bound", "--kernel", "poisson:q=0.5", "--grid", "1000"],
    ["bound", "--kernel", "poisson:q=0.5", "--s", "0"],
    ["recover", "--kernel", "poisson:q=0.5", "--psi", "constant", "--psi", "constant"],
    ["convolve"],
    ["frobnicate"],
])
def test_usage_errors_exit_2(args):
    with pytest.raises(SystemExit) as info:
        parse(args)
    assert info.value.code == 2


def test_parse_psi_and_func():
    spec = parse_psi("box:center=0,width=0.01")
    assert spec.kind == "box" and spec.width == 0.01
    assert parse_psi("random_trig:order=5,seed=7").order == 5
    p = parse_func("trig:a0=2,a1=1,b3=0.5")
    assert p.order == 3 and p.a0 == 2 and p.b[2] == 0.5
    with pytest.raises(ValueError):
        parse_func("trig:c1=1")


def test_bound_text(capsys):
    status, out = run(capsys, ["bound", "--kernel", "poisson:q=0.5", "--s", "1"])
    assert status == 0
    values = dict(line.split(" = ", 1) for line in out.splitlines() if line.startswith(("sigma", "bound")))
    assert float(values["bound"]) == pytest.approx(8 * np.arctan(0.5), abs=1e-9)
    assert float(values["sigma"]) == pytest.approx(np.pi / 2, abs=1e-9)


def test_recover_constant_psi(capsys):
    status, out = run(capsys, ["recover", "--kernel", "poisson:q=0.5", "--psi", "constant",
                               "--format", "json"])
    assert status == 0
    data = json.loads(out)
    assert data["trials"][0]["ratio"] == pytest.approx(2 * np.pi * 0.4 / (8 * np.arctan(0.5)))


def test_certify_perturbed_exits_1(capsys):
    status, out = run(capsys, ["certify", "--kernel", "poisson:q=0.5", "--trials", "40",
                               "--perturb-alpha", "0.1", "--format", "json"])
    assert status == 1
    assert json.loads(out)["violations"] > 0


def test_cvd_check_cli(capsys):
    status, out = run(capsys, ["cvd-check", "--kernel", "poisson:q=0.5", "--trials", "100"])
    assert status == 0 and "100/100 pass" in out


def test_convolve_cli(capsys):
    status, out = run(capsys, ["convolve", "--func", "trig:a1=1", "--func", "trig:a1=1",
                               "--order", "2", "--format", "csv"])
    assert status == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert float(rows[1]["a"]) == pytest.approx(np.pi)
    assert float(rows[0]["a"]) == 0 and float(rows[2]["a"]) == 0


def test_inconsistent_interpolation_exits_1(capsys, monkeypatch):
    from convrec.errors import InconsistentInterpolationError

    def boom(*args, **kwargs):
        raise InconsistentInterpolationError("forced", residual=1.0, tolerance=1e-7)

    monkeypatch.setattr(cli, "method_report", boom)
    assert main(["bound", "--kernel", "poisson:q=0.5"]) == 1


def test_json_schema_and_round_trip(capsys):
    status, out = run(capsys, ["certify", "--kernel", "poisson:q=0.5", "--kernel", "gauss:tau=0.2",
                               "--s", "2", "--trials", "5", "--seed", "3", "--format", "json",
                               "--grid", "4096"])
    assert status == 0
    data = json.loads(out)
    assert list(data) == ["kernels", "n", "s", "grid", "sigma", "bound", "alpha", "trials",
                          "max_ratio", "violations"]
    assert [a["j"] for a in data["alpha"]] == [-1, 0, 1]
    assert set(data["trials"][0]) == {"seed", "residual", "ratio"}
    assert to_json(data) == out


def test_formats_agree(capsys, tmp_path):
    base = ["certify", "--kernel", "poisson:q=0.5", "--s", "2", "--trials", "6", "--seed", "9",
            "--grid", "4096"]
    outputs = {}
    for fmt in ("text", "json", "csv"):
        path = tmp_path / f"out.{fmt}"
        assert main(base + ["--format", fmt, "--output", str(path)]) == 0
        outputs[fmt] = path.read_text()
    data = json.loads(outputs["json"])
    rows = list(csv.DictReader(io.StringIO(outputs["csv"])))
    assert len(rows) == len(data["trials"])
    for row, trial in zip(rows, data["trials"]):
        assert int(row["seed"]) == trial["seed"]
        assert float(row["residual"]) == trial["residual"]
        assert float(row["ratio"]) == trial["ratio"]
        assert float(row["bound"]) == data["bound"]
    text = dict(line.split(" = ", 1) for line in outputs["text"].splitlines()
                if " = " in line and "  " not in line)
    assert float(text["bound"]) == data["bound"]
    assert float(text["sigma"]) == data["sigma"]
    assert float(text["max_ratio"]) == data["max_ratio"]


def test_threads_do_not_change_output(tmp_path):
    base = ["certify", "--kernel", "poisson:q=0.5", "--kernel", "poisson:q=0.5", "--trials", "16",
            "--seed", "4", "--format", "json", "--grid", "4096"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(base + ["--threads", "1", "--output", str(a)]) == 0
    assert main(base + ["--threads", "8", "--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "convrec", "bound", "--kernel",
                          "bernoulli:r=1", "--s", "2"], capture_output=True, text=True)
    assert out.returncode == 0
    assert "bound = 2.46740110027" in out.stdout
