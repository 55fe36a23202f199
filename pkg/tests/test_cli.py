"""Command-line front end: scenarios, config files, exit codes and reports."""

import csv
import io
import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

from gyrokit import cli, poinsot
from gyrokit.errors import SingularityError

LAGRANGE = ["lagrange", "--A", "2", "--C", "1", "--M", "1", "--zg", "0.1", "--theta0", "0.8",
            "--theta-dot0", "0.5", "--psi-dot0", "1.0", "--r0", "8", "--samples", "11"]


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def parse_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], np.array(rows[1:], float)


def test_lagrange_csv(capsys):
    code, out, _ = run(LAGRANGE, capsys)
    assert code == 0
    header, data = parse_csv(out)
    assert header[:4] == ["t [s]", "theta [rad]", "psi [rad]", "phi [rad]"]
    assert data.shape == (11, len(cli.LAGRANGE_COLUMNS))
    assert_allclose(data[0, 1], 0.8, atol=1e-12)


def test_values_round_trip_at_17_digits(capsys):
    _, out, _ = run(LAGRANGE, capsys)
    field = out.splitlines()[3].split(",")[1]
    assert float("%.17g" % float(field)) == float(field)


def test_herpolhode_trace(capsys):
    code, out, _ = run(["herpolhode", "--A", "3", "--B", "2", "--C", "1", "--D", "1.5",
                        "--samples", "9", "--legs", "1"], capsys)
    assert code == 0
    header, data = parse_csv(out)
    assert header[0].startswith("rho") and header[1] == "chi [rad]"
    assert_allclose(data[[0, -1], 0], [np.sqrt(1 / 12), np.sqrt(1 / 6)], rtol=1e-14)


def test_poinsot_json(capsys):
    code, out, _ = run(["poinsot", "--A", "1", "--B", "2", "--C", "3", "--p0", "1.2",
                        "--r0", "0.9", "--samples", "5", "--format", "json"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["columns"] == list(cli.POINSOT_COLUMNS)
    assert len(doc["records"]) == 5


def test_viscous(capsys):
    code, out, _ = run(["viscous", "--A", "2", "--C", "1", "--mu", "0.3", "--p0", "0.8",
                        "--q0", "-0.5", "--r0", "3", "--gamma0", "0.6,0,0.8", "--samples", "6",
                        "--t-end", "5"], capsys)
    assert code == 0
    _, data = parse_csv(out)
    assert_allclose(data[:, 0], np.linspace(0, 5, 6))
    assert_allclose(data[0, 1:4], [0.8, -0.5, 3.0], atol=1e-14)


def test_invalid_parameters_exit_2(capsys):
    code, _, err = run(["herpolhode", "--A", "3", "--B", "2", "--C", "1", "--D", "2.5"],
                       capsys)
    assert code == 2 and "sign pattern" in err


def test_missing_option_exit_2(capsys):
    code, _, err = run(["poinsot", "--A", "1", "--B", "2"], capsys)
    assert code == 2 and err


def test_singularity_exit_3(capsys, monkeypatch):
    def boom(args):
        raise SingularityError("body_rates", "figure axis vertical", time=1.5)

    monkeypatch.setitem(cli._RUNNERS, "poinsot", boom)
    code, _, err = run(["poinsot", "--A", "1"], capsys)
    assert code == 3 and "body_rates" in err


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "top.cfg"
    cfg.write_text("# heavy top\nA = 2\nC=1\nM=1\nzg=0.1\ntheta0=0.8\ntheta-dot0=0.5\n"
                   "psi-dot0=1.0\nr0=8\nsamples=11\n", encoding="utf-8")
    _, from_file, _ = run(["lagrange", "--config", str(cfg)], capsys)
    _, from_flags, _ = run(LAGRANGE, capsys)
    assert from_file == from_flags
    _, overridden, _ = run(["lagrange", "--config", str(cfg), "--theta0", "0.9"], capsys)
    assert_allclose(parse_csv(overridden)[1][0, 1], 0.9, atol=1e-12)


def test_unknown_config_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("A=3\nwobble=1\n", encoding="utf-8")
    code, _, err = run(["herpolhode", "--config", str(cfg)], capsys)
    assert code == 2 and "wobble" in err


def test_output_file(tmp_path, capsys):
    path = tmp_path / "out.csv"
    code, out, _ = run(LAGRANGE + ["-o", str(path)], capsys)
    assert code == 0 and out == ""
    assert path.read_text(encoding="utf-8").startswith("t [s]")


def test_scenario_output_is_deterministic(capsys):
    assert run(LAGRANGE, capsys)[1] == run(LAGRANGE, capsys)[1]


class TestVerify:
    ARGS = ["verify", "--case", "herpolhode", "--n", "2"]

    def test_text_report(self, capsys):
        code, out, _ = run(self.ARGS + ["--seed", "3"], capsys)
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "seed 3" and lines[-1] == "overall PASS"
        assert all(line.startswith(("PASS", "INFO")) for line in lines[1:-1])

    def test_json_schema(self, capsys):
        _, out, _ = run(self.ARGS + ["--json"], capsys)
        doc = json.loads(out)
        assert set(doc) == {"seed", "passed", "checks"}
        assert set(doc["checks"][0]) == {"case", "name", "max_error", "tolerance", "draws",
                                         "informational", "note", "passed"}

    def test_seed_from_environment(self, capsys, monkeypatch):
        monkeypatch.setenv("GYROKIT_SEED", "5")
        _, env_out, _ = run(self.ARGS, capsys)
        monkeypatch.delenv("GYROKIT_SEED")
        _, flag_out, _ = run(self.ARGS + ["--seed", "5"], capsys)
        assert env_out == flag_out and env_out.startswith("seed 5")

    def test_bad_environment_seed(self, capsys, monkeypatch):
        monkeypatch.setenv("GYROKIT_SEED", "abc")
        assert run(self.ARGS, capsys)[0] == 2

    def test_tolerance_override_fails_run(self, capsys):
        code, out, _ = run(self.ARGS + ["--tol", "elliptic vs hypergeometric=1e-30"], capsys)
        assert code == 1
        assert "FAIL  herpolhode  elliptic vs hypergeometric" in out

    def test_injected_error_is_caught(self, capsys, monkeypatch):
        original = poinsot.precession_free

        def wrong(tau, d, cfg):
            return original(tau, d, cfg) + 1e-4 * np.asarray(tau)

        monkeypatch.setattr(poinsot, "precession_free", wrong)
        code, out, _ = run(["verify", "--case", "poinsot", "--n", "2"], capsys)
        assert code == 1
        failing = [line for line in out.splitlines() if line.startswith("FAIL")]
        assert len(failing) == 1 and "psi vs oracle" in failing[0]

    def test_bad_tolerance_syntax(self, capsys):
        assert run(self.ARGS + ["--tol", "oops"], capsys)[0] == 2
