import csv
import json
import os

import numpy as np
import pytest
from click.testing import CliRunner

from lrkitaev.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def _read_csv(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def test_spectrum_row_count_and_manifest(runner, tmp_path):
    out = str(tmp_path / "spec")
    result = runner.invoke(
        main,
        ["spectrum", "--n", "24", "--epsilon", "-0.2", "--alpha", "3",
         "--theta-points", "11", "--out", out],
    )
    assert result.exit_code == 0, result.output
    rows = _read_csv(os.path.join(out, "spectrum.csv"))
    assert len(rows) == 11 * 24
    manifest = json.load(open(os.path.join(out, "manifest.json")))
    assert manifest["command"] == "spectrum"
    assert manifest["config"]["n"] == 24
    assert set(os.listdir(out)) == {"spectrum.csv", "manifest.json"}


def test_spectrum_gapless_window_and_long_range_gap_lift(runner, tmp_path):
    # short-range-like scan is gapless near theta/pi = 0.5; the strongly
    # long-range scan lifts the minimal normalized gap over most of theta
    minima = {}
    for alpha, tag in ((3.0, "a3"), (1.0 / 3.0, "a13")):
        out = str(tmp_path / tag)
        result = runner.invoke(
            main,
            ["spectrum", "--n", "120", "--epsilon", "-0.2", "--alpha", str(alpha),
             "--theta-points", "25", "--out", out],
        )
        assert result.exit_code == 0, result.output
        per_theta = {}
        for row in _read_csv(os.path.join(out, "spectrum.csv")):
            t = float(row["theta_over_pi"])
            e = float(row["energy_normalized"])
            per_theta[t] = min(per_theta.get(t, np.inf), e)
        minima[tag] = per_theta

    near_half = [v for t, v in minima["a3"].items() if abs(t - 0.5) < 0.1]
    assert min(near_half) < 1e-3

    thetas = sorted(minima["a3"])
    lifted = sum(minima["a13"][t] > minima["a3"][t] for t in thetas)
    assert lifted > len(thetas) / 2


def test_lanczos_outputs_and_seed_flags(runner, tmp_path):
    out = str(tmp_path / "lz")
    result = runner.invoke(
        main,
        ["lanczos", "--n", "30", "--alpha", "2", "--theta-over-pi", "0.4",
         "--epsilon", "-0.2", "--seed", "gamma1+gamma2", "--out", out],
    )
    assert result.exit_code == 0, result.output
    record = json.load(open(os.path.join(out, "lanczos_majorana.json")))
    assert record["seed"] == "gamma1+gamma2"
    assert record["n_stable"] == len(record["b"])
    rows = _read_csv(os.path.join(out, "lanczos_majorana.csv"))
    assert rows[0]["parity"] == "odd" and rows[1]["parity"] == "even"
    cross = json.load(open(os.path.join(out, "cross_check.json")))
    assert cross["mutual_stable_depth"] >= 1


def test_unknown_seed_exits_2(runner, tmp_path):
    result = runner.invoke(
        main,
        ["lanczos", "--n", "10", "--alpha", "1", "--theta", "1.0",
         "--epsilon", "0.0", "--seed", "tau3", "--out", str(tmp_path / "x")],
    )
    assert result.exit_code == 2
    assert "seed" in result.output


def test_theta_flags_are_exclusive(runner, tmp_path):
    result = runner.invoke(
        main,
        ["lanczos", "--n", "10", "--alpha", "1", "--theta", "1.0",
         "--theta-over-pi", "0.3", "--epsilon", "0.0", "--out", str(tmp_path / "x")],
    )
    assert result.exit_code == 2
    result = runner.invoke(
        main,
        ["lanczos", "--n", "10", "--alpha", "1", "--epsilon", "0.0",
         "--out", str(tmp_path / "x")],
    )
    assert result.exit_code == 2


def test_diagnose_summary(runner, tmp_path):
    out = str(tmp_path / "dg")
    result = runner.invoke(
        main,
        ["diagnose", "--n", "40", "--alpha", "0.6666667", "--theta-over-pi", "0.4",
         "--epsilon", "-0.2", "--out", out],
    )
    assert result.exit_code == 0, result.output
    summary = json.load(open(os.path.join(out, "summary.json")))
    assert summary["krylov_phase"] in ("edge", "bulk")
    rows = _read_csv(os.path.join(out, "staggering.csv"))
    assert list(rows[0]) == ["n", "staggering", "sign"]
    assert int(rows[0]["n"]) == 2


def test_oracle_json_and_cap(runner):
    result = runner.invoke(main, ["oracle", "--n", "2", "--json"])
    assert result.exit_code == 0, result.output
    report = json.loads(result.output)
    assert report["failed_checks"] == []
    assert report["closure_residual"] <= 1e-12

    result = runner.invoke(main, ["oracle", "--n", "5"])
    assert result.exit_code == 2


def _sweep_args(out, workers="1", extra=()):
    return [
        "sweep", "--n", "20", "--epsilon", "-0.2", "--alpha-points", "3",
        "--theta-points", "3", "--workers", workers, "--out", out, *extra,
    ]


def _csv_bytes(path):
    with open(path, "rb") as fh:
        return fh.read()


def test_sweep_end_to_end_and_determinism(runner, tmp_path):
    out1 = str(tmp_path / "w1")
    out2 = str(tmp_path / "w2")
    result = runner.invoke(main, _sweep_args(out1, workers="1"))
    assert result.exit_code == 0, result.output
    result = runner.invoke(main, _sweep_args(out2, workers="2"))
    assert result.exit_code == 0, result.output
    body1 = _csv_bytes(os.path.join(out1, "phase_diagram.csv"))
    body2 = _csv_bytes(os.path.join(out2, "phase_diagram.csv"))
    assert body1 == body2

    manifest = json.load(open(os.path.join(out1, "manifest.json")))
    assert manifest["config"]["grid"]["n"] == 20
    rows = _read_csv(os.path.join(out1, "phase_diagram.csv"))
    assert len(rows) == 9
    assert set(rows[0]) == {
        "alpha", "theta", "n_cross", "krylov_phase", "gap_phase_w005",
        "gap_phase_w010", "gap_phase_w050", "delta_edge_w010",
        "delta_bulk_w010", "n_stable", "termination",
    }


def test_sweep_interrupt_and_resume_identical(runner, tmp_path):
    reference = str(tmp_path / "ref")
    result = runner.invoke(main, _sweep_args(reference))
    assert result.exit_code == 0, result.output

    # simulate an interrupted run: keep only the first 4 checkpoint records
    interrupted = str(tmp_path / "cont")
    os.makedirs(interrupted)
    with open(os.path.join(reference, "checkpoint.ndjson")) as fh:
        lines = fh.readlines()
    with open(os.path.join(interrupted, "checkpoint.ndjson"), "w") as fh:
        fh.writelines(lines[:4])

    result = runner.invoke(main, _sweep_args(interrupted, extra=("--resume",)))
    assert result.exit_code == 0, result.output
    assert _csv_bytes(os.path.join(interrupted, "phase_diagram.csv")) == _csv_bytes(
        os.path.join(reference, "phase_diagram.csv")
    )


def test_config_file_defaults_and_flag_precedence(runner, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("n = 24\nepsilon = -0.2\nalpha = 3\ntheta_points = 5\n")
    out = str(tmp_path / "out")
    result = runner.invoke(
        main,
        ["--config", str(cfg), "spectrum", "--theta-points", "3", "--out", out],
    )
    assert result.exit_code == 0, result.output
    rows = _read_csv(os.path.join(out, "spectrum.csv"))
    # n from the config file, theta_points overridden by the flag
    assert len(rows) == 3 * 24


def test_numerical_failure_exits_1(runner, tmp_path, monkeypatch):
    import lrkitaev.service.app as service_app

    def boom(*args, **kwargs):
        raise RuntimeError("synthetic eigensolver failure")

    monkeypatch.setattr(service_app, "spectrum_scan", boom)
    result = runner.invoke(
        main,
        ["spectrum", "--n", "12", "--epsilon", "0.0", "--alpha", "1",
         "--theta-points", "3", "--out", str(tmp_path / "x")],
    )
    assert result.exit_code == 1


def test_output_reproducible_from_manifest_alone(runner, tmp_path):
    out1 = str(tmp_path / "first")
    result = runner.invoke(
        main,
        ["spectrum", "--n", "18", "--epsilon", "-0.2", "--alpha", "1.5",
         "--theta-points", "5", "--out", out1],
    )
    assert result.exit_code == 0, result.output

    # rebuild the command line from the manifest only
    config = json.load(open(os.path.join(out1, "manifest.json")))["config"]
    out2 = str(tmp_path / "second")
    args = ["spectrum", "--out", out2]
    for key, value in config.items():
        if value is not None:
            args += [f"--{key.replace('_', '-')}", str(value)]
    result = runner.invoke(main, args)
    assert result.exit_code == 0, result.output
    assert _csv_bytes(os.path.join(out1, "spectrum.csv")) == _csv_bytes(
        os.path.join(out2, "spectrum.csv")
    )


def test_commands_write_only_into_out(runner, tmp_path, monkeypatch):
    workdir = tmp_path / "cwd"
    workdir.mkdir()
    monkeypatch.chdir(workdir)
    out = str(tmp_path / "only")
    result = runner.invoke(
        main,
        ["diagnose", "--n", "20", "--alpha", "1", "--theta-over-pi", "0.4",
         "--epsilon", "-0.2", "--out", out],
    )
    assert result.exit_code == 0, result.output
    assert os.listdir(workdir) == []
