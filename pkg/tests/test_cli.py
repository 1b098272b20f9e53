from __future__ import annotations

import csv
import json

import pytest

from screening_contracts.cli import (
    EXIT_CONFIG,
    EXIT_NUMERIC,
    EXIT_OK,
    EXIT_VERIFY,
    SOLVE_COLUMNS,
    SWEEP_COLUMNS,
    fmt,
    main,
    sweep_values,
)


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def write_config(tmp_path, data, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data, indent=2))
    return str(path)


def test_solve_three_point(tmp_path, capsys):
    out = tmp_path / "solve.csv"
    code = main(["solve", "--preset", "paper-sec4", "--family", "threshold,linear", "--out", str(out)])
    assert code == EXIT_OK
    text = capsys.readouterr().out
    assert "threshold" in text and "linear" in text
    rows = read_rows(out)
    assert tuple(rows[0]) == SOLVE_COLUMNS
    by = {r["family"]: r for r in rows}
    assert float(by["threshold"]["net"]) == pytest.approx(1.1, abs=1e-9)
    assert float(by["threshold"]["alpha_or_bonus"]) == pytest.approx(1 / 6)
    assert float(by["linear"]["gamma_star"]) == pytest.approx(0.75, abs=1e-6)


def test_solve_high_cost_is_zero(tmp_path, capsys):
    out = tmp_path / "solve.csv"
    assert main(["solve", "--preset", "paper-sec4", "--k", "0.25", "--out", str(out)]) == EXIT_OK
    assert "zero" in capsys.readouterr().out
    for row in read_rows(out):
        assert float(row["net"]) == pytest.approx(1.0)


def test_solve_five_point_fixed_accuracy(tmp_path, capsys):
    out = tmp_path / "solve.csv"
    code = main(["solve", "--preset", "paper-b2", "--family", "general", "--gamma", "0.75", "--out", str(out)])
    assert code == EXIT_OK
    assert "low@0.5 high@1.5" in capsys.readouterr().out


def test_threshold_family_rejected_without_mlrp(capsys):
    assert main(["solve", "--preset", "paper-b2", "--family", "threshold"]) == EXIT_CONFIG
    assert "MLRP" in capsys.readouterr().err


def test_config_file_and_round_trip(tmp_path):
    cfg = write_config(tmp_path, {
        "schema_version": 1,
        "environment": {"prior_high": 0.4, "support": [0, 1, 2.5], "pmf_low": [0.5, 0.3, 0.2], "pmf_high": [0.1, 0.3, 0.6]},
        "cost": {"family": "power", "coefficient": 0.08, "exponent": 3},
        "families": ["general", "linear"],
    })
    out = tmp_path / "a.csv"
    assert main(["solve", "--config", cfg, "--out", str(out)]) == EXIT_OK
    with open(out) as fh:
        lines = fh.read().splitlines()
    for line in lines[1:]:
        fields = line.split(",")
        for text in fields[1:]:
            assert fmt(float(text)) == text  # parses back to the identical float


def test_determinism(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["sweep", "--preset", "paper-sec4", "--k-range", "0.02:0.1:0.04"]
    assert main(args + ["--out", str(a)]) == EXIT_OK
    assert main(args + ["--out", str(b), "--workers", "2"]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_sweep_columns_and_order(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["sweep", "--preset", "paper-sec4", "--k-range", "0.05:0.15:0.05", "--out", str(out)]) == EXIT_OK
    rows = read_rows(out)
    assert tuple(rows[0]) == SWEEP_COLUMNS
    assert [(r["k"], r["family"]) for r in rows] == [
        ("0.05", "threshold"), ("0.05", "linear"),
        ("0.1", "threshold"), ("0.1", "linear"),
        ("0.15", "threshold"), ("0.15", "linear"),
    ]


def test_sweep_values():
    assert sweep_values(0.01, 0.24, 0.01)[-1] == 0.24
    assert len(sweep_values(0.01, 0.24, 0.01)) == 24
    assert sweep_values(1 / 15, 1 / 15, 0.1) == [round(1 / 15, 12)]


def test_empty_sweep_is_config_error(capsys):
    assert main(["sweep", "--preset", "paper-sec4", "--k-range", "0.3:0.1:0.01"]) == EXIT_CONFIG
    assert "empty" in capsys.readouterr().err


def test_unknown_key_rejected(tmp_path, capsys):
    cfg = write_config(tmp_path, {"schema_version": 1, "colour": "blue"})
    assert main(["solve", "--config", cfg]) == EXIT_CONFIG
    assert "colour" in capsys.readouterr().err


def test_bad_field_names_path(tmp_path, capsys):
    cfg = write_config(tmp_path, {"schema_version": 1, "cost": {"coefficient": "big"}})
    assert main(["solve", "--config", cfg]) == EXIT_CONFIG
    assert "cost.coefficient" in capsys.readouterr().err


def test_json_error_has_line(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "schema_version": 1,\n  "grid": ,\n}\n')
    assert main(["solve", "--config", str(path)]) == EXIT_CONFIG
    assert "broken.json:3:" in capsys.readouterr().err


def test_schema_version_required(tmp_path, capsys):
    cfg = write_config(tmp_path, {"schema_version": 2})
    assert main(["solve", "--config", cfg]) == EXIT_CONFIG


def test_invalid_environment_is_config_error(tmp_path, capsys):
    cfg = write_config(tmp_path, {
        "schema_version": 1,
        "environment": {"prior_high": 0.5, "support": [0, 2], "pmf_low": [0.5, 0.5], "pmf_high": [0.5, 0.5]},
    })
    assert main(["solve", "--config", cfg, "--family", "general"]) == EXIT_CONFIG
    assert "environment" in capsys.readouterr().err


def test_linear_with_gamma_rejected(capsys):
    assert main(["solve", "--family", "linear", "--gamma", "0.8"]) == EXIT_CONFIG


def test_verify_presets(tmp_path, capsys):
    out = tmp_path / "v.csv"
    code = main(["verify", "--preset", "paper-sec4", "--count", "5", "--seed", "7", "--out", str(out)])
    assert code == EXIT_OK
    rows = read_rows(out)
    assert {r["check"] for r in rows} == {"sparsity", "equivalence", "gap", "lift", "oracle", "structure"}
    assert all(r["seed"] == "7" and r["passed"] == "true" for r in rows)


def test_verify_five_point_structure(capsys):
    assert main(["verify", "--preset", "paper-b2", "--checks", "structure"]) == EXIT_OK
    text = capsys.readouterr().out
    assert "PASS structure" in text


def test_verify_failure_exit_code(monkeypatch, capsys):
    from screening_contracts import cli

    def broken(exp):
        return [cli.CheckOutcome("lift", 0, False, 1.0, 0.0, "forced failure")]

    monkeypatch.setattr(cli, "check_lift", broken)
    assert main(["verify", "--checks", "lift"]) == EXIT_VERIFY
    assert "violated lift case=0 seed=0" in capsys.readouterr().out


def test_numerical_failure_exit_code(monkeypatch, capsys):
    from screening_contracts import cli, solver
    from screening_contracts.lp import LPError

    def explode(*args, **kwargs):
        raise LPError("synthetic", (1, 2))

    monkeypatch.setattr(solver, "optimize_accuracy", explode)
    assert main(["solve", "--family", "general"]) == EXIT_NUMERIC
    assert "basis=[1, 2]" in capsys.readouterr().err


def test_large_seed_accepted(capsys):
    assert main(["verify", "--checks", "sparsity", "--count", "2", "--seed", str(2**64 - 1)]) == EXIT_OK
    assert main(["verify", "--checks", "sparsity", "--count", "2", "--seed", str(2**64)]) == EXIT_CONFIG
