"""CLI: configuration, emission schemas, determinism, round-trips, exit codes."""

import json
import math

import numpy as np
import pytest

from pennycontact.cli import (
    ConfigError,
    RunConfig,
    coefficients_to_json,
    load_coefficients,
    load_config,
    main,
    run_sif_sweep,
    run_solve,
    run_stress,
)


class TestConfig:
    def test_defaults_validate(self):
        RunConfig().validate()

    def test_rejects_bad_lambda(self):
        with pytest.raises(ConfigError, match="lambda"):
            load_config(None, {"lam": 1.5})

    def test_rejects_inverted_annulus(self):
        with pytest.raises(ConfigError, match="lambda0"):
            load_config(None, {"model": "annulus", "lam0": 0.7, "lam1": 0.5})

    def test_rejects_nonpositive_indentation(self):
        with pytest.raises(ConfigError, match="delta_over_a"):
            load_config(None, {"delta_over_a": 0.0})

    def test_rejects_bad_poisson(self):
        with pytest.raises(ConfigError, match="nu"):
            load_config(None, {"nu": 0.5})

    def test_file_plus_override(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"lambda": 0.4, "truncation_N": 12}))
        cfg = load_config(str(path), {"delta_over_a": 0.1})
        assert cfg.lam == 0.4
        assert cfg.truncation_N == 12
        assert cfg.delta_over_a == 0.1

    def test_unknown_config_key(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"lambda_typo": 0.4}))
        with pytest.raises(ConfigError, match="unknown keys"):
            load_config(str(path), {})

    def test_theta1_from_elastic_constants(self):
        cfg = RunConfig(nu=0.3, shear_modulus=2.0)
        assert cfg.theta1 == pytest.approx(0.35)
        assert cfg.delta_star == pytest.approx(
            2 * cfg.delta_over_a / (0.35 * math.sqrt(math.pi))
        )


class TestExitCodes:
    def test_success(self, capsys):
        assert main(["solve", "--lambda", "0.5", "--n-trunc", "4"]) == 0
        assert "A_plus" in capsys.readouterr().out

    def test_config_error_is_1(self, capsys):
        assert main(["solve", "--lambda", "1.5"]) == 1
        assert "error:" in capsys.readouterr().err

    def test_bad_flag_is_config_error(self, capsys):
        assert main(["solve", "--lambda", "abc"]) == 1

    def test_unknown_command_is_config_error(self, capsys):
        assert main(["frobnicate"]) == 1

    def test_verify_passes_with_defaults(self, capsys, tmp_path):
        out = tmp_path / "report.json"
        code = main(
            ["verify", "--n-trunc", "40", "--format", "json", "--out", str(out)]
        )
        assert code == 0
        report = json.loads(out.read_text())
        assert report["passed"] is True
        assert len(report["checks"]) > 20

    def test_verification_failure_is_2(self, capsys, monkeypatch):
        from pennycontact import cli as cli_module
        from pennycontact.verify import CheckResult, VerificationReport

        failing = VerificationReport(
            checks=[CheckResult(name="stub", measured=1.0, threshold=0.5)]
        )
        monkeypatch.setattr(cli_module, "run_verification", lambda **kw: failing)
        assert main(["verify"]) == 2
        assert "FAIL" in capsys.readouterr().out


class TestSolveArtifact:
    def test_roundtrip_is_bitwise(self, tmp_path):
        cfg = load_config(None, {"lam": 0.55, "truncation_N": 24})
        problem, coeffs = run_solve(cfg)
        path = tmp_path / "coeffs.json"
        path.write_text(json.dumps(coefficients_to_json(problem, coeffs)))
        problem2, coeffs2 = load_coefficients(path)
        assert problem2 == problem
        assert np.array_equal(coeffs2.A_plus, coeffs.A_plus)
        assert np.array_equal(coeffs2.B_minus, coeffs.B_minus)

    def test_annulus_roundtrip(self, tmp_path):
        cfg = load_config(
            None, {"model": "annulus", "lam0": 0.2, "lam1": 0.5, "truncation_N": 16}
        )
        problem, coeffs = run_solve(cfg)
        path = tmp_path / "coeffs.json"
        path.write_text(json.dumps(coefficients_to_json(problem, coeffs)))
        problem2, coeffs2 = load_coefficients(path)
        assert problem2 == problem
        assert np.array_equal(coeffs2.A_minus, coeffs.A_minus)
        assert np.array_equal(coeffs2.B_plus, coeffs.B_plus)

    def test_solve_cli_writes_file(self, tmp_path):
        out = tmp_path / "c.json"
        assert main(["solve", "--n-trunc", "6", "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert doc["model"] == "disc"
        assert len(doc["A_plus"]) == 6


class TestEmission:
    def test_stress_csv_schema(self, tmp_path):
        code = main(
            [
                "stress",
                "--n-trunc",
                "20",
                "--grid-points",
                "24",
                "--out",
                str(tmp_path),
            ]
        )
        assert code == 0
        text = (tmp_path / "stress_contact.csv").read_text()
        lines = text.strip().splitlines()
        comments = [l for l in lines if l.startswith("# ")]
        assert any(l.startswith("# lambda=") for l in comments)
        assert any(l.startswith("# code_version=") for l in comments)
        header_idx = next(i for i, l in enumerate(lines) if not l.startswith("#"))
        assert lines[header_idx] == "r_over_a,value"
        rows = [tuple(map(float, l.split(","))) for l in lines[header_idx + 1 :]]
        rs = [r for r, _ in rows]
        assert rs == sorted(rs)
        assert all(v < 0 for _, v in rows)  # contact branch is compressive

    def test_outer_branch_increasing(self, tmp_path):
        main(["stress", "--n-trunc", "20", "--grid-points", "24", "--out", str(tmp_path)])
        lines = (tmp_path / "stress_outer.csv").read_text().strip().splitlines()
        rows = [l for l in lines if not l.startswith("#") and "," in l][1:]
        rs = [float(l.split(",")[0]) for l in rows]
        assert rs == sorted(rs)
        assert all(r > 1.0 for r in rs)

    def test_sif_zero_row(self):
        cfg = load_config(None, {"truncation_N": 12, "lambda_count": 4})
        table = run_sif_sweep(cfg, lambda_grid=[0.0, 0.3])
        assert table.rows[0] == (0.0, 0.0, 0.0)
        assert table.rows[1][1] > 0.0

    def test_displacement_endpoints(self, capsys):
        code = main(
            ["displacement", "--lambda", "0.5", "--n-trunc", "40", "--grid-points", "64"]
        )
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        rows = [
            tuple(map(float, l.split(",")))
            for l in lines
            if not l.startswith("#") and not l.startswith("r_over_a")
        ]
        assert rows[0][1] == pytest.approx(0.05, abs=1e-4)
        assert abs(rows[-1][1]) < 1e-4

    def test_json_format(self, capsys):
        code = main(
            ["sif", "--format", "json", "--lambda-count", "3", "--n-trunc", "8",
             "--lambda-max", "0.4"]
        )
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["columns"] == ["lambda", "normalized_exact", "normalized_asymptotic"]

    def test_determinism(self, tmp_path):
        paths = []
        for name in ("a.csv", "b.csv"):
            out = tmp_path / name
            main(
                ["sif", "--lambda-count", "5", "--n-trunc", "12", "--lambda-max",
                 "0.5", "--out", str(out)]
            )
            paths.append(out.read_bytes())
        assert paths[0] == paths[1]

    def test_float_precision_roundtrip(self, tmp_path):
        out = tmp_path / "sif.csv"
        main(["sif", "--lambda-count", "3", "--n-trunc", "16", "--lambda-max", "0.5",
              "--out", str(out)])
        cfg = load_config(None, {"truncation_N": 16})
        table = run_sif_sweep(cfg, lambda_grid=np.linspace(0.0, 0.5, 3))
        lines = [
            l for l in out.read_text().strip().splitlines()
            if not l.startswith("#") and not l.startswith("lambda")
        ]
        for line, row in zip(lines, table.rows):
            parsed = tuple(map(float, line.split(",")))
            assert parsed == row  # 17 significant digits round-trip exactly


class TestFigures:
    def test_figures_command(self, tmp_path, capsys):
        code = main(
            ["figures", "--n-trunc", "24", "--grid-points", "32", "--out", str(tmp_path)]
        )
        assert code == 0
        names = sorted(p.name for p in tmp_path.iterdir())
        assert names == [
            "fig1_contact.csv",
            "fig1_outer.csv",
            "fig2_sif.csv",
            "fig3_displacement_lam030.csv",
            "fig3_displacement_lam050.csv",
            "fig3_displacement_lam070.csv",
        ]

    def test_stress_rejects_annulus(self):
        cfg = load_config(None, {"model": "annulus", "lam0": 0.2, "lam1": 0.5})
        with pytest.raises(ConfigError):
            run_stress(cfg)
