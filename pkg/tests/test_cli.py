"""End-to-end tests of the command-line interface (in-process via main)."""

import json
import subprocess
import sys

import pytest

from intermittent_pursuit.cli import main
from conftest import default_config_payload


def run_cli(*argv, capsys=None):
    code = main(list(argv))
    if capsys is None:
        return code, "", ""
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestSimulate:
    def test_miss_output_line(self, config_json, capsys):
        path = config_json(default_config_payload())
        code, out, err = run_cli("simulate", "--config", path, capsys=capsys)
        assert code == 0
        assert out.strip() == "no capture final_distance=0.783105023 payoff=0.683105023"

    def test_capture_output_line(self, config_json, capsys):
        # nu * rho0 <= r_cap: one blind dash captures the radial evader at
        # (rho0 - r_cap)/(1 - nu) = 0.1
        payload = default_config_payload(x_e0=[0.13, 0.0], t_f=3.0, n=0,
                                         pursuer="prop1", evader="radial")
        path = config_json(payload)
        code, out, _ = run_cli("simulate", "--config", path, capsys=capsys)
        assert code == 0
        assert out.strip() == "captured t=0.1 payoff=0"

    def test_output_files(self, config_json, tmp_path, capsys):
        path = config_json(default_config_payload())
        base = str(tmp_path / "run")
        code, _, _ = run_cli("simulate", "--config", path, "--out", base, capsys=capsys)
        assert code == 0

        outcome = json.loads((tmp_path / "run.outcome.json").read_text())
        assert outcome["captured"] is False
        assert outcome["capture_time"] is None
        assert len(outcome["sensing_times"]) == 2

        lines = (tmp_path / "run.trajectory.csv").read_text().strip().splitlines()
        assert lines[0] == "player,t_start,t_end,x0,y0,vx,vy"
        assert any(line.startswith("pursuer,") for line in lines[1:])
        assert any(line.startswith("evader,") for line in lines[1:])

        manifest = json.loads((tmp_path / "run.manifest.json").read_text())
        assert manifest["command"] == "simulate"
        assert manifest["config"]["pursuer"] == "thm1"
        assert manifest["config"]["evader"] == "equilibrium"
        assert manifest["seed"] == 42
        assert manifest["version"]
        assert set(manifest["outputs"]) == {
            str(tmp_path / "run.outcome.json"),
            str(tmp_path / "run.trajectory.csv"),
        }

    def test_seed_override_lands_in_manifest(self, config_json, tmp_path, capsys):
        path = config_json(default_config_payload())
        base = str(tmp_path / "run")
        code, _, _ = run_cli("simulate", "--config", path, "--seed", "7",
                             "--out", base, capsys=capsys)
        assert code == 0
        manifest = json.loads((tmp_path / "run.manifest.json").read_text())
        assert manifest["seed"] == 7
        assert manifest["config"]["seed"] == 7

    def test_rerun_is_byte_identical(self, config_json, tmp_path, capsys):
        path = config_json(default_config_payload())
        base_a = str(tmp_path / "a")
        base_b = str(tmp_path / "b")
        run_cli("simulate", "--config", path, "--out", base_a, capsys=capsys)
        run_cli("simulate", "--config", path, "--out", base_b, capsys=capsys)
        assert (tmp_path / "a.outcome.json").read_bytes() == \
            (tmp_path / "b.outcome.json").read_bytes()
        assert (tmp_path / "a.trajectory.csv").read_bytes() == \
            (tmp_path / "b.trajectory.csv").read_bytes()

    def test_missing_file(self, tmp_path, capsys):
        code, _, err = run_cli("simulate", "--config", str(tmp_path / "nope.json"),
                               capsys=capsys)
        assert code == 2
        assert "no such file" in err

    def test_bad_json_reports_position(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{\n  broken\n}")
        code, _, err = run_cli("simulate", "--config", str(path), capsys=capsys)
        assert code == 2
        assert f"{path}:2:3:" in err

    def test_non_object_json(self, tmp_path, capsys):
        path = tmp_path / "arr.json"
        path.write_text("[1, 2]")
        code, _, err = run_cli("simulate", "--config", str(path), capsys=capsys)
        assert code == 2
        assert "JSON object" in err

    def test_unknown_strategy(self, config_json, capsys):
        path = config_json(default_config_payload(pursuer="zigzag"))
        code, _, err = run_cli("simulate", "--config", path, capsys=capsys)
        assert code == 2
        assert "unknown pursuer" in err

    def test_config_validation_error(self, config_json, capsys):
        path = config_json(default_config_payload(nu=1.5))
        code, _, err = run_cli("simulate", "--config", path, capsys=capsys)
        assert code == 2
        assert "nu" in err


class TestValueGrid:
    def test_single_point(self, tmp_path, capsys):
        out = str(tmp_path / "grid.csv")
        code, stdout, _ = run_cli(
            "value-grid", "--nu", "0.7", "--r-cap", "0.1",
            "--rho-min", "1", "--rho-max", "1", "--rho-steps", "1",
            "--tau-min", "5", "--tau-max", "5", "--tau-steps", "1",
            "--ell", "2", "--out", out, capsys=capsys,
        )
        assert code == 0
        assert stdout.strip() == f"1 rows -> {out}"
        lines = (tmp_path / "grid.csv").read_text().strip().splitlines()
        assert lines[0] == "rho,tau,ell,value,case_tag,is_tight"
        assert lines[1] == "1,5,2,0.683105023,wait_region,true"

    def test_ell_range_multiplies_rows(self, tmp_path, capsys):
        out = str(tmp_path / "grid.csv")
        code, stdout, _ = run_cli(
            "value-grid", "--nu", "0.7", "--r-cap", "0.1",
            "--rho-min", "0", "--rho-max", "2", "--rho-steps", "4",
            "--tau-min", "0", "--tau-max", "3", "--tau-steps", "5",
            "--ell", "0:2", "--out", out, capsys=capsys,
        )
        assert code == 0
        lines = (tmp_path / "grid.csv").read_text().strip().splitlines()
        assert len(lines) == 1 + 3 * 4 * 5
        tags = {line.split(",")[4] for line in lines[1:]}
        assert tags <= {
            "capture_region", "time_limited", "wait_region",
            "stage0_case1", "stage0_case2a", "stage0_case2b", "stage0_case3",
        }

    def test_bad_arguments(self, tmp_path, capsys):
        out = str(tmp_path / "g.csv")
        base = ["value-grid", "--nu", "0.7", "--r-cap", "0.1",
                "--rho-min", "0", "--rho-max", "1",
                "--tau-min", "0", "--tau-max", "1", "--out", out]
        code, _, err = run_cli(*base, "--ell", "x", capsys=capsys)
        assert code == 2 and "--ell" in err
        code, _, err = run_cli(*base, "--ell", "3:1", capsys=capsys)
        assert code == 2
        code, _, err = run_cli("value-grid", "--nu", "1.7", "--r-cap", "0.1",
                               "--rho-min", "0", "--rho-max", "1",
                               "--tau-min", "0", "--tau-max", "1",
                               "--out", out, capsys=capsys)
        assert code == 2 and "--nu" in err
        code, _, err = run_cli("value-grid", "--nu", "0.7", "--r-cap", "0.1",
                               "--rho-min", "2", "--rho-max", "1",
                               "--tau-min", "0", "--tau-max", "1",
                               "--out", out, capsys=capsys)
        assert code == 2 and "below min" in err


class TestCompareNmax:
    def test_frozen_rows(self, tmp_path, capsys):
        out = str(tmp_path / "cmp.csv")
        code, _, _ = run_cli("compare-nmax", "--nu-min", "0.7", "--nu-max", "0.9",
                             "--nu-steps", "2", "--out", out, capsys=capsys)
        assert code == 0
        lines = (tmp_path / "cmp.csv").read_text().strip().splitlines()
        assert lines[0] == "nu,aleem_n_max,prop1_n_max"
        assert lines[1] == "0.7,24,10"
        assert lines[2] == "0.9,118,37"

    def test_range_validation(self, tmp_path, capsys):
        out = str(tmp_path / "cmp.csv")
        code, _, err = run_cli("compare-nmax", "--nu-min", "0", "--nu-max", "0.9",
                               "--out", out, capsys=capsys)
        assert code == 2 and "0 < min <= max < 1" in err
        code, _, err = run_cli("compare-nmax", "--nu-min", "0.5", "--nu-max", "0.9",
                               "--rho0", "0.05", "--out", out, capsys=capsys)
        assert code == 2 and "r_cap" in err


class TestDegradation:
    def test_frozen_beta_row(self, tmp_path, capsys):
        out = str(tmp_path / "deg.csv")
        code, _, _ = run_cli("degradation", "--nu", "0.7", "--out", out, capsys=capsys)
        assert code == 0
        lines = (tmp_path / "deg.csv").read_text().strip().splitlines()
        assert lines[0] == "nu,n,beta,delta,continuous_payoff,n_star"
        row = lines[1 + 3].split(",")  # n = 3
        assert row[:2] == ["0.7", "3"]
        assert row[2] == "1.36168675"
        assert row[5] == "5"  # n_star
        assert len(lines) == 1 + 6  # rows n = 0 .. n_star inclusive

    def test_empty_beta_when_continuous_chase_closes(self, tmp_path, capsys):
        out = str(tmp_path / "deg.csv")
        code, _, _ = run_cli("degradation", "--nu", "0.5", "--tf-frac", "1.2",
                             "--out", out, capsys=capsys)
        assert code == 0
        lines = (tmp_path / "deg.csv").read_text().strip().splitlines()
        for line in lines[1:]:
            assert line.split(",")[2] == ""  # beta undefined, cell left empty

    def test_skips_uncovered_nu_with_warning(self, tmp_path, capsys):
        out = str(tmp_path / "deg.csv")
        code, _, err = run_cli("degradation", "--nu", "0.7", "--rho0", "0.15",
                               "--out", out, capsys=capsys)
        assert code == 0
        assert "warning" in err and "skipped" in err
        assert len((tmp_path / "deg.csv").read_text().strip().splitlines()) == 1

    def test_bad_nu_list(self, tmp_path, capsys):
        out = str(tmp_path / "deg.csv")
        code, _, err = run_cli("degradation", "--nu", "0.5,oops", "--out", out,
                               capsys=capsys)
        assert code == 2
        code, _, err = run_cli("degradation", "--nu", "1.5", "--out", out,
                               capsys=capsys)
        assert code == 2


class TestVerify:
    def test_passing_suite_exit_zero(self, capsys):
        code, out, err = run_cli("verify", "pursuer", "--trials", "12", capsys=capsys)
        assert code == 0
        reports = json.loads(out)
        assert len(reports) == 1 and reports[0]["suite"] == "pursuer"
        assert "pursuer: PASS" in err

    def test_jensen_fails_with_exit_one(self, capsys):
        code, out, err = run_cli("verify", "jensen", "--trials", "30", capsys=capsys)
        assert code == 1
        reports = json.loads(out)
        assert [r["suite"] for r in reports] == ["jensen", "jensen_random"]
        assert all(r["passed"] is False for r in reports)
        assert "jensen: FAIL" in err

    def test_report_file_and_manifest(self, tmp_path, capsys):
        out = str(tmp_path / "report.json")
        code, stdout, _ = run_cli("verify", "capture_time", "--trials", "8",
                                  "--out", out, capsys=capsys)
        assert code == 0
        assert json.loads((tmp_path / "report.json").read_text()) == json.loads(stdout)
        manifest = json.loads((tmp_path / "report.json.manifest.json").read_text())
        assert manifest["command"] == "verify"

    def test_unknown_suite_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["verify", "bogus"])
        assert exc.value.code == 2


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert capsys.readouterr().out.strip() == "0.1.0"


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "intermittent_pursuit", "--version"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "0.1.0"
