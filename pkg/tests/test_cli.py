"""Command-line behavior: exit codes, report schema, config handling.

The contract under test: exit 0 when every check passes, 1 when any
fails, 2 for usage or configuration problems; JSON reports with a fixed
key set per check; byte-identical reruns at a fixed seed and grid.
"""

import json
import subprocess
import sys

import pytest

from cocycle_lab import cli
from cocycle_lab.report import SCHEMA_VERSION, CheckResult

RESULT_KEYS = {
    "check", "value", "residual", "nearest_int_distance",
    "grids", "observed_order", "pass",
}


def run_main(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestExitCodes:
    def test_passing_suite_returns_zero(self, capsys):
        code, out, _ = run_main(["verify", "extensions"], capsys)
        assert code == 0
        assert "suite extensions: PASS" in out

    def test_failing_check_returns_one(self, capsys, monkeypatch):
        monkeypatch.setattr(
            cli, "extension_results",
            lambda: [CheckResult(check="forced-failure", passed=False)],
        )
        code, out, _ = run_main(["verify", "extensions"], capsys)
        assert code == 1
        assert "FAIL" in out

    def test_unknown_suite_is_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            cli.main(["verify", "bogus"])
        assert exc.value.code == 2

    def test_missing_command_is_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            cli.main([])
        assert exc.value.code == 2

    def test_degenerate_grid_is_config_error(self, capsys):
        code, _, err = run_main(["verify", "loop", "--grid", "4"], capsys)
        assert code == 2
        assert "minimum" in err

    def test_too_coarse_for_ladder_is_config_error(self, capsys):
        code, _, err = run_main(["verify", "loop", "--grid", "16"], capsys)
        assert code == 2
        assert "ladder" in err

    def test_console_script_is_installed(self):
        proc = subprocess.run(
            ["cocycle-lab", "verify", "extensions"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        assert "suite extensions: PASS" in proc.stdout


class TestReportSchema:
    def test_result_rows_have_fixed_keys(self, capsys, tmp_path):
        path = tmp_path / "report.json"
        code, _, _ = run_main(
            ["verify", "finite", "--corpus", "z4-over-z2", "--json", str(path)],
            capsys,
        )
        assert code == 0
        report = json.loads(path.read_text())
        assert report["schema_version"] == SCHEMA_VERSION
        assert report["suite"] == "finite"
        assert report["corpus"] == "z4-over-z2"
        assert isinstance(report["grid"], list) and len(report["grid"]) == 4
        assert report["all_pass"] is True
        assert report["results"]
        for row in report["results"]:
            assert RESULT_KEYS <= set(row)
            assert set(row) - RESULT_KEYS <= {"detail"}
            assert isinstance(row["pass"], bool)

    def test_reruns_are_byte_identical(self, capsys, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        args = ["verify", "loop", "--grid", "32", "--seed", "7"]
        assert cli.main(args + ["--json", str(a)]) in (0, 1)
        assert cli.main(args + ["--json", str(b)]) in (0, 1)
        capsys.readouterr()
        assert a.read_bytes() == b.read_bytes()

    def test_human_lines_cover_every_check(self, capsys, tmp_path):
        path = tmp_path / "r.json"
        code, out, _ = run_main(
            ["verify", "extensions", "--json", str(path)], capsys
        )
        report = json.loads(path.read_text())
        for row in report["results"]:
            assert row["check"] in out


class TestConfigFile:
    def test_config_supplies_defaults(self, capsys, tmp_path, monkeypatch):
        out_path = tmp_path / "out.json"
        (tmp_path / "cocycle-lab.toml").write_text(
            f'seed = 5\ncorpus = "z4-over-z2"\njson = "{out_path}"\n'
        )
        monkeypatch.chdir(tmp_path)
        code, _, _ = run_main(["verify", "finite"], capsys)
        assert code == 0
        report = json.loads(out_path.read_text())
        assert report["seed"] == 5
        assert report["corpus"] == "z4-over-z2"

    def test_flags_override_config(self, capsys, tmp_path, monkeypatch):
        out_path = tmp_path / "out.json"
        (tmp_path / "cocycle-lab.toml").write_text("seed = 5\n")
        monkeypatch.chdir(tmp_path)
        code, _, _ = run_main(
            ["verify", "extensions", "--seed", "9", "--json", str(out_path)],
            capsys,
        )
        assert code == 0
        assert json.loads(out_path.read_text())["seed"] == 9

    def test_unknown_key_rejected(self, capsys, tmp_path, monkeypatch):
        (tmp_path / "cocycle-lab.toml").write_text("gird = 64\n")
        monkeypatch.chdir(tmp_path)
        code, _, err = run_main(["verify", "extensions"], capsys)
        assert code == 2
        assert "gird" in err

    def test_wrong_type_rejected(self, capsys, tmp_path, monkeypatch):
        (tmp_path / "cocycle-lab.toml").write_text('grid = "large"\n')
        monkeypatch.chdir(tmp_path)
        code, _, err = run_main(["verify", "extensions"], capsys)
        assert code == 2
        assert "integer" in err

    def test_malformed_toml_rejected(self, capsys, tmp_path, monkeypatch):
        (tmp_path / "cocycle-lab.toml").write_text("grid = = 64\n")
        monkeypatch.chdir(tmp_path)
        code, _, _ = run_main(["verify", "extensions"], capsys)
        assert code == 2

    def test_unknown_corpus_rejected(self, capsys, tmp_path, monkeypatch):
        (tmp_path / "cocycle-lab.toml").write_text('corpus = "m12"\n')
        monkeypatch.chdir(tmp_path)
        code, _, err = run_main(["verify", "finite"], capsys)
        assert code == 2
        assert "m12" in err

    def test_bad_resolution_from_config(self, capsys, tmp_path, monkeypatch):
        (tmp_path / "cocycle-lab.toml").write_text("nr = 2\n")
        monkeypatch.chdir(tmp_path)
        code, _, _ = run_main(["verify", "extensions"], capsys)
        assert code == 2


class TestDashboard:
    def test_dashboard_names_and_exit(self, capsys, tmp_path):
        path = tmp_path / "dash.json"
        code, out, _ = run_main(
            ["dashboard", "--grid", "32", "--json", str(path)], capsys
        )
        assert code in (0, 1)
        report = json.loads(path.read_text())
        names = [row["check"] for row in report["results"]]
        assert names == [
            "restriction-vanishing",
            "rho-vanishing",
            "pullback-consistency",
            "finite-analogue-seven-term",
        ]

    def test_dashboard_passes_at_reference_grid(self):
        report = cli.theorem_dashboard()
        assert report["all_pass"] is True
        assert report["suite"] == "dashboard"


class TestSuiteComposition:
    def test_all_concatenates_the_three_suites(self, capsys, tmp_path):
        path = tmp_path / "all.json"
        code = cli.main(
            ["verify", "all", "--grid", "32", "--json", str(path)]
        )
        capsys.readouterr()
        assert code in (0, 1)
        report = json.loads(path.read_text())
        names = [row["check"] for row in report["results"]]
        assert "cyclic-gcd-orders" in names
        assert "roundtrip-klein-m4" in names
        assert "torus-oracle" in names
        assert "cover-cocycle-rotations" in names

    def test_finite_corpus_restriction(self, capsys, tmp_path):
        path = tmp_path / "one.json"
        code, _, _ = run_main(
            ["verify", "finite", "--corpus", "q8-center", "--json", str(path)],
            capsys,
        )
        assert code == 0
        names = [row["check"] for row in json.loads(path.read_text())["results"]]
        assert "seven-term-q8-center-m2" in names
        assert not any("s3-over-z3" in n for n in names)
