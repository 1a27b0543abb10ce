import filecmp
from pathlib import Path

import pytest

from valuefield.cli import DEFAULT_CONFIGS, load_config, main, validate_config
from valuefield.scenarios import SCENARIOS, run_scenario


def write_config(tmp_path, scenario, extra=None, name="run.cfg"):
    lines = ["[scenario]", f"name = {scenario}", "", f"[{scenario}]"]
    entries = dict(DEFAULT_CONFIGS[scenario])
    entries.update(extra or {})
    lines += [f"{k} = {v}" for k, v in entries.items()]
    path = tmp_path / name
    path.write_text("\n".join(lines) + "\n")
    return path


class TestValidate:
    def test_default_configs_valid(self, tmp_path):
        for scenario in SCENARIOS:
            cfg = load_config(write_config(tmp_path, scenario, name=f"{scenario}.cfg"))
            assert validate_config(cfg) == []

    def test_missing_scenario_name(self):
        assert validate_config({}) == ["missing key scenario.name"]

    def test_unknown_scenario(self):
        diags = validate_config({"scenario": {"name": "warp-drive"}})
        assert len(diags) == 1 and "warp-drive" in diags[0]

    def test_flatness_violation_names_keys(self, tmp_path):
        cfg = load_config(write_config(tmp_path, "cosmology", {"omega_v": "0.6"}))
        diags = validate_config(cfg)
        assert any("flatness" in d for d in diags)

    def test_negative_h0(self, tmp_path):
        cfg = load_config(write_config(tmp_path, "cosmology", {"h0_kms_mpc": "-70"}))
        diags = validate_config(cfg)
        assert any("h0_kms_mpc" in d and "positive" in d for d in diags)

    def test_unparseable_value(self, tmp_path):
        cfg = load_config(write_config(tmp_path, "schrodinger", {"steps": "many"}))
        diags = validate_config(cfg)
        assert any("schrodinger.steps" in d for d in diags)

    def test_unknown_key(self, tmp_path):
        cfg = load_config(write_config(tmp_path, "bound-check", {"volume": "12"}))
        diags = validate_config(cfg)
        assert any("bound-check.volume" in d and "unknown" in d for d in diags)


class TestExitCodes:
    def test_run_passes(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "bound-check")
        code = main(["run", str(cfg), "--out", str(tmp_path / "out")])
        assert code == 0
        out = capsys.readouterr().out
        assert "[PASS]" in out and "[FAIL]" not in out

    def test_run_check_failure_exits_1(self, tmp_path, capsys):
        # an impossible detectability threshold makes the check fail
        cfg = write_config(tmp_path, "bound-check", {"eps": "1e-30"})
        code = main(["run", str(cfg), "--out", str(tmp_path / "out")])
        assert code == 1
        assert "[FAIL]" in capsys.readouterr().out

    def test_invalid_config_exits_2(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "cosmology", {"omega_v": "0.6"})
        code = main(["run", str(cfg), "--out", str(tmp_path / "out")])
        assert code == 2
        assert "flatness" in capsys.readouterr().err

    def test_validate_exit_codes(self, tmp_path):
        good = write_config(tmp_path, "arithmetic-check", name="good.cfg")
        bad = write_config(tmp_path, "cosmology", {"h0_kms_mpc": "-1"}, name="bad.cfg")
        assert main(["validate", str(good)]) == 0
        assert main(["validate", str(bad)]) == 2

    def test_missing_file_exits_2(self, tmp_path, capsys):
        code = main(["run", str(tmp_path / "absent.cfg")])
        assert code == 2
        assert "io error" in capsys.readouterr().err


class TestOverridesAndEnv:
    def test_set_flag_overrides_config(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "bound-check")
        code = main(["run", str(cfg), "--out", str(tmp_path / "out"),
                     "--set", "bound-check.eps=1e-30"])
        assert code == 1

    def test_env_output_dir(self, tmp_path, monkeypatch):
        cfg = write_config(tmp_path, "bound-check")
        target = tmp_path / "env_out"
        monkeypatch.setenv("VALUEFIELD_OUT", str(target))
        assert main(["run", str(cfg)]) == 0
        assert (target / "report.csv").exists()

    def test_malformed_set_flag(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "bound-check")
        code = main(["run", str(cfg), "--set", "nodotkey"])
        assert code == 2

    def test_config_section_output_dir(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        monkeypatch.delenv("VALUEFIELD_OUT", raising=False)
        path = tmp_path / "run.cfg"
        path.write_text("[scenario]\nname = bound-check\n\n"
                        "[output]\ndir = from_config\n")
        assert main(["run", str(path)]) == 0
        assert (tmp_path / "from_config" / "report.csv").exists()

    def test_non_default_h0(self, tmp_path):
        cfg = write_config(tmp_path, "cosmology", {"h0_kms_mpc": "67"})
        assert main(["run", str(cfg), "--out", str(tmp_path / "out")]) == 0


class TestDeterminism:
    @pytest.mark.parametrize("scenario", sorted(SCENARIOS))
    def test_byte_identical_runs(self, tmp_path, scenario):
        cfg = dict(DEFAULT_CONFIGS[scenario])
        out1 = tmp_path / "a"
        out2 = tmp_path / "b"
        r1 = run_scenario(scenario, cfg, out1)
        r2 = run_scenario(scenario, cfg, out2)
        names1 = sorted(Path(p).name for p in r1.artifacts)
        names2 = sorted(Path(p).name for p in r2.artifacts)
        assert names1 == names2
        for name in names1:
            assert filecmp.cmp(out1 / name, out2 / name, shallow=False), name


class TestReports:
    def test_report_schema_and_constants_header(self, tmp_path):
        run_scenario("bound-check", dict(DEFAULT_CONFIGS["bound-check"]), tmp_path)
        text = (tmp_path / "report.csv").read_text().splitlines()
        constants = [l for l in text if l.startswith("#")]
        assert any("c_m_per_s" in l for l in constants)
        header_idx = len(constants)
        assert text[header_idx] == "name,expected,measured,tolerance,pass"
        assert all(line.count(",") == 4 for line in text[header_idx:])

    def test_every_scenario_reports_checks(self, tmp_path):
        for scenario in SCENARIOS:
            report = run_scenario(scenario, dict(DEFAULT_CONFIGS[scenario]),
                                  tmp_path / scenario)
            assert report.checks, scenario
            assert report.all_passed, scenario
            names = [c.name for c in report.checks]
            assert len(names) == len(set(names)), scenario


class TestGoldenVectors:
    def test_golden_csv_rows_recompute_exactly(self, tmp_path):
        import csv
        from fractions import Fraction

        from valuefield.scaled_numbers import commutation_table

        run_scenario("arithmetic-check", {"seed": "5", "cases": "50"}, tmp_path)
        with open(tmp_path / "arithmetic_golden.csv", newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 100  # one mul and one div row per case
        for row in rows:
            s, t = Fraction(row["s"]), Fraction(row["t"])
            a, b = Fraction(row["a"]), Fraction(row["b"])
            transport, _, _ = commutation_table(s, t, row["op"], a, b)
            assert transport == Fraction(row["expected"])


class TestDemo:
    def test_demo_writes_config_and_report(self, tmp_path, capsys):
        code = main(["demo", "field-calculus", "--out", str(tmp_path)])
        assert code == 0
        assert (tmp_path / "field-calculus.cfg").exists()
        assert (tmp_path / "report.csv").exists()
        # the emitted config round-trips through validate
        assert main(["validate", str(tmp_path / "field-calculus.cfg")]) == 0
