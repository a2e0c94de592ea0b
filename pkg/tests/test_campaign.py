import csv
import json
import xml.etree.ElementTree as ET
from pathlib import Path

import pytest

from kantcheck.campaign import (
    ALL_SUITES,
    CampaignConfig,
    CampaignSummary,
    SuiteStats,
    enumerate_cells,
    load_config,
    run_campaign,
    summarize_report_file,
    validate_config,
)
from kantcheck.cli import main as cli_main
from kantcheck.constants import kantorovich_K2
from kantcheck.errors import ConfigError
from kantcheck.hermitian import SpectralWindow
from kantcheck.hunt import hunt_sharpness
from kantcheck.sweep import sweep_constants


def read_bytes_tree(out_dir):
    out = Path(out_dir)
    files = sorted(p for p in out.rglob("*") if p.is_file())
    return {str(p.relative_to(out)): p.read_bytes() for p in files}


class TestConfig:
    def test_defaults_are_valid(self):
        validate_config(CampaignConfig())

    def test_unknown_suite(self):
        with pytest.raises(ConfigError, match="unknown suite"):
            validate_config(CampaignConfig(suites=["theorem_9_9"]))

    def test_regime_violations_name_the_cell(self):
        with pytest.raises(ConfigError, match="q=-2.0"):
            validate_config(CampaignConfig(q_grid=[-2.0]))
        with pytest.raises(ConfigError, match="p=-0.01"):
            validate_config(CampaignConfig(p_grid=[-0.01]))
        with pytest.raises(ConfigError, match="alpha=-1.0"):
            validate_config(CampaignConfig(alpha_grid=[-1.0]))
        with pytest.raises(ConfigError, match=r"window \(2.0, 1.0\)"):
            validate_config(CampaignConfig(windows=[(2.0, 1.0)]))
        with pytest.raises(ConfigError, match="samples_per_cell"):
            validate_config(CampaignConfig(samples_per_cell=0))

    def test_load_config_round_trip(self, tmp_path):
        cfg = CampaignConfig(suites=["corollary_2_3"], samples_per_cell=3)
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(cfg.semantic_dict()))
        loaded = load_config(path)
        assert loaded.suites == ["corollary_2_3"]
        assert loaded.samples_per_cell == 3
        assert loaded.config_hash() == cfg.config_hash()

    def test_load_config_rejects_unknown_fields(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text('{"sample_count": 3}')
        with pytest.raises(ConfigError, match="unknown config fields"):
            load_config(path)

    def test_hash_ignores_output_dir(self):
        a = CampaignConfig(output_dir="x")
        b = CampaignConfig(output_dir="y")
        assert a.config_hash() == b.config_hash()


class TestEnumeration:
    def test_default_cell_counts(self):
        cells = enumerate_cells(CampaignConfig())
        by_suite = {}
        for cell in cells:
            by_suite[cell.suite] = by_suite.get(cell.suite, 0) + 1
        assert by_suite == {
            "theorem_1_1": 9, "theorem_2_1": 60, "corollary_2_2": 180,
            "corollary_2_3": 60, "corollary_2_4": 60, "lemma_3_1": 45,
            "corollary_3_2": 45, "corollary_3_3": 45, "theorem_4_1": 60,
            "theorem_4_2": 15, "corollary_4_3": 15, "corollary_4_4": 30,
            "theorem_4_5": 12,
        }
        assert [c.global_index for c in cells] == list(range(len(cells)))


class TestRunCampaign:
    def test_small_run_zero_failures(self, small_config):
        summary = run_campaign(small_config)
        assert summary.total_failures == 0
        assert summary.total_checks > 0
        assert set(summary.suites) == set(ALL_SUITES)
        assert summary.exit_code == 0
        assert summary.max_constant_deviation < 1e-9

    def test_outputs_exist_and_are_complete(self, small_config):
        run_campaign(small_config)
        out = Path(small_config.output_dir)
        assert (out / "summary.csv").exists()
        with open(out / "summary.csv") as handle:
            rows = list(csv.DictReader(handle))
        assert [r["theorem_id"] for r in rows] == list(ALL_SUITES)
        for suite in ALL_SUITES:
            report = out / "reports" / f"{suite}.jsonl"
            lines = report.read_text().splitlines()
            header = json.loads(lines[0])
            assert header["suite"] == suite
            assert header["base_seed"] == small_config.base_seed
            assert header["config_hash"] == small_config.config_hash()
            body = [json.loads(line) for line in lines[1:]]
            assert all(rec["overall"] for rec in body)
            assert all(rec["theorem_id"] == suite for rec in body)

    def test_deterministic_reports(self, small_config, tmp_path):
        run_campaign(small_config)
        second = CampaignConfig(**{**small_config.__dict__,
                                   "output_dir": str(tmp_path / "again")})
        run_campaign(second)
        assert read_bytes_tree(small_config.output_dir) == read_bytes_tree(second.output_dir)

    def test_replay_from_report_header(self, small_config, tmp_path):
        run_campaign(small_config)
        header_line = (Path(small_config.output_dir) / "reports" /
                       "corollary_2_3.jsonl").read_text().splitlines()[0]
        header = json.loads(header_line)
        replay_cfg = CampaignConfig.from_dict(header["config"],
                                              output_dir=str(tmp_path / "replay"))
        run_campaign(replay_cfg)
        assert read_bytes_tree(small_config.output_dir) == read_bytes_tree(replay_cfg.output_dir)

    def test_empty_suites_is_a_clean_no_op(self, tmp_path):
        cfg = CampaignConfig(suites=[], output_dir=str(tmp_path / "empty"))
        summary = run_campaign(cfg)
        assert summary.total_checks == 0
        assert summary.exit_code == 0

    def test_exit_code_reflects_failures(self):
        stats = {"x": SuiteStats(suite="x", checks=3, passed=2, failed=1)}
        summary = CampaignSummary(suites=stats, config_hash="", output_dir="", wall_seconds=0.0)
        assert summary.exit_code == 1

    def test_show_summarizes_both_formats(self, small_config):
        run_campaign(small_config)
        out = Path(small_config.output_dir)
        csv_digest = summarize_report_file(out / "summary.csv")
        assert "theorem_id" in csv_digest and "corollary_2_3" in csv_digest
        jsonl_digest = summarize_report_file(out / "reports" / "theorem_4_5.jsonl")
        assert "theorem_4_5" in jsonl_digest and "failed: 0" in jsonl_digest


class TestSweep:
    def test_row_count_and_accuracy(self, tmp_path):
        windows = [(1.0, 2.0), (0.5, 4.0)]
        p_grid = [-2.0, -1.0]
        q_grid = [-1.0, -0.5, -0.25]
        result = sweep_constants(windows, p_grid, q_grid, tmp_path)
        assert len(result.rows) == len(windows) * len(p_grid) * len(q_grid) * 4
        assert result.max_abs_diff < 1e-6
        with open(result.csv_path) as handle:
            rows = list(csv.DictReader(handle))
        assert len(rows) == len(result.rows)
        assert set(rows[0]) == {"m", "M", "p", "q", "constant_name",
                                "closed_form", "oracle", "abs_diff"}

    def test_ratio_constant_stays_above_one(self, tmp_path):
        # K2(1,2,-1,q) >= 1 across the admissible q range
        w = SpectralWindow(1.0, 2.0)
        for q in [-1.0 + 0.05 * k for k in range(20)]:
            assert kantorovich_K2(w, -1.0, q) >= 1.0 - 1e-12

    def test_svg_charts_are_valid_xml(self, tmp_path):
        result = sweep_constants([(1.0, 2.0)], [-1.0, -0.5], [-1.0, -0.5], tmp_path)
        assert len(result.svg_paths) == 1
        root = ET.parse(result.svg_paths[0]).getroot()
        assert root.tag.endswith("svg")
        polylines = [e for e in root.iter() if e.tag.endswith("polyline")]
        assert len(polylines) == 2


@pytest.fixture(scope="module")
def hunt_report(tmp_path_factory):
    out = tmp_path_factory.mktemp("hunt")
    cfg = CampaignConfig(fuzz_samples=200)
    return hunt_sharpness(cfg, out), out


class TestHunt:
    def test_report_file_written(self, hunt_report):
        report, out = hunt_report
        on_disk = json.loads((out / "hunt_report.json").read_text())
        assert set(on_disk["modes"]) == set(report["modes"])

    def test_regime_fuzz_logs_without_asserting(self, hunt_report):
        report, _ = hunt_report
        mode = report["modes"]["corollary_2_3_q_beyond_regime"]
        assert mode["samples"] == 200
        assert mode["violations"] >= 0  # either outcome is legitimate

    def test_dropping_domination_breaks_the_chain(self, hunt_report):
        report, _ = hunt_report
        mode = report["modes"]["corollary_2_2_without_domination"]
        assert mode["violations"] > 0
        assert mode["witness"] is not None
        assert mode["max_violation"] < -1e-3

    def test_non_log_convex_f_breaks_the_interpolant(self, hunt_report):
        report, _ = hunt_report
        mode = report["modes"]["theorem_2_1_non_log_convex_f"]
        assert mode["violations"] > 0

    def test_squared_order_control(self, hunt_report):
        report, _ = hunt_report
        mode = report["modes"]["squared_order_negative_control"]
        assert mode["violations"] == 1
        assert mode["max_violation"] <= -0.1

    def test_unweighted_difference_constant_witnessed(self, hunt_report):
        report, _ = hunt_report
        mode = report["modes"]["corollary_3_3_unweighted_constant"]
        assert mode["violations"] >= 1
        assert mode["witness"] is not None
        assert mode["max_violation"] < -1e-3

    def test_lemma_exponent_variants_recorded(self, hunt_report):
        report, _ = hunt_report
        notes = report["modes"]["lemma_3_1_exponent_variants"]["notes"]
        stated = next(n for n in notes if n.startswith("exponent r/(p+r)"))
        variant = next(n for n in notes if n.startswith("exponent p/(p+r)"))
        # the stated exponent holds on the whole corpus; the variant fails
        assert "held" in stated
        total = int(stated.split("/")[2].split(",")[0])
        held_stated = int(stated.split("held ")[1].split("/")[0])
        held_variant = int(variant.split("held ")[1].split("/")[0])
        assert held_stated == total
        assert held_variant < total


class TestCli:
    def test_run_subcommand(self, tmp_path, capsys):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(CampaignConfig(
            suites=["corollary_2_3", "lemma_3_1"],
            dims=[2, 3], windows=[[1.0, 2.0]],
            p_grid=[-1.0], q_grid=[-0.5], r_grid=[-0.5],
            samples_per_cell=3).semantic_dict()))
        code = cli_main(["run", "--config", str(cfg_path),
                         "--out", str(tmp_path / "out"), "--seed", "2"])
        assert code == 0
        captured = capsys.readouterr().out
        assert "corollary_2_3" in captured and "failures 0" in captured
        assert (tmp_path / "out" / "summary.csv").exists()

    def test_run_suite_override(self, tmp_path, capsys):
        code = cli_main(["run", "--suite", "corollary_2_4", "--samples", "2",
                         "--out", str(tmp_path / "only")])
        assert code == 0
        out = capsys.readouterr().out
        assert "corollary_2_4" in out and "theorem_2_1" not in out

    def test_config_error_exit_code(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{"q_grid": [-3.0]}')
        assert cli_main(["run", "--config", str(bad)]) == 2
        assert "config error" in capsys.readouterr().err

    def test_missing_config_file(self, tmp_path, capsys):
        assert cli_main(["run", "--config", str(tmp_path / "nope.json")]) == 2

    def test_sweep_subcommand(self, tmp_path, capsys):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(CampaignConfig(
            windows=[[1.0, 2.0]], p_grid=[-1.0], q_grid=[-0.5]).semantic_dict()))
        code = cli_main(["sweep", "--config", str(cfg_path),
                         "--out", str(tmp_path / "sweep")])
        assert code == 0
        assert (tmp_path / "sweep" / "constants.csv").exists()
        assert "max |closed_form - oracle|" in capsys.readouterr().out

    def test_hunt_subcommand(self, tmp_path, capsys):
        code = cli_main(["hunt", "--samples", "60", "--out", str(tmp_path / "hunt")])
        assert code == 0
        assert (tmp_path / "hunt" / "hunt_report.json").exists()
        assert "squared_order_negative_control" in capsys.readouterr().out

    def test_show_subcommand(self, tmp_path, capsys):
        cfg = CampaignConfig(suites=["corollary_2_3"], dims=[2], windows=[(1.0, 2.0)],
                             p_grid=[-1.0], q_grid=[-0.5], samples_per_cell=2,
                             output_dir=str(tmp_path / "show"))
        run_campaign(cfg)
        assert cli_main(["show", str(tmp_path / "show" / "summary.csv")]) == 0
        assert "corollary_2_3" in capsys.readouterr().out
