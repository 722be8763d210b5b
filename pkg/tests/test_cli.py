import json

import numpy as np
import pytest

from rpmax import fileio
from rpmax.cli import main
from rpmax.lemmas import LemmaCheck


@pytest.fixture
def solve_files(tmp_path):
    # the undersampled 1-D instance whose optimizer is x = 0.5, e = 0
    fileio.save_matrix(tmp_path / "A.csv", np.array([[1.0], [1.0], [2.0]]))
    fileio.save_vector(tmp_path / "b.csv", np.array([1.0, 0.5, 2.0]))
    fileio.save_vector(tmp_path / "phi.csv", np.array([1.0]))
    return tmp_path


class TestSolve:
    def test_solve_writes_solution_files(self, solve_files, capsys):
        code = main([
            "solve",
            "--sensing", str(solve_files / "A.csv"),
            "--measurements", str(solve_files / "b.csv"),
            "--anchor", str(solve_files / "phi.csv"),
            "--lambda-mode", "explicit", "--lambda", str(7.0 / 3.0),
            "--out-x", str(solve_files / "x.csv"),
            "--out-e", str(solve_files / "e.csv"),
        ])
        assert code == 0
        assert "status: optimal" in capsys.readouterr().out
        x = fileio.load_vector(solve_files / "x.csv")
        e = fileio.load_vector(solve_files / "e.csv")
        assert x[0] == pytest.approx(0.5, abs=1e-9)
        assert np.max(np.abs(e)) <= 1e-9

    def test_lp_dump_flag(self, solve_files):
        code = main([
            "solve",
            "--sensing", str(solve_files / "A.csv"),
            "--measurements", str(solve_files / "b.csv"),
            "--anchor", str(solve_files / "phi.csv"),
            "--lambda-mode", "explicit", "--lambda", "2.0",
            "--out-x", str(solve_files / "x.csv"),
            "--out-e", str(solve_files / "e.csv"),
            "--lp-dump", str(solve_files / "dump.lp"),
        ])
        assert code == 0
        assert (solve_files / "dump.lp").read_text().startswith("# maximize")

    def test_explicit_mode_requires_lambda(self, solve_files):
        with pytest.raises(SystemExit):
            main([
                "solve",
                "--sensing", str(solve_files / "A.csv"),
                "--measurements", str(solve_files / "b.csv"),
                "--anchor", str(solve_files / "phi.csv"),
                "--lambda-mode", "explicit",
            ])

    def test_missing_file_is_configuration_error(self, solve_files):
        code = main([
            "solve",
            "--sensing", str(solve_files / "missing.csv"),
            "--measurements", str(solve_files / "b.csv"),
            "--anchor", str(solve_files / "phi.csv"),
        ])
        assert code == 2


class TestSimulate:
    def test_json_output_round_trips(self, capsys):
        code = main(["simulate", "--n", "4", "--m", "40", "--delta", "0.1",
                     "--seed", "5", "--json"])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["status"] == "optimal"
        assert payload["n"] == 4 and payload["m"] == 40
        assert isinstance(payload["success"], bool)

    def test_human_output_deterministic_fields(self, capsys):
        args = ["simulate", "--n", "4", "--m", "40", "--delta", "0.1", "--seed", "5"]
        assert main(args) == 0
        first = capsys.readouterr().out
        assert main(args) == 0
        second = capsys.readouterr().out
        # identical except the runtime milliseconds on the last line
        assert first.splitlines()[:2] == second.splitlines()[:2]
        assert "rel_err_signed" in first

    def test_plain_formulation_flag(self, capsys):
        code = main(["simulate", "--n", "4", "--m", "60", "--delta", "0.1",
                     "--seed", "5", "--formulation", "plain", "--json"])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["lambda_mode"] == "auto_seven"
        assert payload["success"] is False


class TestSweep:
    def test_flags_run_and_outputs_exist(self, tmp_path, capsys):
        code = main(["sweep", "--n", "4", "--m-over-n", "6", "--deltas", "0,0.1",
                     "--anchor-errs", "0.3", "--kappas", "7", "--trials", "2",
                     "--base-seed", "3", "--out-dir", str(tmp_path), "--workers", "1"])
        assert code == 0
        assert (tmp_path / "trials.csv").exists()
        assert (tmp_path / "summary.csv").exists()
        assert len(fileio.read_csv_dicts(tmp_path / "trials.csv")) == 4

    def test_config_file_with_flag_override(self, tmp_path):
        config = tmp_path / "sweep.cfg"
        config.write_text(
            "n = 4\n"
            "m_over_n = 6\n"
            "deltas = 0, 0.1\n"
            "anchor_rel_errs = 0.3\n"
            "kappas = 7\n"
            "trials = 1\n"
            "base_seed = 9\n"
        )
        out = tmp_path / "out"
        code = main(["sweep", "--config", str(config), "--trials", "2",
                     "--out-dir", str(out), "--workers", "1"])
        assert code == 0
        assert len(fileio.read_csv_dicts(out / "trials.csv")) == 4  # 2 cells x 2 trials

    def test_missing_parameter_rejected(self, tmp_path):
        with pytest.raises(SystemExit):
            main(["sweep", "--n", "4", "--out-dir", str(tmp_path)])

    def test_heatmap_flags(self, tmp_path):
        code = main(["sweep", "--n", "4", "--m-over-n", "6,8", "--deltas", "0,0.1",
                     "--anchor-errs", "0.3", "--kappas", "7", "--trials", "1",
                     "--base-seed", "3", "--out-dir", str(tmp_path), "--workers", "1",
                     "--heatmap-x", "delta", "--heatmap-y", "m_over_n"])
        assert code == 0
        assert (tmp_path / "heatmap.svg").exists()


class TestVerifyLemmas:
    def test_fast_mode_report_and_exit_code(self, tmp_path, capsys):
        out = tmp_path / "report.csv"
        code = main(["verify-lemmas", "--fast", "--report", "csv", "--out", str(out)])
        stdout = capsys.readouterr().out
        assert "checks passed" in stdout
        rows = fileio.read_csv_dicts(out)
        assert {"check", "observed", "relation", "bound", "passed", "detail"} <= set(rows[0])
        # exit code mirrors the table; every check except the marginal
        # covariance-norm one passes at any seed
        assert (code == 0) == all(r["passed"] == "true" for r in rows)
        for r in rows:
            if r["check"] != "truncated_covariance_norm":
                assert r["passed"] == "true", r

    def test_failing_check_sets_exit_code(self, monkeypatch, capsys):
        fake = [LemmaCheck("synthetic", 1.0, 0.5, "<=", False, "injected")]
        monkeypatch.setattr("rpmax.cli.run_lemma_checks", lambda **kw: fake)
        assert main(["verify-lemmas"]) == 1
        assert "FAIL" in capsys.readouterr().out


class TestHeatmap:
    @pytest.fixture
    def summary(self, tmp_path):
        out = tmp_path / "sweep"
        main(["sweep", "--n", "4", "--m-over-n", "6,8,10", "--deltas", "0,0.1,0.2",
              "--anchor-errs", "0.3", "--kappas", "7", "--trials", "1",
              "--base-seed", "3", "--out-dir", str(out), "--workers", "1"])
        return out / "summary.csv"

    def test_three_by_three_grid(self, summary, tmp_path):
        out = tmp_path / "heat.svg"
        code = main(["heatmap", "--summary", str(summary), "--x", "delta",
                     "--y", "m_over_n", "--out", str(out)])
        assert code == 0
        text = out.read_text()
        assert "delta" in text and "m_over_n" in text  # axis labels in the svg

    def test_single_cell_grid(self, tmp_path):
        out_dir = tmp_path / "s"
        main(["sweep", "--n", "4", "--m-over-n", "6", "--deltas", "0.1",
              "--anchor-errs", "0.3", "--kappas", "7", "--trials", "1",
              "--base-seed", "3", "--out-dir", str(out_dir), "--workers", "1"])
        out = tmp_path / "single.svg"
        assert main(["heatmap", "--summary", str(out_dir / "summary.csv"),
                     "--x", "delta", "--y", "m_over_n", "--out", str(out)]) == 0
        assert out.exists()

    def test_unknown_field_names_the_field(self, summary, tmp_path, capsys):
        code = main(["heatmap", "--summary", str(summary), "--x", "volume",
                     "--y", "m_over_n", "--out", str(tmp_path / "x.svg")])
        assert code == 2
        assert "volume" in capsys.readouterr().err
