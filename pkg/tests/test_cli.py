"""End-to-end CLI tests: subcommands, config precedence, exit codes."""

import os

import mpmath as mp
import pytest

from zetamax import series
from zetamax.cli import (
    EXIT_NONCONVERGENCE,
    EXIT_OK,
    EXIT_PROPERTY,
    main,
)
from zetamax.series import StieltjesTable


def run(args):
    return main(args)


class TestCoeffs:
    def test_table_row_n12(self, tmp_path):
        assert run(["coeffs", "--n-max", "12", "--output-dir", str(tmp_path)]) == EXIT_OK
        lines = (tmp_path / "alpha_table.txt").read_text().splitlines()
        assert "12\t851308.97" in lines

    def test_n_max_zero_rows(self, tmp_path):
        assert run(["coeffs", "--n-max", "0", "--output-dir", str(tmp_path)]) == EXIT_OK
        rows = (tmp_path / "alpha.csv").read_text().splitlines()
        assert rows[0] == "n,alpha"
        assert [r.split(",")[0] for r in rows[1:]] == ["-2", "-1", "0"]

    def test_rerun_byte_identical(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        run(["coeffs", "--n-max", "6", "--output-dir", str(a)])
        run(["coeffs", "--n-max", "6", "--output-dir", str(b)])
        assert (a / "alpha.csv").read_bytes() == (b / "alpha.csv").read_bytes()
        assert (a / "alpha_table.txt").read_bytes() == (b / "alpha_table.txt").read_bytes()


class TestVerify:
    def test_passes_with_small_sieve(self, tmp_path, capsys):
        assert run(["verify", "--x-max", "20000", "--output-dir", str(tmp_path)]) == EXIT_OK
        out = capsys.readouterr().out
        assert "mobius: PASS" in out
        assert "FAIL" not in out

    def test_corrupted_stieltjes_table_fails(self, tmp_path, capsys, monkeypatch):
        good = series._bundled()
        with mp.workdps(60):
            bad_values = list(good.values)
            bad_values[2] = bad_values[2] + mp.mpf("1e-15")
        corrupted = StieltjesTable(tuple(bad_values), good.precision_digits, good.source)
        monkeypatch.setattr(series, "_BUNDLED", corrupted)
        code = run(["verify", "--x-max", "5000", "--output-dir", str(tmp_path)])
        assert code == EXIT_PROPERTY
        assert "FAIL" in capsys.readouterr().out


class TestZeros:
    def test_zero_count(self, tmp_path):
        assert run(["zeros", "--zero-count", "50", "--output-dir", str(tmp_path)]) == EXIT_OK
        lines = [l for l in (tmp_path / "zeros.txt").read_text().splitlines()
                 if not l.startswith("#")]
        assert len(lines) == 50
        assert abs(float(lines[0]) - 14.1347) < 1e-3

    def test_t_max(self, tmp_path):
        assert run(["zeros", "--t-max", "100", "--output-dir", str(tmp_path)]) == EXIT_OK
        lines = [l for l in (tmp_path / "zeros.txt").read_text().splitlines()
                 if not l.startswith("#")]
        assert len(lines) == 29   # zeros below height 100

    def test_both_extent_flags_rejected(self, tmp_path, capsys):
        code = run(["zeros", "--zero-count", "5", "--t-max", "50",
                    "--output-dir", str(tmp_path)])
        assert code == EXIT_NONCONVERGENCE


class TestExtrema:
    def test_count_and_summary(self, tmp_path, capsys):
        assert run(["extrema", "--zero-count", "200", "--output-dir", str(tmp_path)]) == EXIT_OK
        out = capsys.readouterr().out
        assert "199 records, 0 flagged" in out
        lines = (tmp_path / "extrema.csv").read_text().splitlines()
        assert lines[0] == "index,gamma_lo,gamma_hi,t_star,z2"
        assert len(lines) == 200

    def test_zero_count_zero_gives_header_only(self, tmp_path):
        assert run(["extrema", "--zero-count", "0", "--output-dir", str(tmp_path)]) == EXIT_OK
        assert (tmp_path / "extrema.csv").read_text() == "index,gamma_lo,gamma_hi,t_star,z2\n"

    def test_resume_from_shards(self, tmp_path):
        run(["extrema", "--zero-count", "150", "--output-dir", str(tmp_path)])
        original = (tmp_path / "extrema.csv").read_bytes()
        (tmp_path / "extrema.csv").unlink()
        run(["extrema", "--zero-count", "150", "--output-dir", str(tmp_path)])
        assert (tmp_path / "extrema.csv").read_bytes() == original

    def test_worker_count_invariant(self, tmp_path):
        a, b = tmp_path / "w1", tmp_path / "w2"
        run(["extrema", "--zero-count", "150", "--workers", "1", "--output-dir", str(a)])
        run(["extrema", "--zero-count", "150", "--workers", "3", "--output-dir", str(b)])
        assert (a / "extrema.csv").read_bytes() == (b / "extrema.csv").read_bytes()

    def test_zeros_file_source(self, tmp_path):
        run(["zeros", "--zero-count", "80", "--output-dir", str(tmp_path)])
        code = run(["extrema", "--zeros-file", str(tmp_path / "zeros.txt"),
                    "--output-dir", str(tmp_path / "out")])
        assert code == EXIT_OK
        lines = (tmp_path / "out" / "extrema.csv").read_text().splitlines()
        assert len(lines) == 80   # header + 79 gaps


class TestTablesAndFigure:
    def test_tables_outputs(self, tmp_path, capsys):
        code = run(["tables", "--zero-count", "200", "--n-list=-2,0,2",
                    "--output-dir", str(tmp_path)])
        assert code == EXIT_OK
        rows = (tmp_path / "error_table.csv").read_text().splitlines()
        assert rows[1] == "N,error"
        assert [r.split(",")[0] for r in rows[2:]] == ["-2", "0", "2"]
        assert (tmp_path / "figure_data.csv").exists()

    def test_single_row_table(self, tmp_path):
        code = run(["tables", "--zero-count", "100", "--n-list=-2",
                    "--output-dir", str(tmp_path)])
        assert code == EXIT_OK
        rows = (tmp_path / "error_table.csv").read_text().splitlines()
        assert len(rows) == 3   # comment, header, one row

    def test_figure_stride(self, tmp_path):
        code = run(["figure", "--zero-count", "100", "--n-list=-2", "--stride", "25",
                    "--output-dir", str(tmp_path)])
        assert code == EXIT_OK
        lines = (tmp_path / "figure_data.csv").read_text().splitlines()
        assert len(lines) == 1 + 4   # header + ceil(99 / 25)

    def test_reuses_existing_extrema(self, tmp_path):
        run(["extrema", "--zero-count", "120", "--output-dir", str(tmp_path)])
        code = run(["tables", "--n-list=-2,0", "--output-dir", str(tmp_path)])
        assert code == EXIT_OK


class TestConfigPrecedence:
    def test_env_overrides_default(self, tmp_path, monkeypatch):
        monkeypatch.setenv("ZX_N_MAX", "4")
        run(["coeffs", "--output-dir", str(tmp_path)])
        rows = (tmp_path / "alpha.csv").read_text().splitlines()
        assert rows[-1].startswith("4,")

    def test_flag_overrides_env(self, tmp_path, monkeypatch):
        monkeypatch.setenv("ZX_N_MAX", "4")
        run(["coeffs", "--n-max", "2", "--output-dir", str(tmp_path)])
        rows = (tmp_path / "alpha.csv").read_text().splitlines()
        assert rows[-1].startswith("2,")

    def test_config_file_overrides_default(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("n_max=3\n# comment line\n")
        run(["coeffs", "--config", str(cfg), "--output-dir", str(tmp_path)])
        rows = (tmp_path / "alpha.csv").read_text().splitlines()
        assert rows[-1].startswith("3,")

    def test_env_overrides_config_file(self, tmp_path, monkeypatch):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("n_max=3\n")
        monkeypatch.setenv("ZX_N_MAX", "5")
        run(["coeffs", "--config", str(cfg), "--output-dir", str(tmp_path)])
        rows = (tmp_path / "alpha.csv").read_text().splitlines()
        assert rows[-1].startswith("5,")

    def test_low_digits_with_high_n_max_rejected(self, tmp_path):
        code = run(["coeffs", "--n-max", "14", "--digits", "20",
                    "--output-dir", str(tmp_path)])
        assert code == EXIT_NONCONVERGENCE

    def test_malformed_config_file(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("this is not key value\n")
        code = run(["coeffs", "--config", str(cfg), "--output-dir", str(tmp_path)])
        assert code == EXIT_NONCONVERGENCE
