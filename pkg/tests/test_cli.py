"""CLI contracts: subcommands, exit codes, reproducibility."""

import pytest

from gauge_squeeze.cli import main


SWEEP_CFG = """
G_m = 0.15
J_m = 0.1
theta = 1.5707963267948966
Delta_tilde = red-sideband
beta_m_re = 48.41229182759271
axis1_param = G_a
axis1_min = 0.0
axis1_max = 0.2
axis1_count = 5
axis2_param = Delta_a
axis2_min = 3.0
axis2_max = 4.0
axis2_count = 3
"""


@pytest.fixture
def sweep_cfg(tmp_path):
    path = tmp_path / "sweep.cfg"
    path.write_text(SWEEP_CFG)
    return path


class TestSweepCommand:
    def test_writes_csv_with_echoed_header(self, tmp_path, sweep_cfg, capsys):
        out = tmp_path / "out.csv"
        assert main(["sweep", "--config", str(sweep_cfg), "--output", str(out)]) == 0
        text = out.read_text()
        assert text.startswith("# gauge-squeeze v")
        assert "# cfg axis1_param = G_a" in text
        assert "wrote" in capsys.readouterr().out

    def test_missing_output_is_usage_error(self, sweep_cfg, capsys):
        assert main(["sweep", "--config", str(sweep_cfg)]) == 1
        assert "output" in capsys.readouterr().err

    def test_unknown_key_named(self, tmp_path, capsys):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text(SWEEP_CFG + "\nJ_z = 1\n")
        assert main(["sweep", "--config", str(cfg), "--output", str(tmp_path / "o.csv")]) == 1
        assert "J_z" in capsys.readouterr().err

    def test_set_override(self, tmp_path, sweep_cfg):
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        assert main(["sweep", "--config", str(sweep_cfg), "--output", str(out1)]) == 0
        assert main(
            ["sweep", "--config", str(sweep_cfg), "--output", str(out2), "--set", "J_m=0.0"]
        ) == 0
        assert "# cfg J_m = 0.0" in out2.read_text()
        assert out1.read_text() != out2.read_text()

    def test_bit_reproducible_bodies(self, tmp_path, sweep_cfg):
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["sweep", "--config", str(sweep_cfg), "--output", str(out1)])
        main(["sweep", "--config", str(sweep_cfg), "--output", str(out2)])
        strip = lambda p: [l for l in p.read_text().splitlines() if not l.startswith("# timestamp")]
        assert strip(out1) == strip(out2)


class TestOptimumCommand:
    def test_matches_dataset_argmax(self, tmp_path, sweep_cfg, capsys):
        out = tmp_path / "sweep.csv"
        main(["sweep", "--config", str(sweep_cfg), "--output", str(out)])
        capsys.readouterr()  # drain the sweep's own output
        assert main(["optimum", "--input", str(out), "--observable", "squeeze_db"]) == 0
        printed = capsys.readouterr().out
        assert printed.startswith("optimum: axis1=")

        from gauge_squeeze.config import parse_config_text, sweep_spec_from_mapping
        from gauge_squeeze import run_sweep, find_optimum

        spec = sweep_spec_from_mapping(parse_config_text(SWEEP_CFG))
        axes, value = find_optimum(run_sweep(spec), "squeeze_db")
        assert f"axis1={axes[0]!r}" in printed
        assert f"axis2={axes[1]!r}" in printed
        assert f"squeeze_db={value!r}" in printed

    def test_missing_file_is_usage_error(self, tmp_path, capsys):
        assert main(["optimum", "--input", str(tmp_path / "nope.csv")]) == 1

    def test_no_stable_rows_is_numerical_error(self, tmp_path, capsys):
        csv = tmp_path / "all_unstable.csv"
        csv.write_text(
            "# gauge-squeeze v0.1.0\naxis1,squeeze_db,stable\n0.0,,false\n1.0,,false\n"
        )
        assert main(["optimum", "--input", str(csv), "--observable", "squeeze_db"]) == 2


class TestStabilityCommand:
    def test_prints_verdict(self, capsys):
        code = main(
            [
                "stability",
                "--set", "J_m=0.1",
                "--set", "theta=1.5708",
                "--set", "beta_m_re=48.41229182759271",
            ]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "spectral_abscissa = " in out
        assert "stable = true" in out
        assert "routh_hurwitz_stable = True" in out

    def test_hz_display(self, capsys):
        assert main(["stability", "--omega-m-hz", "1e6"]) == 0
        assert "[Hz]" in capsys.readouterr().out

    def test_unknown_set_key(self, capsys):
        assert main(["stability", "--set", "bogus=1"]) == 1
        assert "bogus" in capsys.readouterr().err


class TestDynamicsCommand:
    def test_series_and_wigner(self, tmp_path, capsys):
        series = tmp_path / "series.csv"
        wig = tmp_path / "wigner.csv"
        code = main(
            [
                "dynamics",
                "--set", "beta_m_re=48.41229182759271",
                "--set", "t_end=100", "--set", "samples=20",
                "--set", "wigner_points=21",
                "--output", str(series),
                "--wigner-output", str(wig),
            ]
        )
        assert code == 0
        lines = [l for l in series.read_text().splitlines() if not l.startswith("#")]
        assert lines[0] == "time,var_q,var_p"
        assert len(lines) == 22  # header + t=0 + 20 samples
        wlines = [l for l in wig.read_text().splitlines() if not l.startswith("#")]
        assert wlines[0] == "q,p,w"
        assert len(wlines) == 1 + 21 * 21
        assert "# cfg var_q = " in wig.read_text()

    def test_unstable_is_numerical_error(self, tmp_path, capsys):
        code = main(
            [
                "dynamics",
                "--set", "beta_m_re=48.41229182759271",
                "--set", "Delta_tilde=3.5",
                "--set", "G_m=0.2",
                "--set", "G_a=0.0",
                "--set", "J_m=0.0",
                "--set", "t_end=10",
                "--output", str(tmp_path / "unused.csv"),
            ]
        )
        assert code == 2
        assert "UnstableSystem" in capsys.readouterr().err


class TestWignerCommand:
    def test_grid_written(self, tmp_path):
        out = tmp_path / "wigner.csv"
        code = main(
            [
                "wigner",
                "--set", "beta_m_re=48.41229182759271",
                "--set", "wigner_points=31",
                "--output", str(out),
            ]
        )
        assert code == 0
        lines = [l for l in out.read_text().splitlines() if not l.startswith("#")]
        assert lines[0] == "q,p,w"
        assert len(lines) == 1 + 31 * 31


class TestUsageErrors:
    def test_no_command(self, capsys):
        assert main([]) == 1

    def test_unknown_command(self, capsys):
        assert main(["frobnicate"]) == 1

    def test_malformed_set(self, capsys):
        assert main(["stability", "--set", "J_m"]) == 1
