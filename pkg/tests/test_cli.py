import math
import struct

import numpy as np
import pytest

from vacuum_kinetics.cli import (
    ConfigError,
    RunConfig,
    emit_csv,
    main,
    parse_value_spec,
    read_config_file,
)


def read_rows(path):
    lines = [ln for ln in path.read_text().splitlines() if not ln.startswith("#")]
    header = lines[0].split(",")
    return header, [dict(zip(header, ln.split(","))) for ln in lines[1:]]


class TestParamParsing:
    def test_scalar(self):
        assert parse_value_spec("R", "2.5") == [2.5]

    def test_linear_range(self):
        vals = parse_value_spec("R", "1:3:3")
        assert vals == [1.0, 2.0, 3.0]

    def test_log_range(self):
        vals = parse_value_spec("R", "0.01:100:5:log")
        assert np.allclose(vals, [1e-2, 1e-1, 1.0, 1e1, 1e2])

    def test_string_value(self):
        assert parse_value_spec("propagation", "counter") == ["counter"]

    def test_bad_specs(self):
        with pytest.raises(ConfigError):
            parse_value_spec("R", "1:2")
        with pytest.raises(ConfigError):
            parse_value_spec("R", "1:2:0")
        with pytest.raises(ConfigError):
            parse_value_spec("R", "2:1:3")
        with pytest.raises(ConfigError):
            parse_value_spec("R", "-1:1:3:log")
        with pytest.raises(ConfigError):
            parse_value_spec("R", "1:2:3:cubic")


class TestRunConfig:
    def test_unknown_scenario(self):
        with pytest.raises(ConfigError):
            RunConfig(scenario="warp-drive")

    def test_unknown_parameter(self):
        with pytest.raises(ConfigError):
            RunConfig(scenario="cp-stationary", params={"banana": [1.0]})

    def test_non_sweepable_parameter(self):
        with pytest.raises(ConfigError):
            RunConfig(scenario="cp-stationary", params={"omega0": [1.0, 2.0]})

    def test_bad_format(self):
        with pytest.raises(ConfigError):
            RunConfig(scenario="cp-stationary", fmt="parquet")


class TestConfigFile:
    def test_round_trip(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# sweep\nR = 0.5:2:4\nomega0 = 2.0\n")
        params = read_config_file(str(cfg))
        assert params["omega0"] == [2.0]
        assert len(params["R"]) == 4

    def test_line_diagnostics(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("R = 1.0\nnonsense line\n")
        with pytest.raises(ConfigError, match="bad.cfg:2"):
            read_config_file(str(cfg))


class TestEmitCsv:
    def test_empty_records_header_only(self, tmp_path):
        out = tmp_path / "empty.csv"
        emit_csv([], str(out), no_timestamp=True)
        assert out.read_text() == "\n"

    def test_single_record_two_lines(self, tmp_path):
        out = tmp_path / "one.csv"
        emit_csv([{"x [m]": 1.5, "flags [-]": ""}], str(out), no_timestamp=True)
        lines = out.read_text().splitlines()
        assert lines == ["x [m],flags [-]", "1.5,"]

    def test_numeric_round_trip_battery(self, tmp_path):
        battery = [0.1, 1.0 / 3.0, math.pi, 1e-300, 5e-324, 2.2250738585072014e-308,
                   1.7976931348623157e308, -0.0, 123456789.123456789]
        battery += [np.float64(v) for v in battery]  # numpy scalars serialize identically
        out = tmp_path / "battery.csv"
        emit_csv([{"x [-]": v} for v in battery], str(out), no_timestamp=True)
        assert "np.float64" not in out.read_text()
        _, rows = read_rows(out)
        parsed = [float(r["x [-]"]) for r in rows]
        assert all(struct.pack("d", a) == struct.pack("d", float(b))
                   for a, b in zip(parsed, battery))


class TestScenarios:
    def test_stationary_row_count(self, tmp_path):
        out = tmp_path / "stat.csv"
        code = main(["cp-stationary", "--param", "R=0.5:2:3", "--out", str(out),
                     "--no-timestamp"])
        assert code == 0
        header, rows = read_rows(out)
        assert len(rows) == 3
        assert "potential [hbar*omega0]" in header
        assert all("[" in col for col in header)

    def test_determinism_byte_for_byte(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        argv = ["cp-stationary", "--param", "R=0.5:2:3", "--no-timestamp"]
        assert main(argv + ["--out", str(a)]) == 0
        assert main(argv + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_jobs_matches_serial(self, tmp_path):
        a, b = tmp_path / "serial.csv", tmp_path / "par.csv"
        argv = ["unruh-kernels", "--param", "dtau=0.5:2:4", "--no-timestamp"]
        assert main(argv + ["--out", str(a)]) == 0
        assert main(argv + ["--out", str(b), "--jobs", "2"]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_cavity_rates_zero_coupling(self, tmp_path):
        out = tmp_path / "rates.csv"
        code = main(["cavity-rates", "--param", "lambda=0", "--param", "nu=2",
                     "--param", "omega=1", "--param", "alpha=1", "--param", "T=2",
                     "--out", str(out), "--no-timestamp", "--allow-flagged"])
        assert code == 0
        _, rows = read_rows(out)
        assert float(rows[0]["R1 [omega0]"]) == 0.0
        assert float(rows[0]["R2 [omega0]"]) == 0.0

    def test_cavity_master_trace_column(self, tmp_path):
        out = tmp_path / "master.csv"
        code = main(["cavity-master", "--param", "t_final=5", "--param", "rows=6",
                     "--out", str(out), "--no-timestamp"])
        assert code == 0
        _, rows = read_rows(out)
        assert len(rows) == 6
        assert all(abs(float(r["trace [-]"]) - 1.0) < 1e-12 for r in rows)
        assert "p_0 [-]" in rows[0]

    def test_cp_moving_parts(self, tmp_path):
        out = tmp_path / "moving.csv"
        code = main(["cp-moving", "--param", "R=2", "--param", "R0=1",
                     "--out", str(out), "--no-timestamp"])
        assert code == 0
        _, rows = read_rows(out)
        force = float(rows[0]["force_z [hbar*omega0^2/c]"])
        parts = (float(rows[0]["stationary_part [hbar*omega0^2/c]"])
                 + float(rows[0]["residual_part [hbar*omega0^2/c]"]))
        assert abs(force - parts) < 1e-12 * abs(force)

    def test_per_point_errors_recorded_not_fatal(self, tmp_path):
        out = tmp_path / "err.csv"
        # omega = 0 is invalid for cavity-rates; error lands in the column
        code = main(["cavity-rates", "--param", "omega=0", "--out", str(out),
                     "--no-timestamp"])
        assert code == 2  # flagged, not crashed
        _, rows = read_rows(out)
        assert "DomainError" in rows[0]["error [-]"]

    def test_allow_flagged_suppresses_exit_code(self, tmp_path):
        out = tmp_path / "err2.csv"
        code = main(["cavity-rates", "--param", "omega=0", "--out", str(out),
                     "--no-timestamp", "--allow-flagged"])
        assert code == 0

    def test_transient_echo_flagged(self, tmp_path):
        # t_elapsed = 2R/c sits on the light-cone echo; cutoff sensitivity
        # must surface as a flag and a non-zero exit
        out = tmp_path / "echo.csv"
        code = main(["cp-transient", "--param", "R=1", "--param", "t_elapsed=2",
                     "--out", str(out), "--no-timestamp"])
        assert code == 2
        _, rows = read_rows(out)
        assert "cutoff_sensitive" in rows[0]["flags [-]"]

    def test_config_error_exit_code(self, tmp_path):
        assert main(["cp-stationary", "--param", "banana=1"]) == 1
        assert main(["cp-stationary", "--param", "R=1:2"]) == 1

    def test_acceptance_subset(self, tmp_path):
        out = tmp_path / "acc.csv"
        code = main(["acceptance", "--criteria", "1,10", "--out", str(out),
                     "--no-timestamp"])
        assert code == 0
        _, rows = read_rows(out)
        assert [r["criterion [-]"] for r in rows] == ["1", "10"]
        assert all(r["passed [-]"] == "1" for r in rows)

    def test_plot_rendered(self, tmp_path):
        out = tmp_path / "stat.csv"
        png = tmp_path / "stat.png"
        code = main(["cp-stationary", "--param", "R=0.1:10:5:log",
                     "--out", str(out), "--plot", str(png), "--no-timestamp"])
        assert code == 0
        assert png.exists() and png.stat().st_size > 0

    def test_plot_default_path(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        code = main(["unruh-kernels", "--param", "dtau=0.5:2:3",
                     "--out", "k.csv", "--plot", "--no-timestamp"])
        assert code == 0
        assert (tmp_path / "k.png").exists()
