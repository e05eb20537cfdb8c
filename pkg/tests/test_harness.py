import json

import numpy as np
import pytest

from mlsbath.cli import main
from mlsbath.harness import (
    ConfigError,
    SweepSpec,
    evaluate_sweep_point,
    load_config,
    run_scenario,
    run_sweep,
    write_sweep_csv,
    _fmt,
)

BASE_CONFIG = """
[system]
kind = three-level

[spectrum]
kind = rectangular
area = 5.0
center = 4.0
width = 8.0

[evolution]
t_max = 0.5
dt = 0.005

[fit]
t_lo = 0.1
t_hi = 0.5
"""


def write(tmp_path, text, name="run.ini"):
    path = tmp_path / name
    path.write_text(text)
    return path


class TestConfigParsing:
    def test_base_round_trip(self, tmp_path):
        scenario, sweep, table = load_config(write(tmp_path, BASE_CONFIG))
        assert scenario.system.kind == "three-level"
        assert scenario.model.area == 5.0
        assert scenario.evolution.dt == 0.005
        assert scenario.window.t_hi == 0.5
        assert sweep is None and table == {}

    def test_defaults_applied(self, tmp_path):
        text = "[system]\nkind = two-level\n[spectrum]\nkind = lorentzian\narea = 5\ncenter = 0\nwidth = 2\n"
        scenario, _, _ = load_config(write(tmp_path, text))
        assert scenario.evolution.dt == 0.001
        assert scenario.window.t_lo == 1.0
        assert abs(scenario.state.a) ** 2 == pytest.approx(0.1)

    def test_multilevel_system(self, tmp_path):
        text = BASE_CONFIG.replace(
            "kind = three-level", "kind = multilevel\nlevels = 6\ndelta = 8.0"
        )
        scenario, _, _ = load_config(write(tmp_path, text))
        spec = scenario.system.build()
        assert spec.n_levels == 6
        assert spec.coupling[0, 1] == pytest.approx(0.1 * np.exp(-1 / 8))

    def test_custom_system(self, tmp_path):
        text = BASE_CONFIG.replace(
            "kind = three-level",
            "kind = custom\nenergies = 0.5 0.5 2.5\ncoupling = 0 0.1 0; 0.1 0 0.1; 0 0.1 0",
        )
        scenario, _, _ = load_config(write(tmp_path, text))
        assert scenario.system.build().coupling[1, 2] == 0.1

    def test_asymmetric_coupling_rejected(self, tmp_path):
        text = BASE_CONFIG.replace(
            "kind = three-level",
            "kind = custom\nenergies = 0.5 0.5\ncoupling = 0 0.1; 0.2 0",
        )
        with pytest.raises(ConfigError, match="symmetric"):
            load_config(write(tmp_path, text))

    def test_unknown_key_rejected(self, tmp_path):
        with pytest.raises(ConfigError, match="unknown key"):
            load_config(write(tmp_path, BASE_CONFIG + "\n[rpa]\nbogus = 1\n"))

    def test_unknown_section_rejected(self, tmp_path):
        with pytest.raises(ConfigError, match="unknown section"):
            load_config(write(tmp_path, BASE_CONFIG + "\n[extra]\nx = 1\n"))

    def test_bad_type_names_section_and_key(self, tmp_path):
        bad = BASE_CONFIG.replace("area = 5.0", "area = lots")
        with pytest.raises(ConfigError, match=r"\[spectrum\] area"):
            load_config(write(tmp_path, bad))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            load_config(tmp_path / "absent.ini")

    def test_state_override(self, tmp_path):
        text = BASE_CONFIG + "\n[state]\na = 1.0\nb = 0.0\n"
        scenario, _, _ = load_config(write(tmp_path, text))
        assert scenario.state.a == 1.0

    def test_sweep_section(self, tmp_path):
        text = BASE_CONFIG + "\n[sweep]\nkind = spectral-area\ngrid = 1 2 5\n"
        _, sweep, _ = load_config(write(tmp_path, text))
        assert sweep.kind == "spectral-area"
        assert sweep.grid == (1.0, 2.0, 5.0)

    def test_sweep_log_grid(self, tmp_path):
        text = BASE_CONFIG + "\n[sweep]\nkind = spectral-area\ngrid_log = 1 100 3\n"
        _, sweep, _ = load_config(write(tmp_path, text))
        assert sweep.grid == pytest.approx((1.0, 10.0, 100.0))

    def test_non_monotone_grid_rejected(self, tmp_path):
        text = BASE_CONFIG + "\n[sweep]\nkind = spectral-area\ngrid = 1 5 2\n"
        with pytest.raises(ConfigError, match="monotone"):
            load_config(write(tmp_path, text))

    def test_config_hash_stable(self, tmp_path):
        s1, _, _ = load_config(write(tmp_path, BASE_CONFIG, "a.ini"))
        s2, _, _ = load_config(write(tmp_path, BASE_CONFIG, "b.ini"))
        assert s1.config_hash() == s2.config_hash()
        assert len(s1.config_hash()) == 16


class TestRunScenario:
    def test_outputs_and_determinism(self, tmp_path):
        scenario, _, _ = load_config(write(tmp_path, BASE_CONFIG))
        out1 = tmp_path / "o1"
        out2 = tmp_path / "o2"
        run_scenario(scenario, out1)
        run_scenario(scenario, out2)
        t1 = (out1 / "trajectory.csv").read_bytes()
        t2 = (out2 / "trajectory.csv").read_bytes()
        assert t1 == t2
        assert (out1 / "rates.json").read_bytes() == (out2 / "rates.json").read_bytes()

    def test_trajectory_row_count_and_header(self, tmp_path):
        scenario, _, _ = load_config(write(tmp_path, BASE_CONFIG))
        out = tmp_path / "out"
        run_scenario(scenario, out)
        lines = (out / "trajectory.csv").read_text().splitlines()
        assert len(lines) == 1 + 101  # header + n_steps + 1
        header = lines[0].split(",")
        assert header[0] == "t"
        assert "re_rho_1_1" in header and "im_rho_2_3" in header
        assert header[-3:] == ["population_2", "coherence_12", "leakage"]

    def test_accepts_config_path_directly(self, tmp_path):
        out = tmp_path / "out"
        traj, rates = run_scenario(write(tmp_path, BASE_CONFIG), out)
        assert (out / "trajectory.csv").exists()
        assert rates.relaxation_rate > 0

    def test_rates_json_fields(self, tmp_path):
        scenario, _, _ = load_config(write(tmp_path, BASE_CONFIG))
        out = tmp_path / "out"
        _, rates = run_scenario(scenario, out)
        payload = json.loads((out / "rates.json").read_text())
        assert payload["relaxation_rate"] == rates.relaxation_rate
        assert len(payload["r_squared"]) == 3
        assert payload["config_hash"] == scenario.config_hash()

    def test_full_precision_round_trip(self, tmp_path):
        scenario, _, _ = load_config(write(tmp_path, BASE_CONFIG))
        out = tmp_path / "out"
        traj, _ = run_scenario(scenario, out)
        lines = (out / "trajectory.csv").read_text().splitlines()
        last = lines[-1].split(",")
        assert float(last[0]) == traj.times[-1]
        assert float(last[-3]) == traj.population_2[-1]


class TestSweeps:
    def make_sweep(self, tmp_path, kind="spectral-area", grid="2 5", extra=""):
        text = BASE_CONFIG + f"\n[sweep]\nkind = {kind}\ngrid = {grid}\n" + extra
        _, sweep, _ = load_config(write(tmp_path, text))
        return sweep

    def test_row_per_point_sorted(self, tmp_path):
        sweep = self.make_sweep(tmp_path, grid="5 2".replace(" ", " "))
        # descending grid still yields ascending rows
        sweep = SweepSpec(kind=sweep.kind, grid=(5.0, 2.0), base=sweep.base)
        rows = run_sweep(sweep)
        assert [r["parameter"] for r in rows] == [2.0, 5.0]
        assert all(r["status"] == "ok" for r in rows)

    def test_serial_parallel_identical(self, tmp_path):
        sweep = self.make_sweep(tmp_path, grid="2 5 8")
        serial = run_sweep(sweep, threads=1)
        parallel = run_sweep(sweep, threads=2)
        assert serial == parallel

    def test_sweep_csv_and_sidecar(self, tmp_path):
        sweep = self.make_sweep(tmp_path, grid="2 5")
        rows = run_sweep(sweep)
        path = tmp_path / "sweep.csv"
        write_sweep_csv(path, sweep, rows)
        lines = path.read_text().splitlines()
        assert len(lines) == 3
        assert lines[0].split(",")[0] == "parameter"
        sidecar = (tmp_path / "sweep.csv.meta.ini").read_text()
        assert sweep.base.config_hash() in sidecar
        assert "[spectrum]" in sidecar

    def test_point_failure_recorded_in_row(self, tmp_path):
        sweep = self.make_sweep(tmp_path, grid="2 5")
        sweep = SweepSpec(kind=sweep.kind, grid=(-1.0, 5.0), base=sweep.base)
        rows = run_sweep(sweep)
        assert rows[0]["status"].startswith("error")
        assert rows[1]["status"] == "ok"

    def test_correlator_sweep(self, tmp_path):
        sweep = self.make_sweep(tmp_path, kind="correlator", grid="0 0.5 1.0")
        rows = run_sweep(sweep)
        assert rows[0]["re_f"] == pytest.approx(5.0)
        assert {"re_f", "im_f"} <= set(rows[1])

    def test_rpa_sweep(self, tmp_path):
        text = BASE_CONFIG.replace("center = 4.0", "center = 8.0").replace(
            "width = 8.0", "width = 1.0"
        )
        text += "\n[rpa]\nladder = 3\nscan_points = 2000\n[sweep]\nkind = rpa-area\ngrid = 5 15\n"
        _, sweep, _ = load_config(write(tmp_path, text))
        rows = run_sweep(sweep)
        assert all(r["status"] == "ok" for r in rows)
        assert rows[1]["n_total"] > rows[0]["n_total"]

    def test_levels_sweep_requires_multilevel(self, tmp_path):
        with pytest.raises(ConfigError, match="multilevel"):
            self.make_sweep(tmp_path, kind="levels", grid="2 3")

    def test_levels_sweep(self, tmp_path):
        text = BASE_CONFIG.replace(
            "kind = three-level", "kind = multilevel\nlevels = 3\nflat = true"
        )
        text += "\n[sweep]\nkind = levels\ngrid = 2 3\n"
        _, sweep, _ = load_config(write(tmp_path, text))
        rows = run_sweep(sweep)
        assert all(r["status"] == "ok" for r in rows)

    def test_unknown_kind_rejected(self, tmp_path):
        with pytest.raises(ConfigError, match="sweep kind"):
            self.make_sweep(tmp_path, kind="nonsense")


class TestCli:
    def test_evolve_and_rates(self, tmp_path):
        cfg = write(tmp_path, BASE_CONFIG)
        assert main(["evolve", "--config", str(cfg), "--out", str(tmp_path / "e")]) == 0
        assert (tmp_path / "e" / "trajectory.csv").exists()
        assert main(["rates", "--config", str(cfg), "--out", str(tmp_path / "r")]) == 0
        assert (tmp_path / "r" / "rates.json").exists()

    def test_overrides(self, tmp_path):
        cfg = write(tmp_path, BASE_CONFIG)
        out = tmp_path / "o"
        assert main(["evolve", "--config", str(cfg), "--out", str(out), "--dt", "0.01",
                     "--tmax", "0.2"]) == 0
        lines = (out / "trajectory.csv").read_text().splitlines()
        assert len(lines) == 1 + 21

    def test_sweep_command(self, tmp_path):
        cfg = write(tmp_path, BASE_CONFIG + "\n[sweep]\nkind = spectral-area\ngrid = 2 5\n")
        out = tmp_path / "s"
        assert main(["sweep", "--config", str(cfg), "--out", str(out), "--threads", "2"]) == 0
        assert (out / "sweep.csv").exists()
        assert (out / "sweep.csv.meta.ini").exists()

    def test_sweep_without_section_fails(self, tmp_path):
        cfg = write(tmp_path, BASE_CONFIG)
        assert main(["sweep", "--config", str(cfg), "--out", str(tmp_path / "x")]) == 1

    def test_correlator_table(self, tmp_path):
        cfg = write(tmp_path, BASE_CONFIG + "\n[table]\nt_max = 0.2\ndt = 0.05\n")
        out = tmp_path / "c"
        assert main(["correlator-table", "--config", str(cfg), "--out", str(out)]) == 0
        lines = (out / "correlator.csv").read_text().splitlines()
        assert lines[0] == "tau,re_f,im_f"
        assert len(lines) == 1 + 5
        assert float(lines[1].split(",")[1]) == pytest.approx(5.0)

    def test_spectrum_table(self, tmp_path):
        cfg = write(tmp_path, BASE_CONFIG + "\n[table]\nomega_min = 0\nomega_max = 8\npoints = 9\n")
        out = tmp_path / "sp"
        assert main(["spectrum-table", "--config", str(cfg), "--out", str(out)]) == 0
        lines = (out / "spectrum.csv").read_text().splitlines()
        assert lines[0] == "omega,intensity"
        assert len(lines) == 10

    def test_rpa_command(self, tmp_path):
        text = BASE_CONFIG.replace("center = 4.0", "center = 8.0").replace(
            "width = 8.0", "width = 1.0"
        ) + "\n[rpa]\nladder = 3\nscan_points = 2000\n"
        cfg = write(tmp_path, text)
        out = tmp_path / "rpa"
        assert main(["rpa", "--config", str(cfg), "--out", str(out)]) == 0
        payload = json.loads((out / "rpa.json").read_text())
        assert payload["n_total"] > 0
        assert payload["delta_n"] > 0

    def test_invalid_config_nonzero_exit(self, tmp_path, capsys):
        cfg = write(tmp_path, BASE_CONFIG.replace("area = 5.0", "area = -1"))
        assert main(["evolve", "--config", str(cfg), "--out", str(tmp_path / "x")]) == 1
        assert "error" in capsys.readouterr().err


class TestFormatting:
    def test_fmt_is_full_precision(self):
        x = 0.1 + 0.2
        assert float(_fmt(x)) == x
        assert float(_fmt(1.0 / 3.0)) == 1.0 / 3.0
