import json

import numpy as np
import pytest
from typer.testing import CliRunner

from explicit_heat.cli import app
from explicit_heat.mesh import generate_box_mesh, load_mesh

runner = CliRunner()

TD_MATERIAL = {
    "density": 1000.0,
    "specific_heat": [[37, 2000], [337, 8000]],
    "conductivity": [[37, 200], [337, 2000]],
}


@pytest.fixture
def small_mesh():
    return generate_box_mesh("tet4", (2, 2, 2), (0.1, 0.1, 0.1))


class TestRun:
    def test_run(self, config_file):
        result = runner.invoke(app, ["run", str(config_file)])
        assert result.exit_code == 0, result.output
        assert result.stdout.startswith("2000 steps, t = 10 s")
        out = config_file.parent / "out"
        assert sorted(p.name for p in out.glob("T_*.csv")) == ["T_00000000.csv", "T_00001000.csv", "T_00002000.csv"]
        summary = json.loads((out / "summary.json").read_text(encoding="utf-8"))
        assert summary["steps"] == 2000
        assert summary["final_time"] == pytest.approx(10.0)
        assert summary["config"]["time"]["dt"] == 0.005

    def test_out_override(self, config_file, tmp_path):
        result = runner.invoke(app, ["run", str(config_file), "--out", str(tmp_path / "elsewhere")])
        assert result.exit_code == 0, result.output
        assert (tmp_path / "elsewhere" / "summary.json").exists()

    def test_vtk_output(self, tmp_path, small_mesh, make_config):
        path = make_config(tmp_path, small_mesh, output={"every": 1000, "directory": "out", "format": "vtk"})
        assert runner.invoke(app, ["run", str(path)]).exit_code == 0
        assert (tmp_path / "out" / "T_00002000.vtk").exists()

    def test_stop_on_steady(self, tmp_path, small_mesh, make_config):
        path = make_config(tmp_path, small_mesh, time={"dt": 0.5, "stop_on_steady": True, "steady_tolerance": 1e-6})
        result = runner.invoke(app, ["run", str(path)])
        assert result.exit_code == 0, result.output
        assert "steady at step" in result.stdout

    def test_deterministic(self, config_file, tmp_path):
        runner.invoke(app, ["run", str(config_file), "--out", str(tmp_path / "a")])
        runner.invoke(app, ["run", str(config_file), "--out", str(tmp_path / "b")])
        first = (tmp_path / "a" / "T_00002000.csv").read_bytes()
        assert first == (tmp_path / "b" / "T_00002000.csv").read_bytes()

    def test_unwritable_output(self, config_file, tmp_path):
        blocker = tmp_path / "blocker"
        blocker.write_text("a file, not a directory")
        result = runner.invoke(app, ["run", str(config_file), "--out", str(blocker / "out")])
        assert result.exit_code == 3

    def test_missing_mesh(self, config_file):
        (config_file.parent / "mesh.txt").unlink()
        assert runner.invoke(app, ["run", str(config_file)]).exit_code == 3

    def test_invalid_config(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text('{"mesh": ', encoding="utf-8")
        result = runner.invoke(app, ["run", str(path)])
        assert result.exit_code == 1

    def test_config_error_names_field(self, tmp_path, small_mesh, make_config):
        path = make_config(tmp_path, small_mesh, time={"dt": -1.0, "duration": 1.0})
        result = runner.invoke(app, ["run", str(path)])
        assert result.exit_code == 1
        assert "time.dt" in result.output

    def test_strict_stability(self, tmp_path, small_mesh, make_config):
        path = make_config(tmp_path, small_mesh, time={"dt": 100.0, "duration": 1000.0, "strict_stability": True})
        result = runner.invoke(app, ["run", str(path)])
        assert result.exit_code == 2
        assert "critical step" in result.output

    def test_divergence(self, tmp_path, small_mesh, make_config):
        path = make_config(tmp_path, small_mesh, time={"dt": 100.0, "duration": 100000.0, "strict_stability": False})
        with np.errstate(all="ignore"):
            result = runner.invoke(app, ["run", str(path)])
        assert result.exit_code == 2
        assert "Non-finite temperature" in result.output

    def test_unknown_log_level(self, config_file):
        assert runner.invoke(app, ["--log-level", "chatty", "run", str(config_file)]).exit_code == 1


class TestPatchTest:
    def test_hex(self):
        result = runner.invoke(app, ["patch-test"])
        assert result.exit_code == 0, result.output
        assert result.stdout.startswith("PASS: hex8, 1 interior node(s)")

    def test_tet_with_offset(self):
        result = runner.invoke(app, ["patch-test", "--kind", "tet4", "--offset", "10"])
        assert result.exit_code == 0, result.output
        assert result.stdout.startswith("PASS: tet4")

    def test_too_coarse(self):
        assert runner.invoke(app, ["patch-test", "--n", "2"]).exit_code == 1


class TestDtEstimate:
    def test_both_methods(self, config_file):
        result = runner.invoke(app, ["dt-estimate", str(config_file)])
        assert result.exit_code == 0, result.output
        assert "gershgorin" in result.stdout
        assert "dense-eigen" in result.stdout
        assert "critical_dt_s" in result.stdout

    def test_single_method(self, config_file):
        result = runner.invoke(app, ["dt-estimate", str(config_file), "--method", "dense-eigen"])
        assert result.exit_code == 0, result.output
        assert "gershgorin" not in result.stdout

    def test_ignores_strict_flag(self, tmp_path, small_mesh, make_config):
        path = make_config(tmp_path, small_mesh, time={"dt": 100.0, "duration": 1000.0, "strict_stability": True})
        result = runner.invoke(app, ["dt-estimate", str(path)])
        assert result.exit_code == 0, result.output


class TestBench:
    def test_ti_and_td_ratio(self, tmp_path, small_mesh, make_config):
        ti = make_config(tmp_path, small_mesh)
        (tmp_path / "td").mkdir()
        td = make_config(
            tmp_path / "td", small_mesh, mesh="../mesh.txt", material=TD_MATERIAL, initial_temperature=37.0
        )
        result = runner.invoke(app, ["bench", str(ti), str(td), "--steps", "5", "--repeats", "1"])
        assert result.exit_code == 0, result.output
        assert "mean_ms" in result.stdout
        assert "TD/TI per-step ratio on mesh.txt" in result.stdout

    def test_implicit_column(self, config_file):
        result = runner.invoke(app, ["bench", str(config_file), "--steps", "3", "--repeats", "1", "--implicit"])
        assert result.exit_code == 0, result.output
        assert "implicit_ms" in result.stdout

    def test_zero_steps(self, config_file):
        assert runner.invoke(app, ["bench", str(config_file), "--steps", "0"]).exit_code == 1


class TestValidate:
    def test_validate(self, config_file):
        result = runner.invoke(app, ["validate", str(config_file), "--steps", "20"])
        assert result.exit_code == 0, result.output
        assert "relative_error" in result.stdout
        assert len(result.stdout.strip().splitlines()) == 5

    def test_steady_comparison(self, tmp_path, small_mesh, make_config):
        path = make_config(tmp_path, small_mesh, time={"dt": 0.5, "stop_on_steady": True, "steady_tolerance": 1e-9})
        result = runner.invoke(app, ["validate", str(path), "--steps", "10"])
        assert result.exit_code == 0, result.output
        assert "Steady state at step" in result.stdout


class TestGenmesh:
    def test_cube(self, tmp_path):
        out = tmp_path / "cube.mesh"
        result = runner.invoke(app, ["genmesh", "--out", str(out), "--kind", "tet4", "--n", "3"])
        assert result.exit_code == 0, result.output
        assert result.stdout.startswith("Wrote 27 nodes, 48 tet4 elements")
        mesh = load_mesh(out)
        assert mesh.n_nodes == 27
        assert set(mesh.node_sets) >= {"left", "right", "bottom", "top"}

    def test_box(self, tmp_path):
        out = tmp_path / "bar.mesh"
        args = ["genmesh", "--out", str(out), "--nx", "20", "--lx", "0.1", "--ly", "0.005", "--lz", "0.005"]
        result = runner.invoke(app, args)
        assert result.exit_code == 0, result.output
        mesh = load_mesh(out)
        assert mesh.n_elements == 20
        assert mesh.nodes[:, 0].max() == pytest.approx(0.1)

    def test_invalid_n(self, tmp_path):
        assert runner.invoke(app, ["genmesh", "--out", str(tmp_path / "x.mesh"), "--n", "1"]).exit_code == 1


class TestUsageErrors:
    """Command-line mistakes exit 1, distinct from numerical failures (2)."""

    @pytest.mark.parametrize(
        "args",
        [
            ["run"],
            ["genmesh", "--bogus"],
            ["patch-test", "--kind", "quad"],
            ["patch-test", "--n", "three"],
            ["solve"],
        ],
    )
    def test_exit_code(self, args):
        result = runner.invoke(app, args)
        assert result.exit_code == 1, result.output

    def test_message_shown(self):
        result = runner.invoke(app, ["patch-test", "--kind", "quad"])
        assert "quad" in result.output

    def test_help_still_succeeds(self):
        result = runner.invoke(app, ["run", "--help"])
        assert result.exit_code == 0
        assert "Run a simulation" in result.output
