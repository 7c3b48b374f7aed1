import json
from unittest.mock import patch

import numpy as np
import pandas as pd
import pytest

from explicit_heat.boundary import BoundarySpec, Dirichlet
from explicit_heat.mesh import generate_box_mesh
from explicit_heat.output import (
    SUMMARY_FILE,
    SnapshotWriter,
    run_summary,
    snapshot_filename,
    snapshot_frame,
    vtk_text,
    write_snapshot,
    write_summary,
    write_vtk_snapshot,
)
from explicit_heat.solver import Schedule, initial_state, precompute, run


@pytest.fixture
def heated(tet_cube, steel):
    return precompute(tet_cube, steel, BoundarySpec((Dirichlet("bottom", 37.0),)), 1.0)


class TestSnapshotFilename:
    @pytest.mark.parametrize(
        "step,fmt,name",
        [(0, "csv", "T_00000000.csv"), (12, "csv", "T_00000012.csv"), (2000, "vtk", "T_00002000.vtk")],
    )
    def test_names(self, step, fmt, name):
        assert snapshot_filename(step, fmt) == name

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            snapshot_filename(1, "hdf5")


class TestCsvSnapshot:
    def test_frame(self, reference_tet):
        frame = snapshot_frame(reference_tet, np.array([37.0, 37.5, 20.0, 1e-7]))
        assert list(frame.columns) == ["node_id", "x", "y", "z", "temperature"]
        assert frame["node_id"].tolist() == [1, 2, 3, 4]
        assert frame["temperature"].tolist() == ["37", "37.5", "20", "1e-07"]

    def test_wrong_length(self, reference_tet):
        with pytest.raises(ValueError):
            snapshot_frame(reference_tet, np.zeros(3))

    def test_written_file(self, reference_tet, steel, tmp_path):
        state = initial_state(precompute(reference_tet, steel, BoundarySpec(), 0.01), 37.0)
        path = write_snapshot(state, reference_tet, "csv", tmp_path / "snapshots")
        assert path == tmp_path / "snapshots" / "T_00000000.csv"
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "node_id,x,y,z,temperature"
        assert lines[2] == "2,1,0,0,37"
        assert len(lines) == 5
        frame = pd.read_csv(path)
        np.testing.assert_array_equal(frame["temperature"], 37.0)


class TestVtkSnapshot:
    @pytest.mark.parametrize("fixture,cell_type,per_cell", [("reference_tet", "10", 4), ("unit_hex", "12", 8)])
    def test_structure(self, fixture, cell_type, per_cell, request):
        mesh = request.getfixturevalue(fixture)
        lines = vtk_text(mesh, np.full(mesh.n_nodes, 20.0)).splitlines()
        assert lines[0] == "# vtk DataFile Version 3.0"
        assert lines[2] == "ASCII"
        assert lines[3] == "DATASET UNSTRUCTURED_GRID"
        assert lines[4] == f"POINTS {mesh.n_nodes} double"
        cells = lines.index(f"CELLS 1 {per_cell + 1}")
        assert lines[cells + 1].split()[0] == str(per_cell)
        assert lines[lines.index("CELL_TYPES 1") + 1] == cell_type
        scalars = lines.index("LOOKUP_TABLE default")
        assert lines[scalars + 1:] == ["20"] * mesh.n_nodes

    def test_connectivity_is_zero_based(self, reference_tet):
        lines = vtk_text(reference_tet, np.zeros(4)).splitlines()
        assert "4 0 1 2 3" in lines

    @staticmethod
    def _read_vtk(text):
        lines = text.splitlines()

        def block(header):
            start = next(i for i, line in enumerate(lines) if line.startswith(header))
            return start, lines[start].split()

        start, fields = block("POINTS ")
        n_points = int(fields[1])
        points = np.array([line.split() for line in lines[start + 1:start + 1 + n_points]], dtype=float)
        start, fields = block("CELLS ")
        n_cells = int(fields[1])
        cells = [[int(v) for v in line.split()] for line in lines[start + 1:start + 1 + n_cells]]
        assert sum(len(row) for row in cells) == int(fields[2])
        start, fields = block("CELL_TYPES ")
        types = np.array(lines[start + 1:start + 1 + int(fields[1])], dtype=int)
        start, fields = block("POINT_DATA ")
        assert lines[start + 1] == "SCALARS temperature double 1"
        assert lines[start + 2] == "LOOKUP_TABLE default"
        data = np.array(lines[start + 3:start + 3 + int(fields[1])], dtype=float)
        return points, cells, types, data

    @pytest.mark.parametrize("kind,cell_type", [("tet4", 10), ("hex8", 12)])
    def test_file_reads_back(self, kind, cell_type, tmp_path):
        mesh = generate_box_mesh(kind, (3, 2, 2), (0.3, 0.2, 0.1))
        T = 100.0 * mesh.nodes[:, 0] + mesh.nodes[:, 1] - 7.5 * mesh.nodes[:, 2] + 1.0 / 3.0
        path = tmp_path / "T.vtk"
        write_vtk_snapshot(path, mesh, T)
        points, cells, types, data = self._read_vtk(path.read_text(encoding="utf-8"))
        np.testing.assert_array_equal(points, mesh.nodes)
        per_cell = mesh.elements.shape[1]
        assert all(row[0] == per_cell for row in cells)
        np.testing.assert_array_equal(np.array([row[1:] for row in cells]), mesh.elements)
        np.testing.assert_array_equal(types, np.full(mesh.n_elements, cell_type))
        np.testing.assert_array_equal(data, T)

    def test_hexahedron_node_order(self, tmp_path):
        # bottom quad counter-clockwise seen from the top quad, top nodes stacked on bottom ones
        mesh = generate_box_mesh("hex8", (2, 2, 2), (0.2, 0.4, 0.6))
        path = tmp_path / "T.vtk"
        write_vtk_snapshot(path, mesh, np.zeros(mesh.n_nodes))
        points, cells, _, _ = self._read_vtk(path.read_text(encoding="utf-8"))
        for row in cells:
            p = points[row[1:]]
            bottom, top = p[:4], p[4:]
            rise = top - bottom
            np.testing.assert_allclose(rise, np.broadcast_to(rise[0], rise.shape))
            normal = np.cross(bottom[1] - bottom[0], bottom[3] - bottom[0])
            assert np.dot(normal, rise[0]) > 0
            assert np.dot(np.cross(bottom[2] - bottom[1], bottom[0] - bottom[1]), rise[0]) > 0


class TestSnapshotWriter:
    def test_run_snapshots(self, heated, tmp_path):
        writer = SnapshotWriter(heated.mesh, tmp_path, "vtk")
        result = run(heated, 20.0, Schedule(duration=10.0, every=4), on_snapshot=writer)
        assert result.snapshots == []
        names = [p.name for p in writer.written]
        assert names == ["T_00000000.vtk", "T_00000004.vtk", "T_00000008.vtk", "T_00000010.vtk"]
        assert all(p.exists() for p in writer.written)

    def test_unknown_format(self, tet_cube, tmp_path):
        with pytest.raises(ValueError):
            SnapshotWriter(tet_cube, tmp_path, "png")

    def test_unwritable_directory(self, heated, tmp_path, caplog):
        blocker = tmp_path / "file"
        blocker.write_text("not a directory")
        state = initial_state(heated, 20.0)
        with pytest.raises(OSError):
            write_snapshot(state, heated.mesh, "csv", blocker / "out")
        assert "Failed to write snapshot" in caplog.text


class TestSummary:
    def test_keys(self, heated):
        result = run(heated, 20.0, Schedule(duration=5.0, every=5))
        summary = run_summary(result, heated)
        assert summary["steps"] == 5
        assert summary["final_time"] == pytest.approx(5.0)
        assert summary["dt"] == 1.0
        assert summary["steady_step"] is None
        assert set(summary["wall_time_ms"]) == {"per_step_mean", "per_step_median", "per_step_max", "total"}
        expected_model = {"form": "TI", "element_kind": "tet4", "nodes": 64, "elements": heated.mesh.n_elements}
        assert summary["model"] == expected_model
        assert summary["stability"]["method"] == "gershgorin"
        assert summary["final_temperature"]["max"] == pytest.approx(37.0)

    def test_write(self, heated, tmp_path):
        result = run(heated, 20.0, Schedule(duration=2.0))
        path = write_summary(tmp_path / "out", result, heated, {"config": {"mesh": "cube.mesh"}})
        assert path.name == SUMMARY_FILE
        document = json.loads(path.read_text(encoding="utf-8"))
        assert document["steps"] == 2
        assert document["config"] == {"mesh": "cube.mesh"}

    def test_write_failure(self, heated, tmp_path):
        result = run(heated, 20.0, Schedule(duration=1.0))
        with patch("pathlib.Path.write_text", side_effect=PermissionError("read-only")):
            with pytest.raises(PermissionError):
                write_summary(tmp_path, result, heated)
