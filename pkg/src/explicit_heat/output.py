"""Snapshot and summary writers.

CSV snapshots have the header ``node_id,x,y,z,temperature`` and one row per
node; numbers are written in their shortest round-trip form (``37``, not
``37.0``). VTK snapshots are legacy ASCII unstructured grids with the
temperature as point data. Files are named ``T_<step:08d>.<csv|vtk>``.
"""

import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np
import pandas as pd
from numpy.typing import NDArray

from .mesh import Mesh, format_number
from .solver import PrecomputedModel, RunResult, SimulationState

# Configure module logger
logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())

VTK_CELL_TYPES = {"tet4": 10, "hex8": 12}
SUMMARY_FILE = "summary.json"


def snapshot_filename(step: int, fmt: str = "csv") -> str:
    """``T_00000012.csv`` for step 12."""
    if fmt not in ("csv", "vtk"):
        raise ValueError(f"Unknown snapshot format: {fmt!r}")
    return f"T_{step:08d}.{fmt}"


def _column(values: NDArray[np.float64]) -> list:
    return [format_number(v) for v in values]


def snapshot_frame(mesh: Mesh, T: NDArray[np.float64]) -> pd.DataFrame:
    """Nodal table with 1-based node ids and formatted values."""
    T = np.asarray(T, dtype=float)
    if T.shape != (mesh.n_nodes,):
        raise ValueError(f"Expected {mesh.n_nodes} temperatures, got shape {T.shape}")
    return pd.DataFrame(
        {
            "node_id": np.arange(1, mesh.n_nodes + 1),
            "x": _column(mesh.nodes[:, 0]),
            "y": _column(mesh.nodes[:, 1]),
            "z": _column(mesh.nodes[:, 2]),
            "temperature": _column(T),
        }
    )


def write_csv_snapshot(path: Union[str, Path], mesh: Mesh, T: NDArray[np.float64]) -> None:
    snapshot_frame(mesh, T).to_csv(path, index=False, lineterminator="\n")


def vtk_text(mesh: Mesh, T: NDArray[np.float64], title: str = "explicit_heat temperature") -> str:
    """Legacy VTK ASCII unstructured grid with a ``temperature`` scalar."""
    T = np.asarray(T, dtype=float)
    k = mesh.nodes_per_element
    out = ["# vtk DataFile Version 3.0", title.splitlines()[0][:255] if title else "temperature", "ASCII"]
    out.append("DATASET UNSTRUCTURED_GRID")
    out.append(f"POINTS {mesh.n_nodes} double")
    out.extend(" ".join(format_number(c) for c in point) for point in mesh.nodes)
    out.append(f"CELLS {mesh.n_elements} {mesh.n_elements * (k + 1)}")
    out.extend(f"{k} " + " ".join(str(n) for n in element) for element in mesh.elements)
    out.append(f"CELL_TYPES {mesh.n_elements}")
    out.extend([str(VTK_CELL_TYPES[mesh.element_kind])] * mesh.n_elements)
    out.append(f"POINT_DATA {mesh.n_nodes}")
    out.append("SCALARS temperature double 1")
    out.append("LOOKUP_TABLE default")
    out.extend(format_number(v) for v in T)
    return "\n".join(out) + "\n"


def write_vtk_snapshot(path: Union[str, Path], mesh: Mesh, T: NDArray[np.float64], title: Optional[str] = None) -> None:
    Path(path).write_text(vtk_text(mesh, T, title or "explicit_heat temperature"), encoding="utf-8")


def write_snapshot(state: SimulationState, mesh: Mesh, fmt: str, directory: Union[str, Path]) -> Path:
    """Write one snapshot file and return its path.

    Raises:
        OSError: If the directory cannot be created or the file written
    """
    directory = Path(directory)
    path = directory / snapshot_filename(state.step, fmt)
    try:
        directory.mkdir(parents=True, exist_ok=True)
        if fmt == "csv":
            write_csv_snapshot(path, mesh, state.T)
        else:
            write_vtk_snapshot(path, mesh, state.T, f"explicit_heat step {state.step} t={format_number(state.time)}")
    except OSError as e:
        logger.error(f"Failed to write snapshot {path}: {e}")
        raise
    logger.info(f"Wrote snapshot {path}")
    return path


class SnapshotWriter:
    """Snapshot callback for ``solver.run`` that streams files to a directory.

    Example:
        ```python
        writer = SnapshotWriter(mesh, "out", "vtk")
        run(model, 37.0, schedule, on_snapshot=writer)
        writer.written  # paths in write order
        ```
    """

    def __init__(self, mesh: Mesh, directory: Union[str, Path], fmt: str = "csv"):
        snapshot_filename(0, fmt)
        self.mesh = mesh
        self.directory = Path(directory)
        self.fmt = fmt
        self.written: list = []

    def __call__(self, state: SimulationState) -> None:
        self.written.append(write_snapshot(state, self.mesh, self.fmt, self.directory))


def _finite_or_none(value: float) -> Optional[float]:
    return value if math.isfinite(value) else None


def run_summary(result: RunResult, model: PrecomputedModel) -> Dict[str, Any]:
    """Content of ``summary.json``."""
    stability = model.stability
    return {
        "steps": result.steps,
        "final_time": result.final_time,
        "dt": model.dt,
        "steady_step": result.steady_step,
        "wall_time_ms": {
            "per_step_mean": result.timing.mean_ms,
            "per_step_median": result.timing.median_ms,
            "per_step_max": result.timing.max_ms,
            "total": result.timing.total_ms,
        },
        "real_time_factor": _finite_or_none(result.timing.real_time_factor),
        "stability": None if stability is None else {
            "method": stability.method,
            "lambda_max": stability.lambda_max,
            "critical_dt": _finite_or_none(stability.critical_dt),
        },
        "model": {
            "form": model.form,
            "element_kind": model.mesh.element_kind,
            "nodes": model.n_nodes,
            "elements": model.mesh.n_elements,
        },
        "final_temperature": {
            "min": float(np.min(result.final_state.T)),
            "max": float(np.max(result.final_state.T)),
        },
    }


def write_summary(
    directory: Union[str, Path],
    result: RunResult,
    model: PrecomputedModel,
    extra: Optional[Dict[str, Any]] = None,
) -> Path:
    """Write ``summary.json`` into ``directory``.

    Raises:
        OSError: If the file cannot be written
    """
    summary = run_summary(result, model)
    if extra:
        summary.update(extra)
    path = Path(directory) / SUMMARY_FILE
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")
    except OSError as e:
        logger.error(f"Failed to write summary {path}: {e}")
        raise
    logger.info(f"Wrote summary {path}")
    return path
