"""Shared meshes, materials and configuration files for the test suite."""

import json
import logging
from pathlib import Path

import numpy as np
import pytest

from explicit_heat.material import MaterialModel, PropertyTable
from explicit_heat.mesh import Facet, Mesh, generate_box_mesh, parse_mesh, save_mesh

REFERENCE_TET_TEXT = """\
mesh-version 1
# the unit reference tetrahedron
nodes 4
1 0 0 0
2 1 0 0
3 0 1 0
4 0 0 1
elements tet4 1
1 1 2 3 4
nodeset base 3
1 2 3
nodeset apex 1
4
facetset base 1
3 1 3 2
"""

UNIT_CUBE = np.array(
    [
        [0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0],
        [1.0, 1.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
        [1.0, 0.0, 1.0],
        [1.0, 1.0, 1.0],
        [0.0, 1.0, 1.0],
    ]
)


@pytest.fixture(autouse=True)
def package_log_level():
    """Undo the package level set by CLI invocations."""
    yield
    logging.getLogger("explicit_heat").setLevel(logging.NOTSET)


@pytest.fixture
def reference_tet() -> Mesh:
    """The reference tetrahedron with node sets base/apex and facet set base."""
    return parse_mesh(REFERENCE_TET_TEXT)


@pytest.fixture
def unit_hex() -> Mesh:
    """One unit-cube hex8 with a convecting top face."""
    return Mesh(
        nodes=UNIT_CUBE,
        elements=np.arange(8)[None, :],
        element_kind="hex8",
        node_sets={"top": [4, 5, 6, 7], "bottom": [0, 1, 2, 3], "all": np.arange(8)},
        facet_sets={"top": (Facet((4, 5, 6, 7)),), "bottom": (Facet((0, 3, 2, 1)),)},
    )


@pytest.fixture
def two_tets() -> Mesh:
    """Two tetrahedra sharing the face (2, 3, 4), five nodes."""
    return Mesh(
        nodes=np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]], dtype=float),
        elements=np.array([[0, 1, 2, 3], [1, 2, 3, 4]]),
        element_kind="tet4",
        node_sets={"all": np.arange(5), "origin": [0], "far": [4]},
    )


@pytest.fixture
def tet_cube() -> Mesh:
    """Unit cube of 3 x 3 x 3 cells split into tetrahedra (64 nodes)."""
    return generate_box_mesh("tet4", (3, 3, 3))


@pytest.fixture
def hex_cube() -> Mesh:
    """Unit cube of 3 x 3 x 3 hex cells (64 nodes)."""
    return generate_box_mesh("hex8", (3, 3, 3))


@pytest.fixture
def steel() -> MaterialModel:
    """Temperature-independent isotropic material, alpha = 1e-4 m^2/s."""
    return MaterialModel.isotropic(density=1000.0, specific_heat=2000.0, conductivity=200.0)


@pytest.fixture
def td_material() -> MaterialModel:
    """Temperature-dependent isotropic material over 37..337 °C."""
    return MaterialModel(
        density=1000.0,
        specific_heat=PropertyTable.from_rows([(37, 2000), (337, 8000)]),
        conductivity=PropertyTable.from_rows([(37, 200), (337, 2000)]),
    )


def _write_config(directory: Path, mesh: Mesh, /, **overrides) -> Path:
    """Save ``mesh`` and a run configuration next to it; returns the config path."""
    save_mesh(mesh, directory / "mesh.txt")
    config = {
        "mesh": "mesh.txt",
        "material": {"density": 1000.0, "specific_heat": 2000.0, "conductivity": 200.0},
        "initial_temperature": 20.0,
        "boundary_conditions": [{"type": "dirichlet", "node_set": "bottom", "temperature": 37.0}],
        "time": {"dt": 0.005, "duration": 10.0},
        "output": {"every": 1000, "directory": "out", "format": "csv"},
    }
    config.update(overrides)
    path = directory / "run.json"
    path.write_text(json.dumps(config), encoding="utf-8")
    return path


@pytest.fixture
def make_config():
    """Factory writing a mesh and a run configuration: ``make_config(directory, mesh, **overrides)``."""
    return _write_config


@pytest.fixture
def config_file(tmp_path: Path) -> Path:
    """A TI run on a small tet cube: dt 0.005 s for 10 s."""
    return _write_config(tmp_path, generate_box_mesh("tet4", (2, 2, 2), (0.1, 0.1, 0.1)))
