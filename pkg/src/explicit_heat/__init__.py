"""Explicit, matrix-free finite element solver for 3-D transient heat transfer.

Meshes of linear tetrahedra or one-point hexahedra are stepped in time with
forward Euler and a lumped capacity, so every node is updated on its own and
no global matrix is ever assembled or solved. An implicit reference solver,
analytic solutions and a patch test live in ``explicit_heat.oracle``.

Example:
    ```python
    from explicit_heat import BoundarySpec, Dirichlet, MaterialModel, Schedule
    from explicit_heat import generate_box_mesh, precompute, run

    mesh = generate_box_mesh("hex8", (10, 10, 10), (0.1, 0.1, 0.1))
    material = MaterialModel.isotropic(density=1000, specific_heat=2000, conductivity=200)
    spec = BoundarySpec((Dirichlet("bottom", 37.0),))
    model = precompute(mesh, material, spec, dt=0.01)
    result = run(model, 20.0, Schedule(duration=10.0, every=100))
    ```

Logging Configuration:
    The package uses Python's standard logging module. To configure logging in your application:

    ```python
    import logging
    import sys

    # Basic configuration
    logging.basicConfig(
        level=logging.INFO,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.StreamHandler(sys.stdout),
            logging.FileHandler('explicit_heat.log')
        ]
    )

    # Optional: Set specific log levels for different components
    logging.getLogger('explicit_heat.solver').setLevel(logging.DEBUG)
    logging.getLogger('explicit_heat.mesh').setLevel(logging.WARNING)
    ```

    The package uses the following logger names:
    - explicit_heat.mesh: mesh loading, writing and generation
    - explicit_heat.kernels: element kernels
    - explicit_heat.material: material tables
    - explicit_heat.boundary: boundary records
    - explicit_heat.solver: pre-computation, stability guard, run progress
    - explicit_heat.oracle: reference solvers and the patch test
    - explicit_heat.config: run configuration
    - explicit_heat.output: snapshot and summary files
    - explicit_heat.cli: command-line interface
"""

__version__ = '0.1.0'

from .boundary import (
    BoundarySpec,
    Convection,
    Dirichlet,
    Flux,
    HeatSource,
    Radiation,
    assemble_Q,
    convection_load,
    radiation_load,
)
from .config import RunConfig, load_config, parse_config
from .exceptions import (
    BoundaryError,
    ConfigError,
    DegenerateElementError,
    ExplicitHeatError,
    InstabilityError,
    MaterialError,
    MeshError,
    MeshSyntaxError,
    OracleError,
    SolverError,
    StabilityError,
    UnphysicalStateError,
)
from .kernels import build_G, element_load, hex8_center_kernel, tet4_kernel
from .material import MaterialModel, PropertyTable, conductivity_tensor, element_conductivity, eval_property
from .mesh import Facet, Mesh, generate_box_mesh, load_mesh, parse_mesh, save_mesh, serialize_mesh
from .solver import (
    PrecomputedModel,
    RunResult,
    Schedule,
    SimulationState,
    SolverOptions,
    StabilityEstimate,
    estimate_critical_dt,
    precompute,
    run,
    scatter_loads,
    step,
    steady_state_check,
)

__all__ = [
    'BoundaryError',
    'BoundarySpec',
    'ConfigError',
    'Convection',
    'DegenerateElementError',
    'Dirichlet',
    'ExplicitHeatError',
    'Facet',
    'Flux',
    'HeatSource',
    'InstabilityError',
    'MaterialError',
    'MaterialModel',
    'Mesh',
    'MeshError',
    'MeshSyntaxError',
    'OracleError',
    'PrecomputedModel',
    'PropertyTable',
    'Radiation',
    'RunConfig',
    'RunResult',
    'Schedule',
    'SimulationState',
    'SolverError',
    'SolverOptions',
    'StabilityError',
    'StabilityEstimate',
    'UnphysicalStateError',
    'assemble_Q',
    'build_G',
    'conductivity_tensor',
    'convection_load',
    'element_conductivity',
    'element_load',
    'estimate_critical_dt',
    'eval_property',
    'generate_box_mesh',
    'hex8_center_kernel',
    'load_config',
    'load_mesh',
    'parse_config',
    'parse_mesh',
    'precompute',
    'radiation_load',
    'run',
    'save_mesh',
    'scatter_loads',
    'serialize_mesh',
    'step',
    'steady_state_check',
    'tet4_kernel',
]
