"""Independent reference results for the explicit solver.

Nothing here is used while stepping. The module assembles the global
conductivity matrix K that the explicit solver never forms, integrates the
same problem with backward Euler, solves steady states directly, and provides
the analytic and patch-test references plus the relative error metric.

K follows the solver's sign convention: it is symmetric positive semidefinite
and the conduction load is ``F = -K T``.
"""

import logging
import time
from dataclasses import dataclass, replace
from typing import Callable, Iterable, List, Optional, Tuple, Union

import numpy as np
import scipy.linalg
from numpy.typing import ArrayLike, NDArray
from scipy import sparse
from scipy.optimize import bisect
from scipy.sparse.linalg import splu

from .boundary import ABSOLUTE_ZERO, STEFAN_BOLTZMANN, BoundarySpec, Convection, ResolvedBoundary, SurfaceGroup
from .exceptions import OracleError
from .material import MaterialModel
from .mesh import Mesh, boundary_nodes, generate_box_mesh
from .solver import (
    PrecomputedModel,
    Schedule,
    SolverOptions,
    initial_state,
    precompute,
    run,
    step,
)

# Configure module logger
logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())

# Above this many nodes K is kept sparse.
DENSE_OPERATOR_MAX_NODES = 500
# Above this many nodes implicit systems are factorised with a sparse LU.
DENSE_SOLVE_MAX_NODES = 2000
# Capacity shift of the steady iteration, relative to the stiffest nodal rate.
STEADY_SHIFT = 1e-8
# Relative residual a converged steady field must meet.
STEADY_RESIDUAL_TOLERANCE = 1e-8

PATCH_FIELD = (200.0, 100.0, 200.0)

Matrix = Union[NDArray[np.float64], sparse.csr_matrix]


@dataclass(frozen=True, eq=False)
class GlobalOperator:
    """Assembled conductivity matrix and lumped capacity.

    Attributes:
        K: N x N conductivity matrix, dense or CSR
        capacity: M c per node, J/°C
    """
    K: Matrix
    capacity: NDArray[np.float64]

    @property
    def n_nodes(self) -> int:
        return int(self.capacity.size)

    @property
    def is_sparse(self) -> bool:
        return sparse.issparse(self.K)

    def dense(self) -> NDArray[np.float64]:
        return self.K.toarray() if self.is_sparse else np.asarray(self.K)

    def apply(self, T: ArrayLike) -> NDArray[np.float64]:
        """K T."""
        return np.asarray(self.K @ np.asarray(T, dtype=float)).reshape(-1)


def assemble_global_K(
    model: PrecomputedModel,
    temperature: Optional[ArrayLike] = None,
    dense: Optional[bool] = None,
) -> GlobalOperator:
    """Assemble K from the element matrices ``scale * B^T D B``.

    Args:
        model: pre-computed model
        temperature: nodal temperatures (or one value) at which a
            temperature-dependent material is frozen; ignored for TI
        dense: force a dense or sparse result; by default dense up to 500 nodes

    Raises:
        OracleError: If a temperature-dependent model is given no temperature
    """
    if model.form == "TD" and temperature is None:
        raise OracleError("A temperature-dependent model must be frozen at a temperature")
    n = model.n_nodes
    T = np.broadcast_to(np.asarray(0.0 if temperature is None else temperature, dtype=float), (n,))
    matrices = model.element_matrices(T)
    elements = model.mesh.elements
    k = elements.shape[1]
    rows = np.repeat(elements, k, axis=1).ravel()
    cols = np.tile(elements, (1, k)).ravel()
    K = sparse.coo_matrix((matrices.ravel(), (rows, cols)), shape=(n, n)).tocsr()
    if dense is None:
        dense = n <= DENSE_OPERATOR_MAX_NODES
    return GlobalOperator(K=K.toarray() if dense else K, capacity=model.capacity(np.array(T)))


def dissipation(operator: GlobalOperator, T: ArrayLike) -> float:
    """Quadratic form 1/2 T^T K T."""
    T = np.asarray(T, dtype=float)
    return 0.5 * float(T @ operator.apply(T))


def error_metric(T_ref: ArrayLike, T: ArrayLike) -> float:
    """Relative root-sum-square error ``sqrt(sum (T_ref - T)^2 / sum T_ref^2)``.

    The reference normalises, so the metric is not symmetric in its arguments.

    Raises:
        ValueError: If the lengths differ
        OracleError: If the reference has zero norm
    """
    T_ref = np.asarray(T_ref, dtype=float)
    T = np.asarray(T, dtype=float)
    if T_ref.shape != T.shape:
        raise ValueError(f"Shape mismatch: {T_ref.shape} vs {T.shape}")
    reference = float(np.sum(T_ref ** 2))
    if reference == 0.0:
        raise OracleError("Reference field has zero norm")
    return float(np.sqrt(np.sum((T_ref - T) ** 2) / reference))


# --------------------------------------------------------------------------
# Backward Euler
# --------------------------------------------------------------------------

class _Factorization:
    """LU factors of one constrained system matrix."""

    def __init__(self, matrix: Matrix):
        try:
            if sparse.issparse(matrix):
                self._lu = splu(sparse.csc_matrix(matrix))
                self._dense = None
            else:
                self._dense = scipy.linalg.lu_factor(matrix, check_finite=True)
                self._lu = None
        except (RuntimeError, ValueError, np.linalg.LinAlgError) as e:
            raise OracleError(f"Singular system: {e}") from e

    def solve(self, rhs: NDArray[np.float64]) -> NDArray[np.float64]:
        if self._lu is not None:
            return self._lu.solve(rhs)
        return scipy.linalg.lu_solve(self._dense, rhs)


def _constrained(matrix: Matrix, dirichlet_nodes: NDArray[np.int64]) -> Matrix:
    """Replace Dirichlet rows with identity rows."""
    if sparse.issparse(matrix):
        keep = np.ones(matrix.shape[0])
        keep[dirichlet_nodes] = 0.0
        return (sparse.diags(keep) @ matrix + sparse.diags(1.0 - keep)).tocsc()
    matrix = np.array(matrix, dtype=float)
    matrix[dirichlet_nodes, :] = 0.0
    matrix[dirichlet_nodes, dirichlet_nodes] = 1.0
    return matrix


def _implicit_system(operator: GlobalOperator, dt: float, dirichlet_nodes: NDArray[np.int64]) -> _Factorization:
    diagonal = operator.capacity / dt
    if operator.n_nodes <= DENSE_SOLVE_MAX_NODES:
        matrix: Matrix = operator.dense() + np.diag(diagonal)
    else:
        matrix = sparse.csr_matrix(operator.K) + sparse.diags(diagonal)
    return _Factorization(_constrained(matrix, dirichlet_nodes))


def _implicit_rhs(
    operator: GlobalOperator,
    Q: NDArray[np.float64],
    T: NDArray[np.float64],
    dt: float,
    dirichlet_nodes: NDArray[np.int64],
    dirichlet_values: NDArray[np.float64],
) -> NDArray[np.float64]:
    rhs = Q + operator.capacity / dt * T
    rhs[dirichlet_nodes] = dirichlet_values
    return rhs


def implicit_step(
    operator: GlobalOperator,
    Q: ArrayLike,
    T: ArrayLike,
    dt: float,
    dirichlet_nodes: ArrayLike = (),
    dirichlet_values: ArrayLike = (),
) -> NDArray[np.float64]:
    """One backward-Euler step ``(C/dt + K) T_next = Q + (C/dt) T``.

    Q is taken at the current temperatures. Dirichlet rows are replaced so
    that ``T_next`` holds the prescribed values there.

    Raises:
        ValueError: If dt is not positive or lengths do not match
        OracleError: If the system is singular
    """
    if not dt > 0.0:
        raise ValueError(f"Time step must be positive, got {dt}")
    T = np.asarray(T, dtype=float)
    Q = np.asarray(Q, dtype=float)
    if T.shape != (operator.n_nodes,) or Q.shape != T.shape:
        raise ValueError(f"Expected {operator.n_nodes} nodal values, got T {T.shape} and Q {Q.shape}")
    nodes = np.asarray(dirichlet_nodes, dtype=np.int64)
    values = np.asarray(dirichlet_values, dtype=float)
    factor = _implicit_system(operator, dt, nodes)
    return factor.solve(_implicit_rhs(operator, Q, T, dt, nodes, values))


class ImplicitIntegrator:
    """Backward-Euler stepping of a pre-computed model.

    TI models factorise the system once. TD models re-assemble K(T_n) and
    C(T_n) at the start of each step, i.e. properties are lagged exactly like
    in the explicit solver.

    Example:
        ```python
        integrator = ImplicitIntegrator(model)
        T = integrator.step(T)
        ```
    """

    def __init__(self, model: PrecomputedModel, dt: Optional[float] = None):
        self.model = model
        self.dt = float(model.dt if dt is None else dt)
        if not self.dt > 0.0:
            raise ValueError(f"Time step must be positive, got {self.dt}")
        self._operator: Optional[GlobalOperator] = None
        self._factor: Optional[_Factorization] = None

    def _system(self, T: NDArray[np.float64]) -> Tuple[GlobalOperator, _Factorization]:
        if self.model.form == "TI" and self._factor is not None and self._operator is not None:
            return self._operator, self._factor
        operator = assemble_global_K(self.model, temperature=T if self.model.form == "TD" else None)
        factor = _implicit_system(operator, self.dt, self.model.dirichlet_nodes)
        if self.model.form == "TI":
            self._operator, self._factor = operator, factor
        return operator, factor

    def step(self, T: ArrayLike) -> NDArray[np.float64]:
        T = np.asarray(T, dtype=float)
        operator, factor = self._system(T)
        Q = self.model.boundary.source(T)
        rhs = _implicit_rhs(operator, Q, T, self.dt, self.model.dirichlet_nodes, self.model.dirichlet_values)
        T_next = factor.solve(rhs)
        if not np.all(np.isfinite(T_next)):
            raise OracleError("Implicit step produced non-finite temperatures")
        return T_next


@dataclass
class Trajectory:
    """Recorded temperatures by step index."""
    dt: float
    steps: List[int]
    temperatures: List[NDArray[np.float64]]

    def at(self, step_index: int) -> NDArray[np.float64]:
        try:
            return self.temperatures[self.steps.index(step_index)]
        except ValueError:
            raise KeyError(f"Step {step_index} was not recorded") from None

    @property
    def final(self) -> NDArray[np.float64]:
        return self.temperatures[-1]


def _record_set(n_steps: int, record: Optional[Iterable[int]]) -> set:
    steps = {0, n_steps}
    if record is not None:
        steps.update(int(s) for s in record)
    return steps


def implicit_run(
    model: PrecomputedModel,
    T0: ArrayLike,
    n_steps: int,
    record: Optional[Iterable[int]] = None,
    dt: Optional[float] = None,
) -> Trajectory:
    """Backward-Euler trajectory from the same initial state as the explicit solver.

    Args:
        model: pre-computed model (its dt is used unless ``dt`` is given)
        T0: initial temperature, scalar or per node
        n_steps: number of steps
        record: step indices to keep besides 0 and ``n_steps``
        dt: time step override
    """
    if n_steps < 0:
        raise ValueError("Step count cannot be negative")
    integrator = ImplicitIntegrator(model, dt)
    keep = _record_set(n_steps, record)
    T = initial_state(model, T0).T
    trajectory = Trajectory(dt=integrator.dt, steps=[0], temperatures=[T.copy()])
    for index in range(1, n_steps + 1):
        T = integrator.step(T)
        if index in keep:
            trajectory.steps.append(index)
            trajectory.temperatures.append(T.copy())
    return trajectory


def explicit_run(
    model: PrecomputedModel,
    T0: ArrayLike,
    n_steps: int,
    record: Optional[Iterable[int]] = None,
) -> Trajectory:
    """Explicit trajectory recorded at the same steps as ``implicit_run``."""
    if n_steps < 0:
        raise ValueError("Step count cannot be negative")
    keep = _record_set(n_steps, record)
    state = initial_state(model, T0)
    trajectory = Trajectory(dt=model.dt, steps=[0], temperatures=[state.T.copy()])
    for _ in range(n_steps):
        state = step(model, state)
        if state.step in keep:
            trajectory.steps.append(state.step)
            trajectory.temperatures.append(state.T.copy())
    return trajectory


# --------------------------------------------------------------------------
# Steady state
# --------------------------------------------------------------------------

def _anchored(model: PrecomputedModel, with_surfaces: bool) -> bool:
    """True if a Dirichlet node, or a surface that exchanges heat, fixes the temperature level."""
    if model.dirichlet_nodes.size:
        return True
    if not with_surfaces:
        return False
    for group in model.boundary.surfaces:
        record = group.record
        coefficient = record.h if isinstance(record, Convection) else record.emissivity
        if coefficient > 0.0 and group.area > 0.0 and group.nodes.size:
            return True
    return False


def _residual_ok(matrix: Matrix, T: NDArray[np.float64], rhs: NDArray[np.float64]) -> bool:
    residual = np.asarray(matrix @ T).reshape(-1) - rhs
    reference = np.linalg.norm(rhs) + np.linalg.norm(np.asarray(abs(matrix) @ np.abs(T)).reshape(-1))
    return bool(np.linalg.norm(residual) <= STEADY_RESIDUAL_TOLERANCE * max(reference, np.finfo(float).tiny))


def steady_solve(
    model: PrecomputedModel,
    Q: Optional[ArrayLike] = None,
    initial_guess: Optional[ArrayLike] = None,
    tol: float = 1e-10,
    max_iterations: int = 500,
) -> NDArray[np.float64]:
    """Direct steady solution of ``K T = Q`` with Dirichlet rows.

    With an explicit Q the source is fixed (TD models are frozen at
    ``initial_guess``). Without one, the model's boundary records supply Q:
    convection enters the matrix exactly, radiation is linearised about the
    current iterate and temperature-dependent conductivity is lagged.

    Every iterate solves ``(A + mu C) T_next = b + mu C T`` with a small
    capacity shift ``mu``. The shifted system stays regular when K has
    zero-energy modes (one-point hex hourglass patterns); those components
    keep their capacity-weighted value from ``initial_guess``, which is what
    the explicit solver conserves as well. The iteration stops once the
    largest change is below ``tol * (1 + max |T|)``.

    Raises:
        OracleError: If nothing anchors the temperature level (no Dirichlet,
            convection or radiation boundary), if no steady state exists, or
            if the converged field does not satisfy the system
    """
    if not _anchored(model, with_surfaces=Q is None):
        raise OracleError("Steady problem is singular; it needs a Dirichlet, convection or radiation boundary")
    n = model.n_nodes
    T = np.array(np.broadcast_to(np.asarray(0.0 if initial_guess is None else initial_guess, dtype=float), (n,)))
    T[model.dirichlet_nodes] = model.dirichlet_values
    boundary = model.boundary
    film = np.zeros(n)
    film_source = np.zeros(n)
    radiating = []
    if Q is None:
        for group in boundary.surfaces:
            if isinstance(group.record, Convection):
                film[group.nodes] += group.record.h * group.area
                film_source[group.nodes] += group.record.h * group.area * group.record.ambient
            else:
                radiating.append(group)
    linear = Q is not None or (model.form == "TI" and not radiating)

    radiation_only = replace(
        boundary,
        constant_source=np.zeros(n),
        surfaces=tuple(radiating),
    )
    system: Optional[Tuple[Matrix, NDArray[np.float64], NDArray[np.float64], _Factorization]] = None
    for iteration in range(max_iterations):
        if system is None or not linear:
            system = _steady_system(model, T, Q, film, film_source, radiating, radiation_only)
        matrix, rhs, shift, factor = system
        shifted_rhs = rhs + shift * T
        shifted_rhs[model.dirichlet_nodes] = model.dirichlet_values
        T_next = factor.solve(shifted_rhs)
        if not np.all(np.isfinite(T_next)):
            raise OracleError("Steady problem is singular; it needs a Dirichlet, convection or radiation boundary")
        change = float(np.max(np.abs(T_next - T))) if n else 0.0
        T = T_next
        if change <= tol * (1.0 + float(np.max(np.abs(T)))):
            if not _residual_ok(matrix, T, rhs):
                raise OracleError("Steady solution does not satisfy K T = Q; the system is singular")
            logger.debug(f"Steady solve finished after {iteration + 1} iteration(s)")
            return T
    raise OracleError(
        f"Steady iteration did not converge in {max_iterations} iterations; the problem may have no steady state"
    )


def _steady_system(
    model: PrecomputedModel,
    T: NDArray[np.float64],
    Q: Optional[ArrayLike],
    film: NDArray[np.float64],
    film_source: NDArray[np.float64],
    radiating: List[SurfaceGroup],
    radiation_only: ResolvedBoundary,
) -> Tuple[Matrix, NDArray[np.float64], NDArray[np.float64], _Factorization]:
    """Constrained matrix, right-hand side, capacity shift and factors at iterate T."""
    n = model.n_nodes
    operator = assemble_global_K(model, temperature=T if model.form == "TD" else None)
    if Q is not None:
        rhs = np.array(np.asarray(Q, dtype=float), copy=True)
    else:
        rhs = model.boundary.constant_source + film_source + radiation_only.source(T)
    # Radiation is linearised about the current iterate.
    tangent = np.zeros(n)
    for group in radiating:
        record = group.record
        tangent[group.nodes] += (
            4.0 * record.sigma * record.emissivity * (T[group.nodes] - record.absolute_zero) ** 3 * group.area
        )
    rhs += tangent * T
    rhs[model.dirichlet_nodes] = model.dirichlet_values

    diagonal = (operator.K.diagonal() if operator.is_sparse else np.diag(operator.K)) + film + tangent
    rate = float(np.max(diagonal / operator.capacity)) if n else 0.0
    shift = STEADY_SHIFT * (rate if rate > 0.0 else 1.0) * operator.capacity
    shift[model.dirichlet_nodes] = 0.0

    matrix: Matrix
    if n <= DENSE_SOLVE_MAX_NODES:
        matrix = operator.dense() + np.diag(film + tangent)
    else:
        matrix = sparse.csr_matrix(operator.K) + sparse.diags(film + tangent)
    constrained = _constrained(matrix, model.dirichlet_nodes)
    shifted = constrained + (np.diag(shift) if n <= DENSE_SOLVE_MAX_NODES else sparse.diags(shift))
    return constrained, rhs, shift, _Factorization(shifted)


# --------------------------------------------------------------------------
# Analytic references
# --------------------------------------------------------------------------

def sine_decay_reference(
    x: ArrayLike, t: float, alpha: float, L: float, T_amp: float
) -> Union[float, NDArray[np.float64]]:
    """Exact bar solution with zero-temperature ends and a half-sine start.

    ``T(x, t) = T_amp sin(pi x / L) exp(-alpha pi^2 t / L^2)``

    Example:
        ```python
        sine_decay_reference(0.05, 10.0, 1e-4, 0.1, 1.0)  # 0.37272...
        ```
    """
    x = np.asarray(x, dtype=float)
    value = T_amp * np.sin(np.pi * x / L) * np.exp(-alpha * np.pi ** 2 * t / L ** 2)
    return float(value) if value.ndim == 0 else value


def _bisect_increasing(f: Callable[[float], float], lower: float, upper: float, floor: Optional[float] = None) -> float:
    """Root of an increasing function; the bracket is widened until it changes sign."""
    for _ in range(200):
        if f(lower) <= 0.0 <= f(upper):
            return float(bisect(f, lower, upper, xtol=1e-12, rtol=4 * np.finfo(float).eps, maxiter=500))
        span = upper - lower
        lower = lower - span if floor is None else max(floor, lower - span)
        upper = upper + span
    raise OracleError("Could not bracket the balance temperature")


def balance_temperature_convection(h: float, T_a: float, q: float, area: float) -> float:
    """T with ``h (T - T_a) a = q``, by bisection.

    Raises:
        OracleError: If h or the area is not positive
    """
    if h <= 0.0 or area <= 0.0:
        raise OracleError("Convection balance needs positive h and area")
    return _bisect_increasing(lambda T: h * (T - T_a) * area - q, T_a - 1.0, T_a + 1.0)


def balance_temperature_radiation(
    emissivity: float,
    T_a: float,
    q: float,
    area: float,
    T_z: float = ABSOLUTE_ZERO,
    sigma: float = STEFAN_BOLTZMANN,
) -> float:
    """T with ``sigma eps [(T - T_z)^4 - (T_a - T_z)^4] a = q``, by bisection.

    Raises:
        OracleError: If the balance has no root above absolute zero
    """
    if emissivity <= 0.0 or area <= 0.0:
        raise OracleError("Radiation balance needs positive emissivity and area")

    def residual(T: float) -> float:
        return sigma * emissivity * ((T - T_z) ** 4 - (T_a - T_z) ** 4) * area - q

    if residual(T_z) > 0.0:
        raise OracleError(f"No balance temperature above absolute zero for q = {q} W")
    return _bisect_increasing(residual, T_z, T_a + 1.0, floor=T_z)


# --------------------------------------------------------------------------
# Verification drivers
# --------------------------------------------------------------------------

def patch_field(nodes: NDArray[np.float64], offset: float = 0.0) -> NDArray[np.float64]:
    """The linear patch-test field 200 x + 100 y + 200 z (+ offset)."""
    return nodes @ np.array(PATCH_FIELD) + offset


@dataclass(frozen=True, eq=False)
class PatchTestResult:
    """Outcome of ``patch_test``; ``temperatures`` is the final nodal field."""
    max_error: float
    interior_nodes: int
    steps: int
    seconds: float
    temperatures: NDArray[np.float64]


def patch_test(
    kind: str = "hex8",
    mesh: Optional[Mesh] = None,
    n: int = 3,
    offset: float = 0.0,
    tolerance: float = 1e-10,
    interior_guess: Optional[float] = None,
) -> PatchTestResult:
    """Reproduce a linear temperature field at interior nodes.

    Boundary nodes are pinned to ``200 x + 100 y + 200 z + offset``; interior
    nodes start at the mean boundary value and the explicit solver runs until
    no node changes by more than ``tolerance`` in one step. The material is
    k = 1, rho = 1, c = 1 and dt is 0.9 x the Gershgorin critical step.

    Args:
        kind: "hex8" or "tet4"
        mesh: mesh to use; by default a unit cube with ``n`` nodes per edge
        n: nodes per edge of the generated cube
        offset: constant added to the prescribed field
        tolerance: steady-state tolerance, °C per step
        interior_guess: starting value for interior nodes

    Raises:
        ValueError: If ``mesh`` is not of element kind ``kind``
        OracleError: If the mesh has no interior node
    """
    if mesh is None:
        mesh = generate_box_mesh(kind, (n - 1, n - 1, n - 1))
    elif mesh.element_kind != kind:
        raise ValueError(f"Patch test of kind {kind!r} given a {mesh.element_kind} mesh")

    pinned = boundary_nodes(mesh)
    interior = np.setdiff1d(np.arange(mesh.n_nodes), pinned)
    if interior.size == 0:
        raise OracleError("Patch test needs at least one interior node")

    exact = patch_field(mesh.nodes, offset)
    material = MaterialModel.isotropic(density=1.0, specific_heat=1.0, conductivity=1.0)
    model = precompute(mesh, material, BoundarySpec(), dt=None, options=SolverOptions())
    model = replace(
        model,
        boundary=ResolvedBoundary(
            n_nodes=mesh.n_nodes,
            dirichlet_nodes=pinned,
            dirichlet_values=exact[pinned],
            constant_source=np.zeros(mesh.n_nodes),
        ),
    )
    T0 = np.full(mesh.n_nodes, float(np.mean(exact[pinned]) if interior_guess is None else interior_guess))

    started = time.perf_counter()
    schedule = Schedule(stop_on_steady=True, steady_tolerance=tolerance, every=10_000_000)
    result = run(model, T0, schedule, on_snapshot=lambda state: None)
    seconds = time.perf_counter() - started

    error = float(np.max(np.abs(result.final_state.T[interior] - exact[interior])))
    logger.info(
        f"Patch test ({mesh.element_kind}, {interior.size} interior nodes): "
        f"max error {error:.3e} °C after {result.steps} steps"
    )
    return PatchTestResult(
        max_error=error,
        interior_nodes=int(interior.size),
        steps=result.steps,
        seconds=seconds,
        temperatures=result.final_state.T,
    )


@dataclass(frozen=True)
class ComparisonRow:
    step: int
    time: float
    error: float


def compare_trajectories(model: PrecomputedModel, T0: ArrayLike, n_steps: int) -> List[ComparisonRow]:
    """Explicit vs backward-Euler relative errors at the quartile steps.

    The implicit trajectory is the reference of the error metric.
    """
    if n_steps < 1:
        raise ValueError("Comparison needs at least one step")
    quartiles = sorted({max(1, (n_steps * q) // 4) for q in (1, 2, 3, 4)})
    explicit = explicit_run(model, T0, n_steps, record=quartiles)
    implicit = implicit_run(model, T0, n_steps, record=quartiles)
    return [
        ComparisonRow(step=s, time=s * model.dt, error=error_metric(implicit.at(s), explicit.at(s)))
        for s in quartiles
    ]


def compare_steady(
    model: PrecomputedModel,
    T0: ArrayLike,
    tolerance: float = 1e-3,
    max_steps: int = 10_000_000,
) -> Tuple[int, float]:
    """Run the explicit solver to steady state and compare with ``steady_solve``.

    Returns:
        Tuple of (explicit steady step, relative error against the direct solution)
    """
    schedule = Schedule(stop_on_steady=True, steady_tolerance=tolerance, every=max_steps, max_steps=max_steps)
    result = run(model, T0, schedule, on_snapshot=lambda state: None)
    reference = steady_solve(model, initial_guess=result.final_state.T)
    return result.steps, error_metric(reference, result.final_state.T)
