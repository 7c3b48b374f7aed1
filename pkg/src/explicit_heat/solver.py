"""Explicit, matrix-free transient heat conduction.

A simulation runs in three stages:

1. ``precompute``: element kernels, G matrices, lumped mass, the coefficient
   vector A, nodal areas and the critical time step are computed once.
2. ``initial_state``: every node starts at T0 and Dirichlet values are applied.
3. ``run`` / ``step``: element loads are scattered to the nodes, boundary
   loads are added, each node is updated on its own and Dirichlet nodes are
   overwritten. No global matrix is formed and nothing is solved.

Temperature-independent (TI) materials fold the conductivity into G and the
specific heat into A. Temperature-dependent (TD) materials keep ``G = V B^T``
and evaluate conductivity per element and specific heat per node every step.
"""

import logging
import math
import os
import time
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Literal, Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .boundary import BoundarySpec, ResolvedBoundary, coefficient_matrix, lump_thermal_mass, resolve_boundary
from .exceptions import InstabilityError, StabilityError
from .kernels import GForm, build_g_batch, element_loads_batch
from .material import MaterialModel, element_conductivities, nodal_specific_heat
from .mesh import Mesh

# Configure module logger
logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())

StabilityMethod = Literal["gershgorin", "dense-eigen"]

POWER_ITERATION_TOLERANCE = 1e-8
POWER_ITERATION_MAX_ITERATIONS = 200_000


@dataclass
class SolverOptions:
    """Numerical options that are not part of a physical experiment.

    Environment Variables:
        EXPLICIT_HEAT_STABILITY_SAFETY: fraction of the Gershgorin critical
            step above which the guard trips
        EXPLICIT_HEAT_STRICT_STABILITY: refuse to run instead of warning
        EXPLICIT_HEAT_STABILITY_METHOD: gershgorin or dense-eigen
        EXPLICIT_HEAT_DENSE_EIGEN_MAX_NODES: largest mesh for dense-eigen

    Examples:
        ```python
        options = SolverOptions(strict_stability=True)
        options = SolverOptions.from_env()
        ```
    """
    stability_safety: float = 0.9
    strict_stability: bool = False
    stability_method: StabilityMethod = "gershgorin"
    dense_eigen_max_nodes: int = 2000

    @classmethod
    def from_env(cls) -> "SolverOptions":
        """Create options from environment variables.

        Returns:
            SolverOptions: A new options instance
        """
        return cls(
            stability_safety=float(os.environ.get("EXPLICIT_HEAT_STABILITY_SAFETY", "0.9")),
            strict_stability=os.environ.get("EXPLICIT_HEAT_STRICT_STABILITY", "false").lower() == "true",
            stability_method=os.environ.get("EXPLICIT_HEAT_STABILITY_METHOD", "gershgorin"),  # type: ignore[arg-type]
            dense_eigen_max_nodes=int(os.environ.get("EXPLICIT_HEAT_DENSE_EIGEN_MAX_NODES", "2000")),
        )

    def validate(self) -> None:
        """Validate the options.

        Raises:
            ValueError: If any option is out of range
        """
        if not 0.0 < self.stability_safety <= 1.0:
            raise ValueError("Stability safety factor must lie in (0, 1]")
        if self.stability_method not in ("gershgorin", "dense-eigen"):
            raise ValueError("Stability method must be 'gershgorin' or 'dense-eigen'")
        if self.dense_eigen_max_nodes < 1:
            raise ValueError("Dense eigen node limit must be a positive number")


@dataclass(frozen=True)
class StabilityEstimate:
    """Largest eigenvalue (bound) of the capacity-scaled conductivity operator.

    Attributes:
        lambda_max: upper bound (gershgorin) or estimate (dense-eigen), 1/s
        critical_dt: 2 / lambda_max, s
        method: "gershgorin" or "dense-eigen"
    """
    lambda_max: float
    critical_dt: float
    method: StabilityMethod

    @classmethod
    def from_lambda(cls, lambda_max: float, method: StabilityMethod) -> "StabilityEstimate":
        critical = math.inf if lambda_max <= 0.0 else 2.0 / lambda_max
        return cls(lambda_max=float(lambda_max), critical_dt=critical, method=method)


@dataclass(frozen=True, eq=False)
class PrecomputedModel:
    """Everything ``precompute`` computes; nothing here changes while stepping.

    Attributes:
        mesh: the mesh
        material: the material
        boundary: boundary records bound to the mesh
        dt: time step, s
        form: "TI" (G = V B^T D B, A = dt / (M c)) or "TD" (G = V B^T, A = dt / M)
        B: M x 3 x k gradient matrices
        scale: element volumes (tet4) or 8 det(J) (hex8)
        G: pre-computed element matrices
        nodal_mass: lumped mass per node, kg
        coefficient: A per node
        stability: critical time step estimate (method from the options)
        guard: Gershgorin estimate the stability guard compares dt against
        options: solver options used
    """
    mesh: Mesh
    material: MaterialModel
    boundary: ResolvedBoundary
    dt: float
    form: GForm
    B: NDArray[np.float64]
    scale: NDArray[np.float64]
    G: NDArray[np.float64]
    nodal_mass: NDArray[np.float64]
    coefficient: NDArray[np.float64]
    stability: Optional[StabilityEstimate] = None
    guard: Optional[StabilityEstimate] = None
    options: SolverOptions = field(default_factory=SolverOptions)

    @property
    def n_nodes(self) -> int:
        return self.mesh.n_nodes

    @property
    def dirichlet_nodes(self) -> NDArray[np.int64]:
        return self.boundary.dirichlet_nodes

    @property
    def dirichlet_values(self) -> NDArray[np.float64]:
        return self.boundary.dirichlet_values

    @property
    def nodal_areas(self) -> Dict[str, float]:
        return self.boundary.nodal_areas()

    def capacity(self, T: NDArray[np.float64]) -> NDArray[np.float64]:
        """Lumped heat capacity M c per node at temperatures T (J/°C)."""
        return self.nodal_mass * nodal_specific_heat(self.material, T)

    def element_matrices(self, T: Optional[ArrayLike] = None) -> NDArray[np.float64]:
        """Element conductivity matrices V B^T D B (M x k x k).

        TI models return the pre-computed G. TD models evaluate D at the
        nodal temperatures T (scalar or per node).
        """
        if self.form == "TI":
            return self.G
        T_nodes = np.broadcast_to(np.asarray(T if T is not None else 0.0, dtype=float), (self.n_nodes,))
        D = element_conductivities(self.material, T_nodes, self.mesh.elements)
        return self.scale[:, None, None] * np.einsum("mik,mij,mjl->mkl", self.B, D, self.B)


@dataclass(frozen=True, eq=False)
class SimulationState:
    """Observable state after ``step`` steps.

    Attributes:
        step: number of steps taken
        time: step * dt, s
        T: nodal temperatures, °C
        F: nodal conduction loads of the last step, W
        Q: nodal source loads of the last step, W
        T_prev: temperatures before the last step
    """
    step: int
    time: float
    T: NDArray[np.float64]
    F: NDArray[np.float64]
    Q: NDArray[np.float64]
    T_prev: NDArray[np.float64]


@dataclass
class Schedule:
    """When to stop and how often to record.

    Attributes:
        duration: simulated time in s; None runs until steady state
        stop_on_steady: stop at the first step with max |dT| <= steady_tolerance
        steady_tolerance: °C per step
        every: snapshot cadence in steps
        max_steps: cap for runs without a duration
    """
    duration: Optional[float] = None
    stop_on_steady: bool = False
    steady_tolerance: float = 1e-3
    every: int = 1
    max_steps: int = 10_000_000

    def validate(self) -> None:
        """Validate the schedule.

        Raises:
            ValueError: If no stopping rule is given or a field is out of range
        """
        if self.duration is None and not self.stop_on_steady:
            raise ValueError("Schedule needs a duration or stop_on_steady")
        if self.duration is not None and self.duration <= 0.0:
            raise ValueError("Duration must be positive")
        if self.steady_tolerance < 0.0:
            raise ValueError("Steady tolerance cannot be negative")
        if self.every < 1:
            raise ValueError("Snapshot cadence must be at least 1")
        if self.max_steps < 1:
            raise ValueError("Max steps must be at least 1")

    def step_count(self, dt: float) -> int:
        """Number of steps to cover the duration (or max_steps without one)."""
        if self.duration is None:
            return self.max_steps
        return steps_for(self.duration, dt)


@dataclass(frozen=True)
class TimingSummary:
    """Wall time of the stepping loop, snapshot IO excluded."""
    steps: int
    mean_ms: float
    median_ms: float
    max_ms: float
    total_ms: float
    dt: float

    @classmethod
    def from_durations(cls, durations: List[float], dt: float) -> "TimingSummary":
        if not durations:
            return cls(steps=0, mean_ms=0.0, median_ms=0.0, max_ms=0.0, total_ms=0.0, dt=dt)
        ms = np.asarray(durations) * 1e3
        return cls(
            steps=len(durations),
            mean_ms=float(ms.mean()),
            median_ms=float(np.median(ms)),
            max_ms=float(ms.max()),
            total_ms=float(ms.sum()),
            dt=dt,
        )

    @property
    def real_time_factor(self) -> float:
        """Simulated time per wall-clock time; above 1 means faster than real time."""
        return math.inf if self.mean_ms == 0.0 else self.dt * 1e3 / self.mean_ms


@dataclass
class RunResult:
    """Trajectory summary of ``run``."""
    steps: int
    final_time: float
    steady_step: Optional[int]
    final_state: SimulationState
    timing: TimingSummary
    snapshots: List[SimulationState] = field(default_factory=list)


def steps_for(duration: float, dt: float) -> int:
    """Steps needed to reach ``duration``, tolerant of round-off in duration / dt."""
    ratio = duration / dt
    nearest = round(ratio)
    if nearest >= 1 and abs(nearest - ratio) <= 1e-9 * ratio:
        return int(nearest)
    return int(math.ceil(ratio))


# --------------------------------------------------------------------------
# Pre-computation
# --------------------------------------------------------------------------

def _gershgorin_lambda(element_matrices: NDArray[np.float64], mesh: Mesh, capacity: NDArray[np.float64]) -> float:
    row_sums = np.abs(element_matrices).sum(axis=2)
    nodal = np.bincount(mesh.elements.ravel(), weights=row_sums.ravel(), minlength=mesh.n_nodes)
    return float(np.max(nodal / capacity))


def _power_iteration_lambda(model: PrecomputedModel, T: NDArray[np.float64], capacity: NDArray[np.float64]) -> float:
    # Imported here: the oracle module depends on this one.
    from .oracle import assemble_global_K

    operator = assemble_global_K(model, temperature=T, dense=True)
    inverse_root = 1.0 / np.sqrt(capacity)
    S = inverse_root[:, None] * np.asarray(operator.K) * inverse_root[None, :]
    x = np.random.default_rng(0).standard_normal(S.shape[0])
    x /= np.linalg.norm(x)
    previous = 0.0
    rayleigh = 0.0
    for _ in range(POWER_ITERATION_MAX_ITERATIONS):
        y = S @ x
        rayleigh = float(x @ y)
        norm = float(np.linalg.norm(y))
        if norm == 0.0:
            return 0.0
        x = y / norm
        if abs(rayleigh - previous) <= POWER_ITERATION_TOLERANCE * abs(rayleigh):
            break
        previous = rayleigh
    else:
        logger.warning("Power iteration did not converge; using the last Rayleigh quotient")
    return rayleigh


def estimate_critical_dt(
    model: PrecomputedModel,
    method: StabilityMethod = "gershgorin",
    initial_temperature: Optional[ArrayLike] = None,
) -> StabilityEstimate:
    """Estimate the largest stable time step 2 / lambda_max.

    ``gershgorin`` bounds lambda_max by the largest capacity-scaled absolute
    row sum, accumulated element by element. ``dense-eigen`` assembles the
    global operator and runs power iteration on ``C^-1/2 K C^-1/2``; it is
    limited to ``options.dense_eigen_max_nodes`` nodes.

    TD models are evaluated at the initial temperature and again with the
    most conductive table row and the smallest specific heat; the stricter
    result is returned.

    Raises:
        ValueError: If dense-eigen is requested on a mesh that is too large
    """
    if method == "dense-eigen" and model.n_nodes > model.options.dense_eigen_max_nodes:
        raise ValueError(
            f"dense-eigen is limited to {model.options.dense_eigen_max_nodes} nodes, mesh has {model.n_nodes}"
        )

    def lam(T: NDArray[np.float64], matrices: NDArray[np.float64], capacity: NDArray[np.float64]) -> float:
        if method == "gershgorin":
            return _gershgorin_lambda(matrices, model.mesh, capacity)
        return _power_iteration_lambda(model, T, capacity)

    T0 = np.broadcast_to(
        np.asarray(0.0 if initial_temperature is None else initial_temperature, dtype=float),
        (model.n_nodes,),
    ).copy()
    lambda_max = lam(T0, model.element_matrices(T0), model.capacity(T0))

    if model.form == "TD":
        D_worst, c_min = model.material.worst_case()
        worst_matrices = model.scale[:, None, None] * np.einsum("mik,ij,mjl->mkl", model.B, D_worst, model.B)
        worst_capacity = model.nodal_mass * c_min
        if method == "gershgorin":
            worst = _gershgorin_lambda(worst_matrices, model.mesh, worst_capacity)
        else:
            worst = _power_iteration_lambda(_worst_case_model(model, D_worst), T0, worst_capacity)
        lambda_max = max(lambda_max, worst)

    return StabilityEstimate.from_lambda(lambda_max, method)


def _worst_case_model(model: PrecomputedModel, D: NDArray[np.float64]) -> PrecomputedModel:
    """TI copy of a model with conductivity D everywhere, for operator assembly."""
    return replace(model, form="TI", G=build_g_batch(model.B, model.scale, D))


def check_time_step(model: PrecomputedModel) -> None:
    """Stability guard: warn (or raise in strict mode) when dt > safety x the Gershgorin critical step.

    Raises:
        StabilityError: If the guard trips and ``options.strict_stability`` is set
    """
    if model.guard is None:
        return
    options = model.options
    if model.dt > options.stability_safety * model.guard.critical_dt:
        message = (
            f"Time step {model.dt:g} s exceeds {options.stability_safety:g} x the critical step "
            f"{model.guard.critical_dt:.6g} s (Gershgorin); the run may diverge"
        )
        if options.strict_stability:
            raise StabilityError(message)
        logger.warning(message)


def _coefficient(material: MaterialModel, mass: NDArray[np.float64], dt: float) -> NDArray[np.float64]:
    if material.is_temperature_dependent:
        return coefficient_matrix(mass, dt)
    return coefficient_matrix(mass, dt, float(material.specific_heat.values[0, 0]))


def precompute(
    mesh: Mesh,
    material: MaterialModel,
    spec: BoundarySpec,
    dt: Optional[float],
    options: Optional[SolverOptions] = None,
    initial_temperature: Optional[ArrayLike] = None,
) -> PrecomputedModel:
    """Compute kernels, G, lumped mass, A, nodal areas and the stability estimate.

    Args:
        mesh: validated mesh
        material: material model; a temperature-dependent one selects TD form
        spec: boundary records
        dt: time step in s; None picks ``stability_safety`` x the Gershgorin critical step
        options: solver options (defaults to ``SolverOptions()``)
        initial_temperature: T0 used to evaluate a TD stability estimate

    Returns:
        PrecomputedModel: deterministic function of its inputs

    Raises:
        ValueError: If dt is not positive or options are invalid
        StabilityError: If dt exceeds safety x critical dt and the options are strict
    """
    options = options or SolverOptions()
    options.validate()
    if dt is not None and not dt > 0.0:
        raise ValueError(f"Time step must be positive, got {dt}")

    B, scale = mesh.kernels
    mass = lump_thermal_mass(mesh, material.density)
    if material.is_temperature_dependent:
        form: GForm = "TD"
        G = build_g_batch(B, scale)
    else:
        form = "TI"
        G = build_g_batch(B, scale, material.tensor_at(0.0))

    model = PrecomputedModel(
        mesh=mesh,
        material=material,
        boundary=resolve_boundary(spec, mesh),
        dt=1.0,
        form=form,
        B=B,
        scale=scale,
        G=G,
        nodal_mass=mass,
        coefficient=_coefficient(material, mass, 1.0),
        options=options,
    )

    guard = estimate_critical_dt(model, "gershgorin", initial_temperature)
    if dt is None:
        if not math.isfinite(guard.critical_dt):
            raise ValueError("Cannot pick a time step for a model without conduction")
        dt = options.stability_safety * guard.critical_dt
    model = replace(model, dt=float(dt), coefficient=_coefficient(material, mass, float(dt)), guard=guard)

    if options.stability_method == "dense-eigen" and mesh.n_nodes <= options.dense_eigen_max_nodes:
        stability = estimate_critical_dt(model, "dense-eigen", initial_temperature)
    else:
        if options.stability_method == "dense-eigen":
            logger.warning(
                f"Mesh has {mesh.n_nodes} nodes, above the dense-eigen limit; reporting the Gershgorin bound"
            )
        stability = guard
    model = replace(model, stability=stability)
    check_time_step(model)

    logger.info(
        f"Pre-computed {form} model: {mesh.n_elements} {mesh.element_kind} elements, {mesh.n_nodes} nodes, "
        f"dt = {model.dt:g} s, critical dt = {stability.critical_dt:.6g} s ({stability.method})"
    )
    return model


def with_time_step(model: PrecomputedModel, dt: float) -> PrecomputedModel:
    """The same model re-targeted to another time step; only A changes.

    Raises:
        ValueError: If dt is not positive
        StabilityError: If the guard trips in strict mode
    """
    if not dt > 0.0:
        raise ValueError(f"Time step must be positive, got {dt}")
    updated = replace(model, dt=float(dt), coefficient=_coefficient(model.material, model.nodal_mass, float(dt)))
    check_time_step(updated)
    return updated


# --------------------------------------------------------------------------
# Initialisation and stepping
# --------------------------------------------------------------------------

def scatter_loads(model: PrecomputedModel, T: NDArray[np.float64]) -> NDArray[np.float64]:
    """Nodal conduction loads F (W) assembled element by element from frozen T."""
    elements = model.mesh.elements
    element_T = T[elements]
    if model.form == "TI":
        loads = element_loads_batch("TI", model.G, element_T)
    else:
        D = element_conductivities(model.material, T, elements)
        loads = element_loads_batch("TD", model.G, element_T, model.B, D)
    return np.bincount(elements.ravel(), weights=loads.ravel(), minlength=model.n_nodes)


def _advance(
    model: PrecomputedModel, T: NDArray[np.float64], step_index: int
) -> Tuple[NDArray[np.float64], NDArray[np.float64], NDArray[np.float64]]:
    """One explicit step from T; returns (T_next, F, Q). ``step_index`` is the step being taken."""
    F = scatter_loads(model, T)
    Q = model.boundary.source(T)
    if model.form == "TI":
        T_next = T + model.coefficient * (F + Q)
    else:
        T_next = T + model.coefficient / nodal_specific_heat(model.material, T) * (F + Q)
    T_next[model.dirichlet_nodes] = model.dirichlet_values
    if not np.all(np.isfinite(T_next)):
        node = int(np.flatnonzero(~np.isfinite(T_next))[0])
        raise InstabilityError(step=step_index, node=node)
    return T_next, F, Q


def initial_state(model: PrecomputedModel, T0: ArrayLike) -> SimulationState:
    """All nodes at T0 (scalar or per node), Dirichlet values applied."""
    T = np.array(np.broadcast_to(np.asarray(T0, dtype=float), (model.n_nodes,)))
    T[model.dirichlet_nodes] = model.dirichlet_values
    zeros = np.zeros(model.n_nodes)
    return SimulationState(step=0, time=0.0, T=T, F=zeros, Q=zeros.copy(), T_prev=T.copy())


def step(model: PrecomputedModel, state: SimulationState) -> SimulationState:
    """Advance one time step.

    Loads are computed at the current temperatures, every node is updated
    independently, then Dirichlet nodes are overwritten.

    Raises:
        InstabilityError: If any temperature becomes non-finite
        UnphysicalStateError: If a radiating node reaches absolute zero
    """
    index = state.step + 1
    T_next, F, Q = _advance(model, state.T, index)
    return SimulationState(step=index, time=index * model.dt, T=T_next, F=F, Q=Q, T_prev=state.T)


def steady_state_check(T_prev: ArrayLike, T_next: ArrayLike, tol: float) -> bool:
    """True iff max |T_next - T_prev| <= tol (inclusive)."""
    T_prev = np.asarray(T_prev, dtype=float)
    T_next = np.asarray(T_next, dtype=float)
    if T_prev.shape != T_next.shape:
        raise ValueError(f"Shape mismatch: {T_prev.shape} vs {T_next.shape}")
    if T_prev.size == 0:
        return True
    return bool(np.max(np.abs(T_next - T_prev)) <= tol)


def run(
    model: PrecomputedModel,
    T0: ArrayLike,
    schedule: Schedule,
    on_snapshot: Optional[Callable[[SimulationState], None]] = None,
) -> RunResult:
    """Run the explicit time-stepping loop.

    Snapshots are taken at step 0, every ``schedule.every`` steps, and at the
    final state. With ``on_snapshot`` they are handed to the callback;
    otherwise they are kept in ``RunResult.snapshots``.

    Raises:
        InstabilityError: If the run diverges
    """
    schedule.validate()
    snapshots: List[SimulationState] = []
    emit = on_snapshot if on_snapshot is not None else snapshots.append

    state = initial_state(model, T0)
    emit(state)
    last_emitted = 0
    durations: List[float] = []
    steady_step: Optional[int] = None

    for _ in range(schedule.step_count(model.dt)):
        started = time.perf_counter()
        state = step(model, state)
        durations.append(time.perf_counter() - started)
        if schedule.stop_on_steady and steady_state_check(state.T_prev, state.T, schedule.steady_tolerance):
            steady_step = state.step
            break
        if state.step % schedule.every == 0:
            emit(state)
            last_emitted = state.step
            logger.debug(f"Step {state.step}, t = {state.time:g} s, max T = {state.T.max():.6g} °C")

    if last_emitted != state.step:
        emit(state)
    if schedule.duration is None and steady_step is None:
        logger.warning(f"Stopped after max_steps = {schedule.max_steps} without reaching steady state")

    timing = TimingSummary.from_durations(durations, model.dt)
    logger.info(
        f"Run finished: {state.step} steps, t = {state.time:g} s, "
        f"{timing.mean_ms:.4g} ms/step, total {timing.total_ms:.6g} ms"
        + (f", steady at step {steady_step}" if steady_step is not None else "")
    )
    return RunResult(
        steps=state.step,
        final_time=state.time,
        steady_step=steady_step,
        final_state=state,
        timing=timing,
        snapshots=snapshots,
    )


def march(model: PrecomputedModel, T0: ArrayLike, n_steps: int) -> Tuple[NDArray[np.float64], List[float]]:
    """IO-free stepping loop for benchmarks; returns final T and per-step seconds."""
    if n_steps < 1:
        raise ValueError("A benchmark needs at least one step")
    T = initial_state(model, T0).T
    durations = []
    for index in range(1, n_steps + 1):
        started = time.perf_counter()
        T, _, _ = _advance(model, T, index)
        durations.append(time.perf_counter() - started)
    return T, durations


def thermal_energy(model: PrecomputedModel, T: ArrayLike) -> float:
    """Lumped thermal energy sum(M c T), J relative to 0 °C."""
    T = np.asarray(T, dtype=float)
    return float(np.sum(model.capacity(T) * T))


def with_conductivity_scale(material: MaterialModel, factor: float) -> MaterialModel:
    """Material with every conductivity entry multiplied by ``factor``."""
    table = material.conductivity
    return replace(material, conductivity=replace(table, values=table.values * factor))
