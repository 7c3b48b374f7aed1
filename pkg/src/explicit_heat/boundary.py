"""Lumped thermal mass, the coefficient vector A, and nodal boundary loads.

Boundary conditions are typed records bound to named node or facet sets:

- ``Dirichlet``: prescribed temperature, enforced by the solver after each update
- ``Flux``: concentrated heat flow in W per node
- ``Convection``: concentrated film condition ``-h (T - T_a) a``
- ``Radiation``: radiation to ambient ``-sigma eps [(T - T_z)^4 - (T_a - T_z)^4] a``
- ``HeatSource``: a total wattage spread over the nodes inside a sphere

A surface without a record is adiabatic. Convection and radiation use one
uniform area per node: the facet set's total area divided by its number of
distinct nodes. Loads are positive into the body.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .exceptions import BoundaryError, MeshError, UnphysicalStateError
from .mesh import Mesh, element_volumes, nodal_area, nodes_within

# Configure module logger
logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())

STEFAN_BOLTZMANN = 5.67e-8  # W m^-2 K^-4
ABSOLUTE_ZERO = -273.15  # °C


@dataclass(frozen=True)
class Dirichlet:
    """Prescribed temperature T_r (°C) on a node set."""
    node_set: str
    temperature: float


@dataclass(frozen=True)
class Flux:
    """Concentrated heat flow q (W) applied to every node of a set."""
    node_set: str
    watts_per_node: float


@dataclass(frozen=True)
class Convection:
    """Concentrated film condition on a facet set.

    Attributes:
        facet_set: the convecting surface
        h: heat transfer coefficient, W/(m^2·°C)
        ambient: T_a in °C
    """
    facet_set: str
    h: float
    ambient: float

    def __post_init__(self) -> None:
        if self.h < 0.0:
            raise BoundaryError(f"Convection coefficient must be non-negative, got {self.h}")


@dataclass(frozen=True)
class Radiation:
    """Concentrated radiation to ambient on a facet set.

    Attributes:
        facet_set: the radiating surface
        emissivity: epsilon in [0, 1]
        ambient: T_a in °C
        absolute_zero: T_z in °C
        sigma: Stefan-Boltzmann constant, W m^-2 K^-4
    """
    facet_set: str
    emissivity: float
    ambient: float
    absolute_zero: float = ABSOLUTE_ZERO
    sigma: float = STEFAN_BOLTZMANN

    def __post_init__(self) -> None:
        if not 0.0 <= self.emissivity <= 1.0:
            raise BoundaryError(f"Emissivity must lie in [0, 1], got {self.emissivity}")
        if self.sigma <= 0.0:
            raise BoundaryError(f"Stefan-Boltzmann constant must be positive, got {self.sigma}")
        if self.ambient <= self.absolute_zero:
            raise BoundaryError("Ambient temperature must be above absolute zero")


@dataclass(frozen=True)
class HeatSource:
    """Total heat flow (W) shared equally by the nodes within ``radius`` of ``center``.

    ``node_set`` restricts the zone, e.g. to a surface.
    """
    center: Tuple[float, float, float]
    radius: float
    watts: float
    node_set: Optional[str] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        if len(self.center) != 3:
            raise BoundaryError("Heat source center must be a 3-D point")
        if self.radius <= 0.0:
            raise BoundaryError(f"Heat source radius must be positive, got {self.radius}")


BoundaryRecord = Union[Dirichlet, Flux, Convection, Radiation, HeatSource]


@dataclass(frozen=True)
class BoundarySpec:
    """All boundary records of a simulation; no records means fully adiabatic."""
    records: Tuple[BoundaryRecord, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "records", tuple(self.records))

    def of_type(self, kind: type) -> List[BoundaryRecord]:
        return [record for record in self.records if isinstance(record, kind)]


@dataclass(frozen=True, eq=False)
class LumpedThermal:
    """Lumped nodal mass and the per-node update coefficient.

    Attributes:
        nodal_mass: kg per node
        coefficient: A = dt / M ("TD") or dt / (M c) ("TI")
        form: which of the two
    """
    nodal_mass: NDArray[np.float64]
    coefficient: NDArray[np.float64]
    form: Literal["TD", "TI"]


def lump_thermal_mass(mesh: Mesh, density: float) -> NDArray[np.float64]:
    """Split each element's mass rho * V_e equally over its k nodes."""
    k = mesh.nodes_per_element
    share = density * element_volumes(mesh) / k
    return np.bincount(mesh.elements.ravel(), weights=np.repeat(share, k), minlength=mesh.n_nodes)


def coefficient_matrix(
    nodal_mass: NDArray[np.float64],
    dt: float,
    constant_c: Optional[float] = None,
) -> NDArray[np.float64]:
    """Diagonal coefficient vector A.

    Args:
        nodal_mass: lumped mass per node (kg)
        dt: time step (s)
        constant_c: specific heat for a temperature-independent run; when
            omitted A = dt / M and c is applied at run time

    Raises:
        ValueError: If dt is not positive
        MeshError: If a node has zero mass (it belongs to no element)
    """
    if dt <= 0.0:
        raise ValueError(f"Time step must be positive, got {dt}")
    nodal_mass = np.asarray(nodal_mass, dtype=float)
    orphans = np.flatnonzero(nodal_mass <= 0.0)
    if orphans.size:
        raise MeshError(
            f"{orphans.size} node(s) belong to no element and carry no mass, first is node {orphans[0] + 1}"
        )
    if constant_c is None:
        return dt / nodal_mass
    return dt / (nodal_mass * constant_c)


def lumped_thermal(mesh: Mesh, density: float, dt: float, constant_c: Optional[float] = None) -> LumpedThermal:
    """Lumped mass and coefficient vector in one call."""
    mass = lump_thermal_mass(mesh, density)
    return LumpedThermal(
        nodal_mass=mass,
        coefficient=coefficient_matrix(mass, dt, constant_c),
        form="TD" if constant_c is None else "TI",
    )


def convection_load(h: float, T_a: float, T_node: ArrayLike, a_node: float) -> Union[float, NDArray[np.float64]]:
    """Film heat flow into a node, ``-h (T_node - T_a) a_node`` (W).

    Raises:
        BoundaryError: If the nodal area is not positive
    """
    if a_node <= 0.0:
        raise BoundaryError(f"Nodal area must be positive, got {a_node}")
    load = -h * (np.asarray(T_node, dtype=float) - T_a) * a_node
    return float(load) if load.ndim == 0 else load


def radiation_load(
    sigma: float,
    emissivity: float,
    T_z: float,
    T_a: float,
    T_node: ArrayLike,
    a_node: float,
) -> Union[float, NDArray[np.float64]]:
    """Radiation heat flow into a node (W).

    ``-sigma eps [(T_node - T_z)^4 - (T_a - T_z)^4] a_node``, temperatures in °C.

    Raises:
        BoundaryError: If the nodal area is not positive
        UnphysicalStateError: If a node is at or below absolute zero
    """
    if a_node <= 0.0:
        raise BoundaryError(f"Nodal area must be positive, got {a_node}")
    T = np.asarray(T_node, dtype=float)
    frozen = np.flatnonzero(np.atleast_1d(T) <= T_z)
    if frozen.size:
        raise UnphysicalStateError(
            f"Radiating temperature {np.atleast_1d(T)[frozen[0]]} °C is at or below absolute zero ({T_z} °C)"
        )
    load = -sigma * emissivity * ((T - T_z) ** 4 - (T_a - T_z) ** 4) * a_node
    return float(load) if load.ndim == 0 else load


@dataclass(frozen=True)
class SurfaceGroup:
    """A convection or radiation record with its distinct nodes and uniform nodal area."""
    record: Union[Convection, Radiation]
    nodes: NDArray[np.int64]
    area: float


@dataclass(frozen=True, eq=False)
class ResolvedBoundary:
    """Boundary records bound to node indices and nodal areas of one mesh.

    Attributes:
        n_nodes: number of mesh nodes
        dirichlet_nodes: constrained nodes
        dirichlet_values: their prescribed temperatures
        constant_source: Q from flux and heat-source records (W)
        surfaces: convection and radiation groups with their nodal areas
    """
    n_nodes: int
    dirichlet_nodes: NDArray[np.int64]
    dirichlet_values: NDArray[np.float64]
    constant_source: NDArray[np.float64]
    surfaces: Tuple[SurfaceGroup, ...] = field(default_factory=tuple)

    def nodal_areas(self) -> Dict[str, float]:
        """Facet set name -> uniform nodal area."""
        return {group.record.facet_set: group.area for group in self.surfaces}

    def source(self, T: NDArray[np.float64]) -> NDArray[np.float64]:
        """Net nodal heat flows Q at temperatures T (W).

        Raises:
            UnphysicalStateError: If a radiating node is at or below absolute zero
        """
        Q = self.constant_source.copy()
        for group in self.surfaces:
            record = group.record
            T_group = T[group.nodes]
            if isinstance(record, Convection):
                Q[group.nodes] += convection_load(record.h, record.ambient, T_group, group.area)
            else:
                try:
                    Q[group.nodes] += radiation_load(
                        record.sigma, record.emissivity, record.absolute_zero, record.ambient, T_group, group.area
                    )
                except UnphysicalStateError:
                    node = int(group.nodes[np.argmin(T_group)])
                    raise UnphysicalStateError(
                        f"Node {node + 1} on radiating set {record.facet_set!r} is at "
                        f"{T[node]} °C, at or below absolute zero ({record.absolute_zero} °C)"
                    ) from None
        return Q


def resolve_boundary(spec: BoundarySpec, mesh: Mesh) -> ResolvedBoundary:
    """Bind boundary records to a mesh.

    Raises:
        MeshError: If a referenced set does not exist or a facet set is empty
        BoundaryError: If Dirichlet sets overlap or a heat source zone holds no node
    """
    dirichlet_nodes: List[NDArray[np.int64]] = []
    dirichlet_values: List[NDArray[np.float64]] = []
    constant = np.zeros(mesh.n_nodes)
    surfaces: List[SurfaceGroup] = []

    for record in spec.records:
        if isinstance(record, Dirichlet):
            nodes = mesh.node_set(record.node_set)
            dirichlet_nodes.append(nodes)
            dirichlet_values.append(np.full(nodes.size, float(record.temperature)))
        elif isinstance(record, Flux):
            constant[mesh.node_set(record.node_set)] += record.watts_per_node
        elif isinstance(record, HeatSource):
            nodes = nodes_within(mesh, record.center, record.radius, record.node_set)
            if nodes.size == 0:
                raise BoundaryError(
                    f"No node lies within {record.radius} m of {record.center} for the heat source"
                )
            constant[nodes] += record.watts / nodes.size
        elif isinstance(record, (Convection, Radiation)):
            area, nodes = nodal_area(record.facet_set, mesh)
            surfaces.append(SurfaceGroup(record=record, nodes=nodes, area=area))
        else:
            raise BoundaryError(f"Unknown boundary record: {record!r}")

    if dirichlet_nodes:
        all_nodes = np.concatenate(dirichlet_nodes)
        if np.unique(all_nodes).size != all_nodes.size:
            raise BoundaryError("Dirichlet node sets must be pairwise disjoint")
        values = np.concatenate(dirichlet_values)
        order = np.argsort(all_nodes, kind="stable")
        all_nodes, values = all_nodes[order], values[order]
    else:
        all_nodes, values = np.zeros(0, dtype=np.int64), np.zeros(0)

    logger.info(
        f"Resolved {len(spec.records)} boundary record(s): {all_nodes.size} Dirichlet node(s), "
        f"{len(surfaces)} convection/radiation surface(s)"
    )
    return ResolvedBoundary(
        n_nodes=mesh.n_nodes,
        dirichlet_nodes=all_nodes,
        dirichlet_values=values,
        constant_source=constant,
        surfaces=tuple(surfaces),
    )


def assemble_Q(spec: BoundarySpec, mesh: Mesh, T: Sequence[float]) -> NDArray[np.float64]:
    """Net nodal heat flows Q (W) at the current temperatures.

    Flux and heat-source records add their fixed wattage, convection and
    radiation add their loads at T, Dirichlet records add nothing.
    """
    return resolve_boundary(spec, mesh).source(np.asarray(T, dtype=float))
