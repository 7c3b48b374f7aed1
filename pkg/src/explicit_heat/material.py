"""Temperature-dependent material properties.

Specific heat ``c(T)`` and the conductivity tensor ``k_ij(T)`` are given as
piecewise-linear tables over temperature. Outside the table range the end
rows apply. Specific heat is evaluated per node; conductivity is evaluated at
each element node and the nodal tensors are averaged for the element.
"""

import logging
from dataclasses import dataclass
from typing import Literal, Sequence, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .exceptions import MaterialError

# Configure module logger
logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())

SymmetryClass = Literal["isotropic", "orthotropic", "anisotropic"]

# Number of values per table row for each symmetry class. Anisotropic rows
# are ordered k11, k22, k33, k12, k13, k23.
ARITY = {"isotropic": 1, "orthotropic": 3, "anisotropic": 6}

PSD_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class PropertyTable:
    """Piecewise-linear property table.

    Attributes:
        temperatures: strictly increasing breakpoints (°C), shape (n,)
        values: property values at the breakpoints, shape (n, arity)

    Examples:
        ```python
        k = PropertyTable.from_rows([(37, 200), (337, 2000)])
        c = PropertyTable.constant(2000)
        ortho = PropertyTable.constant([300, 400, 200])
        ```
    """
    temperatures: NDArray[np.float64]
    values: NDArray[np.float64]

    def __post_init__(self) -> None:
        temperatures = np.array(self.temperatures, dtype=float).reshape(-1)
        values = np.array(self.values, dtype=float)
        if values.ndim == 1:
            values = values.reshape(-1, 1)
        temperatures.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "temperatures", temperatures)
        object.__setattr__(self, "values", values)

        if temperatures.size < 1:
            raise MaterialError("A property table needs at least one row")
        if values.shape[0] != temperatures.size:
            raise MaterialError(
                f"Table has {temperatures.size} temperatures but {values.shape[0]} value rows"
            )
        if values.shape[1] not in (1, 3, 6):
            raise MaterialError(f"Table rows hold 1, 3 or 6 values, got {values.shape[1]}")
        if not (np.all(np.isfinite(temperatures)) and np.all(np.isfinite(values))):
            raise MaterialError("Table entries must be finite")
        if np.any(np.diff(temperatures) <= 0.0):
            raise MaterialError("Table temperatures must be strictly increasing")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[float]]) -> "PropertyTable":
        """Build a table from ``(T, v1[, v2, ...])`` rows."""
        array = np.asarray(rows, dtype=float)
        if array.ndim != 2 or array.shape[1] < 2:
            raise MaterialError("Table rows must be (temperature, value, ...)")
        return cls(temperatures=array[:, 0], values=array[:, 1:])

    @classmethod
    def constant(cls, value: Union[float, Sequence[float]]) -> "PropertyTable":
        """Single-row table, i.e. a temperature-independent property."""
        return cls(temperatures=np.zeros(1), values=np.atleast_1d(np.asarray(value, dtype=float))[None, :])

    @property
    def arity(self) -> int:
        return int(self.values.shape[1])

    @property
    def is_constant(self) -> bool:
        return self.temperatures.size == 1


def _interpolate(table: PropertyTable, T: ArrayLike) -> NDArray[np.float64]:
    """Values at temperatures T, shape T.shape + (arity,)."""
    T = np.asarray(T, dtype=float)
    if table.is_constant:
        return np.broadcast_to(table.values[0], T.shape + (table.arity,)).copy()
    columns = [np.interp(T, table.temperatures, table.values[:, j]) for j in range(table.arity)]
    return np.stack(columns, axis=-1)


def eval_property(table: PropertyTable, T: ArrayLike) -> Union[float, NDArray[np.float64]]:
    """Evaluate a table by linear interpolation, clamping outside its range.

    Returns a float for a scalar temperature on a single-valued table,
    otherwise an array of shape ``T.shape`` (arity 1) or ``T.shape + (arity,)``.

    Example:
        ```python
        k = PropertyTable.from_rows([(37, 200), (337, 2000)])
        eval_property(k, 38)   # 206.0
        eval_property(k, 400)  # 2000.0, clamped
        ```
    """
    values = _interpolate(table, T)
    if table.arity == 1:
        values = values[..., 0]
        return float(values) if values.ndim == 0 else values
    return values


def conductivity_tensors(values: ArrayLike, symmetry: str) -> NDArray[np.float64]:
    """Vectorised tensor assembly: ``(..., arity)`` table values -> ``(..., 3, 3)``."""
    values = np.asarray(values, dtype=float)
    arity = ARITY.get(symmetry)
    if arity is None:
        raise MaterialError(f"Unknown symmetry class: {symmetry!r}")
    if values.shape[-1] != arity:
        raise MaterialError(f"{symmetry} conductivity needs {arity} values, got {values.shape[-1]}")
    D = np.zeros(values.shape[:-1] + (3, 3))
    if symmetry == "isotropic":
        for i in range(3):
            D[..., i, i] = values[..., 0]
    else:
        for i in range(3):
            D[..., i, i] = values[..., i]
    if symmetry == "anisotropic":
        for n, (i, j) in enumerate(((0, 1), (0, 2), (1, 2)), start=3):
            D[..., i, j] = values[..., n]
            D[..., j, i] = values[..., n]
    return D


def check_positive_semidefinite(D: NDArray[np.float64]) -> None:
    """Check the three leading principal minors of a 3 x 3 tensor.

    Raises:
        MaterialError: If any minor is below -1e-12
    """
    minors = (D[0, 0], np.linalg.det(D[:2, :2]), np.linalg.det(D))
    if min(minors) < -PSD_TOLERANCE:
        raise MaterialError(f"Conductivity tensor is not positive semidefinite: {D.tolist()}")


def conductivity_tensor(values: ArrayLike, symmetry: str) -> NDArray[np.float64]:
    """Build the symmetric 3 x 3 conductivity tensor from one table row.

    isotropic ``k`` -> ``k * I``; orthotropic ``(k11, k22, k33)`` -> diagonal;
    anisotropic ``(k11, k22, k33, k12, k13, k23)`` -> full symmetric matrix.

    Raises:
        MaterialError: If the arity does not match or the tensor is not
            positive semidefinite
    """
    D = conductivity_tensors(np.atleast_1d(np.asarray(values, dtype=float)), symmetry)
    check_positive_semidefinite(D)
    return D


@dataclass(frozen=True, eq=False)
class MaterialModel:
    """Homogeneous material of a simulation.

    Attributes:
        density: rho in kg/m^3
        specific_heat: table of c in J/(kg·°C), arity 1
        conductivity: table of k in W/(m·°C), arity matching ``symmetry``
        symmetry: "isotropic", "orthotropic" or "anisotropic"

    Raises:
        MaterialError: On a non-positive density or specific heat, an arity
            mismatch, or a conductivity row that is not positive semidefinite
    """
    density: float
    specific_heat: PropertyTable
    conductivity: PropertyTable
    symmetry: SymmetryClass = "isotropic"

    def __post_init__(self) -> None:
        if not np.isfinite(self.density) or self.density <= 0.0:
            raise MaterialError(f"Density must be positive, got {self.density}")
        if self.specific_heat.arity != 1:
            raise MaterialError("Specific heat table rows hold a single value")
        if np.any(self.specific_heat.values <= 0.0):
            raise MaterialError("Specific heat must be positive")
        if self.symmetry not in ARITY:
            raise MaterialError(f"Unknown symmetry class: {self.symmetry!r}")
        if self.conductivity.arity != ARITY[self.symmetry]:
            raise MaterialError(
                f"{self.symmetry} conductivity rows hold {ARITY[self.symmetry]} values, "
                f"got {self.conductivity.arity}"
            )
        for row in self.conductivity.values:
            conductivity_tensor(row, self.symmetry)

    @classmethod
    def isotropic(cls, density: float, specific_heat: float, conductivity: float) -> "MaterialModel":
        """Temperature-independent isotropic material."""
        return cls(
            density=density,
            specific_heat=PropertyTable.constant(specific_heat),
            conductivity=PropertyTable.constant(conductivity),
        )

    @property
    def is_temperature_dependent(self) -> bool:
        return not (self.specific_heat.is_constant and self.conductivity.is_constant)

    def tensor_at(self, T: float) -> NDArray[np.float64]:
        """Conductivity tensor at a single temperature."""
        return conductivity_tensors(_interpolate(self.conductivity, T), self.symmetry)

    def worst_case(self) -> Tuple[NDArray[np.float64], float]:
        """Most conductive table row and the smallest specific heat.

        The row is the one whose tensor has the largest eigenvalue; together
        they bound the stiffest state the table allows.
        """
        tensors = conductivity_tensors(self.conductivity.values, self.symmetry)
        largest = np.linalg.eigvalsh(tensors)[:, -1]
        return tensors[int(np.argmax(largest))], float(np.min(self.specific_heat.values))


def nodal_specific_heat(material: MaterialModel, T_node: ArrayLike) -> Union[float, NDArray[np.float64]]:
    """Specific heat at each node's own temperature."""
    return eval_property(material.specific_heat, T_node)


def nodal_conductivity_values(material: MaterialModel, T: ArrayLike) -> NDArray[np.float64]:
    """Raw conductivity table values at nodal temperatures, shape ``T.shape + (arity,)``."""
    return _interpolate(material.conductivity, T)


def element_conductivities(
    material: MaterialModel,
    T: NDArray[np.float64],
    elements: NDArray[np.int64],
) -> NDArray[np.float64]:
    """Element tensors (M x 3 x 3) from nodal temperatures T (N,).

    Each element gets the mean of the tensors evaluated at its nodes. An
    element whose nodes share one temperature gets that point's tensor exactly.
    """
    element_T = T[elements]
    values = nodal_conductivity_values(material, element_T)  # M x k x arity
    mean = values.mean(axis=1)
    uniform = np.all(element_T == element_T[:, :1], axis=1)
    mean[uniform] = values[uniform, 0]
    return conductivity_tensors(mean, material.symmetry)


def element_conductivity(material: MaterialModel, nodal_T: ArrayLike) -> NDArray[np.float64]:
    """Element conductivity: arithmetic mean of the nodal tensors.

    Example:
        ```python
        material = MaterialModel(
            density=1000,
            specific_heat=PropertyTable.from_rows([(37, 2000), (337, 8000)]),
            conductivity=PropertyTable.from_rows([(37, 200), (337, 2000)]),
        )
        element_conductivity(material, [37, 37, 337, 337])  # 1100 * I
        ```
    """
    nodal_T = np.asarray(nodal_T, dtype=float).reshape(1, -1)
    return element_conductivities(material, nodal_T.ravel(), np.arange(nodal_T.size)[None, :])[0]
