"""JSON run configuration.

Example::

    {
      "mesh": "cube.mesh",
      "material": {
        "density": 1000,
        "specific_heat": [[37, 2000], [337, 8000]],
        "conductivity": [[37, 200], [337, 2000]],
        "symmetry": "isotropic"
      },
      "initial_temperature": 37,
      "boundary_conditions": [
        {"type": "dirichlet", "node_set": "bottom", "temperature": 37},
        {"type": "flux", "node_set": "top", "watts_per_node": 0.2},
        {"type": "convection", "facet_set": "front", "h": 25, "ambient": 20},
        {"type": "radiation", "facet_set": "back", "emissivity": 0.8, "ambient": 20},
        {"type": "heat_source", "center": [0.05, 0.05, 0.1], "radius": 0.01, "watts": 5}
      ],
      "time": {"dt": 0.01, "duration": 10, "stop_on_steady": false, "steady_tolerance": 0.001},
      "output": {"every": 100, "directory": "out", "format": "csv"}
    }

A property is a number, a list of numbers (one constant orthotropic or
anisotropic row) or a list of ``[T, v1, ...]`` rows. Relative mesh paths are
resolved against the directory of the config file.
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Literal, Mapping, Optional, Tuple, Union

import numpy as np

from .boundary import (
    ABSOLUTE_ZERO,
    STEFAN_BOLTZMANN,
    BoundaryRecord,
    BoundarySpec,
    Convection,
    Dirichlet,
    Flux,
    HeatSource,
    Radiation,
)
from .exceptions import BoundaryError, ConfigError, MaterialError
from .material import MaterialModel, PropertyTable
from .solver import Schedule, SolverOptions

# Configure module logger
logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())

OutputFormat = Literal["csv", "vtk"]


class _Object:
    """Typed access to a JSON object that remembers its dotted path."""

    def __init__(self, value: Any, path: str):
        if not isinstance(value, dict):
            raise ConfigError(path or "<root>", "expected an object")
        self.value = value
        self.path = path
        self._seen: set = set()

    def _child(self, key: str) -> str:
        return f"{self.path}.{key}" if self.path else key

    def get(self, key: str, default: Any = None, required: bool = False) -> Any:
        self._seen.add(key)
        if key not in self.value:
            if required:
                raise ConfigError(self._child(key), "is required")
            return default
        return self.value[key]

    def number(self, key: str, default: Optional[float] = None, required: bool = False) -> Optional[float]:
        value = self.get(key, default, required)
        if value is None:
            return None
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(self._child(key), f"expected a number, got {value!r}")
        if not np.isfinite(value):
            raise ConfigError(self._child(key), "must be finite")
        return float(value)

    def integer(self, key: str, default: int) -> int:
        value = self.get(key, default)
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(self._child(key), f"expected an integer, got {value!r}")
        return value

    def boolean(self, key: str, default: Optional[bool]) -> Optional[bool]:
        value = self.get(key, default)
        if value is not None and not isinstance(value, bool):
            raise ConfigError(self._child(key), f"expected true or false, got {value!r}")
        return value

    def string(self, key: str, default: Optional[str] = None, required: bool = False) -> Optional[str]:
        value = self.get(key, default, required)
        if value is not None and not isinstance(value, str):
            raise ConfigError(self._child(key), f"expected a string, got {value!r}")
        return value

    def close(self) -> None:
        """Reject keys that were never read."""
        unknown = sorted(set(self.value) - self._seen)
        if unknown:
            raise ConfigError(self._child(unknown[0]), "unknown key")


@dataclass(frozen=True)
class MaterialConfig:
    """Material block: density plus specific heat and conductivity tables."""
    density: float
    specific_heat: PropertyTable
    conductivity: PropertyTable
    symmetry: str = "isotropic"

    def to_model(self) -> MaterialModel:
        """Build the material model.

        Raises:
            ConfigError: If the material is invalid
        """
        try:
            return MaterialModel(
                density=self.density,
                specific_heat=self.specific_heat,
                conductivity=self.conductivity,
                symmetry=self.symmetry,  # type: ignore[arg-type]
            )
        except MaterialError as e:
            raise ConfigError("material", str(e)) from e


@dataclass(frozen=True)
class TimeConfig:
    """Time block.

    ``strict_stability`` left unset defers to ``EXPLICIT_HEAT_STRICT_STABILITY``.
    """
    dt: float
    duration: Optional[float] = None
    stop_on_steady: bool = False
    steady_tolerance: float = 1e-3
    strict_stability: Optional[bool] = None
    max_steps: int = 10_000_000

    def validate(self) -> None:
        """Validate the time block.

        Raises:
            ConfigError: If dt is not positive or there is no stopping rule
        """
        if self.dt <= 0.0:
            raise ConfigError("time.dt", "must be positive")
        if self.duration is not None and self.duration <= 0.0:
            raise ConfigError("time.duration", "must be positive")
        if self.duration is None and not self.stop_on_steady:
            raise ConfigError("time", "needs a duration or stop_on_steady")
        if self.steady_tolerance < 0.0:
            raise ConfigError("time.steady_tolerance", "cannot be negative")
        if self.max_steps < 1:
            raise ConfigError("time.max_steps", "must be at least 1")

    def schedule(self, every: int) -> Schedule:
        return Schedule(
            duration=self.duration,
            stop_on_steady=self.stop_on_steady,
            steady_tolerance=self.steady_tolerance,
            every=every,
            max_steps=self.max_steps,
        )


@dataclass(frozen=True)
class OutputConfig:
    """Output block: snapshot cadence in steps, directory and file format."""
    every: int = 100
    directory: Path = Path("output")
    format: OutputFormat = "csv"

    def validate(self) -> None:
        """Validate the output block.

        Raises:
            ConfigError: If the cadence or format is invalid
        """
        if self.every < 1:
            raise ConfigError("output.every", "must be at least 1")
        if self.format not in ("csv", "vtk"):
            raise ConfigError("output.format", f"must be 'csv' or 'vtk', got {self.format!r}")


@dataclass(frozen=True)
class RunConfig:
    """A complete simulation definition."""
    mesh_path: Path
    material: MaterialConfig
    initial_temperature: float
    boundary: BoundarySpec
    time: TimeConfig
    output: OutputConfig = field(default_factory=OutputConfig)

    def validate(self) -> None:
        self.time.validate()
        self.output.validate()
        self.material.to_model()

    def solver_options(self) -> SolverOptions:
        """Options from the environment, with the config's strict flag taking precedence."""
        options = SolverOptions.from_env()
        if self.time.strict_stability is not None:
            options.strict_stability = self.time.strict_stability
        try:
            options.validate()
        except ValueError as e:
            raise ConfigError("environment", str(e)) from e
        return options

    def schedule(self) -> Schedule:
        return self.time.schedule(self.output.every)


def _property_table(value: Any, path: str) -> PropertyTable:
    try:
        if isinstance(value, bool):
            raise ConfigError(path, "expected a number or a table")
        if isinstance(value, (int, float)):
            return PropertyTable.constant(float(value))
        if isinstance(value, list) and value and all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
        ):
            return PropertyTable.constant([float(v) for v in value])
        if isinstance(value, list) and value and all(isinstance(row, list) for row in value):
            return PropertyTable.from_rows(value)
    except MaterialError as e:
        raise ConfigError(path, str(e)) from e
    except (TypeError, ValueError) as e:
        raise ConfigError(path, f"invalid table: {e}") from e
    raise ConfigError(path, "expected a number, a list of numbers or a list of [T, value...] rows")


def _material(value: Any) -> MaterialConfig:
    block = _Object(value, "material")
    density = block.number("density", required=True)
    specific_heat = _property_table(block.get("specific_heat", required=True), "material.specific_heat")
    conductivity = _property_table(block.get("conductivity", required=True), "material.conductivity")
    symmetry = block.string("symmetry", "isotropic")
    block.close()
    config = MaterialConfig(
        density=float(density),  # type: ignore[arg-type]
        specific_heat=specific_heat,
        conductivity=conductivity,
        symmetry=symmetry,  # type: ignore[arg-type]
    )
    config.to_model()
    return config


def _point(value: Any, path: str) -> Tuple[float, float, float]:
    if not (isinstance(value, list) and len(value) == 3 and all(isinstance(v, (int, float)) for v in value)):
        raise ConfigError(path, "expected [x, y, z]")
    return (float(value[0]), float(value[1]), float(value[2]))


def _record(value: Any, path: str) -> BoundaryRecord:
    entry = _Object(value, path)
    kind = entry.string("type", required=True)
    try:
        record: BoundaryRecord
        if kind == "dirichlet":
            record = Dirichlet(
                node_set=entry.string("node_set", required=True),  # type: ignore[arg-type]
                temperature=entry.number("temperature", required=True),  # type: ignore[arg-type]
            )
        elif kind == "flux":
            record = Flux(
                node_set=entry.string("node_set", required=True),  # type: ignore[arg-type]
                watts_per_node=entry.number("watts_per_node", required=True),  # type: ignore[arg-type]
            )
        elif kind == "convection":
            record = Convection(
                facet_set=entry.string("facet_set", required=True),  # type: ignore[arg-type]
                h=entry.number("h", required=True),  # type: ignore[arg-type]
                ambient=entry.number("ambient", required=True),  # type: ignore[arg-type]
            )
        elif kind == "radiation":
            record = Radiation(
                facet_set=entry.string("facet_set", required=True),  # type: ignore[arg-type]
                emissivity=entry.number("emissivity", required=True),  # type: ignore[arg-type]
                ambient=entry.number("ambient", required=True),  # type: ignore[arg-type]
                absolute_zero=entry.number("absolute_zero", ABSOLUTE_ZERO),  # type: ignore[arg-type]
                sigma=entry.number("sigma", STEFAN_BOLTZMANN),  # type: ignore[arg-type]
            )
        elif kind == "heat_source":
            record = HeatSource(
                center=_point(entry.get("center", required=True), f"{path}.center"),
                radius=entry.number("radius", required=True),  # type: ignore[arg-type]
                watts=entry.number("watts", required=True),  # type: ignore[arg-type]
                node_set=entry.string("node_set"),
            )
        else:
            raise ConfigError(
                f"{path}.type",
                f"unknown boundary type {kind!r}; expected dirichlet, flux, convection, radiation or heat_source",
            )
    except BoundaryError as e:
        raise ConfigError(path, str(e)) from e
    entry.close()
    return record


def _boundary(value: Any) -> BoundarySpec:
    if value is None:
        return BoundarySpec()
    if not isinstance(value, list):
        raise ConfigError("boundary_conditions", "expected a list")
    return BoundarySpec(tuple(_record(item, f"boundary_conditions[{i}]") for i, item in enumerate(value)))


def _time(value: Any) -> TimeConfig:
    block = _Object(value, "time")
    config = TimeConfig(
        dt=block.number("dt", required=True),  # type: ignore[arg-type]
        duration=block.number("duration"),
        stop_on_steady=bool(block.boolean("stop_on_steady", False)),
        steady_tolerance=block.number("steady_tolerance", 1e-3),  # type: ignore[arg-type]
        strict_stability=block.boolean("strict_stability", None),
        max_steps=block.integer("max_steps", 10_000_000),
    )
    block.close()
    config.validate()
    return config


def _output(value: Any, base: Path) -> OutputConfig:
    if value is None:
        return OutputConfig(directory=base / "output")
    block = _Object(value, "output")
    directory = Path(block.string("directory", "output"))  # type: ignore[arg-type]
    config = OutputConfig(
        every=block.integer("every", 100),
        directory=directory if directory.is_absolute() else base / directory,
        format=block.string("format", "csv"),  # type: ignore[arg-type]
    )
    block.close()
    config.validate()
    return config


def parse_config(text: str, base_dir: Union[str, Path, None] = None) -> RunConfig:
    """Parse and validate a JSON run configuration.

    Args:
        text: JSON document
        base_dir: directory that relative paths are resolved against

    Returns:
        RunConfig: validated configuration

    Raises:
        ConfigError: On invalid JSON, unknown keys or invalid values; the
            message starts with the dotted field path
    """
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError("<root>", f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from e
    base = Path(base_dir) if base_dir is not None else Path(".")

    root = _Object(document, "")
    mesh = Path(root.string("mesh", required=True))  # type: ignore[arg-type]
    material = _material(root.get("material", required=True))
    initial = root.number("initial_temperature", required=True)
    boundary = _boundary(root.get("boundary_conditions"))
    time_config = _time(root.get("time", required=True))
    output = _output(root.get("output"), base)
    root.close()

    return RunConfig(
        mesh_path=mesh if mesh.is_absolute() else base / mesh,
        material=material,
        initial_temperature=float(initial),  # type: ignore[arg-type]
        boundary=boundary,
        time=time_config,
        output=output,
    )


def load_config(path: Union[str, Path]) -> RunConfig:
    """Read a config file; relative paths inside are resolved against its directory.

    Raises:
        FileNotFoundError: If the file does not exist
        ConfigError: If the contents are invalid
    """
    path = Path(path)
    config = parse_config(path.read_text(encoding="utf-8"), path.parent)
    logger.info(f"Loaded config {path}: mesh {config.mesh_path}, dt = {config.time.dt:g} s")
    return config


def config_to_dict(config: RunConfig) -> Dict[str, Any]:
    """JSON-ready view of a config, used in run summaries."""

    def table(t: PropertyTable) -> Union[float, List[Any]]:
        if t.is_constant:
            row = t.values[0].tolist()
            return row[0] if len(row) == 1 else row
        return [[float(T)] + v.tolist() for T, v in zip(t.temperatures, t.values)]

    def record(r: BoundaryRecord) -> Mapping[str, Any]:
        names = {
            Dirichlet: "dirichlet",
            Flux: "flux",
            Convection: "convection",
            Radiation: "radiation",
            HeatSource: "heat_source",
        }
        body = dict(vars(r))
        if isinstance(r, HeatSource):
            body["center"] = list(r.center)
        return {"type": names[type(r)], **body}

    return {
        "mesh": str(config.mesh_path),
        "material": {
            "density": config.material.density,
            "specific_heat": table(config.material.specific_heat),
            "conductivity": table(config.material.conductivity),
            "symmetry": config.material.symmetry,
        },
        "initial_temperature": config.initial_temperature,
        "boundary_conditions": [record(r) for r in config.boundary.records],
        "time": {
            "dt": config.time.dt,
            "duration": config.time.duration,
            "stop_on_steady": config.time.stop_on_steady,
            "steady_tolerance": config.time.steady_tolerance,
            "strict_stability": config.time.strict_stability,
            "max_steps": config.time.max_steps,
        },
        "output": {
            "every": config.output.every,
            "directory": str(config.output.directory),
            "format": config.output.format,
        },
    }
