"""Common exceptions for the explicit heat transfer modules."""

from typing import Optional


class ExplicitHeatError(Exception):
    """Base exception for all explicit_heat related errors."""
    pass


class MeshError(ExplicitHeatError):
    """Exception raised for invalid meshes and mesh queries."""
    pass


class MeshSyntaxError(MeshError):
    """Exception raised when a mesh file cannot be parsed.

    Attributes:
        line (int): 1-based line number of the offending token
        column (int): 1-based column of the offending token
    """

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class DegenerateElementError(MeshError):
    """Exception raised for zero, negative or near-zero volume elements and facets."""

    def __init__(self, message: str, element: Optional[int] = None):
        super().__init__(message)
        self.element = element


class MaterialError(ExplicitHeatError):
    """Exception raised for invalid material tables."""
    pass


class BoundaryError(ExplicitHeatError):
    """Exception raised for invalid boundary condition records."""
    pass


class ConfigError(ExplicitHeatError):
    """Exception raised for run configuration schema violations.

    Attributes:
        path (str): dotted path of the offending JSON field
    """

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class SolverError(ExplicitHeatError):
    """Base exception for numerical failures while stepping."""
    pass


class StabilityError(SolverError):
    """Exception raised when the time step exceeds the guarded critical step in strict mode."""
    pass


class InstabilityError(SolverError):
    """Exception raised when a non-finite temperature appears.

    Attributes:
        step (int): index of the step that produced the value
        node (int): 0-based index of the first offending node
    """

    def __init__(self, step: int, node: int):
        super().__init__(f"Non-finite temperature at node {node + 1} after step {step}")
        self.step = step
        self.node = node


class UnphysicalStateError(SolverError):
    """Exception raised when a radiating node falls to or below absolute zero."""
    pass


class OracleError(ExplicitHeatError):
    """Exception raised by the verification oracles."""
    pass
