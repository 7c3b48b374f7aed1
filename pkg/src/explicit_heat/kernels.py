"""Element kernels for linear tetrahedra and reduced-integration hexahedra.

Every element is reduced to a temperature-gradient matrix ``B`` (3 x k) and a
volume scale, ``V`` for tet4 and ``8 * det(J)`` at the single center Gauss
point for hex8. From these the pre-computed matrix ``G`` is built, either in
the temperature-dependent form ``scale * B^T`` or, for a constant conductivity
tensor ``D``, in the temperature-independent form ``scale * B^T D B``.

Element nodal loads carry a leading minus sign, ``F_e = -G D B T_e`` or
``F_e = -G T_e``, so that conduction drives a hot spot toward its surroundings.

The batched functions (``compute_kernels``, ``build_g_batch``,
``element_loads_batch``) are what the solver uses; the single-element
functions are views over them and exist for inspection and testing.
"""

import logging
from dataclasses import dataclass
from typing import Literal, Optional, Tuple

import numpy as np
from numpy.typing import NDArray

from .exceptions import DegenerateElementError, MaterialError

# Configure module logger
logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())

ElementKind = Literal["tet4", "hex8"]
GForm = Literal["TD", "TI"]

NODES_PER_ELEMENT = {"tet4": 4, "hex8": 8}

# Volume / det(J) at or below this is degenerate (m^3).
DEGENERATE_TOLERANCE = 1e-14

# hex8 node positions in natural coordinates: bottom face counter-clockwise
# seen from +zeta, then the top face above it.
HEX8_NATURAL_NODES = np.array(
    [
        [-1.0, -1.0, -1.0],
        [1.0, -1.0, -1.0],
        [1.0, 1.0, -1.0],
        [-1.0, 1.0, -1.0],
        [-1.0, -1.0, 1.0],
        [1.0, -1.0, 1.0],
        [1.0, 1.0, 1.0],
        [-1.0, 1.0, 1.0],
    ]
)

# dN/d(xi, eta, zeta) of the trilinear shape functions at (0, 0, 0).
HEX8_CENTER_DERIVATIVES = HEX8_NATURAL_NODES.T / 8.0

# dN/d(xi, eta, zeta) for N1 = 1 - xi - eta - zeta, N2 = xi, N3 = eta, N4 = zeta.
TET4_DERIVATIVES = np.array(
    [
        [-1.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 1.0, 0.0],
        [-1.0, 0.0, 0.0, 1.0],
    ]
)


def _natural_derivatives(kind: str) -> NDArray[np.float64]:
    if kind == "tet4":
        return TET4_DERIVATIVES
    if kind == "hex8":
        return HEX8_CENTER_DERIVATIVES
    raise ValueError(f"Unknown element kind: {kind!r}")


@dataclass(frozen=True)
class ElementKernel:
    """Geometric kernel of a single element.

    Attributes:
        B: 3 x k temperature-gradient matrix (1/m)
        scale: element volume V (tet4) or 8 * det(J) at the center (hex8), m^3
        element_kind: "tet4" or "hex8"
    """
    B: NDArray[np.float64]
    scale: float
    element_kind: ElementKind

    def gradient(self, nodal_temperatures: NDArray[np.float64]) -> NDArray[np.float64]:
        """Temperature gradient inside the element for the given nodal values."""
        return self.B @ np.asarray(nodal_temperatures, dtype=float)


@dataclass(frozen=True)
class GMatrix:
    """Pre-computed element matrix.

    ``form == "TD"``: ``matrix`` is ``scale * B^T`` (k x 3) and the kernel's
    ``B`` is still needed at run time.
    ``form == "TI"``: ``matrix`` is ``scale * B^T D B`` (k x k).
    """
    form: GForm
    matrix: NDArray[np.float64]
    kernel: ElementKernel


def compute_kernels(
    nodes: NDArray[np.float64],
    elements: NDArray[np.int64],
    kind: str,
) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Compute B matrices and volume scales for every element at once.

    Args:
        nodes: N x 3 node coordinates
        elements: M x k connectivity (0-based)
        kind: "tet4" or "hex8"

    Returns:
        Tuple of B (M x 3 x k) and scale (M,)

    Raises:
        DegenerateElementError: If an element is inverted or has a volume /
            center Jacobian determinant at or below 1e-14
    """
    derivatives = _natural_derivatives(kind)
    elements = np.asarray(elements, dtype=np.int64)
    coords = np.asarray(nodes, dtype=float)[elements]  # M x k x 3
    jacobian = np.einsum("ik,mkj->mij", derivatives, coords)
    det = np.linalg.det(jacobian)
    if kind == "tet4":
        scale = det / 6.0
        measure = scale
    else:
        scale = 8.0 * det
        measure = det

    bad = np.flatnonzero(measure <= DEGENERATE_TOLERANCE)
    if bad.size:
        index = int(bad[0])
        if measure[index] < -DEGENERATE_TOLERANCE:
            raise DegenerateElementError(
                f"Element {index + 1} ({kind}) is inverted (negative orientation, "
                f"{'volume' if kind == 'tet4' else 'det(J)'} = {measure[index]:.6g})",
                element=index,
            )
        raise DegenerateElementError(
            f"Element {index + 1} ({kind}) is degenerate "
            f"({'volume' if kind == 'tet4' else 'det(J)'} = {measure[index]:.6g})",
            element=index,
        )

    natural = np.broadcast_to(derivatives, (len(elements),) + derivatives.shape)
    B = np.linalg.solve(jacobian, natural)
    return B, scale


def tet4_kernel(coords: NDArray[np.float64]) -> ElementKernel:
    """Kernel of a linear tetrahedron; B is constant and scale = V.

    Example:
        ```python
        kernel = tet4_kernel([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]])
        kernel.scale  # 1/6
        ```
    """
    coords = np.asarray(coords, dtype=float).reshape(4, 3)
    B, scale = compute_kernels(coords, np.arange(4)[None, :], "tet4")
    return ElementKernel(B=B[0], scale=float(scale[0]), element_kind="tet4")


def hex8_center_kernel(coords: NDArray[np.float64]) -> ElementKernel:
    """Kernel of an eight-node hexahedron integrated at its center point only.

    B is evaluated at (xi, eta, zeta) = (0, 0, 0) and scale = 8 * det(J) there.
    """
    coords = np.asarray(coords, dtype=float).reshape(8, 3)
    B, scale = compute_kernels(coords, np.arange(8)[None, :], "hex8")
    return ElementKernel(B=B[0], scale=float(scale[0]), element_kind="hex8")


def check_symmetric(D: NDArray[np.float64]) -> NDArray[np.float64]:
    """Return D as a 3 x 3 float array, raising MaterialError if it is asymmetric."""
    D = np.asarray(D, dtype=float)
    if D.shape[-2:] != (3, 3):
        raise ValueError(f"Conductivity tensor must be 3 x 3, got shape {D.shape}")
    if not np.allclose(D, np.swapaxes(D, -1, -2), rtol=1e-12, atol=0.0):
        raise MaterialError("Conductivity tensor is not symmetric")
    return D


def build_g_batch(
    B: NDArray[np.float64],
    scale: NDArray[np.float64],
    conductivity: Optional[NDArray[np.float64]] = None,
) -> NDArray[np.float64]:
    """Batched G: ``scale * B^T`` (M x k x 3) or ``scale * B^T D B`` (M x k x k)."""
    if conductivity is None:
        return scale[:, None, None] * np.swapaxes(B, 1, 2)
    D = check_symmetric(conductivity)
    return scale[:, None, None] * np.einsum("mik,ij,mjl->mkl", B, D, B)


def build_G(kernel: ElementKernel, conductivity: Optional[NDArray[np.float64]] = None) -> GMatrix:
    """Build the pre-computed G matrix of one element.

    Args:
        kernel: the element kernel
        conductivity: constant symmetric 3 x 3 tensor D; when given the
            temperature-independent form is built

    Raises:
        MaterialError: If D is not symmetric
    """
    matrix = build_g_batch(kernel.B[None], np.array([kernel.scale]), conductivity)[0]
    return GMatrix(form="TD" if conductivity is None else "TI", matrix=matrix, kernel=kernel)


def element_loads_batch(
    form: GForm,
    G: NDArray[np.float64],
    element_temperatures: NDArray[np.float64],
    B: Optional[NDArray[np.float64]] = None,
    conductivity: Optional[NDArray[np.float64]] = None,
) -> NDArray[np.float64]:
    """Element nodal conduction loads for all elements (M x k), in W."""
    if form == "TI":
        return -np.matmul(G, element_temperatures[..., None])[..., 0]
    if B is None or conductivity is None:
        raise ValueError("TD-form loads need both B and the element conductivity")
    gradient = np.einsum("mik,mk->mi", B, element_temperatures)
    flux = np.einsum("mij,mj->mi", conductivity, gradient)
    return -np.einsum("mki,mi->mk", G, flux)


def element_load(
    G: GMatrix,
    D_elem: Optional[NDArray[np.float64]],
    T_e: NDArray[np.float64],
) -> NDArray[np.float64]:
    """Element nodal thermal loads F_e (W per node).

    TD form: ``F_e = -G D_elem B T_e``. TI form: ``F_e = -G T_e`` and D_elem
    must be None, since D is already folded into G.

    Raises:
        ValueError: On a dimension mismatch or a D_elem inconsistent with the form
    """
    T_e = np.asarray(T_e, dtype=float)
    k = G.matrix.shape[0]
    if T_e.shape != (k,):
        raise ValueError(f"Expected {k} nodal temperatures, got shape {T_e.shape}")
    if G.form == "TI":
        if D_elem is not None:
            raise ValueError("TI-form G already contains the conductivity; D_elem must be None")
        return element_loads_batch("TI", G.matrix[None], T_e[None])[0]
    if D_elem is None:
        raise ValueError("TD-form G requires the element conductivity D_elem")
    D = check_symmetric(D_elem)
    return element_loads_batch("TD", G.matrix[None], T_e[None], G.kernel.B[None], D[None])[0]
