"""Unstructured 3-D meshes of tet4 or hex8 elements with named node and facet sets.

Mesh files are UTF-8 text; ``#`` starts a comment, tokens are whitespace
separated::

    mesh-version 1
    nodes 4
    1 0 0 0
    2 1 0 0
    3 0 1 0
    4 0 0 1
    elements tet4 1
    1 1 2 3 4
    nodeset base 3
    1 2 3
    facetset base 1
    3 1 3 2

Node and element ids in files are 1-based, contiguous and ascending; every
index held by a ``Mesh`` is 0-based.
"""

import logging
import re
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from types import MappingProxyType
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.typing import NDArray

from .exceptions import DegenerateElementError, MeshError, MeshSyntaxError
from .kernels import NODES_PER_ELEMENT, ElementKind, compute_kernels

# Configure module logger
logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())

MESH_VERSION = "1"

# Facet area at or below this fraction of its longest squared edge is degenerate.
DEGENERATE_AREA_TOLERANCE = 1e-12

# Local faces of each element kind, used to find the topological boundary.
ELEMENT_FACES = {
    "tet4": ((0, 2, 1), (0, 1, 3), (1, 2, 3), (0, 3, 2)),
    "hex8": ((0, 3, 2, 1), (4, 5, 6, 7), (0, 1, 5, 4), (1, 2, 6, 5), (2, 3, 7, 6), (3, 0, 4, 7)),
}

# Six positively oriented tetrahedra sharing the 0-6 diagonal of a hex cell.
HEX_TO_TETS = np.array(
    [
        [0, 1, 2, 6],
        [0, 2, 3, 6],
        [0, 3, 7, 6],
        [0, 7, 4, 6],
        [0, 4, 5, 6],
        [0, 5, 1, 6],
    ]
)


@dataclass(frozen=True)
class Facet:
    """A boundary triangle (3 nodes) or planar quad (4 nodes), 0-based node indices."""
    nodes: Tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", tuple(int(n) for n in self.nodes))
        if len(self.nodes) not in (3, 4):
            raise MeshError(f"A facet has 3 or 4 nodes, got {len(self.nodes)}")
        if len(set(self.nodes)) != len(self.nodes):
            raise MeshError(f"Facet nodes must be distinct: {self.nodes}")


def _triangle_areas(a: NDArray[np.float64], b: NDArray[np.float64], c: NDArray[np.float64]) -> NDArray[np.float64]:
    return 0.5 * np.linalg.norm(np.cross(b - a, c - a), axis=-1)


def _facet_area(coords: NDArray[np.float64]) -> float:
    area = float(_triangle_areas(coords[0], coords[1], coords[2]))
    if len(coords) == 4:
        area += float(_triangle_areas(coords[0], coords[2], coords[3]))
    edges = coords - np.roll(coords, 1, axis=0)
    longest = float(np.max(np.einsum("ij,ij->i", edges, edges)))
    if area <= DEGENERATE_AREA_TOLERANCE * longest or longest == 0.0:
        raise DegenerateElementError(f"Degenerate facet with area {area:.6g}")
    return area


@dataclass(frozen=True, eq=False)
class Mesh:
    """An immutable, validated mesh.

    Attributes:
        nodes: N x 3 coordinates in meters
        elements: M x k connectivity, k = 4 (tet4) or 8 (hex8)
        element_kind: "tet4" or "hex8"
        node_sets: name -> array of node indices
        facet_sets: name -> tuple of facets

    Raises:
        MeshError: If any index is out of range, a set has duplicate members,
            or shapes are inconsistent
        DegenerateElementError: If an element or facet is degenerate or inverted
    """
    nodes: NDArray[np.float64]
    elements: NDArray[np.int64]
    element_kind: ElementKind
    node_sets: Mapping[str, NDArray[np.int64]] = field(default_factory=dict)
    facet_sets: Mapping[str, Tuple[Facet, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        nodes = np.array(self.nodes, dtype=float)
        elements = np.array(self.elements, dtype=np.int64)
        nodes.setflags(write=False)
        elements.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "elements", elements)

        node_sets: Dict[str, NDArray[np.int64]] = {}
        for name, members in self.node_sets.items():
            array = np.array(members, dtype=np.int64).reshape(-1)
            array.setflags(write=False)
            node_sets[name] = array
        object.__setattr__(self, "node_sets", MappingProxyType(node_sets))
        object.__setattr__(
            self,
            "facet_sets",
            MappingProxyType({name: tuple(facets) for name, facets in self.facet_sets.items()}),
        )
        self._validate()

    def _validate(self) -> None:
        if self.element_kind not in NODES_PER_ELEMENT:
            raise MeshError(f"Unknown element kind: {self.element_kind!r}")
        if self.nodes.ndim != 2 or self.nodes.shape[1] != 3 or len(self.nodes) == 0:
            raise MeshError(f"Nodes must be an N x 3 array, got shape {self.nodes.shape}")
        if not np.all(np.isfinite(self.nodes)):
            raise MeshError("Node coordinates must be finite")
        k = NODES_PER_ELEMENT[self.element_kind]
        if self.elements.ndim != 2 or self.elements.shape[1] != k or len(self.elements) == 0:
            raise MeshError(
                f"{self.element_kind} elements must be an M x {k} array, got shape {self.elements.shape}"
            )
        self._check_range(self.elements, "element connectivity")
        ordered = np.sort(self.elements, axis=1)
        repeats = np.flatnonzero(np.any(ordered[:, 1:] == ordered[:, :-1], axis=1))
        if repeats.size:
            row = int(repeats[0])
            raise DegenerateElementError(f"Element {row + 1} repeats a node", element=row)
        # Degenerate and inverted elements surface here.
        _ = self.kernels

        for name, members in self.node_sets.items():
            self._check_range(members, f"node set {name!r}")
            if np.unique(members).size != members.size:
                raise MeshError(f"Node set {name!r} has duplicate members")
        for name, facets in self.facet_sets.items():
            seen = set()
            for facet in facets:
                self._check_range(np.array(facet.nodes), f"facet set {name!r}")
                key = tuple(sorted(facet.nodes))
                if key in seen:
                    raise MeshError(f"Facet set {name!r} has duplicate facet {facet.nodes}")
                seen.add(key)
                _facet_area(self.nodes[list(facet.nodes)])

    def _check_range(self, indices: NDArray[np.int64], what: str) -> None:
        if indices.size and (indices.min() < 0 or indices.max() >= len(self.nodes)):
            raise MeshError(f"Index out of range in {what}: nodes are 1..{len(self.nodes)}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Mesh):
            return NotImplemented
        return (
            self.element_kind == other.element_kind
            and np.array_equal(self.nodes, other.nodes)
            and np.array_equal(self.elements, other.elements)
            and self.node_sets.keys() == other.node_sets.keys()
            and all(np.array_equal(v, other.node_sets[k]) for k, v in self.node_sets.items())
            and dict(self.facet_sets) == dict(other.facet_sets)
        )

    __hash__ = None  # type: ignore[assignment]

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_elements(self) -> int:
        return len(self.elements)

    @property
    def nodes_per_element(self) -> int:
        return NODES_PER_ELEMENT[self.element_kind]

    @cached_property
    def kernels(self) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
        """B (M x 3 x k) and volume scale (M,) of every element."""
        return compute_kernels(self.nodes, self.elements, self.element_kind)

    def node_set(self, name: str) -> NDArray[np.int64]:
        """Node indices of a named set.

        Raises:
            MeshError: If the set does not exist
        """
        try:
            return self.node_sets[name]
        except KeyError:
            raise MeshError(f"Unknown node set: {name!r}") from None

    def facet_set(self, name: str) -> Tuple[Facet, ...]:
        """Facets of a named set.

        Raises:
            MeshError: If the set does not exist
        """
        try:
            return self.facet_sets[name]
        except KeyError:
            raise MeshError(f"Unknown facet set: {name!r}") from None


def element_volumes(mesh: Mesh) -> NDArray[np.float64]:
    """Per-element volume: V for tet4, 8 * det(J) at the center for hex8."""
    return mesh.kernels[1]


def facet_area(facet: Facet, mesh: Mesh) -> float:
    """Area of a triangle, or of a quad split along nodes (1,2,3) and (1,3,4).

    Raises:
        DegenerateElementError: If the facet has zero area
    """
    return _facet_area(mesh.nodes[list(facet.nodes)])


def nodal_area(facet_set: str, mesh: Mesh) -> Tuple[float, NDArray[np.int64]]:
    """Uniform per-node area of a facet set.

    The sum of the facet areas is divided by the number of distinct nodes in
    the set; the same value applies to every one of those nodes.

    Returns:
        Tuple of (area per node in m^2, sorted unique node indices)

    Raises:
        MeshError: If the set is unknown or empty
    """
    facets = mesh.facet_set(facet_set)
    if not facets:
        raise MeshError(f"Facet set {facet_set!r} is empty")
    total = sum(facet_area(facet, mesh) for facet in facets)
    unique_nodes = np.unique(np.concatenate([np.array(f.nodes, dtype=np.int64) for f in facets]))
    return total / unique_nodes.size, unique_nodes


def boundary_nodes(mesh: Mesh) -> NDArray[np.int64]:
    """Nodes lying on element faces that belong to exactly one element."""
    faces = ELEMENT_FACES[mesh.element_kind]
    width = len(faces[0])
    # tet faces all have three nodes, hex faces four
    local = np.array(faces)
    all_faces = mesh.elements[:, local].reshape(-1, width)
    keys = np.sort(all_faces, axis=1)
    _, inverse, counts = np.unique(keys, axis=0, return_inverse=True, return_counts=True)
    outer = all_faces[counts[inverse.reshape(-1)] == 1]
    return np.unique(outer)


def nodes_within(
    mesh: Mesh,
    center: Sequence[float],
    radius: float,
    node_set: Optional[str] = None,
) -> NDArray[np.int64]:
    """Nodes whose distance to ``center`` is at most ``radius``.

    Args:
        mesh: the mesh
        center: 3-D point
        radius: sphere radius in meters
        node_set: restrict the search to this set (e.g. a surface)
    """
    candidates = mesh.node_set(node_set) if node_set is not None else np.arange(mesh.n_nodes)
    distance = np.linalg.norm(mesh.nodes[candidates] - np.asarray(center, dtype=float), axis=1)
    return np.sort(candidates[distance <= radius])


# --------------------------------------------------------------------------
# Mesh file format
# --------------------------------------------------------------------------

_TOKEN = re.compile(r"\S+")


@dataclass
class _Line:
    number: int
    tokens: List[Tuple[str, int]]

    def end_column(self) -> int:
        token, column = self.tokens[-1]
        return column + len(token)


class _Reader:
    """Cursor over the non-blank, comment-stripped lines of a mesh file."""

    def __init__(self, text: str):
        self.lines: List[_Line] = []
        for number, raw in enumerate(text.splitlines(), start=1):
            content = raw.split("#", 1)[0]
            tokens = [(m.group(0), m.start() + 1) for m in _TOKEN.finditer(content)]
            if tokens:
                self.lines.append(_Line(number, tokens))
        self.position = 0
        self.last_line = len(text.splitlines()) or 1

    def __iter__(self) -> Iterator[_Line]:
        return self

    def __next__(self) -> _Line:
        if self.position >= len(self.lines):
            raise StopIteration
        line = self.lines[self.position]
        self.position += 1
        return line

    def expect_line(self, what: str) -> _Line:
        try:
            return next(self)
        except StopIteration:
            raise MeshSyntaxError(f"Unexpected end of file, expected {what}", self.last_line + 1, 1) from None


def _expect_count(line: _Line, count: int, what: str) -> None:
    if len(line.tokens) < count:
        raise MeshSyntaxError(
            f"Expected {count} tokens for {what}, found {len(line.tokens)}", line.number, line.end_column()
        )
    if len(line.tokens) > count:
        raise MeshSyntaxError(
            f"Expected {count} tokens for {what}, found {len(line.tokens)}", line.number, line.tokens[count][1]
        )


def _int(token: Tuple[str, int], line: _Line) -> int:
    try:
        return int(token[0])
    except ValueError:
        raise MeshSyntaxError(f"Expected an integer, found {token[0]!r}", line.number, token[1]) from None


def _float(token: Tuple[str, int], line: _Line) -> float:
    try:
        return float(token[0])
    except ValueError:
        raise MeshSyntaxError(f"Expected a number, found {token[0]!r}", line.number, token[1]) from None


def _node_index(token: Tuple[str, int], line: _Line, n_nodes: int) -> int:
    value = _int(token, line)
    if not 1 <= value <= n_nodes:
        raise MeshError(
            f"line {line.number}, column {token[1]}: node index {value} out of range 1..{n_nodes}"
        )
    return value - 1


def _check_id(token: Tuple[str, int], line: _Line, expected: int, what: str) -> None:
    if _int(token, line) != expected:
        raise MeshSyntaxError(
            f"{what} ids must be contiguous and ascending: expected {expected}, found {token[0]}",
            line.number,
            token[1],
        )


def parse_mesh(text: str) -> Mesh:
    """Parse and validate mesh file contents.

    Raises:
        MeshSyntaxError: On malformed input, with line and column
        MeshError: On out-of-range indices, duplicate set names or members,
            or a second element block
        DegenerateElementError: On zero-volume or inverted elements
    """
    reader = _Reader(text)
    header = reader.expect_line("'mesh-version 1'")
    if [t for t, _ in header.tokens] != ["mesh-version", MESH_VERSION]:
        raise MeshSyntaxError(
            f"First line must be 'mesh-version {MESH_VERSION}'", header.number, header.tokens[0][1]
        )

    nodes: Optional[NDArray[np.float64]] = None
    elements: Optional[NDArray[np.int64]] = None
    kind: Optional[str] = None
    node_sets: Dict[str, NDArray[np.int64]] = {}
    facet_sets: Dict[str, Tuple[Facet, ...]] = {}

    for line in reader:
        keyword, column = line.tokens[0]
        if keyword == "nodes":
            if nodes is not None:
                raise MeshSyntaxError("Duplicate 'nodes' block", line.number, column)
            _expect_count(line, 2, "'nodes N'")
            count = _int(line.tokens[1], line)
            if count < 1:
                raise MeshSyntaxError("A mesh needs at least one node", line.number, line.tokens[1][1])
            nodes = np.empty((count, 3))
            for i in range(count):
                row = reader.expect_line(f"node {i + 1}")
                _expect_count(row, 4, "a node line 'id x y z'")
                _check_id(row.tokens[0], row, i + 1, "Node")
                nodes[i] = [_float(tok, row) for tok in row.tokens[1:]]

        elif keyword == "elements":
            if elements is not None:
                raise MeshError(
                    f"line {line.number}: only one element block per mesh is supported (no mixed meshes)"
                )
            if nodes is None:
                raise MeshSyntaxError("'elements' must follow the 'nodes' block", line.number, column)
            _expect_count(line, 3, "'elements KIND M'")
            kind = line.tokens[1][0]
            if kind not in NODES_PER_ELEMENT:
                raise MeshSyntaxError(
                    f"Unknown element kind {kind!r} (expected tet4 or hex8)", line.number, line.tokens[1][1]
                )
            k = NODES_PER_ELEMENT[kind]
            count = _int(line.tokens[2], line)
            if count < 1:
                raise MeshSyntaxError("A mesh needs at least one element", line.number, line.tokens[2][1])
            elements = np.empty((count, k), dtype=np.int64)
            for i in range(count):
                row = reader.expect_line(f"element {i + 1}")
                _expect_count(row, k + 1, f"a {kind} element line 'id n1 ... n{k}'")
                _check_id(row.tokens[0], row, i + 1, "Element")
                elements[i] = [_node_index(tok, row, len(nodes)) for tok in row.tokens[1:]]

        elif keyword == "nodeset":
            if nodes is None:
                raise MeshSyntaxError("'nodeset' must follow the 'nodes' block", line.number, column)
            _expect_count(line, 3, "'nodeset NAME COUNT'")
            name = line.tokens[1][0]
            if name in node_sets:
                raise MeshError(f"line {line.number}: duplicate node set name {name!r}")
            count = _int(line.tokens[2], line)
            members: List[int] = []
            while len(members) < count:
                row = reader.expect_line(f"members of node set {name!r}")
                if len(members) + len(row.tokens) > count:
                    extra = row.tokens[count - len(members)]
                    raise MeshSyntaxError(
                        f"Node set {name!r} lists more than {count} ids", row.number, extra[1]
                    )
                members.extend(_node_index(tok, row, len(nodes)) for tok in row.tokens)
            if len(set(members)) != len(members):
                raise MeshError(f"line {line.number}: node set {name!r} has duplicate members")
            node_sets[name] = np.array(members, dtype=np.int64)

        elif keyword == "facetset":
            if nodes is None:
                raise MeshSyntaxError("'facetset' must follow the 'nodes' block", line.number, column)
            _expect_count(line, 3, "'facetset NAME COUNT'")
            name = line.tokens[1][0]
            if name in facet_sets:
                raise MeshError(f"line {line.number}: duplicate facet set name {name!r}")
            count = _int(line.tokens[2], line)
            facets: List[Facet] = []
            for _ in range(count):
                row = reader.expect_line(f"facet of set {name!r}")
                width = _int(row.tokens[0], row)
                if width not in (3, 4):
                    raise MeshSyntaxError(
                        f"A facet has 3 or 4 nodes, found {width}", row.number, row.tokens[0][1]
                    )
                _expect_count(row, width + 1, f"a facet line 'k n1 ... n{width}'")
                indices = [_node_index(tok, row, len(nodes)) for tok in row.tokens[1:]]
                try:
                    facets.append(Facet(tuple(indices)))
                except MeshError as e:
                    raise MeshError(f"line {row.number}: {e}") from None
            facet_sets[name] = tuple(facets)

        else:
            raise MeshSyntaxError(f"Unknown keyword {keyword!r}", line.number, column)

    if nodes is None:
        raise MeshSyntaxError("Missing 'nodes' block", reader.last_line, 1)
    if elements is None or kind is None:
        raise MeshSyntaxError("Missing 'elements' block", reader.last_line, 1)

    return Mesh(
        nodes=nodes,
        elements=elements,
        element_kind=kind,  # type: ignore[arg-type]
        node_sets=node_sets,
        facet_sets=facet_sets,
    )


def format_number(value: float) -> str:
    text = repr(float(value))
    return text[:-2] if text.endswith(".0") else text


def serialize_mesh(mesh: Mesh) -> str:
    """Write a mesh in the text format read by ``parse_mesh``."""
    out = [f"mesh-version {MESH_VERSION}", f"nodes {mesh.n_nodes}"]
    for i, (x, y, z) in enumerate(mesh.nodes, start=1):
        out.append(f"{i} {format_number(x)} {format_number(y)} {format_number(z)}")
    out.append(f"elements {mesh.element_kind} {mesh.n_elements}")
    for i, element in enumerate(mesh.elements, start=1):
        out.append(f"{i} " + " ".join(str(n + 1) for n in element))
    for name, members in mesh.node_sets.items():
        out.append(f"nodeset {name} {members.size}")
        for start in range(0, members.size, 10):
            out.append(" ".join(str(n + 1) for n in members[start:start + 10]))
    for name, facets in mesh.facet_sets.items():
        out.append(f"facetset {name} {len(facets)}")
        for facet in facets:
            out.append(f"{len(facet.nodes)} " + " ".join(str(n + 1) for n in facet.nodes))
    return "\n".join(out) + "\n"


def load_mesh(path: Union[str, Path]) -> Mesh:
    """Read and parse a mesh file.

    Raises:
        FileNotFoundError: If the file does not exist
        MeshError: If the contents are invalid
    """
    path = Path(path)
    mesh = parse_mesh(path.read_text(encoding="utf-8"))
    logger.info(
        f"Loaded {mesh.element_kind} mesh {path}: {mesh.n_nodes} nodes, {mesh.n_elements} elements"
    )
    return mesh


def save_mesh(mesh: Mesh, path: Union[str, Path]) -> None:
    """Write a mesh file, creating parent directories as needed."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(serialize_mesh(mesh), encoding="utf-8")
    logger.info(f"Wrote mesh {path}")


# --------------------------------------------------------------------------
# Structured box generator
# --------------------------------------------------------------------------

def _box_faces(
    index: NDArray[np.int64], nodes: NDArray[np.float64]
) -> Dict[str, NDArray[np.int64]]:
    """Outward-wound quads on the six faces of a structured box.

    ``index`` is the (nz+1, ny+1, nx+1) array of node numbers.
    """
    def quads(plane: NDArray[np.int64]) -> NDArray[np.int64]:
        a = plane[:-1, :-1].ravel()
        b = plane[1:, :-1].ravel()
        c = plane[1:, 1:].ravel()
        d = plane[:-1, 1:].ravel()
        return np.column_stack([a, b, c, d])

    planes = {
        "left": (index[:, :, 0], np.array([-1.0, 0.0, 0.0])),
        "right": (index[:, :, -1], np.array([1.0, 0.0, 0.0])),
        "front": (index[:, 0, :], np.array([0.0, -1.0, 0.0])),
        "back": (index[:, -1, :], np.array([0.0, 1.0, 0.0])),
        "bottom": (index[0, :, :], np.array([0.0, 0.0, -1.0])),
        "top": (index[-1, :, :], np.array([0.0, 0.0, 1.0])),
    }
    faces = {}
    for name, (plane, outward) in planes.items():
        q = quads(plane)
        normal = np.cross(nodes[q[:, 1]] - nodes[q[:, 0]], nodes[q[:, 2]] - nodes[q[:, 0]])
        inward = normal @ outward < 0
        q[inward] = q[inward][:, ::-1]
        faces[name] = q
    return faces


def generate_box_mesh(
    kind: str,
    shape: Tuple[int, int, int],
    size: Tuple[float, float, float] = (1.0, 1.0, 1.0),
) -> Mesh:
    """Structured mesh of the box [0, Lx] x [0, Ly] x [0, Lz].

    Args:
        kind: "hex8", or "tet4" to split every cell into six tetrahedra
        shape: cells along x, y, z
        size: box edge lengths in meters

    Returns:
        Mesh with node and facet sets left, right, front, back, bottom, top
        and the node set boundary

    Example:
        ```python
        mesh = generate_box_mesh("tet4", (19, 19, 19), (0.1, 0.1, 0.1))
        mesh.n_elements  # 41154
        ```
    """
    if kind not in NODES_PER_ELEMENT:
        raise MeshError(f"Unknown element kind: {kind!r}")
    nx, ny, nz = (int(n) for n in shape)
    if min(nx, ny, nz) < 1:
        raise MeshError("A box needs at least one cell along each axis")
    lx, ly, lz = (float(s) for s in size)
    if min(lx, ly, lz) <= 0.0:
        raise MeshError("Box edge lengths must be positive")

    zs, ys, xs = np.linspace(0.0, lz, nz + 1), np.linspace(0.0, ly, ny + 1), np.linspace(0.0, lx, nx + 1)
    Z, Y, X = np.meshgrid(zs, ys, xs, indexing="ij")
    nodes = np.column_stack([X.ravel(), Y.ravel(), Z.ravel()])
    index = np.arange(nodes.shape[0]).reshape(nz + 1, ny + 1, nx + 1)

    corner = index[:-1, :-1, :-1].ravel()
    dx, dy, dz = 1, nx + 1, (nx + 1) * (ny + 1)
    hexes = np.column_stack(
        [
            corner,
            corner + dx,
            corner + dx + dy,
            corner + dy,
            corner + dz,
            corner + dz + dx,
            corner + dz + dx + dy,
            corner + dz + dy,
        ]
    )
    elements = hexes if kind == "hex8" else hexes[:, HEX_TO_TETS].reshape(-1, 4)

    faces = _box_faces(index, nodes)
    node_sets = {name: np.unique(q) for name, q in faces.items()}
    node_sets["boundary"] = np.unique(np.concatenate(list(node_sets.values())))
    facet_sets = {name: tuple(Facet(tuple(row)) for row in q) for name, q in faces.items()}

    return Mesh(
        nodes=nodes,
        elements=elements,
        element_kind=kind,  # type: ignore[arg-type]
        node_sets=node_sets,
        facet_sets=facet_sets,
    )
