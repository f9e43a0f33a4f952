"""Plain-text mesh storage.

Format, one record per line (blank lines and ``#`` comments are ignored)::

    tmesh 1
    theta 1.0471975511965976        (optional)
    vertices N
    x y                             (N lines)
    triangles M
    i j k                           (M lines, 0-based, counter-clockwise)
    bedges K
    a b LABEL                       (K lines, LABEL in G0, G11, G12)
"""

from pathlib import Path
from typing import Iterator, List, Optional, Tuple

from config.settings import get_settings
from src.core.errors import MeshParseError, MeshValidationError
from src.models.mesh import SegmentLabel, TriMesh
from src.storage.storage_interface import MeshStorage, PathLike
from src.utils.logger import get_logger
from src.utils.validators import validate_mesh

logger = get_logger(__name__)

FORMAT_HEADER = "tmesh"
FORMAT_VERSION = "1"


class _LineReader:
    """Iterates over the meaningful lines of a mesh file, keeping line numbers."""

    def __init__(self, text: str):
        self._lines: Iterator[Tuple[int, List[str]]] = (
            (number, line.split("#", 1)[0].split())
            for number, line in enumerate(text.splitlines(), start=1)
        )
        self._pending: Optional[Tuple[int, List[str]]] = None
        self.last_line = 0

    def peek(self) -> Optional[Tuple[int, List[str]]]:
        if self._pending is None:
            for number, tokens in self._lines:
                if tokens:
                    self._pending = (number, tokens)
                    break
        return self._pending

    def next(self, expected: str) -> Tuple[int, List[str]]:
        item = self.peek()
        if item is None:
            raise MeshParseError(f"unexpected end of file, expected {expected}", self.last_line + 1)
        self._pending = None
        self.last_line = item[0]
        return item

    def section(self, keyword: str) -> int:
        """Read a ``keyword COUNT`` line and return COUNT."""
        number, tokens = self.next(f"'{keyword} <count>'")
        if len(tokens) != 2 or tokens[0] != keyword:
            raise MeshParseError(f"expected '{keyword} <count>', got '{' '.join(tokens)}'", number)
        try:
            count = int(tokens[1])
        except ValueError:
            raise MeshParseError(f"invalid {keyword} count '{tokens[1]}'", number)
        if count < 0:
            raise MeshParseError(f"negative {keyword} count {count}", number)
        return count


def _parse_numbers(tokens: List[str], width: int, cast, number: int, what: str) -> list:
    if len(tokens) != width:
        raise MeshParseError(f"{what} line needs {width} values, got {len(tokens)}", number)
    try:
        return [cast(token) for token in tokens]
    except ValueError:
        raise MeshParseError(f"invalid {what} value in '{' '.join(tokens)}'", number)


def parse_mesh(text: str) -> TriMesh:
    """
    Parse the text format into a mesh and validate it.

    Args:
        text: File contents

    Returns:
        Validated TriMesh

    Raises:
        MeshParseError: on malformed input (with the offending line number)
        MeshValidationError: if the mesh violates a structural invariant
    """
    reader = _LineReader(text)
    number, tokens = reader.next("header")
    if tokens != [FORMAT_HEADER, FORMAT_VERSION]:
        raise MeshParseError(f"expected header '{FORMAT_HEADER} {FORMAT_VERSION}'", number)

    theta: Optional[float] = None
    upcoming = reader.peek()
    if upcoming is not None and upcoming[1][0] == "theta":
        number, tokens = reader.next("theta")
        theta = _parse_numbers(tokens[1:], 1, float, number, "theta")[0]

    vertices = []
    for _ in range(reader.section("vertices")):
        number, tokens = reader.next("vertex")
        vertices.append(_parse_numbers(tokens, 2, float, number, "vertex"))

    triangles = []
    for _ in range(reader.section("triangles")):
        number, tokens = reader.next("triangle")
        triangles.append(_parse_numbers(tokens, 3, int, number, "triangle"))

    edges, labels = [], []
    for _ in range(reader.section("bedges")):
        number, tokens = reader.next("boundary edge")
        if len(tokens) != 3:
            raise MeshParseError(f"boundary edge line needs 'a b LABEL', got {len(tokens)} tokens", number)
        edges.append(_parse_numbers(tokens[:2], 2, int, number, "boundary edge"))
        try:
            labels.append(SegmentLabel(tokens[2]))
        except ValueError:
            raise MeshParseError(f"unknown segment label '{tokens[2]}'", number)

    trailing = reader.peek()
    if trailing is not None:
        raise MeshParseError(f"unexpected content '{' '.join(trailing[1])}'", trailing[0])

    try:
        mesh = TriMesh(
            vertices=vertices,
            triangles=triangles,
            boundary_edges=edges,
            edge_labels=labels,
            theta=theta,
        )
    except ValueError as e:
        raise MeshValidationError(str(e))

    is_valid, error_msg = validate_mesh(mesh)
    if not is_valid:
        raise MeshValidationError(error_msg)
    return mesh


def format_mesh(mesh: TriMesh) -> str:
    """
    Render a mesh in the text format.

    Args:
        mesh: The mesh to render

    Returns:
        File contents with floats at 17 significant digits
    """
    float_format = get_settings().mesh_float_format
    lines = [f"{FORMAT_HEADER} {FORMAT_VERSION}"]
    if mesh.theta is not None:
        lines.append(f"theta {float_format % mesh.theta}")
    lines.append(f"vertices {mesh.n_vertices}")
    lines.extend(f"{float_format % x} {float_format % y}" for x, y in mesh.vertices)
    lines.append(f"triangles {mesh.n_triangles}")
    lines.extend(f"{i} {j} {k}" for i, j, k in mesh.triangles)
    lines.append(f"bedges {len(mesh.boundary_edges)}")
    lines.extend(f"{a} {b} {label.value}" for a, b, label in mesh.labeled_edges)
    return "\n".join(lines) + "\n"


class TextMeshStorage(MeshStorage):
    """Stores meshes as line-oriented text files."""

    def save(self, mesh: TriMesh, path: PathLike) -> None:
        """
        Validate and write a mesh.

        Args:
            mesh: The mesh to write
            path: Destination file (parent directories are created)
        """
        is_valid, error_msg = validate_mesh(mesh)
        if not is_valid:
            raise MeshValidationError(error_msg)
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(format_mesh(mesh), encoding="utf-8")
        logger.info(f"Mesh saved: {path} ({mesh.n_vertices} vertices, {mesh.n_triangles} triangles)")

    def load(self, path: PathLike) -> TriMesh:
        """
        Read and validate a mesh.

        Args:
            path: Source file

        Returns:
            Validated TriMesh
        """
        path = Path(path)
        try:
            mesh = parse_mesh(path.read_text(encoding="utf-8"))
        except (MeshParseError, MeshValidationError) as e:
            logger.error(f"Failed to load mesh {path}: {e}")
            raise
        logger.info(f"Mesh loaded: {path} ({mesh.n_vertices} vertices, {mesh.n_triangles} triangles)")
        return mesh

    def exists(self, path: PathLike) -> bool:
        """Whether a mesh file is present at ``path``."""
        return Path(path).is_file()


def mesh_io(path: PathLike, mode: str, mesh: Optional[TriMesh] = None) -> Optional[TriMesh]:
    """
    Read or write a mesh file.

    Args:
        path: File path
        mode: "read" or "write"
        mesh: The mesh to write (write mode only)

    Returns:
        The mesh in read mode, None in write mode
    """
    storage = get_mesh_storage()
    if mode == "read":
        return storage.load(path)
    if mode == "write":
        if mesh is None:
            raise ValueError("mesh_io write mode needs a mesh")
        storage.save(mesh, path)
        return None
    raise ValueError(f"mesh_io mode must be 'read' or 'write', got '{mode}'")


# Singleton instance
_mesh_storage: Optional[TextMeshStorage] = None


def get_mesh_storage() -> TextMeshStorage:
    """
    Get the global mesh storage instance (singleton pattern).

    Returns:
        TextMeshStorage instance
    """
    global _mesh_storage
    if _mesh_storage is None:
        _mesh_storage = TextMeshStorage()
    return _mesh_storage
