"""Storage interface abstraction for meshes."""

from abc import ABC, abstractmethod
from pathlib import Path
from typing import Union

from src.models.mesh import TriMesh

PathLike = Union[str, Path]


class MeshStorage(ABC):
    """Abstract base class for mesh storage implementations."""

    @abstractmethod
    def save(self, mesh: TriMesh, path: PathLike) -> None:
        """
        Save a mesh.

        Args:
            mesh: A valid mesh
            path: Destination

        Raises:
            MeshValidationError: if the mesh violates an invariant
            OSError: if the destination cannot be written
        """
        pass

    @abstractmethod
    def load(self, path: PathLike) -> TriMesh:
        """
        Load a mesh.

        Args:
            path: Source

        Returns:
            Validated TriMesh

        Raises:
            MeshParseError: if the source is malformed
            MeshValidationError: if the stored mesh violates an invariant
        """
        pass

    @abstractmethod
    def exists(self, path: PathLike) -> bool:
        """
        Check if a stored mesh exists.

        Args:
            path: Location to check

        Returns:
            True if exists, False otherwise
        """
        pass
