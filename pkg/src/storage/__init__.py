"""Storage modules for meshes and experiment results."""

from .storage_interface import MeshStorage
from .mesh_file import TextMeshStorage, format_mesh, get_mesh_storage, mesh_io, parse_mesh
from .results_writer import ResultsWriter

__all__ = [
    "MeshStorage",
    "TextMeshStorage",
    "format_mesh",
    "get_mesh_storage",
    "mesh_io",
    "parse_mesh",
    "ResultsWriter",
]
