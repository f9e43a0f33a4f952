"""Shared fixtures for the test suite."""

import math
import sys
from pathlib import Path

import pytest

PROJECT_ROOT = Path(__file__).resolve().parent.parent
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from src.core.mesh import generate_disk_mesh  # noqa: E402
from src.models.mesh import SegmentLabel, TriMesh  # noqa: E402


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running convergence and band checks (deselect with -m 'not slow')")


@pytest.fixture
def unit_square() -> TriMesh:
    """Unit square split along its diagonal; G11 is the right edge, G12 the top edge."""
    return TriMesh(
        vertices=[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
        triangles=[[0, 1, 2], [0, 2, 3]],
        boundary_edges=[[0, 1], [1, 2], [2, 3], [3, 0]],
        edge_labels=["G0", "G11", "G12", "G0"],
    )


@pytest.fixture
def centred_square() -> TriMesh:
    """Unit square with a centre node and four triangles; same labels as ``unit_square``."""
    return TriMesh(
        vertices=[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.5, 0.5]],
        triangles=[[0, 1, 4], [1, 2, 4], [2, 3, 4], [3, 0, 4]],
        boundary_edges=[[0, 1], [1, 2], [2, 3], [3, 0]],
        edge_labels=[SegmentLabel.GAMMA0, SegmentLabel.GAMMA1_1, SegmentLabel.GAMMA1_2, SegmentLabel.GAMMA0],
    )


@pytest.fixture(scope="session")
def octagon_disk() -> TriMesh:
    """Coarsest disk: eight boundary nodes, θ = π/2."""
    return generate_disk_mesh(8, math.pi / 2)


@pytest.fixture(scope="session")
def small_disk() -> TriMesh:
    """32 boundary nodes, θ = π/2."""
    return generate_disk_mesh(32, math.pi / 2)


@pytest.fixture(scope="session")
def medium_disk() -> TriMesh:
    """64 boundary nodes, θ = π/3."""
    return generate_disk_mesh(64, math.pi / 3)
