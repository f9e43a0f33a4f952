"""Tests for disk mesh generation and boundary queries."""

import math

import numpy as np
import pytest

from src.core.errors import MeshError
from src.core.mesh import (
    boundary_measure,
    boundary_nodes,
    boundary_normals,
    boundary_partition,
    describe_mesh,
    generate_disk_mesh,
    triangle_quality,
)
from src.models.mesh import ALL_SEGMENTS, GAMMA1, SegmentLabel, label_name
from src.utils.helpers import polar_angle
from src.utils.validators import validate_mesh

G0 = SegmentLabel.GAMMA0
G11 = SegmentLabel.GAMMA1_1
G12 = SegmentLabel.GAMMA1_2


def node_angles(mesh, label):
    nodes = boundary_nodes(mesh, label)
    return polar_angle(mesh.vertices[nodes, 0], mesh.vertices[nodes, 1])


class TestGenerateDiskMesh:
    def test_octagon_boundary_angles(self, octagon_disk):
        angles = polar_angle(octagon_disk.vertices[:8, 0], octagon_disk.vertices[:8, 1])
        np.testing.assert_allclose(angles, np.arange(8) * math.pi / 4, atol=1e-14)

    def test_octagon_labels(self, octagon_disk):
        labels = list(octagon_disk.edge_labels)
        assert labels.count(G11) == 1
        assert labels.count(G12) == 1
        assert labels.count(G0) == 6
        assert labels[0] == G11 and labels[1] == G12

    def test_generated_mesh_is_valid(self, octagon_disk, medium_disk):
        for mesh in (octagon_disk, medium_disk):
            assert validate_mesh(mesh) == (True, None)
            assert np.all(mesh.signed_areas() > 0)

    def test_euler_relation(self, medium_disk):
        tri = medium_disk.triangles
        edges = np.sort(np.concatenate([tri[:, [0, 1]], tri[:, [1, 2]], tri[:, [2, 0]]]), axis=1)
        n_edges = len(np.unique(edges, axis=0))
        assert medium_disk.n_vertices - n_edges + medium_disk.n_triangles == 1

    @pytest.mark.parametrize("theta", [math.pi / 6, math.pi / 4, math.pi / 3, math.pi / 2, 1.0, 4.0])
    def test_junction_angles_are_nodes(self, theta):
        mesh = generate_disk_mesh(48, theta)
        angles = node_angles(mesh, GAMMA1)
        assert angles[0] == pytest.approx(0.0, abs=1e-14)
        assert angles[-1] == pytest.approx(theta, abs=1e-12)
        junction = node_angles(mesh, G11)[-1]
        assert junction == pytest.approx(theta / 2, abs=1e-12)

    @pytest.mark.parametrize("theta", [math.pi / 6, math.pi / 3, 2.5])
    def test_gamma1_halves_have_equal_measure(self, theta):
        mesh = generate_disk_mesh(64, theta)
        m11 = boundary_measure(mesh, G11)
        m12 = boundary_measure(mesh, G12)
        assert abs(m11 - m12) <= 1e-12 * m11

    def test_edge_labels_follow_angles(self, medium_disk):
        theta = medium_disk.theta
        edges = medium_disk.boundary_edges
        mid = medium_disk.vertices[edges[:, 0]] + medium_disk.vertices[edges[:, 1]]
        angles = polar_angle(mid[:, 0], mid[:, 1])
        for angle, label in zip(angles, medium_disk.edge_labels):
            if angle < theta / 2:
                assert label == G11
            elif angle < theta:
                assert label == G12
            else:
                assert label == G0

    def test_quality(self):
        mesh = generate_disk_mesh(64, math.pi / 2)
        assert triangle_quality(mesh) >= 20.0

    def test_perimeter_increases_towards_two_pi(self):
        perimeters = [boundary_measure(generate_disk_mesh(n, math.pi / 2), ALL_SEGMENTS) for n in (8, 16, 32, 64)]
        assert all(a < b for a, b in zip(perimeters, perimeters[1:]))
        assert perimeters[-1] < 2 * math.pi
        assert perimeters[-1] == pytest.approx(2 * math.pi, rel=1e-2)

    def test_refinement_doubles_boundary_edges(self):
        coarse = generate_disk_mesh(16, math.pi / 2)
        fine = generate_disk_mesh(32, math.pi / 2)
        assert len(fine.boundary_edges) == 2 * len(coarse.boundary_edges)

    def test_deterministic(self):
        a = generate_disk_mesh(24, 1.0)
        b = generate_disk_mesh(24, 1.0)
        np.testing.assert_array_equal(a.vertices, b.vertices)
        np.testing.assert_array_equal(a.triangles, b.triangles)

    @pytest.mark.parametrize("theta", [0.0, -1.0, 2 * math.pi, 2 * math.pi + 0.1])
    def test_rejects_theta_outside_range(self, theta):
        with pytest.raises(MeshError):
            generate_disk_mesh(16, theta)

    def test_rejects_too_few_boundary_nodes(self):
        with pytest.raises(MeshError):
            generate_disk_mesh(7, math.pi / 2)


class TestBoundaryPartition:
    def test_quarter_circle_on_eight_nodes(self):
        assert boundary_partition(8, math.pi / 2) == (1, 6)

    def test_small_theta_keeps_one_interval_per_half(self):
        assert boundary_partition(8, 0.01) == (1, 6)

    def test_large_theta_leaves_gamma0_an_interval(self):
        per_half, rest = boundary_partition(8, 2 * math.pi - 0.01)
        assert rest >= 1
        assert 2 * per_half + rest == 8


class TestBoundaryNodes:
    def test_gamma11_on_octagon(self, octagon_disk):
        np.testing.assert_allclose(node_angles(octagon_disk, G11), [0.0, math.pi / 4], atol=1e-14)

    def test_gamma1_union_lists_junction_once(self, octagon_disk):
        nodes = boundary_nodes(octagon_disk, GAMMA1)
        assert len(nodes) == 3
        np.testing.assert_allclose(node_angles(octagon_disk, GAMMA1), [0.0, math.pi / 4, math.pi / 2], atol=1e-14)

    def test_gamma0_includes_both_junctions(self, octagon_disk):
        nodes = boundary_nodes(octagon_disk, G0)
        assert len(nodes) == 7
        assert nodes[0] == 2 and nodes[-1] == 0

    def test_full_loop_lists_each_node_once(self, octagon_disk):
        nodes = boundary_nodes(octagon_disk, ALL_SEGMENTS)
        assert sorted(nodes.tolist()) == list(range(8))

    def test_consecutive_nodes_are_labeled_edges(self, medium_disk):
        for label in (G0, G11, G12, GAMMA1):
            nodes = boundary_nodes(medium_disk, label)
            wanted = set(label if isinstance(label, tuple) else (label,))
            edges = {(a, b) for a, b, item in medium_disk.labeled_edges if item in wanted}
            for a, b in zip(nodes, nodes[1:]):
                assert (int(a), int(b)) in edges, label_name(label)

    def test_wrapping_run_on_square(self, unit_square):
        assert boundary_nodes(unit_square, G0).tolist() == [3, 0, 1]
        assert boundary_nodes(unit_square, GAMMA1).tolist() == [1, 2, 3]


class TestBoundaryMeasure:
    def test_octagon_perimeter(self, octagon_disk):
        assert boundary_measure(octagon_disk, ALL_SEGMENTS) == pytest.approx(16 * math.sin(math.pi / 8), abs=1e-12)

    def test_octagon_halves(self, octagon_disk):
        expected = 2 * math.sin(math.pi / 8)
        assert boundary_measure(octagon_disk, G11) == pytest.approx(expected, abs=1e-12)
        assert boundary_measure(octagon_disk, G12) == pytest.approx(expected, abs=1e-12)
        assert boundary_measure(octagon_disk, GAMMA1) == pytest.approx(1.53073, abs=1e-5)

    def test_segments_add_up(self, medium_disk):
        total = boundary_measure(medium_disk, G0) + boundary_measure(medium_disk, GAMMA1)
        assert total == pytest.approx(boundary_measure(medium_disk, ALL_SEGMENTS), abs=1e-12)

    def test_absent_label_has_zero_measure(self, unit_square):
        relabeled = unit_square.model_copy(update={"edge_labels": (G0, G11, G11, G0)})
        assert boundary_measure(relabeled, G12) == 0.0


def test_boundary_normals_point_outwards():
    mesh = generate_disk_mesh(64, math.pi / 2)
    nodes = boundary_nodes(mesh, GAMMA1)
    normals = boundary_normals(mesh, GAMMA1)
    np.testing.assert_allclose(normals, mesh.vertices[nodes], atol=1e-12)


def test_describe_mesh(centred_square):
    text = describe_mesh(centred_square)
    assert text.startswith("5 vertices, 4 triangles")
    assert "G0: 2 edges" in text
    assert "G11: 1 edges" in text and "G12: 1 edges" in text
