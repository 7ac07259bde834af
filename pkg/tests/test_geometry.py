"""
Unit tests for point cloud I/O, neighbor search and the baseline samplers.
"""

import io
import os
import tempfile
import unittest

import numpy as np
from hypothesis import given, settings, strategies as st

from samble.geometry.baselines import sample_fps, sample_random, sample_voxel
from samble.geometry.io import load_pointcloud, normalize_unit_sphere, write_pointcloud
from samble.geometry.neighbors import _shell, knn, neighbor_frequency
from samble.geometry.types import NeighborSearch, PointCloud
from samble.harness.shapes import gen_shape
from samble.internal.errors import (
    EmptyCloudError,
    InvalidCellError,
    InvalidKError,
    InvalidMError,
    ParseError,
    ShapeMismatchError,
)


def brute_force_knn(points, k):
    """Reference neighbor rows: self first, then by squared distance, then by index."""
    n = len(points)
    rows = []
    for o in range(n):
        def key(j):
            d2 = sum((points[o][c] - points[j][c]) ** 2 for c in range(3))
            return (j != o, d2, j)

        rows.append(sorted(range(n), key=key)[:k])
    return np.array(rows)


class TestPointCloud(unittest.TestCase):
    """Test cases for PointCloud validation."""

    def test_empty_cloud_rejected(self):
        """Test that a cloud without points raises EmptyCloudError."""
        with self.assertRaises(EmptyCloudError):
            PointCloud(np.zeros((0, 3)))

    def test_wrong_width_rejected(self):
        """Test that points must have three coordinates."""
        with self.assertRaises(ShapeMismatchError):
            PointCloud(np.zeros((4, 2)))

    def test_non_finite_rejected(self):
        """Test that NaN coordinates are rejected."""
        pts = np.zeros((3, 3))
        pts[1, 2] = np.nan
        with self.assertRaises(ShapeMismatchError):
            PointCloud(pts)

    def test_features_replace_coordinates(self):
        """Test that feature rows become the attended representation."""
        cloud = PointCloud(np.zeros((2, 3)), features=[[1.0, 2.0], [3.0, 4.0]])
        self.assertEqual(cloud.representation().shape, (2, 2))
        self.assertEqual(cloud.subset([1]).representation().tolist(), [[3.0, 4.0]])

    def test_normalize_unit_sphere(self):
        """Test centering and scaling into the unit sphere."""
        cloud = PointCloud([[1.0, 0.0, 0.0], [3.0, 0.0, 0.0]])
        unit = normalize_unit_sphere(cloud)
        np.testing.assert_allclose(unit.points, [[-1.0, 0.0, 0.0], [1.0, 0.0, 0.0]])


class TestCloudIO(unittest.TestCase):
    """Test cases for xyz and ascii PLY parsing."""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.tmp.cleanup()

    def _write(self, name, text):
        path = os.path.join(self.tmp.name, name)
        with open(path, "w") as fh:
            fh.write(text)
        return path

    def test_load_xyz(self):
        """Test xyz parsing with comments and blank lines."""
        path = self._write("chair.xyz", "# header\n0 0 0\n\n1 2 3\n")
        cloud = load_pointcloud(path)
        self.assertEqual(cloud.id, "chair")
        self.assertEqual(cloud.points.tolist(), [[0.0, 0.0, 0.0], [1.0, 2.0, 3.0]])

    def test_xyz_column_error_reports_line(self):
        """Test that a short row raises ParseError with its line number."""
        path = self._write("bad.xyz", "0 0 0\n1 2\n")
        with self.assertRaises(ParseError) as ctx:
            load_pointcloud(path)
        self.assertEqual(ctx.exception.line, 2)

    def test_xyz_non_numeric(self):
        """Test that a non-numeric coordinate raises ParseError."""
        path = self._write("bad.xyz", "0 0 zero\n")
        with self.assertRaises(ParseError):
            load_pointcloud(path)

    def test_empty_file(self):
        """Test that a file with only comments is an empty cloud."""
        path = self._write("none.xyz", "# nothing\n")
        with self.assertRaises(EmptyCloudError):
            load_pointcloud(path)

    def test_load_ply_ascii(self):
        """Test ascii PLY parsing."""
        text = (
            "ply\nformat ascii 1.0\ncomment made by hand\nelement vertex 2\n"
            "property float x\nproperty float y\nproperty float z\nend_header\n"
            "0 0 1\n0.5 0.5 0.5\n"
        )
        cloud = load_pointcloud(self._write("two.ply", text))
        self.assertEqual(cloud.n, 2)
        self.assertEqual(cloud.points[1].tolist(), [0.5, 0.5, 0.5])

    def test_binary_ply_rejected(self):
        """Test that binary PLY is reported as a parse error."""
        text = "ply\nformat binary_little_endian 1.0\nelement vertex 1\nend_header\n"
        with self.assertRaises(ParseError):
            load_pointcloud(self._write("bin.ply", text))

    def test_ply_short_body(self):
        """Test that fewer rows than declared is a parse error."""
        text = (
            "ply\nformat ascii 1.0\nelement vertex 3\n"
            "property double x\nproperty double y\nproperty double z\nend_header\n0 0 0\n"
        )
        with self.assertRaises(ParseError):
            load_pointcloud(self._write("short.ply", text))

    def test_write_then_load_ply(self):
        """Test that written PLY reloads with identical coordinates."""
        cloud = PointCloud(np.random.default_rng(3).normal(size=(5, 3)), id="blob")
        buf = io.StringIO()
        write_pointcloud(cloud, buf, "ply-ascii")
        path = self._write("blob.ply", buf.getvalue())
        np.testing.assert_array_equal(load_pointcloud(path).points, cloud.points)


class TestKnn(unittest.TestCase):
    """Test cases for k nearest neighbor search."""

    def test_matches_brute_force(self):
        """Test exhaustive search against the reference ordering."""
        pts = np.random.default_rng(0).uniform(size=(40, 3))
        table = knn(PointCloud(pts), 6)
        np.testing.assert_array_equal(table.indices, brute_force_knn(pts.tolist(), 6))

    def test_self_first_and_k_one(self):
        """Test that every row starts with the point itself."""
        pts = np.random.default_rng(1).uniform(size=(12, 3))
        table = knn(PointCloud(pts), 1)
        np.testing.assert_array_equal(table.indices[:, 0], np.arange(12))

    def test_coincident_points(self):
        """Test self-inclusion and index tie-breaking on duplicate points."""
        table = knn(PointCloud(np.zeros((4, 3))), 2)
        self.assertEqual(table.indices.tolist(), [[0, 1], [1, 0], [2, 0], [3, 0]])

    def test_k_equals_n(self):
        """Test that k = N lists every point once per row."""
        pts = np.random.default_rng(2).uniform(size=(9, 3))
        table = knn(PointCloud(pts), 9)
        for o in range(9):
            self.assertEqual(sorted(table.indices[o].tolist()), list(range(9)))
            self.assertEqual(table.indices[o][0], o)

    def test_invalid_k(self):
        """Test k outside [1, N]."""
        cloud = PointCloud(np.zeros((3, 3)))
        with self.assertRaises(InvalidKError):
            knn(cloud, 0)
        with self.assertRaises(InvalidKError):
            knn(cloud, 4)

    @settings(max_examples=30, deadline=None)
    @given(
        n=st.integers(min_value=1, max_value=120),
        k=st.integers(min_value=1, max_value=16),
        seed=st.integers(0, 2**16),
    )
    def test_grid_matches_exhaustive(self, n, k, seed):
        """Test that the grid accelerator returns the exhaustive rows."""
        k = min(k, n)
        rng = np.random.default_rng(seed)
        pts = rng.uniform(-1.0, 1.0, size=(n, 3))
        # snap some points to a lattice so distance ties occur
        pts[: n // 3] = np.round(pts[: n // 3] * 2.0) / 2.0
        cloud = PointCloud(pts)
        exhaustive = knn(cloud, k)
        grid = knn(cloud, k, NeighborSearch.GRID)
        np.testing.assert_array_equal(grid.indices, exhaustive.indices)

    def test_grid_with_explicit_cell(self):
        """Test the grid accelerator with a user-chosen cell edge."""
        shape = gen_shape("cube-shell", {"n": 300}, seed=4)
        exhaustive = knn(shape.cloud, 8)
        grid = knn(shape.cloud, 8, "grid", cell=0.3)
        np.testing.assert_array_equal(grid.indices, exhaustive.indices)

    def test_shell_faces(self):
        """Test that each shell holds exactly the cells at Chebyshev distance r."""
        for radius in range(5):
            span = range(-radius, radius + 1)
            cube = [(a, b, c) for a in span for b in span for c in span]
            expected = {off for off in cube if max(abs(v) for v in off) == radius}
            offsets = _shell(radius)
            self.assertEqual(len(offsets), len(expected))
            self.assertEqual(set(offsets), expected)

    def test_grid_with_far_outlier(self):
        """Test a tight cluster plus one far point under a fine cell edge."""
        pts = np.random.default_rng(7).uniform(0.0, 0.1, size=(21, 3))
        pts[20] = [5.0, 5.0, 5.0]
        cloud = PointCloud(pts)
        exhaustive = knn(cloud, 4)
        with self.assertLogs("samble.geometry.neighbors", level="DEBUG") as logs:
            grid = knn(cloud, 4, NeighborSearch.GRID, cell=0.05)
        np.testing.assert_array_equal(grid.indices, exhaustive.indices)
        self.assertTrue(any("using exhaustive search" in line for line in logs.output))

    def test_grid_with_wide_rows(self):
        """Test that k close to N still matches the exhaustive rows."""
        cloud = PointCloud(np.random.default_rng(8).uniform(-1.0, 1.0, size=(150, 3)))
        grid = knn(cloud, 140, "grid", cell=0.21)
        np.testing.assert_array_equal(grid.indices, knn(cloud, 140).indices)


class TestNeighborFrequency(unittest.TestCase):
    """Test cases for neighbor-selection frequency n_o."""

    def setUp(self):
        self.shape = gen_shape("grid2d")
        self.freq = neighbor_frequency(knn(self.shape.cloud, 5))

    def test_total(self):
        """Test that the tallies sum to N * k."""
        self.assertEqual(int(self.freq.sum()), 100 * 5)

    def test_matches_oracle(self):
        """Test against an O(N^2) tally of the reference neighbor rows."""
        rows = brute_force_knn(self.shape.cloud.points.tolist(), 5)
        expected = np.bincount(rows.ravel(), minlength=100)
        np.testing.assert_array_equal(self.freq, expected)

    def test_edge_trichotomy(self):
        """Test corner < boundary < interior frequency classes on the 10x10 grid."""
        idx = np.arange(100)
        i, j = idx // 10, idx % 10
        on_row = (i == 0) | (i == 9)
        on_col = (j == 0) | (j == 9)
        corner = on_row & on_col
        boundary = (on_row | on_col) & ~corner
        interior = ~(on_row | on_col)
        self.assertLess(self.freq[corner].max(), self.freq[boundary].min())
        self.assertLess(self.freq[boundary].min(), self.freq[interior].min())
        self.assertLess(self.freq[boundary].mean(), self.freq[interior].mean())
        self.assertGreaterEqual(np.unique(self.freq).size, 3)


class TestBaselines(unittest.TestCase):
    """Test cases for random, farthest point and voxel sampling."""

    def setUp(self):
        self.line = PointCloud([[float(x), 0.0, 0.0] for x in range(5)])

    def test_random_sampling(self):
        """Test distinct, reproducible random samples."""
        cloud = PointCloud(np.random.default_rng(0).normal(size=(50, 3)))
        a = sample_random(cloud, 10, seed=7)
        b = sample_random(cloud, 10, seed=7)
        self.assertEqual(a.indices.tolist(), b.indices.tolist())
        self.assertEqual(len(a.index_set()), 10)
        with self.assertRaises(InvalidMError):
            sample_random(cloud, 51, seed=0)

    def test_fps_line(self):
        """Test the greedy max-min order on a line."""
        result = sample_fps(self.line, 3)
        self.assertEqual(result.indices.tolist(), [0, 4, 2])

    def test_fps_ties_to_smaller_index(self):
        """Test that equidistant candidates resolve to the smaller index."""
        square = PointCloud([[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0]])
        self.assertEqual(sample_fps(square, 2).indices.tolist(), [0, 3])
        self.assertEqual(sample_fps(square, 3).indices.tolist(), [0, 3, 1])

    def test_fps_seeded_start(self):
        """Test that a seeded start is reproducible."""
        a = sample_fps(self.line, 2, start="seeded", seed=11)
        b = sample_fps(self.line, 2, start="seeded", seed=11)
        self.assertEqual(a.indices.tolist(), b.indices.tolist())

    def test_voxel_representatives(self):
        """Test one representative per occupied cell, nearest the centroid."""
        pts = [[0.1, 0.1, 0.1], [0.2, 0.2, 0.2], [0.3, 0.3, 0.3], [5.1, 5.1, 5.1], [5.5, 5.5, 5.5], [5.6, 5.6, 5.6]]
        result = sample_voxel(PointCloud(pts), 1.0, 2)
        self.assertEqual(result.indices.tolist(), [1, 4])
        self.assertFalse(result.shortfall)

    def test_voxel_shortfall(self):
        """Test that too few occupied cells are flagged."""
        result = sample_voxel(self.line, 10.0, 3)
        self.assertEqual(result.m, 1)
        self.assertTrue(result.shortfall)

    def test_voxel_thinning(self):
        """Test random thinning down to the target count."""
        result = sample_voxel(self.line, 0.5, 3, seed=2)
        self.assertEqual(result.m, 3)
        self.assertFalse(result.shortfall)

    def test_voxel_invalid_cell(self):
        """Test that a non-positive cell edge is rejected."""
        with self.assertRaises(InvalidCellError):
            sample_voxel(self.line, 0.0, 2)


if __name__ == "__main__":
    unittest.main()
