"""
Unit tests for weights, dense attention and sparse attention maps.
"""

import os
import struct
import tempfile
import unittest

import numpy as np
from hypothesis import given, settings, strategies as st

from samble.attention.maps import carve_sam, global_map, insert_sam, local_rows, token_energies
from samble.attention.types import SamVariant, WeightSet
from samble.attention.weights import init_weights, load_weights, save_weights
from samble.geometry.neighbors import knn
from samble.geometry.types import PointCloud
from samble.internal.errors import DimMismatchError, FormatError, ShapeMismatchError


def random_cloud(seed, n):
    return PointCloud(np.random.default_rng(seed).uniform(-1.0, 1.0, size=(n, 3)))


class TestWeights(unittest.TestCase):
    """Test cases for seeded weights and the weight file format."""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.path = os.path.join(self.tmp.name, "w.bin")

    def tearDown(self):
        self.tmp.cleanup()

    def test_init_shapes_and_seed(self):
        """Test shapes and reproducibility of seeded weights."""
        ws = init_weights(3, 8, 4, seed=5)
        self.assertEqual((ws.d_in, ws.d, ws.n_b), (3, 8, 4))
        np.testing.assert_array_equal(ws.w_q, init_weights(3, 8, 4, seed=5).w_q)
        self.assertFalse(np.array_equal(ws.w_q, init_weights(3, 8, 4, seed=6).w_q))

    def test_save_load(self):
        """Test that saved weights load back bit for bit."""
        ws = init_weights(3, 8, 4, seed=1)
        save_weights(ws, self.path)
        loaded = load_weights(self.path)
        for a, b in ((ws.w_q, loaded.w_q), (ws.w_k, loaded.w_k), (ws.bin_tokens, loaded.bin_tokens)):
            np.testing.assert_array_equal(a, b)

    def test_bad_magic(self):
        """Test that a foreign file is rejected."""
        with open(self.path, "wb") as fh:
            fh.write(b"NOTWEIGHTS" + b"\x00" * 64)
        with self.assertRaises(FormatError):
            load_weights(self.path)

    def test_payload_length_mismatch(self):
        """Test that a header/payload disagreement is rejected."""
        with open(self.path, "wb") as fh:
            fh.write(struct.pack("<8sIIII", b"SAMBLEWT", 1, 3, 4, 2))
            fh.write(np.zeros(5, dtype="<f8").tobytes())
        with self.assertRaises(FormatError):
            load_weights(self.path)

    def test_token_width_checked(self):
        """Test that bin tokens must live in input space."""
        with self.assertRaises(DimMismatchError):
            WeightSet(np.eye(3), np.eye(3), np.zeros((2, 4)))


class TestDenseMaps(unittest.TestCase):
    """Test cases for the global map and token energies."""

    def test_rows_are_stochastic(self):
        """Test that every global map row sums to 1."""
        dense = global_map(random_cloud(0, 30), init_weights(3, 8, 0, seed=0))
        np.testing.assert_allclose(dense.values.sum(axis=1), 1.0, atol=1e-12)

    def test_zero_weights_are_uniform(self):
        """Test that zero projections give a uniform map."""
        dense = global_map(random_cloud(1, 10), WeightSet.zeros(3, 4, 0))
        np.testing.assert_allclose(dense.values, 0.1)

    def test_width_mismatch(self):
        """Test that weights for another input width are rejected."""
        with self.assertRaises(DimMismatchError):
            global_map(random_cloud(0, 5), init_weights(4, 8, 0, seed=0))

    def test_token_energy_blocks(self):
        """Test block shapes and that point-block rows sum below 1."""
        energies = token_energies(random_cloud(2, 20), init_weights(3, 8, 3, seed=2))
        self.assertEqual(energies.point_block.shape, (20, 20))
        self.assertEqual(energies.token_block.shape, (20, 3))
        row_sums = energies.post_softmax_point_block.sum(axis=1)
        self.assertTrue(np.all(row_sums < 1.0))
        point_map = energies.point_map()
        np.testing.assert_array_equal(point_map.values, energies.post_softmax_point_block)

    def test_token_equal_to_point(self):
        """Test that a token placed on a point reproduces that point's energy column."""
        cloud = random_cloud(3, 12)
        base = init_weights(3, 8, 1, seed=3)
        ws = WeightSet(base.w_q, base.w_k, cloud.points[4:5])
        energies = token_energies(cloud, ws)
        np.testing.assert_allclose(energies.token_block[:, 0], energies.point_block[:, 4], rtol=1e-12, atol=1e-12)

    def test_token_energies_need_tokens(self):
        """Test that a weight set without tokens is rejected."""
        with self.assertRaises(ShapeMismatchError):
            token_energies(random_cloud(0, 5), init_weights(3, 4, 0, seed=0))


class TestSparseMaps(unittest.TestCase):
    """Test cases for carve and insert sparse attention maps."""

    def check_structure(self, cloud, k, seed):
        n = cloud.n
        ws = init_weights(3, 8, 0, seed=seed)
        table = knn(cloud, k)
        carved = carve_sam(global_map(cloud, ws), table)
        inserted = insert_sam(local_rows(cloud, table, ws), table)
        for sam in (carved, inserted):
            np.testing.assert_array_equal(np.diff(sam.matrix.indptr), k)
            self.assertEqual(int(sam.column_counts.sum()), n * k)
        np.testing.assert_allclose(inserted.row_sums(), 1.0, atol=1e-6)
        self.assertEqual(carved.variant, SamVariant.CARVE)
        self.assertEqual(inserted.variant, SamVariant.INSERT)

    @settings(max_examples=40, deadline=None)
    @given(
        n=st.integers(min_value=16, max_value=512),
        k=st.integers(min_value=4, max_value=32),
        seed=st.integers(0, 2**16),
    )
    def test_structure(self, n, k, seed):
        """Test k cells per row, N*k total selections and stochastic insert rows."""
        self.check_structure(random_cloud(seed, n), min(k, n), seed)

    def test_structure_over_many_clouds(self):
        """Test the row structure on 200 seeded clouds of 16 to 512 points."""
        rng = np.random.default_rng(2024)
        for seed in range(200):
            n = int(rng.integers(16, 513))
            k = int(rng.integers(4, min(32, n) + 1))
            self.check_structure(random_cloud(seed, n), k, seed)

    def test_carve_full_equals_dense(self):
        """Test that carving with k = N keeps the dense map."""
        cloud = random_cloud(4, 25)
        dense = global_map(cloud, init_weights(3, 8, 0, seed=4))
        sam = carve_sam(dense, knn(cloud, 25))
        np.testing.assert_allclose(sam.toarray(), dense.values, atol=1e-12, rtol=0)

    def test_carve_keeps_neighbor_values(self):
        """Test that stored values are the dense values at the neighbor columns."""
        cloud = random_cloud(5, 30)
        dense = global_map(cloud, init_weights(3, 8, 0, seed=5))
        table = knn(cloud, 4)
        sam = carve_sam(dense, table)
        full = sam.toarray()
        for o in range(30):
            for col in table.indices[o]:
                self.assertEqual(full[o, col], dense.values[o, col])
        self.assertEqual(np.count_nonzero(full), 30 * 4)

    def test_insert_zero_weights_uniform(self):
        """Test that zero projections give 1/k in every stored cell."""
        cloud = random_cloud(6, 20)
        table = knn(cloud, 5)
        sam = insert_sam(local_rows(cloud, table, WeightSet.zeros(3, 4, 0)), table)
        np.testing.assert_allclose(sam.row_values(), 0.2)

    def test_size_mismatch(self):
        """Test that a neighbor table for another cloud is rejected."""
        ws = init_weights(3, 8, 0, seed=0)
        dense = global_map(random_cloud(0, 10), ws)
        with self.assertRaises(ShapeMismatchError):
            carve_sam(dense, knn(random_cloud(0, 12), 3))
        with self.assertRaises(ShapeMismatchError):
            insert_sam(np.ones((10, 4)), knn(random_cloud(0, 10), 3))


if __name__ == "__main__":
    unittest.main()
