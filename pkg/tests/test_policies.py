"""
Unit tests for selection priors, in-bin sampling, top-M, prior-based sampling and bin weights.
"""

import unittest

import numpy as np
from hypothesis import given, settings, strategies as st

from samble.attention.types import TokenEnergyMatrix
from samble.binsampler.policies import (
    bin_weights,
    in_bin_sample,
    sample_prior,
    sample_top_m,
    selection_probabilities,
)
from samble.binsampler.types import ReluOrder, SamplingPolicy
from samble.internal.errors import InvalidMError, InvalidTauError, ShapeMismatchError


class TestSelectionProbabilities(unittest.TestCase):
    """Test cases for softmax(a / tau) priors."""

    def test_symmetric(self):
        """Test equal scores give equal probabilities."""
        np.testing.assert_allclose(selection_probabilities([0.0, 0.0], 1.0), [0.5, 0.5])

    def test_temperature_fixture(self):
        """Test a hand-evaluated pair at tau = 0.1."""
        np.testing.assert_allclose(selection_probabilities([0.1, 0.0], 0.1), [0.7311, 0.2689], atol=1e-4)

    def test_invalid_tau(self):
        """Test that tau must be positive."""
        for tau in (0.0, -1.0):
            with self.assertRaises(InvalidTauError):
                selection_probabilities([0.0, 1.0], tau)

    @settings(max_examples=100, deadline=None)
    @given(
        scores=st.lists(st.floats(-3, 3), min_size=2, max_size=20, unique=True),
        shift=st.floats(-10, 10),
        tau=st.floats(min_value=0.05, max_value=5.0),
    )
    def test_shift_invariance_and_argmax(self, scores, shift, tau):
        """Test translation invariance and that the top score has the top probability."""
        a = np.array(scores)
        if np.min(np.diff(np.sort(a))) < 1e-6:
            return
        rho = selection_probabilities(a, tau)
        np.testing.assert_allclose(selection_probabilities(a + shift, tau), rho, atol=1e-12)
        self.assertEqual(int(np.argmax(rho)), int(np.argmax(a)))


class TestInBinSample(unittest.TestCase):
    """Test cases for drawing without replacement inside one bin."""

    def setUp(self):
        self.members = np.array([3, 8, 11, 20, 21])
        self.scores = np.array([0.5, -0.2, 1.0, 0.0, 0.3])

    def test_whole_bin(self):
        """Test that kappa = beta returns the whole bin."""
        out = in_bin_sample(self.members, self.scores, 5, 0.1, seed=0)
        self.assertEqual(sorted(out.tolist()), self.members.tolist())

    def test_empty_draw(self):
        """Test that kappa = 0 returns nothing."""
        self.assertEqual(in_bin_sample(self.members, self.scores, 0, 0.1, seed=0).size, 0)

    def test_distinct_and_reproducible(self):
        """Test distinct members and determinism per seed."""
        a = in_bin_sample(self.members, self.scores, 3, 1.0, seed=9)
        b = in_bin_sample(self.members, self.scores, 3, 1.0, seed=9)
        self.assertEqual(a.tolist(), b.tolist())
        self.assertEqual(len(set(a.tolist())), 3)
        self.assertTrue(set(a.tolist()) <= set(self.members.tolist()))

    def test_kappa_out_of_range(self):
        """Test that kappa above the bin size is rejected."""
        with self.assertRaises(InvalidMError):
            in_bin_sample(self.members, self.scores, 6, 1.0, seed=0)

    def test_first_draw_frequencies(self):
        """Test that single draws follow softmax(a / tau)."""
        rng = np.random.default_rng(5)
        runs = 40000
        counts = np.zeros(5)
        for _ in range(runs):
            picked = in_bin_sample(np.arange(5), self.scores, 1, 1.0, rng)
            counts[picked[0]] += 1
        np.testing.assert_allclose(counts / runs, selection_probabilities(self.scores, 1.0), atol=0.01)

    def test_second_draw_renormalizes(self):
        """Test that pairs match successive draws with renormalization."""
        scores = np.array([1.0, 0.0, -1.0])
        rho = selection_probabilities(scores, 1.0)
        expected = {}
        for i in range(3):
            for j in range(3):
                if i != j:
                    pair = frozenset((i, j))
                    expected[pair] = expected.get(pair, 0.0) + rho[i] * rho[j] / (1.0 - rho[i])
        rng = np.random.default_rng(6)
        runs = 40000
        seen = {}
        for _ in range(runs):
            pair = frozenset(in_bin_sample(np.arange(3), scores, 2, 1.0, rng).tolist())
            seen[pair] = seen.get(pair, 0) + 1
        for pair, p in expected.items():
            self.assertAlmostEqual(seen.get(pair, 0) / runs, p, delta=0.012)


class TestTopAndPrior(unittest.TestCase):
    """Test cases for the whole-cloud policies."""

    def test_top_m_fixture(self):
        """Test the highest scores are taken."""
        result = sample_top_m(np.array([0.28, 1.82, -0.60]), 2)
        self.assertEqual(result.indices.tolist(), [1, 0])
        self.assertEqual(result.policy, SamplingPolicy.TOP_M)
        np.testing.assert_array_equal(result.scores, [1.82, 0.28])

    def test_top_m_ties(self):
        """Test that ties at the cut admit the smaller index."""
        self.assertEqual(sample_top_m(np.array([0.0, 1.0, 1.0, 1.0]), 2).indices.tolist(), [1, 2])

    def test_top_m_all(self):
        """Test M = N takes every index."""
        self.assertEqual(sorted(sample_top_m(np.array([3.0, 1.0, 2.0]), 3).indices.tolist()), [0, 1, 2])

    def test_invalid_m(self):
        """Test M outside [1, N]."""
        with self.assertRaises(InvalidMError):
            sample_top_m(np.zeros(3), 4)
        with self.assertRaises(InvalidMError):
            sample_prior(np.zeros(3), 0, 0.1, seed=0)

    def test_prior_cold_limit(self):
        """Test that a near-zero temperature reproduces top-M."""
        rng = np.random.default_rng(3)
        matches = 0
        for seed in range(1000):
            scores = rng.permutation(np.linspace(-1.0, 1.0, 16))
            top = sample_top_m(scores, 4).index_set()
            matches += sample_prior(scores, 4, 1e-6, seed=seed).index_set() == top
        self.assertGreaterEqual(matches, 999)

    def test_prior_uniform_scores(self):
        """Test that constant scores select every point equally often."""
        rng = np.random.default_rng(4)
        runs = 100000
        counts = np.zeros(8)
        for _ in range(runs):
            counts[in_bin_sample(np.arange(8), np.zeros(8), 2, 0.1, rng)] += 1
        np.testing.assert_allclose(counts / runs, 0.25, atol=0.01)

    def test_prior_reproducible(self):
        """Test determinism per seed."""
        scores = np.random.default_rng(0).normal(size=30)
        a = sample_prior(scores, 10, 0.1, seed=42)
        b = sample_prior(scores, 10, 0.1, seed=42)
        self.assertEqual(a.indices.tolist(), b.indices.tolist())
        self.assertEqual(a.policy, SamplingPolicy.PRIOR)


class TestBinWeights(unittest.TestCase):
    """Test cases for token-energy bin weights."""

    def setUp(self):
        self.block = np.array([[9.0, 0.3], [0.2, -7.0], [-0.4, 5.0]])
        self.bins = np.array([1, 0, 0])
        self.beta = np.array([2, 1])

    def test_relu_after_mean(self):
        """Test the masked mean followed by ReLU."""
        np.testing.assert_allclose(bin_weights(self.block, self.bins, self.beta), [0.0, 0.3])

    def test_relu_before_mean(self):
        """Test that applying ReLU first changes the result."""
        omega = bin_weights(self.block, self.bins, self.beta, ReluOrder.BEFORE_MEAN)
        np.testing.assert_allclose(omega, [0.1, 0.3])

    def test_reads_pre_softmax_token_block(self):
        """Test that a TokenEnergyMatrix contributes its token block."""
        energies = TokenEnergyMatrix(np.zeros((3, 3)), self.block, np.full((3, 3), 0.2))
        np.testing.assert_allclose(bin_weights(energies, self.bins, self.beta), [0.0, 0.3])

    def test_empty_bin(self):
        """Test that empty bins weigh 0."""
        omega = bin_weights(np.ones((2, 3)), np.array([0, 0]), np.array([2, 0, 0]))
        np.testing.assert_array_equal(omega, [1.0, 0.0, 0.0])

    def test_shape_mismatch(self):
        """Test a token block with the wrong bin count."""
        with self.assertRaises(ShapeMismatchError):
            bin_weights(np.ones((3, 3)), self.bins, self.beta)


if __name__ == "__main__":
    unittest.main()
