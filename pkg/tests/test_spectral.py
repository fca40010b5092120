"""
Tests for the SkinLock spectral service.

Run with: python -m pytest tests/test_spectral.py -v
Or simply: python tests/test_spectral.py
"""

import math
import os
import sys
import unittest

import numpy as np

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from skinlock.errors import (
    DecompositionError, DegeneracyError, EnvelopeOverflowError, NormalizationError, ParameterError,
    RegimeError, StabilityError,
)
from skinlock.models import EUCLIDEAN, HatanoNelsonParams, RelaxationMatrix, SshParams
from skinlock.services import (
    biorthogonal_decompose, build_hatano_nelson, build_ssh, check_stability, euclidean_normalize,
    hn_analytic_spectrum, hn_similarity_residual, reference_spectrum, relaxation_rates,
    similarity_spectrum, spectral_gap_ratio, ssh_edge_envelopes,
)
from skinlock.services.spectral import is_symmetrizable, mode_residual

LOCKING_CHAIN = HatanoNelsonParams(n_sites=40, t_right=1.0, t_left=0.17, kappa=0.91)


def hn(n_sites: int) -> HatanoNelsonParams:
    return HatanoNelsonParams(n_sites=n_sites, t_right=1.0, t_left=0.17, kappa=0.91)


class TestAnalyticSpectrum(unittest.TestCase):
    """Test the closed-form Hatano-Nelson spectrum."""

    def test_closed_form_rates(self):
        """Test beta_n = kappa - 2 sqrt(t_R t_L) cos(n pi/(N+1))."""
        n = 12
        spectrum = hn_analytic_spectrum(hn(n))
        for mode in range(1, n + 1):
            expected = 0.91 - 2.0 * math.sqrt(0.17) * math.cos(mode * math.pi / (n + 1))
            self.assertLessEqual(abs(spectrum.beta(mode) - expected), 1e-14)

    def test_matches_numeric(self):
        """Test analytic rates against a numeric eigensolve for N <= 12."""
        for n in (2, 4, 8, 12):
            analytic = hn_analytic_spectrum(hn(n))
            numeric = biorthogonal_decompose(build_hatano_nelson(hn(n)))
            np.testing.assert_allclose(numeric.betas.real, analytic.betas.real, rtol=0, atol=1e-10)
            np.testing.assert_allclose(numeric.betas.imag, 0.0, atol=1e-10)

    def test_biorthogonal_envelopes(self):
        """Test <L_m|R_n> = delta_mn and R_n(j) = r^j phi_n(j)."""
        spectrum = hn_analytic_spectrum(hn(12))
        self.assertLessEqual(spectrum.biorthogonality_error(), 1e-12)
        r = LOCKING_CHAIN.envelope_ratio
        right = np.abs(spectrum.right[:, 0])
        left = np.abs(spectrum.left[:, 0])
        np.testing.assert_allclose(right / left, r ** (2 * np.arange(1, 13)), rtol=1e-10)

    def test_similarity_residual(self):
        """Test that diag(r^j) symmetrizes X."""
        self.assertLessEqual(hn_similarity_residual(hn(12)), 1e-9)

    def test_overflow(self):
        """Test that unrepresentable envelopes raise, and the normalized mode still works."""
        long_chain = hn(1000)
        with self.assertRaises(EnvelopeOverflowError):
            hn_analytic_spectrum(long_chain)
        spectrum = hn_analytic_spectrum(long_chain, envelope=EUCLIDEAN)
        self.assertAlmostEqual(float(np.sum(spectrum.right_hat(1).weights)), 1.0, places=12)
        self.assertGreater(int(np.argmax(spectrum.right_hat(1).weights)), 900)
        self.assertLess(int(np.argmax(np.abs(spectrum.left[:, 0]))), 100)
        with self.assertRaises(EnvelopeOverflowError):
            hn_similarity_residual(hn(700))

    def test_unknown_envelope(self):
        """Test that an unknown envelope convention is a parameter error."""
        with self.assertRaises(ParameterError) as ctx:
            hn_analytic_spectrum(hn(4), envelope="symmetric")
        self.assertEqual(ctx.exception.exit_code, 2)


class TestSimilaritySpectrum(unittest.TestCase):
    """Test the diagonal-similarity reference spectrum."""

    def test_matches_analytic(self):
        """Test that the similarity route reproduces the closed form."""
        X = build_hatano_nelson(hn(12))
        similar = similarity_spectrum(X)
        analytic = hn_analytic_spectrum(hn(12))
        np.testing.assert_allclose(similar.betas.real, analytic.betas.real, atol=1e-13)
        scale = float(np.max(np.abs(analytic.right)))
        self.assertLessEqual(float(np.max(np.abs(similar.right - analytic.right))) / scale, 1e-9)
        self.assertEqual(similar.method, 'similarity')

    def test_long_chain_is_biorthogonal(self):
        """Test exact biorthogonality where a numeric eigensolve is untrustworthy."""
        spectrum = similarity_spectrum(build_hatano_nelson(LOCKING_CHAIN))
        self.assertLessEqual(spectrum.biorthogonality_error(), 1e-12)
        self.assertGreater(spectrum.condition_estimate, 1e12)

    def test_reconstruction(self):
        """Test X = sum beta_n |R_n><L_n|."""
        X = build_hatano_nelson(hn(8))
        spectrum = similarity_spectrum(X)
        np.testing.assert_allclose(spectrum.reconstruct(), X.entries, atol=1e-10)

    def test_ssh(self):
        """Test the SSH chain against a numeric eigensolve."""
        X = build_ssh(SshParams(n_cells=4, t1=0.5, t2=1.0, g=-0.25, kappa=1.5))
        self.assertTrue(is_symmetrizable(X))
        similar = similarity_spectrum(X)
        numeric = biorthogonal_decompose(X)
        np.testing.assert_allclose(similar.betas.real, numeric.betas.real, atol=1e-10)
        self.assertLessEqual(mode_residual(X.as_array(), similar), 1e-12)
        self.assertEqual(similar.labels, X.labels)

    def test_single_site(self):
        """Test the 1x1 chain."""
        spectrum = similarity_spectrum(build_hatano_nelson(hn(1)))
        self.assertEqual(spectrum.beta(1), 0.91)
        self.assertTrue(math.isinf(spectral_gap_ratio(spectrum)))

    def test_not_symmetrizable(self):
        """Test that dense or complex matrices take the numeric route."""
        dense = RelaxationMatrix(np.array([[2.0, 0.1, 0.2], [0.3, 2.0, 0.1], [0.1, 0.2, 2.0]]))
        self.assertFalse(is_symmetrizable(dense))
        with self.assertRaises(DecompositionError):
            similarity_spectrum(dense)
        self.assertEqual(reference_spectrum(dense).method, 'numeric')
        complex_x = RelaxationMatrix(np.array([[1.0, 0.1j], [0.1j, 1.0]]))
        self.assertFalse(is_symmetrizable(complex_x))


class TestNumericDecomposition(unittest.TestCase):
    """Test the generic numeric decomposition."""

    def test_random_matrix(self):
        """Test biorthogonality and reconstruction on a generic matrix."""
        rng = np.random.default_rng(7)
        a = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5)) + 4.0 * np.eye(5)
        X = RelaxationMatrix(a)
        spectrum = biorthogonal_decompose(X)
        self.assertLessEqual(spectrum.biorthogonality_error(), 1e-10)
        np.testing.assert_allclose(spectrum.reconstruct(), a, atol=1e-10)
        order = np.lexsort((spectrum.betas.imag, spectrum.betas.real))
        np.testing.assert_array_equal(order, np.arange(5))

    def test_defective_matrix(self):
        """Test that a Jordan block is reported as degenerate."""
        with self.assertRaises(DegeneracyError) as ctx:
            biorthogonal_decompose(RelaxationMatrix(np.array([[1.0, 1.0], [0.0, 1.0]])))
        self.assertEqual(ctx.exception.pair, (1, 2))


class TestStability(unittest.TestCase):
    """Test stability checks and the gap ratio."""

    def test_relaxation_rates(self):
        """Test robust rates of the 40-site chain against the closed form."""
        rates = relaxation_rates(build_hatano_nelson(LOCKING_CHAIN))
        expected = 0.91 - 2.0 * math.sqrt(0.17) * np.cos(np.arange(40, 0, -1) * math.pi / 41)
        np.testing.assert_allclose(np.sort(rates.real), np.sort(expected), atol=1e-12)

    def test_unstable_chain(self):
        """Test that kappa below the band edge raises."""
        X = build_hatano_nelson(HatanoNelsonParams(n_sites=40, t_right=1.0, t_left=0.17, kappa=0.5))
        with self.assertRaises(StabilityError):
            check_stability(X)

    def test_gap_ratio(self):
        """Test (Re beta_2 - Re beta_1) / Re beta_1 at N=3."""
        params = HatanoNelsonParams(n_sites=3, t_right=1.0, t_left=0.17, kappa=1.5)
        c = math.sqrt(0.17)
        beta_1 = 1.5 - 2.0 * c * math.cos(math.pi / 4)
        beta_2 = 1.5
        self.assertAlmostEqual(spectral_gap_ratio(hn_analytic_spectrum(params)),
                               (beta_2 - beta_1) / beta_1, places=12)


class TestEdgeEnvelopes(unittest.TestCase):
    """Test the SSH edge envelopes and normalization helpers."""

    def test_envelopes(self):
        """Test unit norm, empty B sublattice and localization at the first cell."""
        right, left = ssh_edge_envelopes(SshParams(n_cells=20, g=-0.25))
        for envelope in (right, left):
            self.assertAlmostEqual(envelope.norm, 1.0, places=12)
            np.testing.assert_array_equal(envelope.amplitudes[1::2], 0.0)
        self.assertEqual(int(np.argmax(right.weights)), 0)
        ratio = abs(right.amplitudes[2] / right.amplitudes[0])
        self.assertAlmostEqual(ratio, 0.5 * math.exp(-0.5), places=12)

    def test_trivial_regime(self):
        """Test that t1 >= t2 has no edge envelope."""
        with self.assertRaises(RegimeError):
            ssh_edge_envelopes(SshParams(t1=1.0, t2=0.5))

    def test_euclidean_normalize(self):
        """Test unit norm with a real positive pivot."""
        mode = euclidean_normalize(np.array([0.0, -3.0, 4.0j]))
        self.assertAlmostEqual(mode.norm, 1.0, places=14)
        self.assertAlmostEqual(mode.amplitudes[2], 0.8, places=14)
        with self.assertRaises(NormalizationError):
            euclidean_normalize(np.zeros(3))


if __name__ == '__main__':
    unittest.main()
