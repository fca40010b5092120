"""
Tests for SkinLock source scans and the SSH crossover sweep.

Run with: python -m pytest tests/test_scans.py -v
Or simply: python tests/test_scans.py
"""

import math
import os
import sys
import unittest

import numpy as np

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from skinlock.errors import RegimeError, SiteIndexError, StabilityError
from skinlock.models import CrossoverRow, HatanoNelsonParams, ScanSpec, SshParams
from skinlock.services import count_sign_changes, hn_source_scan, source_scan_deviation, ssh_crossover_scan
from skinlock.services.scans import hn_slow_loading, source_scan_peaks, ssh_crossover_point
from tests.golden import check_golden

LOCKING_CHAIN = HatanoNelsonParams(n_sites=40, t_right=1.0, t_left=0.17, kappa=0.91)
SSH_CHAIN = SshParams(n_cells=20, t1=0.5, t2=1.0, g=-0.25, kappa=1.5)


class TestSourceScan(unittest.TestCase):
    """Test the Hatano-Nelson pump-position scan."""

    @classmethod
    def setUpClass(cls):
        cls.rows = hn_source_scan(LOCKING_CHAIN, 0.03)

    def test_rows_cover_chain(self):
        """Test one row per site in order with both columns peaking at 1."""
        self.assertEqual([row.s for row in self.rows], list(range(1, 41)))
        self.assertAlmostEqual(max(row.nu_max_norm for row in self.rows), 1.0, places=15)
        self.assertAlmostEqual(max(row.a1_norm for row in self.rows), 1.0, places=15)

    def test_peaks_agree(self):
        """Test that the exact and analytic curves peak at the upstream end."""
        nu_peak, a1_peak = source_scan_peaks(self.rows)
        self.assertEqual(a1_peak, 1)
        self.assertEqual(nu_peak, a1_peak)

    def test_deviation_golden(self):
        """Test the frozen maximum deviation between the normalized curves."""
        deviation = source_scan_deviation(self.rows)
        self.assertTrue(math.isfinite(deviation))
        check_golden(self, 'hn_locking.source_scan_deviation', deviation, 1e-6)

    def test_slow_loading_closed_form(self):
        """Test A_1(s) against its direct evaluation."""
        params = HatanoNelsonParams(n_sites=5, t_right=1.0, t_left=0.17, kappa=0.91)
        beta_1 = 0.91 - 2.0 * params.coupling * math.cos(math.pi / 6)
        for s in range(1, 6):
            expected = (0.03 * params.envelope_ratio ** (-2 * s) / (2.0 * beta_1)
                        * (2.0 / 6.0) * math.sin(math.pi * s / 6) ** 2)
            self.assertAlmostEqual(hn_slow_loading(params, s, 0.03) / expected, 1.0, places=12)

    def test_parallel_matches_serial(self):
        """Test that threaded workers keep site order and values."""
        params = HatanoNelsonParams(n_sites=12, t_right=1.0, t_left=0.5, kappa=2.0)
        serial = hn_source_scan(params, 0.1, n_jobs=1)
        threaded = hn_source_scan(params, 0.1, n_jobs=3)
        self.assertEqual([row.s for row in threaded], [row.s for row in serial])
        np.testing.assert_allclose([row.nu_max for row in threaded], [row.nu_max for row in serial],
                                   rtol=1e-14)

    def test_spectral_solver(self):
        """Test that the spectral route reproduces the direct scan on a small chain."""
        params = HatanoNelsonParams(n_sites=8, t_right=1.0, t_left=0.5, kappa=2.0)
        direct = hn_source_scan(params, 0.1)
        spectral = hn_source_scan(params, 0.1, solver="spectral")
        np.testing.assert_allclose([row.nu_max for row in spectral], [row.nu_max for row in direct],
                                   rtol=1e-8)

    def test_rejects_bad_input(self):
        """Test site range and stability checks before any work is done."""
        with self.assertRaises(SiteIndexError):
            hn_source_scan(LOCKING_CHAIN, 0.03, s_range=[0, 1])
        with self.assertRaises(StabilityError):
            hn_source_scan(HatanoNelsonParams(n_sites=10, kappa=0.5), 0.03)

    def test_reciprocal_symmetry(self):
        """Test that a reciprocal chain gives the same scan from either end."""
        params = HatanoNelsonParams(n_sites=9, t_right=0.5, t_left=0.5, kappa=1.5)
        rows = hn_source_scan(params, 0.1)
        nu = np.array([row.nu_max for row in rows])
        a1 = np.array([row.a1 for row in rows])
        np.testing.assert_allclose(nu, nu[::-1], rtol=1e-10, atol=0)
        np.testing.assert_allclose(a1, a1[::-1], rtol=1e-10, atol=0)

    def test_single_site_chain(self):
        """Test that a one-site scan has both normalized columns equal to 1."""
        params = HatanoNelsonParams(n_sites=1, t_right=1.0, t_left=0.17, kappa=0.91)
        rows = hn_source_scan(params, 0.03)
        self.assertEqual(len(rows), 1)
        self.assertAlmostEqual(rows[0].nu_max, 0.03 / (2 * 0.91), places=15)
        self.assertEqual(rows[0].nu_max_norm, 1.0)
        self.assertEqual(rows[0].a1_norm, 1.0)
        self.assertEqual(source_scan_deviation(rows), 0.0)


class TestCrossover(unittest.TestCase):
    """Test the SSH nonreciprocity sweep."""

    def test_default_grid(self):
        """Test the default grid spans both representative values."""
        grid = ScanSpec().g_grid()
        self.assertEqual(len(grid), 24)
        self.assertAlmostEqual(grid[0], -0.55, places=12)
        self.assertAlmostEqual(grid[-1], 0.60, places=12)
        self.assertTrue(np.any(np.isclose(grid, -0.25)))
        self.assertTrue(np.any(np.isclose(grid, 0.20)))

    def test_representative_points(self):
        """Test edge following at g=-0.25 and slow-mode following at g=0.20."""
        edge_side = ssh_crossover_point(SSH_CHAIN.with_g(-0.25), "1A")
        slow_side = ssh_crossover_point(SSH_CHAIN.with_g(0.20), (1, "A"))
        self.assertGreater(edge_side.edge_minus_slow, 0.0)
        self.assertLess(slow_side.edge_minus_slow, 0.0)
        self.assertNotEqual(edge_side.edge_mode_index, edge_side.slow_mode_index)

    def test_sign_change(self):
        """Test that the default sweep crosses over exactly once, near the reciprocal point."""
        rows = ssh_crossover_scan(SSH_CHAIN, n_jobs=2)
        self.assertEqual(len(rows), 24)
        self.assertTrue(all(row.ok for row in rows))
        changes = count_sign_changes(rows)
        self.assertEqual(changes, 1)
        crossings = [(a.g, b.g) for a, b in zip(rows, rows[1:])
                     if np.sign(a.edge_minus_slow) != np.sign(b.edge_minus_slow)]
        self.assertEqual(len(crossings), 1)
        lower, upper = crossings[0]
        self.assertGreaterEqual(lower, -0.05 - 1e-12)
        self.assertLessEqual(upper, 0.05 + 1e-12)
        check_golden(self, 'ssh_crossover.sign_changes', changes, 0)

    def test_failed_point_recorded(self):
        """Test that an unrepresentable point is recorded and the sweep continues."""
        rows = ssh_crossover_scan(SSH_CHAIN, [-0.25, 400.0, 0.20])
        self.assertEqual([row.ok for row in rows], [True, False, True])
        failed = rows[1]
        self.assertEqual(failed.g, 400.0)
        self.assertTrue(math.isnan(failed.o_edge))
        self.assertTrue(failed.error)

    def test_count_sign_changes(self):
        """Test that failed rows and exact ties are skipped."""
        rows = [
            CrossoverRow(-1.0, 0.9, 0.1, 1, 2),
            CrossoverRow.failed(-0.5, "boom"),
            CrossoverRow(0.0, 0.5, 0.5, 1, 2),
            CrossoverRow(0.5, 0.1, 0.9, 1, 2),
            CrossoverRow(1.0, 0.2, 0.8, 1, 2),
        ]
        self.assertEqual(count_sign_changes(rows), 1)

    def test_trivial_regime_rejected(self):
        """Test that t1 >= t2 has no edge candidate to track."""
        with self.assertRaises(RegimeError):
            ssh_crossover_scan(SshParams(n_cells=5, t1=1.0, t2=0.5), [0.0])

    def test_bad_pump_label(self):
        """Test that SSH pump labels need a sublattice letter."""
        with self.assertRaises(SiteIndexError):
            ssh_crossover_scan(SSH_CHAIN, [0.0], pump_site="1")


if __name__ == '__main__':
    unittest.main()
