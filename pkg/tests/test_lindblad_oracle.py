"""
Tests for the SkinLock many-body master-equation oracle.

Run with: python -m pytest tests/test_lindblad_oracle.py -v
Or simply: python tests/test_lindblad_oracle.py
"""

import os
import sys
import unittest

import numpy as np

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from skinlock.errors import ParameterError, ScaleError
from skinlock.models import DensityMatrix, HatanoNelsonParams, OracleReport, OracleSpec
from skinlock.services import (
    build_fock_operators, build_hatano_nelson, build_local_pump, correlator_of, eom_residual,
    evolve_master, hn_jump_decomposition, oracle_check, realize_hn, reference_spectrum,
    solve_lyapunov_direct, steady_state_oracle,
)
from skinlock.services.lindblad_oracle import (
    jump_operators, lindblad_rhs, many_body_hamiltonian, matrix_exponential_reference,
    relaxation_from_jumps, steady_state_deviation,
)
from skinlock.services.steady_state import closed_form_correlator

PAIR = HatanoNelsonParams(n_sites=2, t_right=1.0, t_left=0.17, kappa=2.0)


class TestFockSpace(unittest.TestCase):
    """Test the Jordan-Wigner operator construction."""

    def test_anticommutation(self):
        """Test the canonical anticommutation relations up to four sites."""
        for n in range(1, 5):
            ops = build_fock_operators(n)
            self.assertEqual(ops.hilbert_dim, 2 ** n)
            self.assertLessEqual(ops.car_error(), 1e-14)

    def test_size_cap(self):
        """Test that five sites are refused."""
        with self.assertRaises(ScaleError):
            build_fock_operators(5)

    def test_fock_state_correlator(self):
        """Test that a Fock state gives a diagonal 0/1 correlator."""
        C = correlator_of(DensityMatrix.fock_state([1, 0, 1]))
        np.testing.assert_allclose(C, np.diag([1.0, 0.0, 1.0]), atol=1e-15)
        np.testing.assert_allclose(correlator_of(DensityMatrix.vacuum(2)), np.zeros((2, 2)), atol=0)
        with self.assertRaises(ParameterError):
            DensityMatrix.fock_state([1, 2])

    def test_generator_preserves_trace(self):
        """Test that the master-equation generator is traceless and Hermitian-preserving."""
        realization = realize_hn(HatanoNelsonParams(n_sites=2, t_right=1.0, t_left=0.3, kappa=2.0), gamma=0.4)
        ops = build_fock_operators(2)
        H = many_body_hamiltonian(realization.hamiltonian, ops)
        L = jump_operators(realization.jumps, ops)
        rho = DensityMatrix.fock_state([1, 0]).entries
        drho = lindblad_rhs(rho, H, L)
        self.assertLess(abs(np.trace(drho)), 1e-14)
        np.testing.assert_allclose(drho, drho.conj().T, atol=1e-14)


class TestMasterEquation(unittest.TestCase):
    """Test integration and steady states of the master equation."""

    def test_single_site(self):
        """Test the stationary occupation gain / (gain + loss) of one site."""
        jumps = hn_jump_decomposition(HatanoNelsonParams(n_sites=1, kappa=1.0), gamma=0.4)
        rho = steady_state_oracle(np.zeros((1, 1)), jumps)
        self.assertAlmostEqual(correlator_of(rho)[0, 0].real, 0.4 / 2.0, places=10)

    def test_steady_state_matches_direct(self):
        """Test the master-equation steady state against the direct Lyapunov solve."""
        realization = realize_hn(PAIR, gamma=0.3)
        rho = steady_state_oracle(realization.hamiltonian, realization.jumps)
        X, Y = relaxation_from_jumps(realization.hamiltonian, realization.jumps)
        np.testing.assert_allclose(X.entries, build_hatano_nelson(PAIR).entries, atol=1e-14)
        direct = solve_lyapunov_direct(X, Y).entries
        self.assertLessEqual(float(np.max(np.abs(correlator_of(rho) - direct))), 1e-8)

    def test_trajectory_sampling(self):
        """Test stride sampling, the final time and trace conservation."""
        realization = realize_hn(PAIR, gamma=0.3)
        trajectory = evolve_master(DensityMatrix.vacuum(2), realization.hamiltonian, realization.jumps,
                                   t_final=1.0, dt=0.01, stride=10)
        self.assertEqual(len(trajectory), 11)
        self.assertAlmostEqual(trajectory.times[-1], 1.0, places=12)
        self.assertLess(trajectory.max_trace_drift, 1e-12)
        self.assertAlmostEqual(np.trace(trajectory.final.entries).real, 1.0, places=12)

    def test_bad_arguments(self):
        """Test step, mismatch and stencil validation."""
        realization = realize_hn(PAIR, gamma=0.3)
        with self.assertRaises(ParameterError):
            evolve_master(DensityMatrix.vacuum(2), realization.hamiltonian, realization.jumps, 1.0, 0.0)
        with self.assertRaises(ParameterError):
            evolve_master(DensityMatrix.vacuum(3), realization.hamiltonian, realization.jumps, 1.0, 0.01)
        X, Y = relaxation_from_jumps(realization.hamiltonian, realization.jumps)
        with self.assertRaises(ParameterError):
            eom_residual([0.0, 0.1, 0.2], [np.zeros((2, 2))] * 3, X, Y)


class TestOracleCheck(unittest.TestCase):
    """Test the end-to-end comparison with the correlator equation."""

    def test_default_chain(self):
        """Test that the default three-site chain agrees along the whole trajectory."""
        report = oracle_check(OracleSpec())
        self.assertTrue(report.passed)
        self.assertEqual(report.n_sites, 3)
        self.assertLessEqual(report.max_trajectory_deviation, 1e-7)
        self.assertLessEqual(report.eom_residual, 1e-7)
        self.assertLessEqual(report.steady_state_deviation, 1e-8)
        self.assertAlmostEqual(report.compared_times[-1], 10.0, places=9)
        self.assertEqual(len(report.compared_times), len(report.deviations))

    def test_occupation_mismatch(self):
        """Test that the initial Fock state must match the chain."""
        with self.assertRaises(ParameterError):
            oracle_check(OracleSpec(initial_occupations=[1, 0]), steady_state=False)

    def test_perturbed_steady_state_fails(self):
        """Test that a wrong steady correlator fails the report on its own."""
        realization = realize_hn(PAIR, gamma=0.3)
        X, Y = relaxation_from_jumps(realization.hamiltonian, realization.jumps)
        direct = solve_lyapunov_direct(X, Y).entries
        self.assertLessEqual(steady_state_deviation(realization.hamiltonian, realization.jumps, direct), 1e-8)
        perturbed = direct.copy()
        perturbed[0, 0] += 1e-3
        deviation = steady_state_deviation(realization.hamiltonian, realization.jumps, perturbed)
        self.assertGreaterEqual(deviation, 1e-3 - 1e-8)
        report = OracleReport(n_sites=2, max_trajectory_deviation=0.0, eom_residual=0.0,
                              steady_state_deviation=deviation)
        self.assertFalse(report.passed)
        self.assertFalse(report.to_dict()['passed'])
        self.assertTrue(OracleReport(n_sites=2, max_trajectory_deviation=0.0, eom_residual=0.0).passed)
        with self.assertRaises(ParameterError):
            steady_state_deviation(realization.hamiltonian, realization.jumps, np.zeros((3, 3)))

    def test_matrix_exponential_reference(self):
        """Test the eigenbasis transient against the augmented matrix exponential."""
        X = build_hatano_nelson(HatanoNelsonParams(n_sites=4, t_right=1.0, t_left=0.17, kappa=2.0))
        Y = build_local_pump(4, 2, 0.3)
        C0 = np.diag([1.0, 0.0, 1.0, 0.0])
        for t in (0.5, 1.3, 4.0):
            reference = matrix_exponential_reference(X, Y, C0, t)
            closed = closed_form_correlator(reference_spectrum(X), Y, C0, t).entries
            self.assertLessEqual(float(np.max(np.abs(closed - reference))), 1e-10, t)


if __name__ == '__main__':
    unittest.main()
