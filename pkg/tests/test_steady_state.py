"""
Tests for the SkinLock steady-state and transient solvers.

Run with: python -m pytest tests/test_steady_state.py -v
Or simply: python tests/test_steady_state.py
"""

import math
import os
import sys
import unittest

import numpy as np
import scipy.integrate
import scipy.linalg

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from skinlock.data import RunWriter
from skinlock.errors import DarkSourceError, NormalizationError, ParameterError, StabilityError
from skinlock.models import EUCLIDEAN, HatanoNelsonParams, SourceMatrix, SshParams
from skinlock.services import (
    balanced_residual, biorthogonal_decompose, build_hatano_nelson, build_local_pump, build_ssh,
    closed_form_correlator, hn_analytic_spectrum, hn_kernel_correlator, propagate_correlator,
    natural_orbitals, reference_spectrum, single_mode_agreement, single_mode_approximation, solve_lyapunov_direct,
    solve_lyapunov_spectral, solve_steady_state, solver_agreement_curve,
)
from skinlock.services.steady_state import (
    SCHUR, VECTORIZED, AgreementPoint, lyapunov_residual, relative_difference,
)
from tests.golden import ARTIFACT_DIR


def hn(n_sites: int, kappa: float = 0.91) -> HatanoNelsonParams:
    return HatanoNelsonParams(n_sites=n_sites, t_right=1.0, t_left=0.17, kappa=kappa)


class TestDirectSolver(unittest.TestCase):
    """Test the direct Lyapunov routes."""

    def test_hn_residual(self):
        """Test the relative residual at every chain length with a downstream pump."""
        for n in (2, 4, 8, 12, 20, 40):
            X = build_hatano_nelson(hn(n))
            C = solve_lyapunov_direct(X, build_local_pump(n, n, 0.03))
            self.assertLessEqual(C.residual, 1e-10, f"N={n}")
            self.assertTrue(C.within_tolerance)

    def test_ssh_residual(self):
        """Test the residual on SSH chains at both profile nonreciprocities and beyond."""
        for g in (-0.25, 0.20, 0.60):
            for n_cells in (1, 4, 10, 20):
                X = build_ssh(SshParams(n_cells=n_cells, t1=0.5, t2=1.0, g=g, kappa=1.5))
                upstream = build_local_pump(X.dim, 1, 1e-8)
                C = solve_lyapunov_direct(X, upstream)
                residual, floor = balanced_residual(X, C, upstream)
                self.assertLessEqual(residual, 1e-10, f"g={g}, 2N={X.dim}")
                self.assertLess(floor, 1e-10)
                self.assertAlmostEqual(C.parameters['frame_residual'], residual, delta=1e-14)
                self.assertLessEqual(C.parameters['frame_asymmetry'], 1e-10)
                downstream = build_local_pump(X.dim, 1 if g < 0 else X.dim, 1e-8)
                C = solve_lyapunov_direct(X, downstream)
                self.assertLessEqual(C.residual, 1e-10, f"g={g}, 2N={X.dim}, downstream pump")

    def test_upstream_pump_residual(self):
        """Test that an upstream pump is judged in the balancing frame, not by the raw residual."""
        X = build_hatano_nelson(hn(40))
        Y = build_local_pump(40, 15, 0.03)
        C = solve_lyapunov_direct(X, Y)
        residual, _ = balanced_residual(X, C, Y)
        self.assertLessEqual(residual, 1e-10)
        self.assertGreater(C.residual, residual)
        kernel = hn_kernel_correlator(hn(40), 15, 0.03)
        self.assertLessEqual(relative_difference(C.entries, kernel.entries), 1e-5)

    def test_routes_agree(self):
        """Test balanced, Schur and vectorized routes against each other."""
        X = build_hatano_nelson(hn(8))
        Y = build_local_pump(8, 3, 0.03)
        balanced = solve_lyapunov_direct(X, Y).entries
        for method in (SCHUR, VECTORIZED):
            other = solve_lyapunov_direct(X, Y, method=method).entries
            self.assertLessEqual(relative_difference(other, balanced), 1e-10, method)

    def test_hermitian_output(self):
        """Test that the stored correlator is exactly Hermitian."""
        X = build_hatano_nelson(hn(12))
        C = solve_lyapunov_direct(X, build_local_pump(12, 5, 0.03))
        np.testing.assert_array_equal(C.entries, C.entries.conj().T)
        self.assertEqual(C.parameters['route'], 'balanced')

    def test_single_site(self):
        """Test C = Gamma / (2 kappa) for one site."""
        X = build_hatano_nelson(hn(1))
        C = solve_lyapunov_direct(X, build_local_pump(1, 1, 0.03))
        self.assertAlmostEqual(C.entries[0, 0].real, 0.03 / (2 * 0.91), places=15)

    def test_unstable(self):
        """Test that an unstable X raises before solving."""
        X = build_hatano_nelson(hn(40, kappa=0.5))
        with self.assertRaises(StabilityError):
            solve_lyapunov_direct(X, build_local_pump(40, 40, 0.03))

    def test_dimension_mismatch(self):
        """Test that X and Y must act on the same sites."""
        with self.assertRaises(ParameterError):
            solve_lyapunov_direct(build_hatano_nelson(hn(4)), build_local_pump(3, 1, 0.03))
        with self.assertRaises(ParameterError):
            solve_steady_state(build_hatano_nelson(hn(4)), build_local_pump(4, 1, 0.03), 'iterative')

    def test_residual_without_source(self):
        """Test that the residual is absolute when Y = 0."""
        x = np.eye(2)
        self.assertEqual(lyapunov_residual(x, np.zeros((2, 2)), np.zeros((2, 2))), 0.0)


class TestSpectralSolver(unittest.TestCase):
    """Test the biorthogonal double sum."""

    def test_matches_direct(self):
        """Test similarity and numeric spectra against the direct route for N <= 12."""
        for n in (2, 4, 8, 12):
            X = build_hatano_nelson(hn(n))
            Y = build_local_pump(n, (n + 1) // 2, 0.03)
            direct = solve_lyapunov_direct(X, Y).entries
            similar = solve_lyapunov_spectral(reference_spectrum(X), Y, X)
            self.assertLessEqual(relative_difference(similar.entries, direct), 1e-6, f"N={n}")
            numeric_spectrum = biorthogonal_decompose(X)
            if numeric_spectrum.condition_estimate < 1e10:
                numeric = solve_lyapunov_spectral(numeric_spectrum, Y, X)
                self.assertLessEqual(relative_difference(numeric.entries, direct), 1e-6, f"N={n}")

    def test_kernel_form(self):
        """Test the reference-chain kernel against the direct route."""
        params = hn(12)
        kernel = hn_kernel_correlator(params, 6, 0.03).entries
        direct = solve_lyapunov_direct(build_hatano_nelson(params), build_local_pump(12, 6, 0.03)).entries
        self.assertLessEqual(relative_difference(kernel, direct), 1e-10)

    def test_dispatch(self):
        """Test that solve_steady_state routes to both solvers."""
        X = build_hatano_nelson(hn(6))
        Y = build_local_pump(6, 2, 0.03)
        self.assertEqual(solve_steady_state(X, Y, 'direct').method, 'direct')
        self.assertEqual(solve_steady_state(X, Y, 'spectral').method, 'spectral')

    def test_rejects_normalized_envelopes(self):
        """Test that unit-norm envelope spectra cannot be summed."""
        spectrum = hn_analytic_spectrum(hn(6), envelope=EUCLIDEAN)
        with self.assertRaises(NormalizationError):
            solve_lyapunov_spectral(spectrum, build_local_pump(6, 2, 0.03))

    def test_agreement_curve(self):
        """Test that the spectral route agrees while the eigenvectors are well conditioned."""
        points = solver_agreement_curve([2, 4, 8, 12, 20, 30, 40])
        writer = RunWriter(ARTIFACT_DIR)
        writer.write_csv('solver_agreement.csv', AgreementPoint.CSV_HEADER, points)
        for point in points:
            if point.error is None and point.condition_estimate < 1e10:
                self.assertLessEqual(point.relative_difference, 1e-6, f"N={point.n_sites}")
        self.assertEqual([p.n_sites for p in points], [2, 4, 8, 12, 20, 30, 40])


class TestSingleMode(unittest.TestCase):
    """Test the rank-one single-mode approximation."""

    def test_rank_one(self):
        """Test that trace of the rank-one correlator equals the predicted nu_max."""
        spectrum = reference_spectrum(build_hatano_nelson(hn(40)))
        approximation = single_mode_approximation(spectrum, 15, 0.03)
        self.assertEqual(approximation.mode_index, 1)
        trace = float(np.trace(approximation.correlator.entries).real)
        self.assertLessEqual(abs(trace - approximation.predicted_nu_max) / trace, 1e-12)
        eigenvalues = np.linalg.eigvalsh(approximation.correlator.entries)
        self.assertLessEqual(abs(eigenvalues[-2]), 1e-12 * eigenvalues[-1])

    def test_dark_source(self):
        """Test a pump on a node of the chosen left mode."""
        spectrum = hn_analytic_spectrum(HatanoNelsonParams(n_sites=3, t_right=1.0, t_left=0.17, kappa=1.5))
        with self.assertRaises(DarkSourceError):
            single_mode_approximation(spectrum, 2, 0.03, mode=2)

    def test_agreement_within_bound(self):
        """Test that well-gapped chains predict nu_max within the subleading loading sum."""
        cases = (
            (HatanoNelsonParams(n_sites=5, t_right=1.0, t_left=0.5, kappa=1.5), 3, 0.1, 0.0269500003),
            (HatanoNelsonParams(n_sites=3, t_right=1.0, t_left=0.5, kappa=2.0), 2, 0.03, 0.1309610280),
        )
        for params, s, strength, expected in cases:
            X = build_hatano_nelson(params)
            C = solve_lyapunov_direct(X, build_local_pump(X.dim, s, strength))
            agreement = single_mode_agreement(reference_spectrum(X), natural_orbitals(C).nu_max, s, strength)
            self.assertTrue(agreement.holds, agreement)
            self.assertAlmostEqual(agreement.relative_error, expected, delta=1e-8)
            self.assertLessEqual(agreement.relative_error, agreement.bound)
            self.assertGreaterEqual(agreement.gap_ratio, 1.0 - 1e-9)

    def test_breakdown_on_locking_chain(self):
        """Test that the strongly non-normal chain breaks the bound and reports it."""
        X = build_hatano_nelson(hn(40))
        C = solve_lyapunov_direct(X, build_local_pump(40, 15, 0.03))
        agreement = single_mode_agreement(reference_spectrum(X), natural_orbitals(C).nu_max, 15, 0.03)
        self.assertFalse(agreement.holds)
        self.assertGreater(agreement.relative_error, 1e6)
        self.assertAlmostEqual(agreement.bound, 4.6169, delta=1e-3)
        self.assertAlmostEqual(agreement.gap_ratio, 0.0825, delta=1e-3)
        self.assertFalse(agreement.to_dict()['bound_holds'])
        with self.assertRaises(NormalizationError):
            single_mode_agreement(reference_spectrum(X), 0.0, 15, 0.03)


class TestTransients(unittest.TestCase):
    """Test RK4 propagation and the closed-form transient."""

    def setUp(self):
        self.X = build_hatano_nelson(hn(8))
        self.Y = build_local_pump(8, 8, 0.03)
        self.spectrum = reference_spectrum(self.X)

    def test_rk4_matches_closed_form(self):
        """Test RK4 snapshots against the eigenbasis solution."""
        trajectory = propagate_correlator(self.X, self.Y, np.zeros((8, 8)), t_final=5.0, dt=0.005, stride=100)
        self.assertEqual(len(trajectory), 11)
        for snapshot in trajectory:
            exact = closed_form_correlator(self.spectrum, self.Y, np.zeros((8, 8)), snapshot.time).entries
            self.assertLessEqual(float(np.max(np.abs(snapshot.entries - exact))), 1e-8, f"t={snapshot.time}")

    def test_fixed_point(self):
        """Test that the steady state does not move under the dynamics."""
        steady = solve_lyapunov_direct(self.X, self.Y)
        trajectory = propagate_correlator(self.X, self.Y, steady, t_final=5.0, dt=0.01, stride=500)
        drift = float(np.max(np.abs(trajectory[-1].entries - steady.entries)))
        self.assertLessEqual(drift, 1e-10 * float(np.max(np.abs(steady.entries))))

    def test_late_time_rate(self):
        """Test that the distance to the steady state decays at twice the slowest rate."""
        X = build_hatano_nelson(hn(4, kappa=1.5))
        Y = build_local_pump(4, 4, 0.03)
        slowest = float(np.min(reference_spectrum(X).betas.real))
        steady = solve_lyapunov_direct(X, Y).entries
        trajectory = propagate_correlator(X, Y, np.zeros((4, 4)), t_final=12.0, dt=0.01, stride=100)
        distance = {round(snapshot.time): float(np.linalg.norm(snapshot.entries - steady))
                    for snapshot in trajectory}
        start = 8
        self.assertGreater(start, 5.0 / slowest)
        for t in (9, 10, 11, 12):
            ratio = distance[t] / distance[start]
            envelope = math.exp(-2.0 * slowest * (t - start))
            self.assertLessEqual(ratio, 10.0 * envelope, f"t={t}")
            self.assertGreaterEqual(ratio, 0.1 * envelope, f"t={t}")

    def test_decay_without_source(self):
        """Test that with Y = 0 the correlator decays to zero with a falling trace."""
        X = build_hatano_nelson(HatanoNelsonParams(n_sites=4, t_right=1.0, t_left=0.17, kappa=3.0))
        trajectory = propagate_correlator(X, SourceMatrix(np.zeros((4, 4))), 0.5 * np.eye(4),
                                          t_final=10.0, dt=0.01, stride=50)
        traces = [snapshot.trace for snapshot in trajectory]
        self.assertTrue(all(b < a for a, b in zip(traces, traces[1:])))
        self.assertLessEqual(float(np.max(np.abs(trajectory[-1].entries))), 1e-10)

    def test_infinite_time(self):
        """Test that t = inf gives the steady state."""
        steady = solve_lyapunov_direct(self.X, self.Y).entries
        limit = closed_form_correlator(self.spectrum, self.Y, np.zeros((8, 8)), math.inf).entries
        self.assertLessEqual(relative_difference(limit, steady), 1e-10)

    def test_quadrature(self):
        """Test the closed form against direct quadrature of the source integral."""
        X = build_hatano_nelson(hn(4, kappa=1.5))
        Y = SourceMatrix(np.diag([0.1, 0.0, 0.2, 0.05]))
        c0 = np.diag([1.0, 0.0, 1.0, 0.0])
        t = 2.0
        x = X.entries

        def integrand(u):
            propagator = scipy.linalg.expm(-x * u)
            return propagator @ Y.entries @ propagator.conj().T

        integral, _ = scipy.integrate.quad_vec(integrand, 0.0, t, epsabs=1e-13, epsrel=1e-12)
        decay = scipy.linalg.expm(-x * t)
        expected = decay @ c0 @ decay.conj().T + integral
        closed = closed_form_correlator(reference_spectrum(X), Y, c0, t).entries
        self.assertLessEqual(float(np.max(np.abs(closed - expected))), 1e-10)

    def test_invalid_arguments(self):
        """Test bad steps, strides and initial states."""
        with self.assertRaises(ParameterError):
            propagate_correlator(self.X, self.Y, np.zeros((8, 8)), t_final=1.0, dt=-0.1)
        with self.assertRaises(ParameterError):
            propagate_correlator(self.X, self.Y, np.zeros((8, 8)), t_final=1.0, stride=0)
        with self.assertRaises(ParameterError):
            propagate_correlator(self.X, self.Y, np.triu(np.ones((8, 8))), t_final=1.0)


if __name__ == '__main__':
    unittest.main()
