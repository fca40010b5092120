"""
SkinLock Services

This module contains the calculation layer: lattice builders, spectra,
steady states, diagnostics, scans, inverse design and the master-equation
oracle.
"""

from .lattice_models import (
    build_hatano_nelson, build_ssh, ssh_index, ssh_labels, build_local_pump, build_diagonal_pump,
    build_custom, resolve_site,
)
from .spectral import (
    biorthogonal_decompose, similarity_spectrum, reference_spectrum, hn_analytic_spectrum,
    hn_similarity_residual, ssh_edge_envelopes, euclidean_normalize, relaxation_rates,
    check_stability, spectral_gap_ratio,
)
from .steady_state import (
    solve_lyapunov_direct, solve_lyapunov_spectral, solve_steady_state, single_mode_approximation,
    single_mode_agreement, propagate_correlator, closed_form_correlator, hn_kernel_correlator,
    solver_agreement_curve, balanced_residual,
)
from .orbitals import (
    natural_orbitals, density, normalized_density, loading_factors, overlap, identify_slow_mode,
    identify_edge_candidate, diagnose,
)
from .scans import (
    hn_source_scan, source_scan_deviation, source_scan_peaks, ssh_crossover_scan, count_sign_changes,
)
from .inverse_design import (
    inverse_design, hn_jump_decomposition, ssh_jump_decomposition, realize_hn, realize_ssh,
    check_jump_set, validate_jump_set,
)
from .lindblad_oracle import (
    build_fock_operators, evolve_master, correlator_of, steady_state_oracle, eom_residual, oracle_check,
)
from .pipeline import Pipeline

__all__ = [
    'build_hatano_nelson', 'build_ssh', 'ssh_index', 'ssh_labels', 'build_local_pump',
    'build_diagonal_pump', 'build_custom', 'resolve_site',
    'biorthogonal_decompose', 'similarity_spectrum', 'reference_spectrum', 'hn_analytic_spectrum',
    'hn_similarity_residual', 'ssh_edge_envelopes', 'euclidean_normalize', 'relaxation_rates',
    'check_stability', 'spectral_gap_ratio',
    'solve_lyapunov_direct', 'solve_lyapunov_spectral', 'solve_steady_state',
    'single_mode_approximation', 'single_mode_agreement', 'propagate_correlator',
    'closed_form_correlator', 'hn_kernel_correlator', 'solver_agreement_curve', 'balanced_residual',
    'natural_orbitals', 'density', 'normalized_density', 'loading_factors', 'overlap',
    'identify_slow_mode', 'identify_edge_candidate', 'diagnose',
    'hn_source_scan', 'source_scan_deviation', 'source_scan_peaks', 'ssh_crossover_scan',
    'count_sign_changes',
    'inverse_design', 'hn_jump_decomposition', 'ssh_jump_decomposition', 'realize_hn', 'realize_ssh',
    'check_jump_set', 'validate_jump_set',
    'build_fock_operators', 'evolve_master', 'correlator_of', 'steady_state_oracle', 'eom_residual',
    'oracle_check',
    'Pipeline',
]
