"""
Spectral service for SkinLock.

Biorthogonal eigendecomposition of relaxation matrices, the closed-form
Hatano-Nelson spectrum, the diagonal-similarity reference spectrum of
symmetrizable tridiagonal chains, and SSH edge envelopes.

Skin-effect matrices are exponentially non-normal: a numeric eigensolve
of a 40-site Hatano-Nelson chain has an eigenvector condition number far
beyond 1e12. Whenever X is a real tridiagonal matrix whose off-diagonal
pairs have positive products, similarity_spectrum maps it onto a real
symmetric reference chain, diagonalizes that with a Hermitian solver and
assembles |R_n> = S|phi_n>, |L_n> = S^-1|phi_n> in the log domain. That
route is exact up to the Hermitian eigensolver and is what scans use.

Usage:
    spec = biorthogonal_decompose(X)          # generic, numeric
    spec = similarity_spectrum(X)             # tridiagonal, symmetrizable
    spec = hn_analytic_spectrum(params)       # closed form
"""

import logging
import math
from typing import Tuple, Union

import numpy as np
import scipy.linalg

from ..errors import (
    DecompositionError, DegeneracyError, EnvelopeOverflowError, ParameterError, RegimeError,
    StabilityError,
)
from ..models import (
    BIORTHOGONAL, EUCLIDEAN, BiorthogonalSpectrum, HatanoNelsonParams, ModeVector,
    RelaxationMatrix, SshParams, gauge_columns,
)
from .lattice_models import build_hatano_nelson

logger = logging.getLogger(__name__)

GAP_TOL = 1e-10
DEGENERACY_CONDITION = 1e12
TRUST_CONDITION = 1e12
MODE_RESIDUAL_TOL = 1e-8
LOG_MAX = math.log(np.finfo(float).max)
SIMILARITY_GUARD = 600.0


# ==================== Numeric decomposition ====================

def biorthogonal_decompose(X: RelaxationMatrix, gap_tol: float = GAP_TOL,
                           degeneracy_condition: float = DEGENERACY_CONDITION) -> BiorthogonalSpectrum:
    """
    Numeric biorthogonal eigendecomposition.

    Left vectors are the conjugated rows of the inverse right-eigenvector
    matrix, so <L_m|R_n> = delta_mn up to the error of one matrix inversion.

    Args:
        X: Relaxation matrix
        gap_tol: Relative eigenvalue gap below which a pair counts as coalescing
        degeneracy_condition: Condition number above which a coalescing pair is rejected

    Returns:
        Spectrum sorted by ascending real part, ties by ascending imaginary part

    Raises:
        DegeneracyError: X is numerically defective
        DecompositionError: eigensolve failed or right vectors are singular
    """
    a = X.as_array()
    try:
        betas, right = scipy.linalg.eig(a)
    except (scipy.linalg.LinAlgError, ValueError) as e:
        raise DecompositionError(f"eigensolve failed: {e}") from e
    if not (np.all(np.isfinite(betas)) and np.all(np.isfinite(right))):
        raise DecompositionError("eigensolve returned non-finite values")

    order = np.lexsort((betas.imag, betas.real))
    betas, right = betas[order], right[:, order]
    dim = betas.shape[0]

    with np.errstate(divide='ignore', over='ignore', invalid='ignore'):
        condition = float(np.linalg.cond(right))
    if not np.isfinite(condition):
        condition = math.inf

    if dim > 1:
        distances = np.abs(betas[:, None] - betas[None, :])
        spread = max(float(np.max(distances)), float(np.max(np.abs(betas))))
        np.fill_diagonal(distances, np.inf)
        m, n = np.unravel_index(int(np.argmin(distances)), distances.shape)
        if distances[m, n] < gap_tol * spread and condition > degeneracy_condition:
            pair = (int(min(m, n)) + 1, int(max(m, n)) + 1)
            raise DegeneracyError(
                f"modes {pair[0]} and {pair[1]} coalesce (gap {distances[m, n]:.3e}, "
                f"eigenvector condition {condition:.3e})", pair)

    try:
        left = scipy.linalg.inv(right).conj().T
    except (scipy.linalg.LinAlgError, ValueError) as e:
        raise DecompositionError(f"right eigenvector matrix is singular: {e}") from e
    if not np.all(np.isfinite(left)):
        raise DecompositionError("right eigenvector matrix is singular")

    right, left = gauge_columns(right, left)
    spectrum = BiorthogonalSpectrum(betas, right, left, condition, BIORTHOGONAL, "numeric", X.labels)
    _log_health(a, spectrum)
    return spectrum


def _log_health(a: np.ndarray, spectrum: BiorthogonalSpectrum) -> None:
    eps = np.finfo(float).eps
    bound = 1e-8 * max(1.0, spectrum.condition_estimate * eps * spectrum.dim)
    error = spectrum.biorthogonality_error()
    if error > bound:
        logger.warning("biorthogonality error %.3e exceeds %.3e", error, bound)
    completeness = spectrum.completeness_error()
    if completeness > bound:
        logger.warning("completeness error %.3e exceeds %.3e", completeness, bound)
    residual = mode_residual(a, spectrum)
    if residual > MODE_RESIDUAL_TOL:
        logger.warning("eigenpair residual %.3e exceeds %.1e", residual, MODE_RESIDUAL_TOL)
    if spectrum.condition_estimate > TRUST_CONDITION:
        logger.warning("eigenvector condition %.3e: numeric spectrum not trusted, "
                       "use the similarity or analytic route", spectrum.condition_estimate)


def mode_residual(a: np.ndarray, spectrum: BiorthogonalSpectrum) -> float:
    """max_n |X R_n - beta_n R_n| / (|X| |R_n|)."""
    right = spectrum.right
    scale = np.linalg.norm(a, 2) * np.linalg.norm(right, axis=0)
    scale[scale == 0] = 1.0
    residual = np.linalg.norm(a @ right - right * spectrum.betas, axis=0) / scale
    return float(np.max(residual))


# ==================== Similarity reference ====================

def _tridiagonal_parts(X: RelaxationMatrix):
    if not X.is_real:
        return None
    a = X.entries.real
    if X.dim > 2 and (np.any(np.triu(a, 2)) or np.any(np.tril(a, -2))):
        return None
    lower, upper = np.diag(a, -1), np.diag(a, 1)
    if np.any(lower * upper < 0) or np.any((lower == 0) != (upper == 0)):
        return None
    return a.diagonal().copy(), lower, upper


def _log_scale(lower: np.ndarray, upper: np.ndarray) -> np.ndarray:
    dim = lower.shape[0] + 1
    if dim == 1:
        return np.zeros(1)
    coupled = lower != 0
    log_steps = np.zeros(dim - 1)
    log_steps[coupled] = 0.5 * (np.log(np.abs(lower[coupled])) - np.log(np.abs(upper[coupled])))
    return np.concatenate(([0.0], np.cumsum(log_steps))) + log_steps[0]


def similarity_scale(X: RelaxationMatrix):
    """log S_j of the symmetrizing diagonal similarity, or None when X has none."""
    parts = _tridiagonal_parts(X)
    if parts is None:
        return None
    return _log_scale(parts[1], parts[2])


def is_symmetrizable(X: RelaxationMatrix) -> bool:
    """True for real tridiagonal X with positive off-diagonal products (or zero pairs)."""
    return _tridiagonal_parts(X) is not None


def similarity_spectrum(X: RelaxationMatrix) -> BiorthogonalSpectrum:
    """
    Exact spectrum of a symmetrizable tridiagonal X.

    A diagonal S with S_{j+1}/S_j = sqrt(X[j+1,j] / X[j,j+1]) makes
    S^-1 X S real symmetric. The returned modes are S phi_n and S^-1 phi_n;
    S_1 equals the first step ratio S_2/S_1, which reproduces S = diag(r^j) for the
    Hatano-Nelson chain.

    Raises:
        DecompositionError: X is not symmetrizable
        EnvelopeOverflowError: S phi_n or S^-1 phi_n overflows
    """
    parts = _tridiagonal_parts(X)
    if parts is None:
        raise DecompositionError("relaxation matrix is not a symmetrizable real tridiagonal matrix")
    diagonal, lower, upper = parts
    dim = X.dim

    if dim == 1:
        return BiorthogonalSpectrum(diagonal.astype(complex), np.ones((1, 1)), np.ones((1, 1)),
                                    1.0, BIORTHOGONAL, "similarity", X.labels)

    log_scale = _log_scale(lower, upper)
    reference_offdiagonal = np.sign(lower) * np.sqrt(lower * upper)

    try:
        rates, phi = scipy.linalg.eigh_tridiagonal(diagonal, reference_offdiagonal)
    except (scipy.linalg.LinAlgError, ValueError) as e:
        raise DecompositionError(f"reference eigensolve failed: {e}") from e

    right, left = _assemble_envelopes(phi, log_scale)
    right, left = gauge_columns(right, left)
    return BiorthogonalSpectrum(rates.astype(complex), right, left, _condition(right),
                                BIORTHOGONAL, "similarity", X.labels)


def _assemble_envelopes(phi: np.ndarray, log_scale: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """S phi and S^-1 phi built from log|amplitude| and sign, exponentiated once."""
    with np.errstate(divide='ignore'):
        log_phi = np.log(np.abs(phi))
    sign = np.sign(phi)
    log_right = log_scale[:, None] + log_phi
    log_left = -log_scale[:, None] + log_phi
    peak = max(np.max(log_right), np.max(log_left))
    if peak > LOG_MAX:
        raise EnvelopeOverflowError(
            f"skin envelope reaches exp({peak:.1f}), beyond double precision; "
            f"use the normalized-envelope mode")
    return sign * np.exp(log_right), sign * np.exp(log_left)


def _condition(right: np.ndarray) -> float:
    with np.errstate(divide='ignore', over='ignore', invalid='ignore'):
        condition = float(np.linalg.cond(right))
    return condition if np.isfinite(condition) else math.inf


def reference_spectrum(X: RelaxationMatrix) -> BiorthogonalSpectrum:
    """Similarity spectrum when X allows it, numeric decomposition otherwise."""
    if is_symmetrizable(X):
        return similarity_spectrum(X)
    return biorthogonal_decompose(X)


# ==================== Stability ====================

def relaxation_rates(X: RelaxationMatrix) -> np.ndarray:
    """
    Eigenvalues of X computed as robustly as its structure allows.

    Symmetrizable chains use the symmetric reference chain; other matrices
    are balanced before the eigensolve. The pseudospectrum of a long skin
    chain reaches far beyond its spectrum, so an unbalanced eigensolve can
    place rates on the wrong side of the imaginary axis.
    """
    parts = _tridiagonal_parts(X)
    if parts is not None:
        diagonal, lower, upper = parts
        if X.dim == 1:
            return diagonal.astype(complex)
        offdiagonal = np.sign(lower) * np.sqrt(lower * upper)
        return scipy.linalg.eigvalsh_tridiagonal(diagonal, offdiagonal).astype(complex)
    balanced, _ = scipy.linalg.matrix_balance(X.as_array())
    rates = scipy.linalg.eigvals(balanced)
    return rates[np.lexsort((rates.imag, rates.real))]


def check_stability(X: RelaxationMatrix) -> np.ndarray:
    """
    Return the relaxation rates of X, raising unless all have positive real part.

    Raises:
        StabilityError: some Re beta <= 0
    """
    rates = relaxation_rates(X)
    slowest = rates[int(np.argmin(rates.real))]
    if not slowest.real > 0:
        raise StabilityError(f"relaxation matrix is unstable: slowest rate {slowest:.6g} "
                             f"has non-positive real part")
    return rates


def spectral_gap_ratio(spec: BiorthogonalSpectrum) -> float:
    """(Re beta_second - Re beta_slow) / Re beta_slow; inf for a single mode."""
    real = np.sort(spec.betas.real)
    if real[0] <= 0:
        raise StabilityError(f"slowest rate {real[0]:.6g} is not positive")
    if real.shape[0] < 2:
        return math.inf
    return float((real[1] - real[0]) / real[0])


# ==================== Hatano-Nelson closed form ====================

def hn_analytic_spectrum(params: HatanoNelsonParams, envelope: str = BIORTHOGONAL) -> BiorthogonalSpectrum:
    """
    Closed-form Hatano-Nelson spectrum.

    beta_n = kappa - 2 sqrt(t_R t_L) cos(n pi/(N+1)), R_n(j) = r^j phi_n(j),
    L_n(j) = r^-j phi_n(j) with phi_n(j) = sqrt(2/(N+1)) sin(n pi j/(N+1)).

    Args:
        params: Chain parameters
        envelope: 'biorthogonal' for the exact r^{+-j} envelopes, 'euclidean'
            for unit-norm right and left modes (normalized-envelope mode,
            representable for any N log r)

    Raises:
        EnvelopeOverflowError: biorthogonal envelopes not representable
        ParameterError: unknown envelope convention
    """
    params.validate()
    n = params.n_sites
    sites = np.arange(1, n + 1)
    modes = np.arange(1, n + 1)
    betas = params.kappa - 2.0 * params.coupling * np.cos(modes * np.pi / (n + 1))
    phi = math.sqrt(2.0 / (n + 1)) * np.sin(np.outer(sites, modes) * np.pi / (n + 1))
    log_scale = sites * math.log(params.envelope_ratio)

    if envelope == BIORTHOGONAL:
        right, left = _assemble_envelopes(phi, log_scale)
        right, left = gauge_columns(right, left)
        return BiorthogonalSpectrum(betas.astype(complex), right, left, _condition(right),
                                    BIORTHOGONAL, "analytic")
    if envelope == EUCLIDEAN:
        right, _ = gauge_columns(_normalized_envelopes(phi, log_scale))
        left, _ = gauge_columns(_normalized_envelopes(phi, -log_scale))
        return BiorthogonalSpectrum(betas.astype(complex), right, left, math.inf,
                                    EUCLIDEAN, "analytic")
    raise ParameterError(f"envelope must be {BIORTHOGONAL!r} or {EUCLIDEAN!r}")


def _normalized_envelopes(phi: np.ndarray, log_scale: np.ndarray) -> np.ndarray:
    with np.errstate(divide='ignore'):
        log_amplitude = log_scale[:, None] + np.log(np.abs(phi))
    log_amplitude -= np.max(log_amplitude, axis=0, keepdims=True)
    columns = np.sign(phi) * np.exp(log_amplitude)
    return columns / np.linalg.norm(columns, axis=0, keepdims=True)


def hn_similarity_residual(params: HatanoNelsonParams) -> float:
    """
    max |S^-1 X S - (S^-1 X S)^dagger| with S = diag(r^j).

    Raises:
        EnvelopeOverflowError: N |log r| >= 600
    """
    X = build_hatano_nelson(params)
    log_r = math.log(params.envelope_ratio)
    if params.n_sites * abs(log_r) >= SIMILARITY_GUARD:
        raise EnvelopeOverflowError(f"N |log r| = {params.n_sites * abs(log_r):.1f} exceeds {SIMILARITY_GUARD}")
    scale = np.exp(np.arange(1, params.n_sites + 1) * log_r)
    similar = X.entries / scale[:, None] * scale[None, :]
    return float(np.max(np.abs(similar - similar.conj().T)))


# ==================== SSH edge envelopes ====================

def ssh_edge_envelopes(params: SshParams) -> Tuple[ModeVector, ModeVector]:
    """
    Right and left edge envelopes of the nonreciprocal SSH chain.

    A-sublattice amplitudes follow (-t1 e^g / (t2 e^-g))^(n-1) on the
    right and (-t1 e^-g / (t2 e^g))^(n-1) on the left; B amplitudes vanish.

    Raises:
        RegimeError: t1 >= t2
    """
    params.validate()
    if not params.is_topological:
        raise RegimeError(f"edge envelopes need t1 < t2, got t1={params.t1}, t2={params.t2}")
    base = math.log(params.t1 / params.t2)
    return (_edge_vector(params.n_cells, base + 2.0 * params.g),
            _edge_vector(params.n_cells, base - 2.0 * params.g))


def _edge_vector(n_cells: int, log_ratio: float) -> ModeVector:
    k = np.arange(n_cells)
    log_amplitude = k * log_ratio
    log_amplitude -= np.max(log_amplitude)
    vector = np.zeros(2 * n_cells)
    vector[0::2] = (-1.0) ** k * np.exp(log_amplitude)
    return ModeVector(vector).normalized()


def euclidean_normalize(v: Union[ModeVector, np.ndarray]) -> ModeVector:
    """
    Unit Euclidean norm with the largest-magnitude entry made real positive.

    Raises:
        NormalizationError: v is zero
    """
    if not isinstance(v, ModeVector):
        v = ModeVector(v)
    return v.normalized()
