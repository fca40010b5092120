"""
Natural orbitals and mode-locking diagnostics for SkinLock.

Natural orbitals are the eigenvectors of the steady correlator; the
locking diagnostics compare the dominant orbital phi_max with
Euclidean-normalized right modes of X through O_n = |<R_hat_n|phi_max>|^2.
"""

import logging
from typing import Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg

from ..errors import DecompositionError, NormalizationError, SiteIndexError, StabilityError
from ..models import (
    BiorthogonalSpectrum, DiagnosticsReport, EdgeCandidate, LoadingFactors, ModeVector,
    NaturalOrbitalSet, SteadyCorrelator, cell_of, gauge_columns,
)

logger = logging.getLogger(__name__)

UNIT_NORM_TOL = 1e-10
TIE_TOL = 1e-10
DEFAULT_EDGE_WINDOW = 0.1

MatrixLike = Union[SteadyCorrelator, np.ndarray]


def _entries(C: MatrixLike) -> np.ndarray:
    if isinstance(C, SteadyCorrelator):
        return C.entries
    array = np.asarray(C, dtype=complex)
    return 0.5 * (array + array.conj().T)


# ==================== Orbitals and densities ====================

def natural_orbitals(C: MatrixLike) -> NaturalOrbitalSet:
    """
    Hermitian eigendecomposition of a correlator.

    Returns:
        Occupations in descending order with phase-gauged orbitals

    Raises:
        DecompositionError: eigensolver failure
    """
    try:
        occupations, orbitals = scipy.linalg.eigh(_entries(C))
    except (scipy.linalg.LinAlgError, ValueError) as e:
        raise DecompositionError(f"natural-orbital eigensolve failed: {e}") from e
    orbitals, _ = gauge_columns(orbitals[:, ::-1])
    return NaturalOrbitalSet(occupations[::-1].copy(), orbitals)


def density(C: MatrixLike) -> np.ndarray:
    """n_j = Re C_jj."""
    return np.real(np.diagonal(_entries(C))).copy()


def normalized_density(C: MatrixLike) -> np.ndarray:
    """
    n_j / sum_l n_l.

    Raises:
        NormalizationError: total density is not positive
    """
    n = density(C)
    total = float(np.sum(n))
    if not total > 0.0:
        raise NormalizationError(f"total density {total!r} cannot be normalized")
    return n / total


def normalized_occupations(orbitals: NaturalOrbitalSet) -> np.ndarray:
    """nu_alpha / nu_max."""
    if not orbitals.nu_max > 0.0:
        raise NormalizationError(f"leading occupation {orbitals.nu_max!r} cannot be normalized")
    return orbitals.occupations / orbitals.nu_max


def dominant_ties(orbitals: NaturalOrbitalSet, tol: float = TIE_TOL) -> Tuple[int, ...]:
    """1-based orbital indices whose occupation is within tol of nu_max."""
    threshold = tol * max(1.0, abs(orbitals.nu_max))
    tied = np.flatnonzero(orbitals.nu_max - orbitals.occupations <= threshold)
    return tuple(int(i) + 1 for i in tied)


# ==================== Mode diagnostics ====================

def loading_factors(spec: BiorthogonalSpectrum, s: int, strength: float) -> LoadingFactors:
    """
    A_n(s) = Gamma |L_n(s)|^2 / (2 Re beta_n) for every mode.

    Raises:
        SiteIndexError: s outside 1..dim
        StabilityError: some Re beta_n <= 0
    """
    if not 1 <= s <= spec.dim:
        raise SiteIndexError(f"pump site {s} outside 1..{spec.dim}")
    rates = spec.betas.real
    if np.any(rates <= 0):
        raise StabilityError(f"loading factors need Re beta > 0, slowest is {np.min(rates):.6g}")
    values = strength * np.abs(spec.left[s - 1, :]) ** 2 / (2.0 * rates)
    return LoadingFactors(values, s, strength)


def overlap(mode: Union[ModeVector, np.ndarray], orb: np.ndarray) -> float:
    """
    |<mode|orb>|^2 for two unit vectors.

    Raises:
        NormalizationError: either input is not unit-normalized
    """
    a = mode.amplitudes if isinstance(mode, ModeVector) else np.asarray(mode, dtype=complex)
    b = np.asarray(orb, dtype=complex)
    for name, vector in (("mode", a), ("orbital", b)):
        norm = float(np.linalg.norm(vector))
        if abs(norm - 1.0) > UNIT_NORM_TOL:
            raise NormalizationError(f"{name} has norm {norm!r}, expected 1")
    return float(abs(np.vdot(a, b)) ** 2)


def identify_slow_mode(spec: BiorthogonalSpectrum) -> int:
    """1-based index of min Re beta; ties by min Im beta, then lowest index."""
    order = np.lexsort((np.arange(spec.dim), spec.betas.imag, spec.betas.real))
    return int(order[0]) + 1


def boundary_cells(labels: Sequence[str]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """0-based sites of the first and last unit cell, read from label prefixes."""
    cells = [cell_of(label) for label in labels]
    first = tuple(i for i, c in enumerate(cells) if c == cells[0])
    last = tuple(i for i, c in enumerate(cells) if c == cells[-1])
    return first, last


def boundary_weight(mode: ModeVector, labels: Sequence[str]) -> float:
    """max(first-cell weight, last-cell weight) of a unit mode."""
    weights = mode.weights
    first, last = boundary_cells(labels)
    return float(max(np.sum(weights[list(first)]), np.sum(weights[list(last)])))


def identify_edge_candidate(spec: BiorthogonalSpectrum, kappa: float,
                            window_fraction: float = DEFAULT_EDGE_WINDOW) -> EdgeCandidate:
    """
    Mode with rate near kappa and the largest boundary weight.

    Modes with |beta_n - kappa| <= window_fraction * spectral range compete on
    boundary weight; an empty window falls back to argmin |beta_n - kappa|.
    """
    distances = np.abs(spec.betas - kappa)
    spread = float(np.max(np.abs(spec.betas[:, None] - spec.betas[None, :])))
    window = window_fraction * spread
    inside = np.flatnonzero(distances <= window)

    if inside.size:
        weights = [boundary_weight(spec.right_hat(int(n) + 1), spec.labels) for n in inside]
        best = int(inside[int(np.argmax(weights))])
        weight = float(max(weights))
    else:
        best = int(np.argmin(distances))
        weight = boundary_weight(spec.right_hat(best + 1), spec.labels)
        logger.debug("edge window of half-width %.3g around kappa=%g is empty", window, kappa)
    return EdgeCandidate(best + 1, window, int(inside.size), weight)


def diagnose(C: SteadyCorrelator, spec: BiorthogonalSpectrum, kappa: Optional[float] = None,
             site: Optional[int] = None, strength: Optional[float] = None,
             window_fraction: float = DEFAULT_EDGE_WINDOW) -> DiagnosticsReport:
    """
    Full locking diagnostics of one steady correlator.

    Args:
        C: Steady correlator
        spec: Spectrum of the relaxation matrix that produced C
        kappa: Damping shift; enables the edge-candidate overlap
        site: 1-based local pump site; enables loading factors
        strength: Pump strength for the loading factors
        window_fraction: Edge-candidate window
    """
    orbitals = natural_orbitals(C)
    phi_max = orbitals.phi_max
    ties = dominant_ties(orbitals)
    if len(ties) > 1:
        logger.warning("dominant occupation is shared by orbitals %s; point marked unlocked", ties)

    slow = identify_slow_mode(spec)
    overlaps = {'slow': overlap(spec.right_hat(slow), phi_max)}
    mode_indices = {'slow': slow}
    if kappa is not None:
        edge = identify_edge_candidate(spec, kappa, window_fraction)
        overlaps['edge'] = overlap(spec.right_hat(edge.index), phi_max)
        mode_indices['edge'] = edge.index

    loadings = None
    if site is not None and strength is not None:
        loadings = loading_factors(spec, site, strength).values

    return DiagnosticsReport(
        density=density(C),
        normalized_density=normalized_density(C),
        occupation_spectrum_normalized=normalized_occupations(orbitals),
        overlaps=overlaps,
        loadings=loadings,
        mode_indices=mode_indices,
        locked=len(ties) == 1,
        tie_indices=ties,
    )
