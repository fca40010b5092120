"""
Natural-orbital and diagnostics models for SkinLock.
"""

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np


@dataclass(frozen=True, eq=False)
class NaturalOrbitalSet:
    """
    Eigen-decomposition of a correlator.

    Attributes:
        occupations: Eigenvalues nu_alpha, descending
        orbitals: Orthonormal eigenvectors as columns, phase-gauged
    """
    occupations: np.ndarray
    orbitals: np.ndarray

    @property
    def dim(self) -> int:
        return self.occupations.shape[0]

    @property
    def nu_max(self) -> float:
        return float(self.occupations[0])

    @property
    def phi_max(self) -> np.ndarray:
        """Dominant natural orbital."""
        return self.orbitals[:, 0]

    def orthonormality_error(self) -> float:
        gram = self.orbitals.conj().T @ self.orbitals
        return float(np.max(np.abs(gram - np.eye(self.dim))))

    def reconstructed_density(self) -> np.ndarray:
        """sum_alpha nu_alpha |phi_alpha(j)|^2."""
        return (np.abs(self.orbitals) ** 2) @ self.occupations

    def __repr__(self) -> str:
        return f"NaturalOrbitalSet(dim={self.dim}, nu_max={self.nu_max:.6g})"


@dataclass(frozen=True, eq=False)
class LoadingFactors:
    """
    Mode-resolved source loadings A_n(s) = Gamma |L_n(s)|^2 / (2 Re beta_n).

    Attributes:
        values: A_n for every mode, in spectrum order
        site: 1-based pump site
        strength: Pump strength Gamma
    """
    values: np.ndarray
    site: int
    strength: float

    @property
    def normalized(self) -> np.ndarray:
        """A_n / max_m A_m."""
        peak = float(np.max(self.values))
        if peak <= 0.0:
            return np.zeros_like(self.values)
        return self.values / peak

    def subleading_sum(self, leading: int) -> float:
        """Sum of normalized loadings over every mode except the 1-based ``leading``."""
        normalized = self.normalized
        return float(np.sum(normalized) - normalized[leading - 1])


@dataclass(frozen=True)
class EdgeCandidate:
    """
    Result of the edge-candidate search.

    Attributes:
        index: 1-based mode index
        window: Half-width of the rate window around kappa
        window_occupancy: Number of modes inside the window
        boundary_weight: Largest first/last unit-cell weight of the candidate
    """
    index: int
    window: float
    window_occupancy: int
    boundary_weight: float

    @property
    def used_window(self) -> bool:
        return self.window_occupancy > 0


@dataclass
class DiagnosticsReport:
    """
    Locking diagnostics of one steady correlator.

    Attributes:
        density: n_j
        normalized_density: n_j / sum_l n_l
        occupation_spectrum_normalized: nu_alpha / nu_max
        overlaps: Mode label -> |<R_hat|phi_max>|^2
        loadings: A_n(s), when a local pump site is known
        mode_indices: Mode label -> 1-based mode index
        locked: False when the dominant occupation is tied
        tie_indices: 1-based orbital indices sharing the top occupation
    """
    density: np.ndarray
    normalized_density: np.ndarray
    occupation_spectrum_normalized: np.ndarray
    overlaps: Dict[str, float] = field(default_factory=dict)
    loadings: Optional[np.ndarray] = None
    mode_indices: Dict[str, int] = field(default_factory=dict)
    locked: bool = True
    tie_indices: Tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {
            'density': self.density.tolist(),
            'normalized_density': self.normalized_density.tolist(),
            'occupation_spectrum_normalized': self.occupation_spectrum_normalized.tolist(),
            'overlaps': dict(self.overlaps),
            'loadings': None if self.loadings is None else self.loadings.tolist(),
            'mode_indices': dict(self.mode_indices),
            'locked': self.locked,
            'tie_indices': list(self.tie_indices),
        }
