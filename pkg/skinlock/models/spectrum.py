"""
Spectral models for SkinLock.

Mode and site indices in the public methods are 1-based.
"""

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from ..errors import NormalizationError, ParameterError, SiteIndexError

BIORTHOGONAL = "biorthogonal"
EUCLIDEAN = "euclidean"
NORMALIZATIONS = (BIORTHOGONAL, EUCLIDEAN)

UNIT_NORM_TOL = 1e-12


def phase_gauge(vector: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the largest-magnitude entry is real positive."""
    vector = np.asarray(vector, dtype=complex)
    pivot = vector[int(np.argmax(np.abs(vector)))]
    if pivot == 0:
        return vector.copy()
    return vector * (abs(pivot) / pivot)


def gauge_columns(right: np.ndarray, left: Optional[np.ndarray] = None):
    """
    Phase-gauge each column of ``right``; apply the same phase to ``left``.

    A common unit-modulus factor on |R_n> and |L_n> leaves <L_n|R_n>
    unchanged, so biorthogonality survives the gauge.
    """
    right = np.array(right, dtype=complex)
    left = None if left is None else np.array(left, dtype=complex)
    for n in range(right.shape[1]):
        column = right[:, n]
        pivot = column[int(np.argmax(np.abs(column)))]
        if pivot == 0:
            continue
        phase = abs(pivot) / pivot
        right[:, n] = column * phase
        if left is not None:
            left[:, n] = left[:, n] * phase
    return right, left


@dataclass(frozen=True, eq=False)
class ModeVector:
    """
    A single right or left mode.

    Attributes:
        amplitudes: Complex site amplitudes
        normalization: 'biorthogonal' or 'euclidean'
    """
    amplitudes: np.ndarray
    normalization: str = BIORTHOGONAL

    def __post_init__(self):
        amplitudes = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if self.normalization not in NORMALIZATIONS:
            raise ParameterError(f"unknown normalization {self.normalization!r}")
        if self.normalization == EUCLIDEAN:
            norm = float(np.linalg.norm(amplitudes))
            if abs(norm - 1.0) > UNIT_NORM_TOL:
                raise NormalizationError(f"euclidean mode has norm {norm!r}")
        amplitudes.setflags(write=False)
        object.__setattr__(self, "amplitudes", amplitudes)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    @property
    def weights(self) -> np.ndarray:
        """|amplitude|^2 per site."""
        return np.abs(self.amplitudes) ** 2

    def normalized(self) -> 'ModeVector':
        """Unit Euclidean norm, largest entry real positive."""
        norm = self.norm
        if not np.isfinite(norm) or norm == 0.0:
            raise NormalizationError("cannot normalize a zero or non-finite vector")
        return ModeVector(phase_gauge(self.amplitudes / norm), EUCLIDEAN)

    def to_dict(self) -> dict:
        return {
            'normalization': self.normalization,
            're': self.amplitudes.real.tolist(),
            'im': self.amplitudes.imag.tolist(),
        }

    def __repr__(self) -> str:
        return f"ModeVector(dim={self.dim}, normalization={self.normalization!r})"


@dataclass(frozen=True, eq=False)
class BiorthogonalSpectrum:
    """
    Relaxation rates beta_n with paired right and left eigenvectors.

    Columns of ``right`` and ``left`` are |R_n> and |L_n>, normalized so
    that <L_m|R_n> = delta_mn unless ``normalization`` is 'euclidean'
    (normalized-envelope mode, where each column has unit norm instead).

    Attributes:
        betas: Complex relaxation rates, ascending real part then imaginary part
        right: Right eigenvectors as columns
        left: Left eigenvectors as columns
        condition_estimate: 2-norm condition number of the right matrix
        normalization: 'biorthogonal' or 'euclidean'
        method: How the spectrum was obtained ('numeric', 'similarity', 'analytic')
        labels: Site labels of the underlying chain
    """
    betas: np.ndarray
    right: np.ndarray
    left: np.ndarray
    condition_estimate: float = 1.0
    normalization: str = BIORTHOGONAL
    method: str = "numeric"
    labels: Tuple[str, ...] = field(default=())

    def __post_init__(self):
        betas = np.array(self.betas, dtype=complex).reshape(-1)
        right = np.array(self.right, dtype=complex)
        left = np.array(self.left, dtype=complex)
        dim = betas.shape[0]
        if right.shape != (dim, dim) or left.shape != (dim, dim):
            raise ParameterError(f"spectrum of {dim} modes with right {right.shape} / left {left.shape}")
        if self.normalization not in NORMALIZATIONS:
            raise ParameterError(f"unknown normalization {self.normalization!r}")
        for array in (betas, right, left):
            array.setflags(write=False)
        object.__setattr__(self, "betas", betas)
        object.__setattr__(self, "right", right)
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "labels", tuple(self.labels) or tuple(str(j) for j in range(1, dim + 1)))

    @property
    def dim(self) -> int:
        return self.betas.shape[0]

    @property
    def is_biorthogonal(self) -> bool:
        return self.normalization == BIORTHOGONAL

    def _column(self, n: int) -> int:
        if not 1 <= n <= self.dim:
            raise SiteIndexError(f"mode index {n} outside 1..{self.dim}")
        return n - 1

    def beta(self, n: int) -> complex:
        return complex(self.betas[self._column(n)])

    def right_mode(self, n: int) -> ModeVector:
        return ModeVector(self.right[:, self._column(n)], self.normalization)

    def right_hat(self, n: int) -> ModeVector:
        """Euclidean-normalized right mode."""
        return self.right_mode(n).normalized()

    def biorthogonality_error(self) -> float:
        """max |<L_m|R_n> - delta_mn|."""
        gram = self.left.conj().T @ self.right
        return float(np.max(np.abs(gram - np.eye(self.dim))))

    def completeness_error(self) -> float:
        """max |sum_n |R_n><L_n| - I|."""
        return float(np.max(np.abs(self.right @ self.left.conj().T - np.eye(self.dim))))

    def reconstruct(self) -> np.ndarray:
        """X = sum_n beta_n |R_n><L_n|."""
        if not self.is_biorthogonal:
            raise NormalizationError("reconstruction needs a biorthogonal spectrum")
        return (self.right * self.betas) @ self.left.conj().T

    def to_dict(self) -> dict:
        return {
            'dim': self.dim,
            'labels': list(self.labels),
            'method': self.method,
            'normalization': self.normalization,
            'condition_estimate': self.condition_estimate,
            'betas': {'re': self.betas.real.tolist(), 'im': self.betas.imag.tolist()},
            'right': {'dim': self.dim, 'labels': list(self.labels),
                      're': self.right.real.tolist(), 'im': self.right.imag.tolist()},
            'left': {'dim': self.dim, 'labels': list(self.labels),
                     're': self.left.real.tolist(), 'im': self.left.imag.tolist()},
        }

    def __repr__(self) -> str:
        return (f"BiorthogonalSpectrum(dim={self.dim}, method={self.method!r}, "
                f"slowest={self.betas[0]:.6g}, cond={self.condition_estimate:.3g})")
