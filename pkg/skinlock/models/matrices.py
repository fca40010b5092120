"""
Matrix models for SkinLock.

A RelaxationMatrix X drives the correlator dynamics; a SourceMatrix Y is
the pump (Gram matrix of the gain jumps).
"""

from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from ..errors import ParameterError

HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-12


def _frozen_complex(entries) -> np.ndarray:
    array = np.array(entries, dtype=complex)
    array.setflags(write=False)
    return array


def _default_labels(dim: int) -> Tuple[str, ...]:
    return tuple(str(j) for j in range(1, dim + 1))


def cell_of(label: str) -> str:
    """Unit-cell part of a site label: "3A" -> "3", "7" -> "7"."""
    return label.rstrip("ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz") or label


@dataclass(frozen=True, eq=False)
class RelaxationMatrix:
    """
    Dense relaxation matrix X with site labels.

    Attributes:
        entries: Complex square matrix, read-only
        labels: One label per site, in basis order ("7", "3A", ...)
    """
    entries: np.ndarray
    labels: Tuple[str, ...] = field(default=())

    def __post_init__(self):
        entries = _frozen_complex(self.entries)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or entries.shape[0] == 0:
            raise ParameterError(f"relaxation matrix must be square and non-empty, got shape {entries.shape}")
        if not np.all(np.isfinite(entries)):
            raise ParameterError("relaxation matrix has non-finite entries")
        labels = tuple(self.labels) if self.labels else _default_labels(entries.shape[0])
        if len(labels) != entries.shape[0]:
            raise ParameterError(f"{len(labels)} labels for a {entries.shape[0]}-site matrix")
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def is_real(self) -> bool:
        return not np.any(self.entries.imag)

    def as_array(self) -> np.ndarray:
        """Real array when every entry is real, complex otherwise."""
        return self.entries.real.copy() if self.is_real else self.entries.copy()

    def hermiticity_error(self) -> float:
        """Max element of |X - X^dagger|."""
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))

    def to_dict(self) -> dict:
        """Convert to the matrix JSON layout."""
        return {
            'dim': self.dim,
            'labels': list(self.labels),
            're': self.entries.real.tolist(),
            'im': self.entries.imag.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'RelaxationMatrix':
        """Create a RelaxationMatrix from the matrix JSON layout."""
        entries = _entries_from_dict(data)
        return cls(entries=entries, labels=tuple(data.get('labels') or ()))

    def __repr__(self) -> str:
        return f"RelaxationMatrix(dim={self.dim}, labels={self.labels[0]}..{self.labels[-1]})"


@dataclass(frozen=True, eq=False)
class SourceMatrix:
    """
    Hermitian positive semidefinite pump matrix Y.

    The stored entries are exactly Hermitian: inputs within tolerance are
    symmetrized as (Y + Y^dagger)/2.

    Attributes:
        entries: Complex square matrix, read-only
        min_eigenvalue: Smallest eigenvalue found by the PSD check
    """
    entries: np.ndarray
    min_eigenvalue: Optional[float] = None

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or entries.shape[0] == 0:
            raise ParameterError(f"source matrix must be square and non-empty, got shape {entries.shape}")
        if not np.all(np.isfinite(entries)):
            raise ParameterError("source matrix has non-finite entries")
        deviation = float(np.max(np.abs(entries - entries.conj().T)))
        if deviation > HERMITIAN_TOL:
            raise ParameterError(f"source matrix is not Hermitian (max |Y - Y^dagger| = {deviation:.3e})")
        entries = 0.5 * (entries + entries.conj().T)
        eigenvalues = np.linalg.eigvalsh(entries)
        scale = max(float(eigenvalues[-1]), 0.0)
        if eigenvalues[0] < -PSD_TOL * scale or (scale == 0.0 and eigenvalues[0] < 0.0):
            raise ParameterError(f"source matrix is not positive semidefinite "
                                 f"(min eigenvalue {eigenvalues[0]:.3e})")
        object.__setattr__(self, "entries", _frozen_complex(entries))
        object.__setattr__(self, "min_eigenvalue", float(eigenvalues[0]))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def trace(self) -> float:
        return float(np.trace(self.entries).real)

    def scaled(self, factor: float) -> 'SourceMatrix':
        """Pump multiplied by a nonnegative factor."""
        if factor < 0:
            raise ParameterError("pump scale factor must be nonnegative")
        return SourceMatrix(self.entries * factor)

    def to_dict(self) -> dict:
        """Convert to the matrix JSON layout."""
        return {
            'dim': self.dim,
            'labels': list(_default_labels(self.dim)),
            're': self.entries.real.tolist(),
            'im': self.entries.imag.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'SourceMatrix':
        """Create a SourceMatrix from the matrix JSON layout."""
        return cls(entries=_entries_from_dict(data))

    def __repr__(self) -> str:
        return f"SourceMatrix(dim={self.dim}, trace={self.trace:.6g})"


def _entries_from_dict(data: dict) -> np.ndarray:
    try:
        real = np.array(_none_to_nan(data['re']), dtype=float)
        imag = np.array(_none_to_nan(data.get('im', np.zeros_like(real).tolist())), dtype=float)
    except (KeyError, TypeError, ValueError) as e:
        raise ParameterError(f"malformed matrix data: {e}") from e
    if real.shape != imag.shape:
        raise ParameterError("matrix 're' and 'im' blocks differ in shape")
    dim = data.get('dim')
    if dim is not None and real.shape != (dim, dim):
        raise ParameterError(f"matrix declares dim={dim} but holds shape {real.shape}")
    return real + 1j * imag


def _none_to_nan(rows: Sequence) -> list:
    return [[float('nan') if x is None else x for x in row] for row in rows]
