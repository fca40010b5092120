"""
Microscopic realization models for SkinLock.

A realization is the Hamiltonian plus gain/loss Gram matrices that
reproduce a target (X, Y); a JumpSet makes the Grams explicit as local
jump operators.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

LOSS = "loss"
GAIN = "gain"


@dataclass(frozen=True, eq=False)
class JumpVector:
    """
    Coefficient vector of one jump operator.

    Loss jumps act as sum_j conj(u_j) c_j and gain jumps as sum_j v_j c_j^dagger,
    so that each contributes u u^dagger to its Gram matrix.

    Attributes:
        label: Structural tag, e.g. 'bond(1,2)', 'onsite(3)', 'pump(1)'
        kind: 'loss' or 'gain'
        vector: Complex coefficients over sites
    """
    label: str
    kind: str
    vector: np.ndarray

    def __post_init__(self):
        vector = np.array(self.vector, dtype=complex).reshape(-1)
        vector.setflags(write=False)
        object.__setattr__(self, "vector", vector)

    @property
    def support(self) -> Tuple[int, ...]:
        """0-based sites with nonzero coefficient."""
        return tuple(int(j) for j in np.flatnonzero(self.vector))

    def to_dict(self) -> dict:
        return {
            'label': self.label,
            'kind': self.kind,
            're': self.vector.real.tolist(),
            'im': self.vector.imag.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'JumpVector':
        vector = np.array(data['re'], dtype=float) + 1j * np.array(data.get('im', [0.0] * len(data['re'])))
        return cls(label=data['label'], kind=data.get('kind', LOSS), vector=vector)


@dataclass
class JumpSet:
    """
    Explicit loss and gain jump vectors.

    Attributes:
        loss_vectors: Vectors u_mu, Gram sum u u^dagger = Gamma^-
        gain_vectors: Vectors v_nu, Gram sum v v^dagger = Gamma^+
        labels: Site labels of the chain
        clamped: Site label -> amount by which a slightly negative onsite
            weight was raised to zero
    """
    loss_vectors: List[JumpVector] = field(default_factory=list)
    gain_vectors: List[JumpVector] = field(default_factory=list)
    labels: Tuple[str, ...] = ()
    clamped: Dict[str, float] = field(default_factory=dict)

    @property
    def dim(self) -> int:
        if self.labels:
            return len(self.labels)
        for jump in self.loss_vectors + self.gain_vectors:
            return jump.vector.shape[0]
        return 0

    @staticmethod
    def _gram(vectors: List[JumpVector], dim: int) -> np.ndarray:
        gram = np.zeros((dim, dim), dtype=complex)
        for jump in vectors:
            gram += np.outer(jump.vector, jump.vector.conj())
        return gram

    def loss_gram(self) -> np.ndarray:
        return self._gram(self.loss_vectors, self.dim)

    def gain_gram(self) -> np.ndarray:
        return self._gram(self.gain_vectors, self.dim)

    def find(self, label: str) -> Optional[JumpVector]:
        for jump in self.loss_vectors + self.gain_vectors:
            if jump.label == label:
                return jump
        return None

    def to_dict(self) -> dict:
        return {
            'labels': list(self.labels),
            'loss': [jump.to_dict() for jump in self.loss_vectors],
            'gain': [jump.to_dict() for jump in self.gain_vectors],
            'clamped': dict(self.clamped),
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'JumpSet':
        return cls(
            loss_vectors=[JumpVector.from_dict(d) for d in data.get('loss', [])],
            gain_vectors=[JumpVector.from_dict(d) for d in data.get('gain', [])],
            labels=tuple(data.get('labels', ())),
            clamped={str(k): float(v) for k, v in data.get('clamped', {}).items()},
        )

    def __repr__(self) -> str:
        return f"JumpSet(dim={self.dim}, loss={len(self.loss_vectors)}, gain={len(self.gain_vectors)})"


@dataclass(eq=False)
class MicroscopicRealization:
    """
    Hamiltonian and Gram matrices realizing a target (X, Y).

    Attributes:
        hamiltonian: Hermitian single-particle matrix h
        gain_gram: Gamma^+ (equals Y)
        loss_gram: Gamma^- (Hermitian, positivity reported in min_loss_eigenvalue)
        target_x: The X the realization was built for
        target_y: The Y the realization was built for
        min_loss_eigenvalue: Smallest eigenvalue of Gamma^-
        jumps: Optional explicit jump operators
        labels: Site labels
    """
    hamiltonian: np.ndarray
    gain_gram: np.ndarray
    loss_gram: np.ndarray
    target_x: np.ndarray
    target_y: np.ndarray
    min_loss_eigenvalue: float
    jumps: Optional[JumpSet] = None
    labels: Tuple[str, ...] = ()

    PHYSICAL_TOL = 1e-10

    @property
    def dim(self) -> int:
        return self.hamiltonian.shape[0]

    @property
    def is_physical(self) -> bool:
        """Gamma^- positive semidefinite within tolerance."""
        return self.min_loss_eigenvalue >= -self.PHYSICAL_TOL

    def relaxation_matrix(self) -> np.ndarray:
        """X = i h + (Gamma^- + Gamma^+)/2."""
        return 1j * self.hamiltonian + 0.5 * (self.loss_gram + self.gain_gram)

    def source_matrix(self) -> np.ndarray:
        return np.array(self.gain_gram, copy=True)

    def to_dict(self) -> dict:
        def block(matrix):
            return {'dim': self.dim, 'labels': list(self.labels),
                    're': np.real(matrix).tolist(), 'im': np.imag(matrix).tolist()}

        data = {
            'hamiltonian': block(self.hamiltonian),
            'gain_gram': block(self.gain_gram),
            'loss_gram': block(self.loss_gram),
            'min_loss_eigenvalue': self.min_loss_eigenvalue,
            'physical': self.is_physical,
        }
        if self.jumps is not None:
            data['jumps'] = self.jumps.to_dict()
        return data

    def __repr__(self) -> str:
        return (f"MicroscopicRealization(dim={self.dim}, physical={self.is_physical}, "
                f"min_loss_eigenvalue={self.min_loss_eigenvalue:.3e})")


@dataclass
class JumpValidationReport:
    """
    Outcome of comparing a JumpSet with its realization.

    Attributes:
        loss_gram_error: max |Gram(loss) - Gamma^-|
        gain_gram_error: max |Gram(gain) - Gamma^+|
        x_error: max |X rebuilt from the jumps - X target|
        y_error: max |Y rebuilt from the jumps - Y target|
        min_loss_eigenvalue: Smallest eigenvalue of Gram(loss)
        worst_quantity: Name of the comparison with the largest deviation
        worst_entry: 0-based (row, column) of that deviation
        suspects: Labels of jumps touching the worst entry
        tolerance: Pass threshold
    """
    loss_gram_error: float
    gain_gram_error: float
    x_error: float
    y_error: float
    min_loss_eigenvalue: float
    worst_quantity: str
    worst_entry: Tuple[int, int]
    suspects: Tuple[str, ...] = ()
    tolerance: float = 1e-12

    @property
    def max_error(self) -> float:
        return max(self.loss_gram_error, self.gain_gram_error, self.x_error, self.y_error)

    @property
    def passed(self) -> bool:
        return self.max_error <= self.tolerance and self.min_loss_eigenvalue >= -self.tolerance

    def to_dict(self) -> dict:
        return {
            'passed': self.passed,
            'loss_gram_error': self.loss_gram_error,
            'gain_gram_error': self.gain_gram_error,
            'x_error': self.x_error,
            'y_error': self.y_error,
            'min_loss_eigenvalue': self.min_loss_eigenvalue,
            'worst_quantity': self.worst_quantity,
            'worst_entry': list(self.worst_entry),
            'suspects': list(self.suspects),
            'tolerance': self.tolerance,
        }
