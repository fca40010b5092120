"""
Many-body models for the brute-force Lindblad oracle.
"""

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from ..errors import ParameterError

RHO_HERMITIAN_TOL = 1e-12
RHO_TRACE_TOL = 1e-10
RHO_POSITIVITY_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class FockOperatorSet:
    """
    Jordan-Wigner fermion operators on n_sites modes.

    Site 1 is the most significant bit of the occupation basis index.

    Attributes:
        n_sites: Number of modes
        annihilators: c_j as dense 2^N x 2^N matrices, site order
        creators: c_j^dagger
        numbers: n_j = c_j^dagger c_j
    """
    n_sites: int
    annihilators: List[np.ndarray]
    creators: List[np.ndarray] = field(default_factory=list)
    numbers: List[np.ndarray] = field(default_factory=list)

    @property
    def hilbert_dim(self) -> int:
        return 2 ** self.n_sites

    def identity(self) -> np.ndarray:
        return np.eye(self.hilbert_dim, dtype=complex)

    def car_error(self) -> float:
        """Largest deviation from the canonical anticommutation relations."""
        worst = 0.0
        identity = self.identity()
        for i, ci in enumerate(self.annihilators):
            for j, cj in enumerate(self.annihilators):
                mixed = ci @ self.creators[j] + self.creators[j] @ ci
                expected = identity if i == j else 0.0
                worst = max(worst, float(np.max(np.abs(mixed - expected))))
                same = ci @ cj + cj @ ci
                worst = max(worst, float(np.max(np.abs(same))))
        return worst

    def __repr__(self) -> str:
        return f"FockOperatorSet(n_sites={self.n_sites})"


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """
    Many-body density matrix in the occupation basis.

    Attributes:
        entries: 2^N x 2^N complex matrix
        check: Validate Hermiticity, unit trace and positivity on construction
    """
    entries: np.ndarray
    check: bool = True

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        dim = entries.shape[0] if entries.ndim == 2 else 0
        if entries.ndim != 2 or entries.shape[1] != dim or dim == 0 or dim & (dim - 1):
            raise ParameterError(f"density matrix must be square with power-of-two side, got {entries.shape}")
        if self.check:
            asymmetry = float(np.max(np.abs(entries - entries.conj().T)))
            if asymmetry > RHO_HERMITIAN_TOL:
                raise ParameterError(f"density matrix is not Hermitian ({asymmetry:.3e})")
            trace = complex(np.trace(entries))
            if abs(trace - 1.0) > RHO_TRACE_TOL:
                raise ParameterError(f"density matrix trace {trace:.12g} differs from 1")
            lowest = float(np.linalg.eigvalsh(0.5 * (entries + entries.conj().T))[0])
            if lowest < -RHO_POSITIVITY_TOL:
                raise ParameterError(f"density matrix has negative eigenvalue {lowest:.3e}")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def hilbert_dim(self) -> int:
        return self.entries.shape[0]

    @property
    def n_sites(self) -> int:
        return self.hilbert_dim.bit_length() - 1

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(0.5 * (self.entries + self.entries.conj().T))[0])

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))

    @classmethod
    def fock_state(cls, occupations) -> 'DensityMatrix':
        """Pure occupation-basis state |n_1 n_2 ... n_N>."""
        bits = [int(n) for n in occupations]
        if not bits or any(b not in (0, 1) for b in bits):
            raise ParameterError(f"occupations must be a non-empty 0/1 sequence, got {occupations}")
        index = int("".join(str(b) for b in bits), 2)
        entries = np.zeros((2 ** len(bits),) * 2, dtype=complex)
        entries[index, index] = 1.0
        return cls(entries)

    @classmethod
    def vacuum(cls, n_sites: int) -> 'DensityMatrix':
        return cls.fock_state([0] * n_sites)

    def to_dict(self) -> dict:
        return {
            'n_sites': self.n_sites,
            're': self.entries.real.tolist(),
            'im': self.entries.imag.tolist(),
        }


@dataclass
class MasterTrajectory:
    """
    Sampled solution of the master equation.

    Attributes:
        times: Sample times, ascending
        states: Density matrix at each sample (unchecked snapshots)
        max_trace_drift: Largest |Tr rho - 1| seen while integrating
    """
    times: List[float]
    states: List[DensityMatrix]
    max_trace_drift: float = 0.0

    def __len__(self) -> int:
        return len(self.times)

    @property
    def final(self) -> DensityMatrix:
        return self.states[-1]

    def to_dict(self) -> dict:
        return {
            'times': list(self.times),
            'max_trace_drift': self.max_trace_drift,
            'states': [state.to_dict() for state in self.states],
        }


@dataclass
class OracleReport:
    """
    Master-equation versus correlator-equation comparison.

    Attributes:
        n_sites: Chain length
        max_trajectory_deviation: max over compared times of max |C_oracle - C_closed_form|
        eom_residual: max |dC/dt + X C + C X^dagger - Y| along the oracle trajectory
        steady_state_deviation: max |C(rho_ss) - C_direct|, if computed
        max_trace_drift: Largest trace drift of the integration
        compared_times: Times at which trajectories were compared
        deviations: Deviation at each compared time
        tolerance: Pass threshold for the trajectory, EOM and steady-state deviations
    """
    n_sites: int
    max_trajectory_deviation: float
    eom_residual: float
    steady_state_deviation: Optional[float] = None
    max_trace_drift: float = 0.0
    compared_times: List[float] = field(default_factory=list)
    deviations: List[float] = field(default_factory=list)
    tolerance: float = 1e-7

    @property
    def passed(self) -> bool:
        if self.steady_state_deviation is not None and not self.steady_state_deviation <= self.tolerance:
            return False
        return self.max_trajectory_deviation <= self.tolerance and self.eom_residual <= self.tolerance

    def to_dict(self) -> dict:
        return {
            'n_sites': self.n_sites,
            'passed': self.passed,
            'max_trajectory_deviation': self.max_trajectory_deviation,
            'eom_residual': self.eom_residual,
            'steady_state_deviation': self.steady_state_deviation,
            'max_trace_drift': self.max_trace_drift,
            'tolerance': self.tolerance,
        }
