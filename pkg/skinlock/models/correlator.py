"""
Correlator model for SkinLock.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..errors import ParameterError

DIRECT = "direct"
SPECTRAL = "spectral"
INTEGRATED = "integrated"
METHODS = (DIRECT, SPECTRAL, INTEGRATED)

# Declared Lyapunov residual tolerance per method.
METHOD_TOLERANCE = {DIRECT: 1e-10, SPECTRAL: 1e-6, INTEGRATED: 1e-6}


@dataclass(frozen=True, eq=False)
class SteadyCorrelator:
    """
    One-body correlator C_ij = Tr(rho c_j^dagger c_i).

    Entries are symmetrized as (C + C^dagger)/2 on construction; the
    asymmetry removed by that step is kept as a health metric.

    Attributes:
        entries: Hermitian complex matrix, read-only
        method: 'direct', 'spectral' or 'integrated'
        residual: Relative Frobenius residual of the Lyapunov equation, if computed
        asymmetry: Max element of |C - C^dagger| before symmetrization
        time: Evolution time for integrated snapshots, None for steady states
        parameters: Free-form provenance recorded with exports
    """
    entries: np.ndarray
    method: str = DIRECT
    residual: Optional[float] = None
    asymmetry: float = 0.0
    time: Optional[float] = None
    parameters: dict = field(default_factory=dict)

    def __post_init__(self):
        raw = np.array(self.entries, dtype=complex)
        if raw.ndim != 2 or raw.shape[0] != raw.shape[1]:
            raise ParameterError(f"correlator must be square, got shape {raw.shape}")
        if self.method not in METHODS:
            raise ParameterError(f"unknown correlator method {self.method!r}")
        asymmetry = float(np.max(np.abs(raw - raw.conj().T))) if raw.size else 0.0
        entries = 0.5 * (raw + raw.conj().T)
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "asymmetry", max(asymmetry, self.asymmetry))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def tolerance(self) -> float:
        return METHOD_TOLERANCE[self.method]

    @property
    def within_tolerance(self) -> bool:
        return self.residual is None or self.residual <= self.tolerance

    @property
    def trace(self) -> float:
        return float(np.trace(self.entries).real)

    def to_dict(self, labels=None) -> dict:
        """Matrix JSON layout plus a metadata block."""
        return {
            'dim': self.dim,
            'labels': list(labels) if labels is not None else [str(j) for j in range(1, self.dim + 1)],
            're': self.entries.real.tolist(),
            'im': self.entries.imag.tolist(),
            'metadata': {
                'method': self.method,
                'residual': self.residual,
                'asymmetry': self.asymmetry,
                'time': self.time,
                'parameters': dict(self.parameters),
            },
        }

    def __repr__(self) -> str:
        return f"SteadyCorrelator(dim={self.dim}, method={self.method!r}, residual={self.residual})"


@dataclass(frozen=True, eq=False)
class SingleModeApproximation:
    """
    Rank-one steady state of a single dominant mode.

    Attributes:
        correlator: A_0(s) |R_0><R_0|
        loading: A_0(s) = Gamma |L_0(s)|^2 / (2 Re beta_0)
        predicted_nu_max: A_0(s) <R_0|R_0>
        mode_index: 1-based index of the mode used
    """
    correlator: SteadyCorrelator
    loading: float
    predicted_nu_max: float
    mode_index: int


@dataclass(frozen=True)
class SingleModeAgreement:
    """
    Single-mode nu_max prediction against the exact leading occupation.

    The prediction is held to the subleading loading sum: relative_error
    should not exceed sum_{n != slow} A_n / max_m A_m. Strongly non-normal
    chains with a small gap ratio break the bound; holds then reads False and
    the measured breakdown is reported instead of asserted.

    Attributes:
        predicted_nu_max: A_slow(s) <R_slow|R_slow>
        exact_nu_max: Leading occupation of the exact steady state
        relative_error: |predicted - exact| / exact
        bound: Sum of normalized subleading loadings
        gap_ratio: (Re beta_second - Re beta_slow) / Re beta_slow
    """
    predicted_nu_max: float
    exact_nu_max: float
    relative_error: float
    bound: float
    gap_ratio: float

    @property
    def holds(self) -> bool:
        return self.relative_error <= self.bound

    def to_dict(self) -> dict:
        return {
            'predicted_nu_max': self.predicted_nu_max,
            'exact_nu_max': self.exact_nu_max,
            'relative_error': self.relative_error,
            'bound': self.bound,
            'bound_holds': self.holds,
            'spectral_gap_ratio': self.gap_ratio,
        }
