"""
Scan result rows for SkinLock.
"""

import math
from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class SourceScanRow:
    """
    One pump position of a Hatano-Nelson source scan.

    Attributes:
        s: 1-based pump site
        nu_max: Leading occupation of the exact steady state
        a1: Analytic slow-mode loading A_1(s)
        nu_max_norm: nu_max / max over the scan
        a1_norm: A_1 / max over the scan
    """
    s: int
    nu_max: float
    a1: float
    nu_max_norm: float = float('nan')
    a1_norm: float = float('nan')

    CSV_HEADER = ('s', 'nu_max', 'A1', 'nu_max_norm', 'A1_norm')

    def csv_row(self) -> tuple:
        return (self.s, self.nu_max, self.a1, self.nu_max_norm, self.a1_norm)


@dataclass(frozen=True)
class CrossoverRow:
    """
    One nonreciprocity value of an SSH crossover scan.

    Attributes:
        g: Nonreciprocity exponent
        o_edge: Overlap of phi_max with the edge candidate
        o_slow: Overlap of phi_max with the slowest mode
        edge_mode_index: 1-based edge-candidate mode index (0 if the point failed)
        slow_mode_index: 1-based slowest mode index (0 if the point failed)
        error: Failure message for points that could not be evaluated
    """
    g: float
    o_edge: float
    o_slow: float
    edge_mode_index: int
    slow_mode_index: int
    error: Optional[str] = None

    CSV_HEADER = ('g', 'O_edge', 'O_slow', 'edge_mode_index', 'slow_mode_index')

    @property
    def ok(self) -> bool:
        return self.error is None

    @property
    def edge_minus_slow(self) -> float:
        return self.o_edge - self.o_slow

    def csv_row(self) -> tuple:
        return (self.g, self.o_edge, self.o_slow, self.edge_mode_index, self.slow_mode_index)

    @classmethod
    def failed(cls, g: float, message: str) -> 'CrossoverRow':
        return cls(g, math.nan, math.nan, 0, 0, message)


@dataclass(frozen=True)
class ProfileRow:
    """
    Site-resolved |amplitude|^2 profiles of one steady state.

    Attributes:
        j: 1-based site index
        label: Site label
        r_slow_sq: |R_hat_slow(j)|^2
        phi_max_sq: |phi_max(j)|^2
        density_norm: n_j / sum_l n_l
    """
    j: int
    label: str
    r_slow_sq: float
    phi_max_sq: float
    density_norm: float

    CSV_HEADER = ('j', 'label', 'R_slow_sq', 'phi_max_sq', 'density_norm')

    def csv_row(self) -> tuple:
        return (self.j, self.label, self.r_slow_sq, self.phi_max_sq, self.density_norm)


@dataclass(frozen=True)
class OccupationRow:
    """One natural-orbital occupation, descending order."""
    alpha: int
    nu: float
    nu_norm: float

    CSV_HEADER = ('alpha', 'nu', 'nu_norm')

    def csv_row(self) -> tuple:
        return (self.alpha, self.nu, self.nu_norm)
