"""
SkinLock Data Models

This module contains the data model classes shared by the services.
"""

from .matrices import RelaxationMatrix, SourceMatrix, cell_of
from .params import HatanoNelsonParams, SshParams
from .spectrum import (
    BiorthogonalSpectrum, ModeVector, BIORTHOGONAL, EUCLIDEAN, phase_gauge, gauge_columns,
)
from .correlator import (
    SteadyCorrelator, SingleModeApproximation, SingleModeAgreement, DIRECT, SPECTRAL, INTEGRATED,
    METHOD_TOLERANCE,
)
from .orbitals import NaturalOrbitalSet, LoadingFactors, EdgeCandidate, DiagnosticsReport
from .scans import SourceScanRow, CrossoverRow, ProfileRow, OccupationRow
from .realization import JumpVector, JumpSet, MicroscopicRealization, JumpValidationReport, LOSS, GAIN
from .fock import FockOperatorSet, DensityMatrix, MasterTrajectory, OracleReport
from .config import RunConfig, PumpSpec, ScanSpec, OracleSpec
from .checks import InvariantCheck

__all__ = [
    'RelaxationMatrix', 'SourceMatrix', 'cell_of',
    'HatanoNelsonParams', 'SshParams',
    'BiorthogonalSpectrum', 'ModeVector', 'BIORTHOGONAL', 'EUCLIDEAN', 'phase_gauge', 'gauge_columns',
    'SteadyCorrelator', 'SingleModeApproximation', 'SingleModeAgreement', 'DIRECT', 'SPECTRAL',
    'INTEGRATED', 'METHOD_TOLERANCE',
    'NaturalOrbitalSet', 'LoadingFactors', 'EdgeCandidate', 'DiagnosticsReport',
    'SourceScanRow', 'CrossoverRow', 'ProfileRow', 'OccupationRow',
    'JumpVector', 'JumpSet', 'MicroscopicRealization', 'JumpValidationReport', 'LOSS', 'GAIN',
    'FockOperatorSet', 'DensityMatrix', 'MasterTrajectory', 'OracleReport',
    'RunConfig', 'PumpSpec', 'ScanSpec', 'OracleSpec', 'InvariantCheck',
]
