"""
Pipeline for SkinLock runs.

Provides one access point from a RunConfig to every stage of the
calculation: relaxation and pump matrices, spectrum, steady state,
natural orbitals and diagnostics. Stages are computed lazily and cached,
so a command asks for what it needs in any order.
"""

import logging
from typing import List, Optional

import numpy as np

from ..data import read_pump_rates, read_relaxation_matrix, read_source_matrix
from ..errors import ParameterError, SkinLockError
from ..models import (
    METHOD_TOLERANCE, BiorthogonalSpectrum, DiagnosticsReport, InvariantCheck, NaturalOrbitalSet,
    OccupationRow, ProfileRow, RelaxationMatrix, RunConfig, SourceMatrix, SteadyCorrelator,
)
from .inverse_design import inverse_design
from .lattice_models import (
    build_diagonal_pump, build_hatano_nelson, build_local_pump, build_ssh, resolve_site,
)
from .orbitals import diagnose, identify_slow_mode, natural_orbitals, normalized_density
from .spectral import check_stability, reference_spectrum, relaxation_rates
from .steady_state import balanced_residual, solve_steady_state

logger = logging.getLogger(__name__)


class Pipeline:
    """
    Lazily evaluated stages of one configured calculation.

    Usage:
        pipeline = Pipeline(config)
        C = pipeline.steady_state()
        report = pipeline.diagnostics()
        rows = pipeline.profile_rows()
    """

    def __init__(self, config: RunConfig, X: Optional[RelaxationMatrix] = None,
                 Y: Optional[SourceMatrix] = None):
        """
        Initialize the pipeline.

        Args:
            config: Run configuration
            X: Relaxation matrix overriding the configured model
            Y: Pump overriding the configured pump
        """
        self.config = config
        self._X = X
        self._Y = Y
        self._spectrum: Optional[BiorthogonalSpectrum] = None
        self._correlator: Optional[SteadyCorrelator] = None
        self._orbitals: Optional[NaturalOrbitalSet] = None
        self._site: Optional[int] = None

    def with_ssh_g(self, g: float) -> 'Pipeline':
        """A fresh pipeline on the SSH chain at another nonreciprocity."""
        data = self.config.to_dict()
        data['model'] = 'ssh'
        data['ssh']['g'] = float(g)
        return Pipeline(RunConfig.from_dict(data))

    # ==================== Matrices ====================

    def relaxation_matrix(self) -> RelaxationMatrix:
        if self._X is None:
            model = self.config.model
            if model == 'hn':
                self._X = build_hatano_nelson(self.config.hn)
            elif model == 'ssh':
                self._X = build_ssh(self.config.ssh)
            else:
                if not self.config.custom_x:
                    raise ParameterError("model 'custom-file' needs custom_x")
                self._X = read_relaxation_matrix(self.config.custom_x)
            logger.info("built %r", self._X)
        return self._X

    @property
    def kappa(self) -> Optional[float]:
        """Damping shift of a built-in model; the mean diagonal of a custom X."""
        if self.config.model == 'hn':
            return self.config.hn.kappa
        if self.config.model == 'ssh':
            return self.config.ssh.kappa
        return float(np.mean(self.relaxation_matrix().entries.diagonal().real))

    @property
    def pump_site(self) -> Optional[int]:
        """1-based local pump site, or None for uniform or diagonal pumps."""
        if self.config.pump.diagonal_file or self.config.pump.uniform or self.config.custom_y:
            return None
        if self._site is None:
            self._site = resolve_site(self.relaxation_matrix(), self.config.pump_site)
        return self._site

    def source_matrix(self, default_uniform: bool = False) -> SourceMatrix:
        """
        Pump from the configuration.

        Precedence: an explicit Y, custom_y, a diagonal file, a uniform pump,
        then a local pump at the configured (or model default) site.

        Args:
            default_uniform: Use gamma I when no site is configured
        """
        if self._Y is not None:
            return self._Y
        dim = self.relaxation_matrix().dim
        pump = self.config.pump
        strength = self.config.pump_strength
        if self.config.custom_y:
            Y = read_source_matrix(self.config.custom_y)
        elif pump.diagonal_file:
            Y = build_diagonal_pump(read_pump_rates(pump.diagonal_file))
        elif pump.uniform or (default_uniform and pump.site is None):
            Y = SourceMatrix(strength * np.eye(dim))
        else:
            Y = build_local_pump(dim, self.pump_site, strength)
        if Y.dim != dim:
            raise ParameterError(f"pump acts on {Y.dim} sites, X on {dim}")
        self._Y = Y
        return Y

    # ==================== Stages ====================

    def spectrum(self) -> BiorthogonalSpectrum:
        if self._spectrum is None:
            self._spectrum = reference_spectrum(self.relaxation_matrix())
        return self._spectrum

    def steady_state(self) -> SteadyCorrelator:
        if self._correlator is None:
            X = self.relaxation_matrix()
            check_stability(X)
            spectrum = self.spectrum() if self.config.solver == 'spectral' else None
            logger.info("solving steady state with the %s solver", self.config.solver)
            self._correlator = solve_steady_state(X, self.source_matrix(), self.config.solver, spectrum)
        return self._correlator

    def orbitals(self) -> NaturalOrbitalSet:
        if self._orbitals is None:
            self._orbitals = natural_orbitals(self.steady_state())
        return self._orbitals

    def diagnostics(self) -> DiagnosticsReport:
        site = self.pump_site
        return diagnose(self.steady_state(), self.spectrum(), kappa=self.kappa, site=site,
                        strength=self.config.pump_strength if site is not None else None,
                        window_fraction=self.config.edge_window)

    # ==================== Tables ====================

    def profile_rows(self) -> List[ProfileRow]:
        """|R_hat_slow|^2, |phi_max|^2 and the normalized density per site."""
        spectrum = self.spectrum()
        slow = spectrum.right_hat(identify_slow_mode(spectrum)).weights
        phi = np.abs(self.orbitals().phi_max) ** 2
        density = normalized_density(self.steady_state())
        labels = self.relaxation_matrix().labels
        return [ProfileRow(j + 1, labels[j], float(slow[j]), float(phi[j]), float(density[j]))
                for j in range(len(labels))]

    def occupation_rows(self) -> List[OccupationRow]:
        orbitals = self.orbitals()
        peak = orbitals.nu_max
        return [OccupationRow(alpha + 1, float(nu), float(nu / peak) if peak > 0 else float('nan'))
                for alpha, nu in enumerate(orbitals.occupations)]

    # ==================== Invariants ====================

    def invariant_suite(self) -> List[InvariantCheck]:
        """
        Measure the invariants of the configured (X, Y) and its steady state.

        An unstable X stops the suite after the stability entry. The Lyapunov
        residual and the Hermiticity defect are measured in the balancing frame
        of the direct solver; the residual is held to the declared tolerance,
        or to the attainable floor in that frame when that is larger. The raw
        residual of X C + C X^dagger = Y is reported in the detail only.
        """
        X = self.relaxation_matrix()
        Y = self.source_matrix()
        slowest = float(np.min(relaxation_rates(X).real))
        checks = [InvariantCheck('stability', -slowest, 0.0, f"slowest Re beta = {slowest:.6g}", strict=True)]
        if not slowest > 0:
            return checks

        C = self.steady_state()
        entries = C.entries
        residual, floor = balanced_residual(X, C, Y)
        declared = METHOD_TOLERANCE[C.method]
        detail = f"balancing frame; raw residual {C.residual:.3e}"
        if floor > declared:
            detail += f"; attainable floor {floor:.3e}"
        checks.append(InvariantCheck('lyapunov_residual', residual, max(declared, floor), detail))

        asymmetry = C.parameters.get('frame_asymmetry')
        if asymmetry is None:
            peak = float(np.max(np.abs(entries)))
            asymmetry = C.asymmetry / peak if peak > 0 else C.asymmetry
        checks.append(InvariantCheck('hermiticity', float(asymmetry), 1e-8))

        orbitals = self.orbitals()
        top = max(1.0, float(np.max(np.abs(orbitals.occupations))))
        reconstruction = np.max(np.abs(orbitals.reconstructed_density() - entries.diagonal().real))
        checks.append(InvariantCheck('density_reconstruction', float(reconstruction) / top, 1e-12))
        checks.append(InvariantCheck('orbital_orthonormality', orbitals.orthonormality_error(), 1e-10))

        realization = inverse_design(X, Y)
        x_scale = max(1.0, float(np.max(np.abs(X.entries))))
        round_trip = max(np.max(np.abs(realization.relaxation_matrix() - X.entries)),
                         np.max(np.abs(realization.source_matrix() - Y.entries)))
        checks.append(InvariantCheck('realization_round_trip', float(round_trip) / x_scale, 1e-12))

        excess = max(0.0, -float(orbitals.occupations[-1]), float(orbitals.occupations[0]) - 1.0)
        if realization.is_physical:
            checks.append(InvariantCheck('occupation_bounds', excess, 1e-10))
        else:
            checks.append(InvariantCheck(
                'occupation_bounds', excess, None,
                f"not enforced: Gamma^- has eigenvalue {realization.min_loss_eigenvalue:.3e}"))

        try:
            spectrum = self.spectrum()
            checks.append(InvariantCheck('biorthogonality', spectrum.biorthogonality_error(), None,
                                         f"spectrum method {spectrum.method}"))
        except SkinLockError as e:
            checks.append(InvariantCheck('biorthogonality', float('nan'), None, f"spectrum unavailable: {e}"))

        for check in checks:
            logger.log(logging.INFO if check.passed else logging.WARNING, "%s = %.3e (tolerance %s) %s",
                       check.name, check.value, check.tolerance, check.detail)
        return checks
