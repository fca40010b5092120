"""
Steady-state and transient correlators for SkinLock.

The correlator obeys dC/dt = -X C - C X^dagger + Y; its steady state
solves the Lyapunov equation X C + C X^dagger = Y. Three routes are
provided: a direct dense solve (Bartels-Stewart on the diagonally balanced
X by default, plain Schur and the Kronecker vectorization as references),
the biorthogonal double sum, and fixed-step RK4 integration. The
closed-form transient evaluates the time-dependent solution in the
eigenbasis.

Usage:
    C = solve_lyapunov_direct(X, Y)
    C = solve_lyapunov_spectral(spec, Y, X)
    trajectory = propagate_correlator(X, Y, C0, t_final=10.0)
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from ..errors import (
    DarkSourceError, DecompositionError, NormalizationError, ParameterError, SiteIndexError,
    SkinLockError, SolveError, StabilityError, StepSizeError, EnvelopeOverflowError,
)
from ..models import (
    DIRECT, INTEGRATED, SPECTRAL, BiorthogonalSpectrum, HatanoNelsonParams, RelaxationMatrix,
    SingleModeAgreement, SingleModeApproximation, SourceMatrix, SteadyCorrelator,
)
from .lattice_models import build_hatano_nelson, build_local_pump
from .orbitals import identify_slow_mode, loading_factors
from .spectral import (
    LOG_MAX, biorthogonal_decompose, check_stability, reference_spectrum, similarity_scale,
    spectral_gap_ratio,
)

logger = logging.getLogger(__name__)

BALANCED = "balanced"
SCHUR = "schur"
VECTORIZED = "vectorized"
VECTORIZED_SIZE_WARNING = 80
DARK_SOURCE_TOL = 1e-14
# Real-axis stability limit of classical RK4.
RK4_STABILITY_LIMIT = 2.78
DIVERGENCE_LIMIT = 1e100


def _check_dims(X: RelaxationMatrix, Y: SourceMatrix) -> None:
    if X.dim != Y.dim:
        raise ParameterError(f"X is {X.dim}x{X.dim} but Y is {Y.dim}x{Y.dim}")


def _source_array(Y: SourceMatrix) -> np.ndarray:
    return Y.entries.real.copy() if not np.any(Y.entries.imag) else Y.entries.copy()


def lyapunov_residual(x: np.ndarray, c: np.ndarray, y: np.ndarray) -> float:
    """|X C + C X^dagger - Y|_F / |Y|_F (absolute when Y = 0)."""
    residual = np.linalg.norm(x @ c + c @ x.conj().T - y)
    scale = np.linalg.norm(y)
    return float(residual / scale) if scale > 0 else float(residual)


def relative_difference(a: np.ndarray, b: np.ndarray) -> float:
    """|a - b|_F / |b|_F."""
    scale = np.linalg.norm(b)
    return float(np.linalg.norm(a - b) / scale) if scale > 0 else float(np.linalg.norm(a - b))


def _finish(raw: np.ndarray, method: str, x: np.ndarray, y: np.ndarray, parameters: dict) -> SteadyCorrelator:
    symmetric = 0.5 * (raw + raw.conj().T)
    residual = lyapunov_residual(x, symmetric, y)
    correlator = SteadyCorrelator(raw, method=method, residual=residual, parameters=parameters)
    logger.debug("%s solve: residual %.3e, pre-symmetrization asymmetry %.3e",
                 method, residual, correlator.asymmetry)
    frame = parameters.get("frame_residual")
    checked = residual if frame is None else frame
    if checked > correlator.tolerance:
        logger.warning("%s Lyapunov residual %.3e exceeds declared tolerance %.1e",
                       method, checked, correlator.tolerance)
    return correlator


# ==================== Direct route ====================

def solve_lyapunov_direct(X: RelaxationMatrix, Y: SourceMatrix, method: str = BALANCED) -> SteadyCorrelator:
    """
    Solve X C + C X^dagger = Y by a dense direct method.

    Args:
        X: Stable relaxation matrix
        Y: Pump matrix
        method: balanced (Bartels-Stewart after a diagonal similarity,
            the default), schur (Bartels-Stewart on X itself) or
            vectorized ((X kron I + I kron conj(X)) vec C = vec Y, the
            O(N^6) reference)

    Raises:
        StabilityError: some Re beta <= 0
        SolveError: the linear system is singular
    """
    _check_dims(X, Y)
    check_stability(X)
    x, y = X.as_array(), _source_array(Y)
    parameters = {"route": method}
    scale = None
    try:
        if method == BALANCED:
            scale = balancing_scale(X)
            kernel = scipy.linalg.solve_continuous_lyapunov(
                x / scale[:, None] * scale[None, :], y / scale[:, None] / scale[None, :])
            parameters["frame_asymmetry"] = _relative_asymmetry(kernel)
            raw = scale[:, None] * kernel * scale[None, :]
        elif method == SCHUR:
            raw = scipy.linalg.solve_continuous_lyapunov(x, y)
        elif method == VECTORIZED:
            raw = _vectorized_solve(x, y)
        else:
            raise ParameterError(f"unknown direct method {method!r}")
    except (scipy.linalg.LinAlgError, np.linalg.LinAlgError) as e:
        raise SolveError(f"Lyapunov system is singular: {e}") from e
    if not np.all(np.isfinite(raw)):
        raise SolveError("Lyapunov solve produced non-finite entries")
    if scale is not None:
        parameters["frame_residual"], _ = balanced_residual(X, 0.5 * (raw + raw.conj().T), Y, scale)
    return _finish(raw, DIRECT, x, y, parameters)


def balancing_scale(X: RelaxationMatrix) -> np.ndarray:
    """
    Diagonal T of the frame B = T^-1 X T used by the balanced direct solver.

    T is the exact symmetrizing similarity, centred in the log domain, when X
    has one and the LAPACK balancing scale otherwise. Skin chains are nearly
    normal in that frame, so rounding in the factorization is not amplified by r^N.

    Raises:
        EnvelopeOverflowError: the symmetrizing similarity is not representable
    """
    log_scale = similarity_scale(X)
    if log_scale is None:
        _, (scale, _) = scipy.linalg.matrix_balance(X.as_array(), permute=False, separate=True)
        return np.asarray(scale, dtype=float)
    log_scale = log_scale - 0.5 * (np.max(log_scale) + np.min(log_scale))
    if np.max(np.abs(log_scale)) > LOG_MAX / 2:
        raise EnvelopeOverflowError("symmetrizing similarity is not representable")
    return np.exp(log_scale)


def balanced_residual(X: RelaxationMatrix, C, Y: SourceMatrix,
                      scale: Optional[np.ndarray] = None) -> Tuple[float, float]:
    """
    Lyapunov residual in the balancing frame, with its attainable floor.

    With B = T^-1 X T, K = T^-1 C T^-1 and S = T^-1 Y T^-1 the residual is
    |B K + K B^dagger - S|_F / |S|_F and the floor is 10 eps |B|_F |K|_F / |S|_F.
    This is the equation the balanced solver factorizes; the residual of
    X C + C X^dagger = Y itself grows with the spread of T.

    Args:
        X: Relaxation matrix
        C: Correlator (SteadyCorrelator or array)
        Y: Pump matrix
        scale: T, when already known

    Returns:
        (residual, floor)
    """
    _check_dims(X, Y)
    t = balancing_scale(X) if scale is None else scale
    c = C.entries if isinstance(C, SteadyCorrelator) else np.asarray(C, dtype=complex)
    balanced = X.as_array() / t[:, None] * t[None, :]
    kernel = c / t[:, None] / t[None, :]
    source = Y.entries / t[:, None] / t[None, :]
    residual = lyapunov_residual(balanced, kernel, source)
    source_norm = np.linalg.norm(source)
    floor = (10.0 * np.finfo(float).eps * np.linalg.norm(balanced) * np.linalg.norm(kernel) / source_norm
             if source_norm > 0 else 0.0)
    return residual, float(floor)


def _relative_asymmetry(m: np.ndarray) -> float:
    """max |M - M^dagger| / max |M|."""
    peak = float(np.max(np.abs(m)))
    return float(np.max(np.abs(m - m.conj().T))) / peak if peak > 0 else 0.0


def _vectorized_solve(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    dim = x.shape[0]
    if dim > VECTORIZED_SIZE_WARNING:
        logger.warning("vectorized Lyapunov solve at dim=%d builds a %d x %d system", dim, dim * dim, dim * dim)
    identity = np.eye(dim)
    system = np.kron(x, identity) + np.kron(identity, x.conj())
    return scipy.linalg.solve(system, y.reshape(-1)).reshape(dim, dim)


# ==================== Spectral route ====================

def _denominators(spec: BiorthogonalSpectrum) -> np.ndarray:
    denominators = spec.betas[:, None] + spec.betas.conj()[None, :]
    if np.any(denominators.real <= 0):
        raise StabilityError(f"beta_m + beta_n* has non-positive real part "
                             f"(slowest rate {np.min(spec.betas.real):.6g})")
    return denominators


def _require_biorthogonal(spec: BiorthogonalSpectrum) -> None:
    if not spec.is_biorthogonal:
        raise NormalizationError("spectral solves need a biorthogonal spectrum, not normalized envelopes")


def spectral_coefficients(spec: BiorthogonalSpectrum, Y: SourceMatrix) -> np.ndarray:
    """M_mn = <L_m|Y|L_n> / (beta_m + beta_n*)."""
    _require_biorthogonal(spec)
    if spec.dim != Y.dim:
        raise ParameterError(f"spectrum has {spec.dim} modes but Y is {Y.dim}x{Y.dim}")
    denominators = _denominators(spec)
    return (spec.left.conj().T @ Y.entries @ spec.left) / denominators


def solve_lyapunov_spectral(spec: BiorthogonalSpectrum, Y: SourceMatrix,
                            X: Optional[RelaxationMatrix] = None) -> SteadyCorrelator:
    """
    C = sum_mn M_mn |R_m><R_n| with M from spectral_coefficients.

    Args:
        spec: Biorthogonal spectrum of X
        Y: Pump matrix
        X: Relaxation matrix for the residual; rebuilt from spec when omitted

    Raises:
        StabilityError: some beta_m + beta_n* has Re <= 0
    """
    coefficients = spectral_coefficients(spec, Y)
    raw = spec.right @ coefficients @ spec.right.conj().T
    if not np.all(np.isfinite(raw)):
        raise DecompositionError("spectral sum overflowed")
    x = X.as_array() if X is not None else spec.reconstruct()
    return _finish(raw, SPECTRAL, x, Y.entries, {'spectrum': spec.method,
                                                 'condition_estimate': spec.condition_estimate})


def solve_steady_state(X: RelaxationMatrix, Y: SourceMatrix, solver: str = DIRECT,
                       spectrum: Optional[BiorthogonalSpectrum] = None) -> SteadyCorrelator:
    """Dispatch to the direct or spectral route."""
    if solver == DIRECT:
        return solve_lyapunov_direct(X, Y)
    if solver == SPECTRAL:
        return solve_lyapunov_spectral(spectrum or reference_spectrum(X), Y, X)
    raise ParameterError(f"solver must be 'direct' or 'spectral', got {solver!r}")


def hn_kernel_correlator(params: HatanoNelsonParams, s: int, strength: float) -> SteadyCorrelator:
    """
    Hatano-Nelson steady state from its reference-chain kernel.

    C_jk = Gamma r^(j+k-2s) sum_mn phi_m(s) phi_n(s) phi_m(j) phi_n(k) / (beta_m + beta_n)
    """
    params.validate()
    n = params.n_sites
    if not 1 <= s <= n:
        raise SiteIndexError(f"pump site {s} outside 1..{n}")
    log_r = math.log(params.envelope_ratio)
    if (n - 1) * abs(log_r) > LOG_MAX:
        raise EnvelopeOverflowError(f"r^(N-1) overflows at N={n}")
    sites = np.arange(1, n + 1)
    betas = params.kappa - 2.0 * params.coupling * np.cos(sites * np.pi / (n + 1))
    denominators = betas[:, None] + betas[None, :]
    if np.any(denominators <= 0):
        raise StabilityError(f"slowest rate {betas[0]:.6g} is not positive")
    phi = math.sqrt(2.0 / (n + 1)) * np.sin(np.outer(sites, sites) * np.pi / (n + 1))
    source = phi[s - 1, :]
    kernel = phi @ (np.outer(source, source) / denominators) @ phi.T
    envelope = np.exp((sites - s) * log_r)
    raw = strength * envelope[:, None] * kernel * envelope[None, :]
    X = build_hatano_nelson(params)
    Y = build_local_pump(n, s, strength)
    return _finish(raw, SPECTRAL, X.as_array(), Y.entries, {'spectrum': 'kernel'})


# ==================== Single slow mode ====================

def single_mode_approximation(spec: BiorthogonalSpectrum, s: int, strength: float,
                              mode: Optional[int] = None) -> SingleModeApproximation:
    """
    Rank-one steady state A_0(s) |R_0><R_0| of one dominant mode.

    Args:
        spec: Biorthogonal spectrum
        s: 1-based pump site
        strength: Pump strength Gamma
        mode: 1-based mode index; the slowest mode when omitted

    Raises:
        DarkSourceError: |L_0(s)| < 1e-14
    """
    _require_biorthogonal(spec)
    if not 1 <= s <= spec.dim:
        raise SiteIndexError(f"pump site {s} outside 1..{spec.dim}")
    if not strength > 0:
        raise ParameterError(f"pump strength must be positive, got {strength}")
    index = identify_slow_mode(spec) if mode is None else mode
    beta = spec.beta(index)
    if not beta.real > 0:
        raise StabilityError(f"mode {index} has rate {beta:.6g} with non-positive real part")
    amplitude = spec.left[s - 1, index - 1]
    if abs(amplitude) < DARK_SOURCE_TOL:
        raise DarkSourceError(f"pump site {s} sits on a node of left mode {index} (|L(s)| = {abs(amplitude):.3e})")
    loading = strength * abs(amplitude) ** 2 / (2.0 * beta.real)
    right = spec.right[:, index - 1]
    rank1 = SteadyCorrelator(loading * np.outer(right, right.conj()), method=SPECTRAL,
                             parameters={'mode': index, 'site': s})
    return SingleModeApproximation(rank1, float(loading), float(loading * np.vdot(right, right).real), index)


def single_mode_agreement(spec: BiorthogonalSpectrum, exact_nu_max: float, s: int,
                          strength: float) -> SingleModeAgreement:
    """
    Hold the slow-mode nu_max prediction against the exact leading occupation.

    Raises:
        DarkSourceError: the pump sits on a node of the slow left mode
        NormalizationError: exact_nu_max is not positive
    """
    if not exact_nu_max > 0:
        raise NormalizationError(f"exact nu_max {exact_nu_max!r} cannot serve as a reference")
    approximation = single_mode_approximation(spec, s, strength)
    bound = loading_factors(spec, s, strength).subleading_sum(approximation.mode_index)
    error = abs(approximation.predicted_nu_max - exact_nu_max) / exact_nu_max
    agreement = SingleModeAgreement(approximation.predicted_nu_max, float(exact_nu_max), float(error),
                                    float(bound), spectral_gap_ratio(spec))
    if not agreement.holds:
        logger.info("single-mode prediction off by %.3e against a loading bound of %.3e "
                    "(gap ratio %.3g)", error, bound, agreement.gap_ratio)
    return agreement


# ==================== Transients ====================

def propagate_correlator(X: RelaxationMatrix, Y: SourceMatrix, C0, t_final: float,
                         dt: Optional[float] = None, stride: int = 1) -> List[SteadyCorrelator]:
    """
    Fixed-step RK4 integration of dC/dt = -X C - C X^dagger + Y.

    Args:
        X: Stable relaxation matrix
        Y: Pump matrix
        C0: Initial Hermitian correlator
        t_final: End time (the step is shortened so the last step lands on it)
        dt: Step; defaults to 0.01 / max |beta|
        stride: Steps between stored snapshots; the final state is always stored

    Returns:
        Snapshots from t=0 to t_final, each symmetrized

    Raises:
        StepSizeError: dt beyond the RK4 stability limit, or divergence
    """
    _check_dims(X, Y)
    rates = check_stability(X)
    radius = float(np.max(np.abs(rates)))
    if dt is None:
        dt = 0.01 / radius
    if not dt > 0:
        raise ParameterError(f"dt must be positive, got {dt}")
    if t_final < 0:
        raise ParameterError(f"t_final must be nonnegative, got {t_final}")
    if stride < 1:
        raise ParameterError("stride must be at least 1")

    steps = int(math.ceil(t_final / dt - 1e-9)) if t_final > 0 else 0
    h = t_final / steps if steps else dt
    if h * radius > RK4_STABILITY_LIMIT:
        raise StepSizeError(f"dt={h:.3g} times spectral radius {radius:.3g} exceeds the RK4 limit")

    x, y = X.as_array(), _source_array(Y)
    xh = x.conj().T
    c = _initial(C0, X.dim)
    limit = DIVERGENCE_LIMIT * max(1.0, np.linalg.norm(c), np.linalg.norm(y) * max(t_final, 1.0))

    def rhs(m):
        return y - x @ m - m @ xh

    trajectory = [SteadyCorrelator(c, method=INTEGRATED, time=0.0)]
    for step in range(1, steps + 1):
        k1 = rhs(c)
        k2 = rhs(c + 0.5 * h * k1)
        k3 = rhs(c + 0.5 * h * k2)
        k4 = rhs(c + h * k3)
        c = c + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        c = 0.5 * (c + c.conj().T)
        if not np.all(np.isfinite(c)) or np.linalg.norm(c) > limit:
            raise StepSizeError(f"RK4 diverged at t={step * h:.6g}; reduce dt")
        if step % stride == 0 or step == steps:
            trajectory.append(SteadyCorrelator(c, method=INTEGRATED, time=step * h))
    logger.debug("propagated %d RK4 steps of %.3g to t=%.6g", steps, h, t_final)
    return trajectory


def _initial(C0, dim: int) -> np.ndarray:
    c = C0.entries if isinstance(C0, SteadyCorrelator) else np.asarray(C0, dtype=complex)
    if c.shape != (dim, dim):
        raise ParameterError(f"initial correlator has shape {c.shape}, expected {(dim, dim)}")
    if np.max(np.abs(c - c.conj().T), initial=0.0) > 1e-12:
        raise ParameterError("initial correlator is not Hermitian")
    return 0.5 * (c + c.conj().T)


def closed_form_correlator(spec: BiorthogonalSpectrum, Y: SourceMatrix, C0, t: float) -> SteadyCorrelator:
    """
    C(t) = e^{-Xt} C0 e^{-X^dagger t} + int_0^t e^{-Xu} Y e^{-X^dagger u} du in the eigenbasis.

    The source term has coefficients <L_m|Y|L_n> (1 - e^{-(beta_m + beta_n*) t}) / (beta_m + beta_n*);
    t = inf gives the steady state.
    """
    _require_biorthogonal(spec)
    c0 = _initial(C0, spec.dim)
    if t < 0:
        raise ParameterError(f"t must be nonnegative, got {t}")
    denominators = _denominators(spec)
    if t == 0:
        return SteadyCorrelator(c0, method=INTEGRATED, time=0.0)

    left_h = spec.left.conj().T
    source = left_h @ Y.entries @ spec.left
    if math.isinf(t):
        inner = source / denominators
    else:
        decay = np.exp(-spec.betas * t)
        transient = decay[:, None] * (left_h @ c0 @ spec.left) * decay.conj()[None, :]
        inner = transient - np.expm1(-denominators * t) / denominators * source
    return SteadyCorrelator(spec.right @ inner @ spec.right.conj().T, method=INTEGRATED, time=float(t))


# ==================== Solver agreement ====================

@dataclass(frozen=True)
class AgreementPoint:
    """
    Direct vs numeric-spectral comparison at one chain length.

    Attributes:
        n_sites: Chain length
        condition_estimate: Eigenvector condition number of the numeric spectrum
        relative_difference: |C_spectral - C_direct|_F / |C_direct|_F
        error: Failure message when the spectral route could not run
    """
    n_sites: int
    condition_estimate: float
    relative_difference: float
    error: Optional[str] = None

    CSV_HEADER = ('n_sites', 'condition_estimate', 'relative_difference')

    def csv_row(self) -> tuple:
        return (self.n_sites, self.condition_estimate, self.relative_difference)


def solver_agreement_curve(n_values: Sequence[int], t_right: float = 1.0, t_left: float = 0.17,
                           kappa: float = 0.91, strength: float = 0.03) -> List[AgreementPoint]:
    """
    Measure where the numeric spectral route stops agreeing with the direct route.

    The chain is pumped at its middle site; the spectrum is the plain numeric
    decomposition, not the similarity route.
    """
    points = []
    for n in n_values:
        params = HatanoNelsonParams(int(n), t_right, t_left, kappa)
        X = build_hatano_nelson(params)
        Y = build_local_pump(X.dim, max(1, (X.dim + 1) // 2), strength)
        direct = solve_lyapunov_direct(X, Y)
        try:
            spec = biorthogonal_decompose(X)
            spectral = solve_lyapunov_spectral(spec, Y, X)
        except SkinLockError as e:
            points.append(AgreementPoint(int(n), math.inf, math.nan, str(e)))
            continue
        difference = relative_difference(spectral.entries, direct.entries)
        if spec.condition_estimate >= 1e10:
            logger.info("N=%d: condition %.3e, direct/spectral difference %.3e",
                        n, spec.condition_estimate, difference)
        points.append(AgreementPoint(int(n), spec.condition_estimate, difference))
    return points
