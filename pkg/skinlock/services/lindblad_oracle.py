"""
Brute-force Lindblad master-equation oracle for SkinLock.

The correlator equation dC/dt = -X C - C X^dagger + Y is a reduction of
the full many-body master equation

    d rho/dt = -i[H, rho] + sum_L (L rho L^dagger - {L^dagger L, rho}/2)

with H = sum h_ij c_i^dagger c_j, loss jumps sum_j conj(u_j) c_j and gain
jumps sum_j v_j c_j^dagger. This module integrates that equation on the
full 2^N-dimensional Fock space for N <= 4 and reads C back out, which
makes it a ground truth for every correlator-level solver.

Fermion operators use the Jordan-Wigner construction in site order, site
1 being the most significant bit of the basis index.
"""

import logging
import math
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from ..errors import (
    ConvergenceError, DecompositionError, ParameterError, ScaleError, StabilityError, StepSizeError,
)
from ..models import (
    DensityMatrix, FockOperatorSet, JumpSet, MasterTrajectory, OracleReport, OracleSpec,
    RelaxationMatrix, SourceMatrix, SteadyCorrelator,
)
from .inverse_design import realize_hn
from .spectral import reference_spectrum
from .steady_state import closed_form_correlator, solve_lyapunov_direct

logger = logging.getLogger(__name__)

MAX_SITES = 4
CAR_TOL = 1e-14
TRACE_DRIFT_LIMIT = 1e-6
STEADY_BUDGET = 50.0
ORACLE_TOL = 1e-7

_ANNIHILATE = np.array([[0.0, 1.0], [0.0, 0.0]])
_PARITY = np.diag([1.0, -1.0])
_IDENTITY = np.eye(2)


# ==================== Fock space ====================

@lru_cache(maxsize=None)
def build_fock_operators(n_sites: int) -> FockOperatorSet:
    """
    Jordan-Wigner annihilation, creation and number operators.

    c_j = Z x ... x Z x a x I x ... x I with j-1 parity strings.

    Raises:
        ScaleError: n_sites > 4
        DecompositionError: anticommutation relations fail beyond 1e-14
    """
    if int(n_sites) != n_sites or n_sites < 1:
        raise ParameterError(f"n_sites must be a positive integer, got {n_sites}")
    if n_sites > MAX_SITES:
        raise ScaleError(f"master-equation oracle is capped at {MAX_SITES} sites, got {n_sites}")

    annihilators = []
    for j in range(n_sites):
        factors = [_PARITY] * j + [_ANNIHILATE] + [_IDENTITY] * (n_sites - j - 1)
        operator = factors[0]
        for factor in factors[1:]:
            operator = np.kron(operator, factor)
        annihilators.append(operator.astype(complex))
    creators = [c.conj().T for c in annihilators]
    numbers = [cd @ c for cd, c in zip(creators, annihilators)]
    ops = FockOperatorSet(n_sites, annihilators, creators, numbers)
    error = ops.car_error()
    if error > CAR_TOL:
        raise DecompositionError(f"Jordan-Wigner operators violate the anticommutation relations by {error:.3e}")
    return ops


def many_body_hamiltonian(h: np.ndarray, ops: FockOperatorSet) -> np.ndarray:
    """H = sum_ij h_ij c_i^dagger c_j."""
    h = np.asarray(h, dtype=complex)
    if h.shape != (ops.n_sites, ops.n_sites):
        raise ParameterError(f"h has shape {h.shape}, expected {(ops.n_sites, ops.n_sites)}")
    if np.max(np.abs(h - h.conj().T)) > 1e-12:
        raise ParameterError("single-particle Hamiltonian is not Hermitian")
    H = np.zeros((ops.hilbert_dim, ops.hilbert_dim), dtype=complex)
    for i in range(ops.n_sites):
        for j in range(ops.n_sites):
            if h[i, j] != 0:
                H += h[i, j] * ops.creators[i] @ ops.annihilators[j]
    return H


def jump_operators(jumps: JumpSet, ops: FockOperatorSet) -> List[np.ndarray]:
    """Loss jumps sum_j conj(u_j) c_j followed by gain jumps sum_j v_j c_j^dagger."""
    if jumps.dim != ops.n_sites:
        raise ParameterError(f"jump set acts on {jumps.dim} sites, Fock space has {ops.n_sites}")
    operators = []
    for jump in jumps.loss_vectors:
        operators.append(sum(np.conj(u) * c for u, c in zip(jump.vector, ops.annihilators)))
    for jump in jumps.gain_vectors:
        operators.append(sum(v * cd for v, cd in zip(jump.vector, ops.creators)))
    return operators


class LindbladGenerator:
    """
    Right-hand side of the master equation for fixed H and jumps.

    Usage:
        generator = LindbladGenerator(H, jump_ops)
        drho = generator(rho)
    """

    def __init__(self, H: np.ndarray, jump_ops: Sequence[np.ndarray]):
        self.H = np.asarray(H, dtype=complex)
        self.jumps = [np.asarray(L, dtype=complex) for L in jump_ops]
        self.jumps_dagger = [L.conj().T for L in self.jumps]
        dim = self.H.shape[0]
        self.decay = sum((Ld @ L for L, Ld in zip(self.jumps, self.jumps_dagger)),
                         np.zeros((dim, dim), dtype=complex))
        # rho -> -i H_eff rho + h.c. + jump terms, with H_eff = H - i decay/2
        self.effective = -1j * self.H - 0.5 * self.decay

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        drift = self.effective @ rho
        out = drift + drift.conj().T
        for L, Ld in zip(self.jumps, self.jumps_dagger):
            out += L @ rho @ Ld
        return out

    @property
    def rate_scale(self) -> float:
        """Upper bound on the generator's norm, used to pick default steps."""
        return 2.0 * float(np.linalg.norm(self.effective, 2)) + sum(
            float(np.linalg.norm(L, 2)) ** 2 for L in self.jumps)


def lindblad_rhs(rho: np.ndarray, H: np.ndarray, jump_ops: Sequence[np.ndarray]) -> np.ndarray:
    """-i[H, rho] + sum_L (L rho L^dagger - {L^dagger L, rho}/2)."""
    return LindbladGenerator(H, jump_ops)(np.asarray(rho, dtype=complex))


def _generator(h, jumps: JumpSet) -> Tuple[FockOperatorSet, LindbladGenerator]:
    ops = build_fock_operators(jumps.dim)
    return ops, LindbladGenerator(many_body_hamiltonian(h, ops), jump_operators(jumps, ops))


# ==================== Integration ====================

def _rk4_step(generator: LindbladGenerator, rho: np.ndarray, h: float) -> np.ndarray:
    k1 = generator(rho)
    k2 = generator(rho + 0.5 * h * k1)
    k3 = generator(rho + 0.5 * h * k2)
    k4 = generator(rho + h * k3)
    rho = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return 0.5 * (rho + rho.conj().T)


def evolve_master(rho0: DensityMatrix, h, jumps: JumpSet, t_final: float, dt: float,
                  stride: int = 1) -> MasterTrajectory:
    """
    Fixed-step RK4 integration of the master equation.

    Trace drift is logged and checked, never corrected.

    Args:
        rho0: Initial state
        h: Single-particle Hamiltonian (N x N, Hermitian)
        jumps: Loss and gain jump vectors
        t_final: End time; the step is shortened so the last step lands on it
        dt: Step
        stride: Steps between stored snapshots; the final state is always stored

    Raises:
        ScaleError: more than 4 sites
        StepSizeError: trace drift beyond 1e-6, or non-finite state
    """
    if not dt > 0:
        raise ParameterError(f"dt must be positive, got {dt}")
    if t_final < 0:
        raise ParameterError(f"t_final must be nonnegative, got {t_final}")
    if stride < 1:
        raise ParameterError("stride must be at least 1")
    ops, generator = _generator(h, jumps)
    if rho0.hilbert_dim != ops.hilbert_dim:
        raise ParameterError(f"initial state lives on {rho0.n_sites} sites, jumps on {ops.n_sites}")

    steps = int(math.ceil(t_final / dt - 1e-9)) if t_final > 0 else 0
    step = t_final / steps if steps else dt
    rho = np.array(rho0.entries, dtype=complex)
    times, states, drift = [0.0], [DensityMatrix(rho, check=False)], 0.0
    for k in range(1, steps + 1):
        rho = _rk4_step(generator, rho, step)
        trace_drift = abs(np.trace(rho) - 1.0)
        drift = max(drift, trace_drift)
        if not np.all(np.isfinite(rho)) or trace_drift > TRACE_DRIFT_LIMIT:
            raise StepSizeError(f"trace drifted by {trace_drift:.3e} at t={k * step:.6g}; reduce dt")
        if k % stride == 0 or k == steps:
            times.append(k * step)
            states.append(DensityMatrix(rho, check=False))
    logger.debug("master equation: %d RK4 steps of %.3g, max trace drift %.3e", steps, step, drift)
    return MasterTrajectory(times, states, drift)


def correlator_of(rho: DensityMatrix, ops: Optional[FockOperatorSet] = None) -> np.ndarray:
    """C_ij = Tr(rho c_j^dagger c_i), symmetrized."""
    ops = ops or build_fock_operators(rho.n_sites)
    if ops.hilbert_dim != rho.hilbert_dim:
        raise ParameterError(f"operators act on {ops.n_sites} sites, state on {rho.n_sites}")
    n = ops.n_sites
    C = np.empty((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            C[i, j] = np.trace(rho.entries @ ops.creators[j] @ ops.annihilators[i])
    return 0.5 * (C + C.conj().T)


def relaxation_from_jumps(h, jumps: JumpSet) -> Tuple[RelaxationMatrix, SourceMatrix]:
    """X = i h + (Gamma^- + Gamma^+)/2 and Y = Gamma^+ from explicit jumps."""
    gain = jumps.gain_gram()
    X = RelaxationMatrix(1j * np.asarray(h, dtype=complex) + 0.5 * (jumps.loss_gram() + gain), jumps.labels)
    return X, SourceMatrix(gain)


def steady_state_oracle(h, jumps: JumpSet, dt: Optional[float] = None, tol: float = 1e-12,
                        rho0: Optional[DensityMatrix] = None) -> DensityMatrix:
    """
    Long-time limit of the master equation.

    Integrates until max |d rho/dt| < tol, within a time budget of
    50 / min Re beta of the induced relaxation matrix.

    Raises:
        StabilityError: the induced X is not strictly stable
        ConvergenceError: not converged within the budget
    """
    X, _ = relaxation_from_jumps(h, jumps)
    slowest = float(np.min(np.linalg.eigvals(X.entries).real))
    if not slowest > 0:
        raise StabilityError(f"jumps induce a relaxation matrix with slowest rate {slowest:.6g}")
    ops, generator = _generator(h, jumps)
    step = dt if dt is not None else 0.1 / max(generator.rate_scale, 1e-12)
    budget = STEADY_BUDGET / slowest
    check_every = max(1, int(0.5 / (slowest * step)))

    rho = np.array((rho0 or DensityMatrix.vacuum(ops.n_sites)).entries, dtype=complex)
    t = 0.0
    while t <= budget:
        if float(np.max(np.abs(generator(rho)))) < tol:
            logger.debug("master equation converged at t=%.4g", t)
            return DensityMatrix(rho)
        for _ in range(check_every):
            rho = _rk4_step(generator, rho, step)
        t += check_every * step
        if not np.all(np.isfinite(rho)):
            raise StepSizeError(f"master equation diverged at t={t:.4g}; reduce dt")
    residual = float(np.max(np.abs(generator(rho))))
    raise ConvergenceError(f"master equation not stationary after t={budget:.4g} "
                           f"(max |d rho/dt| = {residual:.3e} > {tol:.1e})")


# ==================== Correlator cross-checks ====================

def eom_residual(times: Sequence[float], correlators: Sequence[np.ndarray],
                 X: RelaxationMatrix, Y: SourceMatrix) -> float:
    """
    max |dC/dt + X C + C X^dagger - Y| over the interior of a sampled trajectory.

    dC/dt comes from the five-point stencil
    (-C(t+2h) + 8 C(t+h) - 8 C(t-h) + C(t-2h)) / 12h on uniformly spaced samples.

    Raises:
        ParameterError: fewer than five samples or non-uniform spacing
    """
    t = np.asarray(times, dtype=float)
    if t.shape[0] < 5 or len(correlators) != t.shape[0]:
        raise ParameterError("the five-point stencil needs at least five samples, one correlator each")
    spacing = np.diff(t)
    h = float(spacing[0])
    if not h > 0 or np.max(np.abs(spacing - h)) > 1e-9 * max(1.0, h):
        raise ParameterError("trajectory samples must be uniformly spaced")
    x = X.entries
    xh = x.conj().T
    y = Y.entries
    stack = np.asarray(correlators, dtype=complex)
    worst = 0.0
    for k in range(2, t.shape[0] - 2):
        derivative = (-stack[k + 2] + 8.0 * stack[k + 1] - 8.0 * stack[k - 1] + stack[k - 2]) / (12.0 * h)
        c = stack[k]
        worst = max(worst, float(np.max(np.abs(derivative + x @ c + c @ xh - y))))
    return worst


def steady_state_deviation(h, jumps: JumpSet, C) -> float:
    """max |C(rho_ss) - C| between the master-equation steady state and a correlator."""
    rho_ss = steady_state_oracle(h, jumps)
    reference = C.entries if isinstance(C, SteadyCorrelator) else np.asarray(C, dtype=complex)
    oracle = correlator_of(rho_ss, build_fock_operators(jumps.dim))
    if reference.shape != oracle.shape:
        raise ParameterError(f"correlator has shape {reference.shape}, expected {oracle.shape}")
    return float(np.max(np.abs(oracle - reference)))


def oracle_check(spec: OracleSpec, steady_state: bool = True) -> OracleReport:
    """
    Compare the master equation with the correlator equation on a realized chain.

    The chain of ``spec`` is realized with a uniform pump, started from a
    Fock state and integrated with RK4; its correlator is compared with
    the closed-form transient at every ``stride``-th step, and the sampled
    trajectory is checked against the correlator equation of motion.
    Optionally the master-equation steady state is compared with the
    direct Lyapunov solution.

    Raises:
        InfeasibilityError: the chain admits no local realization
    """
    realization = realize_hn(spec.chain, gamma=spec.gamma)
    jumps = realization.jumps
    ops = build_fock_operators(jumps.dim)
    if len(spec.initial_occupations) != ops.n_sites:
        raise ParameterError(f"initial occupations {spec.initial_occupations} do not match "
                             f"{ops.n_sites} sites")
    rho0 = DensityMatrix.fock_state(spec.initial_occupations)
    trajectory = evolve_master(rho0, realization.hamiltonian, jumps, spec.t_final, spec.dt, stride=1)
    correlators = [correlator_of(state, ops) for state in trajectory.states]

    X, Y = relaxation_from_jumps(realization.hamiltonian, jumps)
    spectrum = reference_spectrum(X)
    c0 = correlators[0]
    compared, deviations = [], []
    last = len(trajectory) - 1
    for k in range(0, len(trajectory), spec.stride):
        compared.append(trajectory.times[k])
        exact = closed_form_correlator(spectrum, Y, c0, trajectory.times[k]).entries
        deviations.append(float(np.max(np.abs(correlators[k] - exact))))
    if last % spec.stride:
        compared.append(trajectory.times[last])
        exact = closed_form_correlator(spectrum, Y, c0, trajectory.times[last]).entries
        deviations.append(float(np.max(np.abs(correlators[last] - exact))))

    residual = eom_residual(trajectory.times, correlators, X, Y) if len(trajectory) >= 5 else 0.0

    steady_deviation = None
    if steady_state:
        steady_deviation = steady_state_deviation(realization.hamiltonian, jumps, solve_lyapunov_direct(X, Y))

    report = OracleReport(ops.n_sites, max(deviations), residual, steady_deviation,
                          trajectory.max_trace_drift, compared, deviations, ORACLE_TOL)
    logger.info("oracle N=%d: max trajectory deviation %.3e, EOM residual %.3e, steady-state deviation %s",
                ops.n_sites, report.max_trajectory_deviation, report.eom_residual,
                "n/a" if steady_deviation is None else f"{steady_deviation:.3e}")
    return report


def matrix_exponential_reference(X: RelaxationMatrix, Y: SourceMatrix, C0, t: float) -> np.ndarray:
    """C(t) from e^{-Xt} and the augmented-matrix integral; independent of any eigenbasis."""
    x = X.entries
    dim = X.dim
    propagator = scipy.linalg.expm(-x * t)
    # Van Loan block form: exp([[-X, Y], [0, X^dagger]] t) holds int e^{-Xu} Y e^{-X^dagger u} du e^{X^dagger t}
    block = np.zeros((2 * dim, 2 * dim), dtype=complex)
    block[:dim, :dim] = -x
    block[:dim, dim:] = Y.entries
    block[dim:, dim:] = x.conj().T
    exp_block = scipy.linalg.expm(block * t)
    integral = exp_block[:dim, dim:] @ propagator.conj().T
    c0 = np.asarray(C0, dtype=complex)
    return propagator @ c0 @ propagator.conj().T + integral
