"""
Inverse design of microscopic open systems for SkinLock.

Given a target pair (X, Y) the formal realization is

    h = (X - X^dagger) / 2i,   Gamma^+ = Y,   Gamma^- = X + X^dagger - Y,

which is physical when Gamma^- is positive semidefinite. The local jump
decompositions make Gamma^- explicit for the Hatano-Nelson and SSH chains
as bond losses sqrt(beta) (c_i - c_j) plus onsite losses, and Gamma^+ as
onsite pumps. A site's onsite loss weight is what remains of its diagonal
after the bonds touching it have taken their share:

    w_j = (2 kappa - y_j) - sum of beta over bonds at j

and the decomposition is feasible when every w_j >= 0.

Usage:
    realization = inverse_design(X, Y)
    jumps = hn_jump_decomposition(params, gamma=0.1)
    report = validate_jump_set(jumps, realization)
"""

import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import InfeasibilityError, ParameterError, ValidationFailure
from ..models import (
    GAIN, LOSS, HatanoNelsonParams, JumpSet, JumpValidationReport, JumpVector,
    MicroscopicRealization, RelaxationMatrix, SourceMatrix, SshParams,
)
from .lattice_models import build_diagonal_pump, build_hatano_nelson, build_ssh, ssh_labels

logger = logging.getLogger(__name__)

VALIDATION_TOL = 1e-12
# Residual onsite weights down to -FEASIBILITY_TOL * max(1, 2 kappa) count as zero.
FEASIBILITY_TOL = 1e-8

PumpLike = Union[SourceMatrix, Sequence[float], None]


def inverse_design(X: RelaxationMatrix, Y) -> MicroscopicRealization:
    """
    Formal realization of a target (X, Y).

    Args:
        X: Target relaxation matrix
        Y: Target pump, a SourceMatrix or a Hermitian PSD array

    Returns:
        Realization with Gamma^- positivity reported, not enforced

    Raises:
        ParameterError: Y is not Hermitian PSD, or dimensions differ
    """
    source = Y if isinstance(Y, SourceMatrix) else SourceMatrix(np.asarray(Y, dtype=complex))
    if source.dim != X.dim:
        raise ParameterError(f"X is {X.dim}x{X.dim} but Y is {source.dim}x{source.dim}")
    x = np.array(X.entries, dtype=complex)
    y = np.array(source.entries, dtype=complex)
    hamiltonian = (x - x.conj().T) / 2j
    loss = x + x.conj().T - y
    loss = 0.5 * (loss + loss.conj().T)
    min_loss = float(np.linalg.eigvalsh(loss)[0])
    realization = MicroscopicRealization(hamiltonian, y, loss, x, y, min_loss, labels=X.labels)
    if not realization.is_physical:
        logger.warning("target (X, Y) needs Gamma^- with negative eigenvalue %.3e; realization is unphysical",
                       min_loss)
    return realization


# ==================== Local decompositions ====================

def _pump_rates(dim: int, gamma: Optional[float], pump: PumpLike) -> np.ndarray:
    if (gamma is None) == (pump is None):
        raise ParameterError("give exactly one of a uniform gamma or a diagonal pump")
    if gamma is not None:
        if not gamma > 0:
            raise ParameterError(f"uniform pump gamma must be positive, got {gamma}")
        return np.full(dim, float(gamma))
    if isinstance(pump, SourceMatrix):
        entries = pump.entries
        if np.any(entries - np.diag(np.diagonal(entries))):
            raise ParameterError("local jump decompositions need a diagonal pump")
        rates = np.real(np.diagonal(entries)).copy()
    else:
        rates = np.real(np.diagonal(build_diagonal_pump(pump).entries)).copy()
    if rates.shape[0] != dim:
        raise ParameterError(f"pump has {rates.shape[0]} sites, chain has {dim}")
    return rates


def _local_jump_set(labels: Tuple[str, ...], bonds: List[Tuple[int, int, float]],
                    kappa: float, rates: np.ndarray) -> JumpSet:
    """
    Bond losses, onsite losses and onsite pumps for a chain.

    Args:
        labels: Site labels
        bonds: (i, j, beta) with 0-based sites; beta = 0 bonds are skipped
        kappa: Uniform damping shift
        rates: Pump rate y_j per site

    Raises:
        InfeasibilityError: some residual onsite weight is negative
    """
    dim = len(labels)
    tol = FEASIBILITY_TOL * max(1.0, 2.0 * kappa)
    weights = 2.0 * kappa - rates
    loss_vectors = []
    for i, j, beta in bonds:
        if beta == 0:
            continue
        weights[i] -= beta
        weights[j] -= beta
        vector = np.zeros(dim, dtype=complex)
        vector[i], vector[j] = math.sqrt(beta), -math.sqrt(beta)
        loss_vectors.append(JumpVector(f"bond({labels[i]},{labels[j]})", LOSS, vector))

    deficits: Dict[str, float] = {labels[j]: float(-w) for j, w in enumerate(weights) if w < -tol}
    if deficits:
        raise InfeasibilityError("local jump decomposition is infeasible: onsite loss weight below zero",
                                 deficits)
    clamped = {labels[j]: float(-w) for j, w in enumerate(weights) if w < 0}
    if clamped:
        logger.debug("clamped onsite weights within %.1e of zero at %s", tol, ", ".join(clamped))
    weights = np.maximum(weights, 0.0)

    for j in range(dim):
        vector = np.zeros(dim, dtype=complex)
        vector[j] = math.sqrt(weights[j])
        loss_vectors.append(JumpVector(f"onsite({labels[j]})", LOSS, vector))

    gain_vectors = []
    for j in range(dim):
        if rates[j] > 0:
            vector = np.zeros(dim, dtype=complex)
            vector[j] = math.sqrt(rates[j])
            gain_vectors.append(JumpVector(f"pump({labels[j]})", GAIN, vector))
    return JumpSet(loss_vectors, gain_vectors, labels, clamped)


def hn_jump_decomposition(params: HatanoNelsonParams, gamma: Optional[float] = None,
                          pump: PumpLike = None) -> JumpSet:
    """
    Local jumps for a Hatano-Nelson chain.

    Bond losses sqrt(t_R + t_L) (c_j - c_{j+1}) for j = 1..N-1, onsite losses
    sqrt(w_j) c_j and pumps sqrt(y_j) c_j^dagger. With a uniform pump the
    feasibility condition is 2 kappa - gamma >= 2 (t_R + t_L) for N >= 3.
    Zero hoppings are accepted here and give pure onsite losses.

    Args:
        params: Chain parameters
        gamma: Uniform pump rate
        pump: Diagonal pump (rates y_j or a diagonal SourceMatrix)

    Raises:
        InfeasibilityError: some onsite weight is negative; deficits per site
    """
    n = params.n_sites
    if int(n) != n or n < 1:
        raise ParameterError(f"n_sites must be a positive integer, got {n}")
    if params.t_right < 0 or params.t_left < 0:
        raise ParameterError(f"hoppings must be nonnegative, got t_R={params.t_right}, t_L={params.t_left}")
    if not math.isfinite(params.kappa):
        raise ParameterError("kappa must be finite")
    labels = tuple(str(j) for j in range(1, n + 1))
    beta = params.t_right + params.t_left
    bonds = [(j, j + 1, beta) for j in range(n - 1)]
    return _local_jump_set(labels, bonds, params.kappa, _pump_rates(n, gamma, pump))


def ssh_jump_decomposition(params: SshParams, gamma: Optional[float] = None,
                           pump: PumpLike = None) -> JumpSet:
    """
    Local jumps for a nonreciprocal SSH chain.

    Intracell bonds carry beta_1 = 2 t1 cosh g, intercell bonds
    beta_2 = 2 t2 cosh g. Under a uniform pump the feasibility condition is
    2 kappa - gamma >= beta_1 + beta_2 (N >= 2).
    """
    params.validate()
    labels = ssh_labels(params.n_cells)
    bonds = []
    for cell in range(params.n_cells):
        a = 2 * cell
        bonds.append((a, a + 1, params.intracell_bond))
        if cell < params.n_cells - 1:
            bonds.append((a + 1, a + 2, params.intercell_bond))
    return _local_jump_set(labels, bonds, params.kappa, _pump_rates(params.n_sites, gamma, pump))


def _attach(realization: MicroscopicRealization, jumps: JumpSet) -> MicroscopicRealization:
    realization.jumps = jumps
    return realization


def realize_hn(params: HatanoNelsonParams, gamma: Optional[float] = None,
               pump: PumpLike = None) -> MicroscopicRealization:
    """Realization of a Hatano-Nelson target together with its local jumps."""
    jumps = hn_jump_decomposition(params, gamma, pump)
    source = SourceMatrix(jumps.gain_gram())
    return _attach(inverse_design(build_hatano_nelson(params), source), jumps)


def realize_ssh(params: SshParams, gamma: Optional[float] = None,
                pump: PumpLike = None) -> MicroscopicRealization:
    """Realization of an SSH target together with its local jumps."""
    jumps = ssh_jump_decomposition(params, gamma, pump)
    source = SourceMatrix(jumps.gain_gram())
    return _attach(inverse_design(build_ssh(params), source), jumps)


# ==================== Validation ====================

def check_jump_set(jumps: JumpSet, realization: MicroscopicRealization,
                   tolerance: float = VALIDATION_TOL) -> JumpValidationReport:
    """
    Compare the Grams of a JumpSet, and the (X, Y) they rebuild, with a realization.

    Onsite weights clamped to zero by the decomposition widen the tolerance
    by the largest clamp.

    Raises:
        ParameterError: dimensions disagree
    """
    if jumps.dim != realization.dim:
        raise ParameterError(f"jump set acts on {jumps.dim} sites, realization on {realization.dim}")
    tolerance = tolerance + max(jumps.clamped.values(), default=0.0)
    loss = jumps.loss_gram()
    gain = jumps.gain_gram()
    rebuilt_x = 1j * realization.hamiltonian + 0.5 * (loss + gain)

    differences = [
        ('loss_gram', np.abs(loss - realization.loss_gram)),
        ('gain_gram', np.abs(gain - realization.gain_gram)),
        ('X', np.abs(rebuilt_x - realization.target_x)),
        ('Y', np.abs(gain - realization.target_y)),
    ]
    errors = {name: float(np.max(diff)) for name, diff in differences}
    worst_name, worst_diff = differences[0]
    for name, diff in differences[1:]:
        if np.max(diff) > np.max(worst_diff):
            worst_name, worst_diff = name, diff
    row, col = np.unravel_index(int(np.argmax(worst_diff)), worst_diff.shape)

    if worst_name == 'gain_gram' or worst_name == 'Y':
        candidates = jumps.gain_vectors
    elif worst_name == 'loss_gram':
        candidates = jumps.loss_vectors
    else:
        candidates = jumps.loss_vectors + jumps.gain_vectors
    suspects = tuple(jump.label for jump in candidates
                     if int(row) in jump.support and int(col) in jump.support)

    min_loss = float(np.linalg.eigvalsh(0.5 * (loss + loss.conj().T))[0]) if jumps.dim else 0.0
    return JumpValidationReport(
        loss_gram_error=errors['loss_gram'],
        gain_gram_error=errors['gain_gram'],
        x_error=errors['X'],
        y_error=errors['Y'],
        min_loss_eigenvalue=min_loss,
        worst_quantity=worst_name,
        worst_entry=(int(row), int(col)),
        suspects=suspects,
        tolerance=tolerance,
    )


def validate_jump_set(jumps: JumpSet, realization: MicroscopicRealization,
                      tolerance: float = VALIDATION_TOL) -> JumpValidationReport:
    """
    check_jump_set, raising when the comparison fails.

    Raises:
        ValidationFailure: a Gram or the rebuilt (X, Y) deviates beyond tolerance,
            or Gram(loss) has a negative eigenvalue
    """
    report = check_jump_set(jumps, realization, tolerance)
    if not report.passed:
        labels = realization.labels or tuple(str(j) for j in range(1, realization.dim + 1))
        row, col = report.worst_entry
        if report.max_error > tolerance:
            message = (f"{report.worst_quantity} deviates by {report.max_error:.3e} at "
                       f"({labels[row]}, {labels[col]})")
        else:
            message = f"loss Gram has negative eigenvalue {report.min_loss_eigenvalue:.3e}"
        if report.suspects:
            message += f"; suspect jump(s): {', '.join(report.suspects)}"
        raise ValidationFailure(message, report.worst_quantity, report.worst_entry, report.max_error)
    return report
