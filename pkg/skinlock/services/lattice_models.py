"""
Lattice builders for SkinLock.

Provides the relaxation matrices of the Hatano-Nelson and nonreciprocal
SSH chains, pump matrices, and the SSH site-indexing convention. All
public site indices are 1-based; the SSH basis is interleaved
(1A, 1B, 2A, 2B, ...).
"""

import logging
import math
from typing import Optional, Sequence, Union

import numpy as np

from ..errors import ParameterError, SiteIndexError
from ..models import HatanoNelsonParams, RelaxationMatrix, SourceMatrix, SshParams

logger = logging.getLogger(__name__)

SUBLATTICES = ("A", "B")


def build_hatano_nelson(params: HatanoNelsonParams) -> RelaxationMatrix:
    """
    Build X = kappa I - t_R (subdiagonal shift) - t_L (superdiagonal shift).

    Args:
        params: Chain parameters

    Returns:
        Real relaxation matrix with labels "1".."N"
    """
    params.validate()
    n = params.n_sites
    entries = params.kappa * np.eye(n)
    if n > 1:
        entries -= params.t_right * np.eye(n, k=-1)
        entries -= params.t_left * np.eye(n, k=1)
    if not params.is_stable:
        logger.warning("kappa=%g <= 2 sqrt(t_R t_L)=%g: Hatano-Nelson chain is not guaranteed stable",
                       params.kappa, 2.0 * params.coupling)
    return RelaxationMatrix(entries, tuple(str(j) for j in range(1, n + 1)))


def ssh_labels(n_cells: int):
    return tuple(f"{cell}{sub}" for cell in range(1, n_cells + 1) for sub in SUBLATTICES)


def build_ssh(params: SshParams) -> RelaxationMatrix:
    """
    Build the 2N x 2N nonreciprocal SSH relaxation matrix.

    Rightward hoppings carry e^{+g}: X[nB, nA] = -t1 e^g, X[nA, nB] = -t1 e^-g,
    X[(n+1)A, nB] = -t2 e^g, X[nB, (n+1)A] = -t2 e^-g.
    """
    params.validate()
    dim = params.n_sites
    forward, backward = math.exp(params.g), math.exp(-params.g)
    entries = params.kappa * np.eye(dim)
    for cell in range(1, params.n_cells + 1):
        a = ssh_index(cell, "A", params.n_cells) - 1
        b = a + 1
        entries[b, a] = -params.t1 * forward
        entries[a, b] = -params.t1 * backward
        if cell < params.n_cells:
            next_a = b + 1
            entries[next_a, b] = -params.t2 * forward
            entries[b, next_a] = -params.t2 * backward
    return RelaxationMatrix(entries, ssh_labels(params.n_cells))


def ssh_index(cell: int, sublattice: str, n_cells: Optional[int] = None) -> int:
    """
    1-based linear index of an SSH site.

    Args:
        cell: 1-based unit cell
        sublattice: 'A' or 'B'
        n_cells: Chain length; when given, the cell is range-checked

    Returns:
        2(cell-1)+1 for A, 2(cell-1)+2 for B
    """
    sublattice = str(sublattice).upper()
    if sublattice not in SUBLATTICES:
        raise ParameterError(f"sublattice must be 'A' or 'B', got {sublattice!r}")
    if cell < 1 or (n_cells is not None and cell > n_cells):
        raise SiteIndexError(f"cell {cell} outside 1..{n_cells}")
    return 2 * (cell - 1) + (1 if sublattice == "A" else 2)


def resolve_site(matrix: RelaxationMatrix, site: Union[int, str]) -> int:
    """1-based index of a site given as an index or a label such as '15' or '1A'."""
    if isinstance(site, (int, np.integer)):
        index = int(site)
    elif str(site) in matrix.labels:
        index = matrix.labels.index(str(site)) + 1
    else:
        try:
            index = int(str(site))
        except ValueError:
            raise SiteIndexError(f"unknown site {site!r}") from None
    if not 1 <= index <= matrix.dim:
        raise SiteIndexError(f"site {site!r} outside 1..{matrix.dim}")
    return index


def build_local_pump(dim: int, s: int, strength: float) -> SourceMatrix:
    """Y = Gamma |s><s|."""
    if dim < 1:
        raise ParameterError(f"dim must be positive, got {dim}")
    if not 1 <= s <= dim:
        raise SiteIndexError(f"pump site {s} outside 1..{dim}")
    if not strength > 0:
        raise ParameterError(f"pump strength must be positive, got {strength}")
    entries = np.zeros((dim, dim))
    entries[s - 1, s - 1] = strength
    return SourceMatrix(entries)


def build_diagonal_pump(y: Sequence[float]) -> SourceMatrix:
    """Y = diag(y) for nonnegative site rates y_j."""
    rates = np.asarray(y, dtype=float).reshape(-1)
    if rates.size == 0:
        raise ParameterError("diagonal pump needs at least one site")
    if np.any(rates < 0) or not np.all(np.isfinite(rates)):
        raise ParameterError(f"diagonal pump rates must be finite and nonnegative, got {rates.tolist()}")
    return SourceMatrix(np.diag(rates))


def build_custom(entries, labels: Sequence[str] = ()) -> RelaxationMatrix:
    """Wrap a user-supplied matrix."""
    return RelaxationMatrix(np.asarray(entries, dtype=complex), tuple(labels))
