"""
Parameter scans for SkinLock.

Two scans drive the locking study: moving a local pump along a
Hatano-Nelson chain (exact nu_max against the analytic slow-mode
loading A_1(s)), and sweeping the SSH nonreciprocity g while tracking
which mode the dominant natural orbital follows.

Scan points are independent and run through joblib with the threading
backend. Results come back in scan-index order.
"""

import logging
import math
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from joblib import Parallel, delayed

from ..errors import RegimeError, ScanPointError, SiteIndexError, SkinLockError
from ..models import (
    CrossoverRow, HatanoNelsonParams, ScanSpec, SourceScanRow, SshParams,
)
from .lattice_models import build_hatano_nelson, build_local_pump, build_ssh, ssh_index
from .orbitals import DEFAULT_EDGE_WINDOW, diagnose, natural_orbitals
from .spectral import check_stability, reference_spectrum
from .steady_state import solve_steady_state

logger = logging.getLogger(__name__)

DEFAULT_SSH_PUMP = (1, "A")


def _run_points(worker, points: Sequence, n_jobs: int) -> list:
    if n_jobs == 1 or len(points) < 2:
        return [worker(point) for point in points]
    return Parallel(n_jobs=n_jobs, backend="threading")(delayed(worker)(point) for point in points)


# ==================== Hatano-Nelson source scan ====================

def hn_slow_loading(params: HatanoNelsonParams, s: int, strength: float) -> float:
    """
    A_1(s) = Gamma r^(-2s) / (2 beta_1) * 2/(N+1) * sin^2(pi s/(N+1)).

    Evaluated in the log domain; underflows to 0.0 only for extreme N log r.
    """
    return math.exp(_log_slow_loading(params, s, strength))


def _log_slow_loading(params: HatanoNelsonParams, s: int, strength: float) -> float:
    n = params.n_sites
    beta_1 = params.kappa - 2.0 * params.coupling * math.cos(math.pi / (n + 1))
    sine = math.sin(math.pi * s / (n + 1))
    return (math.log(strength) - 2.0 * s * math.log(params.envelope_ratio) - math.log(2.0 * beta_1)
            + math.log(2.0 / (n + 1)) + 2.0 * math.log(abs(sine)))


def hn_source_scan(params: HatanoNelsonParams, strength: float = 0.03,
                   s_range: Optional[Sequence[int]] = None, solver: str = "direct",
                   n_jobs: int = 1) -> List[SourceScanRow]:
    """
    Move a local pump along a Hatano-Nelson chain.

    For each site s the exact steady state is solved and its leading
    occupation recorded next to the analytic slow-mode loading A_1(s);
    both columns are then normalized by their maximum over the scan.

    Args:
        params: Chain parameters
        strength: Pump strength Gamma
        s_range: 1-based pump sites; every site when omitted
        solver: 'direct' or 'spectral'
        n_jobs: Worker threads

    Returns:
        One row per site, in s_range order

    Raises:
        StabilityError: X is unstable
        ScanPointError: a point failed; the scan is aborted and the site reported
    """
    X = build_hatano_nelson(params)
    check_stability(X)
    sites = list(range(1, params.n_sites + 1)) if s_range is None else [int(s) for s in s_range]
    for s in sites:
        if not 1 <= s <= params.n_sites:
            raise SiteIndexError(f"pump site {s} outside 1..{params.n_sites}")
    spectrum = reference_spectrum(X) if solver == "spectral" else None

    def evaluate(s: int) -> Tuple[int, float, float]:
        try:
            C = solve_steady_state(X, build_local_pump(X.dim, s, strength), solver, spectrum)
            nu_max = natural_orbitals(C).nu_max
            return s, nu_max, _log_slow_loading(params, s, strength)
        except SkinLockError as e:
            raise ScanPointError(f"s={s}", e) from e

    results = _run_points(evaluate, sites, n_jobs)
    nu_peak = max(nu for _, nu, _ in results)
    log_peak = max(log_a for _, _, log_a in results)
    rows = [SourceScanRow(s, nu, math.exp(log_a), nu / nu_peak if nu_peak > 0 else math.nan,
                          math.exp(log_a - log_peak))
            for s, nu, log_a in results]
    logger.info("source scan over %d sites done; max |nu_norm - A1_norm| = %.3e",
                len(rows), source_scan_deviation(rows))
    return rows


def source_scan_deviation(rows: Sequence[SourceScanRow]) -> float:
    """max_s |nu_max_norm(s) - A1_norm(s)|."""
    return float(max(abs(row.nu_max_norm - row.a1_norm) for row in rows))


def source_scan_peaks(rows: Sequence[SourceScanRow]) -> Tuple[int, int]:
    """Pump sites maximizing nu_max and A_1."""
    best_nu = max(rows, key=lambda row: row.nu_max)
    best_a = max(rows, key=lambda row: row.a1_norm)
    return best_nu.s, best_a.s


# ==================== SSH crossover ====================

def _ssh_pump_index(n_cells: int, pump_site: Union[Tuple[int, str], str, int]) -> int:
    if isinstance(pump_site, tuple):
        return ssh_index(pump_site[0], pump_site[1], n_cells)
    if isinstance(pump_site, (int, np.integer)):
        index = int(pump_site)
    else:
        label = str(pump_site).strip()
        if not label[-1:].upper() in ("A", "B"):
            raise SiteIndexError(f"SSH site label {pump_site!r} needs a sublattice letter")
        try:
            cell = int(label[:-1])
        except ValueError:
            raise SiteIndexError(f"unknown SSH site {pump_site!r}") from None
        return ssh_index(cell, label[-1], n_cells)
    if not 1 <= index <= 2 * n_cells:
        raise SiteIndexError(f"pump site {index} outside 1..{2 * n_cells}")
    return index


def ssh_crossover_point(params: SshParams, pump_site=DEFAULT_SSH_PUMP, strength: float = 1e-8,
                        solver: str = "direct",
                        window_fraction: float = DEFAULT_EDGE_WINDOW) -> CrossoverRow:
    """Edge and slow overlaps of phi_max at one SSH parameter point."""
    X = build_ssh(params)
    check_stability(X)
    s = _ssh_pump_index(params.n_cells, pump_site)
    spectrum = reference_spectrum(X)
    C = solve_steady_state(X, build_local_pump(X.dim, s, strength), solver, spectrum)
    report = diagnose(C, spectrum, kappa=params.kappa, window_fraction=window_fraction)
    return CrossoverRow(params.g, report.overlaps['edge'], report.overlaps['slow'],
                        report.mode_indices['edge'], report.mode_indices['slow'])


def ssh_crossover_scan(base: SshParams, g_values: Optional[Sequence[float]] = None,
                       pump_site=DEFAULT_SSH_PUMP, strength: float = 1e-8, solver: str = "direct",
                       n_jobs: int = 1, window_fraction: float = DEFAULT_EDGE_WINDOW) -> List[CrossoverRow]:
    """
    Sweep the nonreciprocity g of an SSH chain.

    Points that fail are recorded with NaN overlaps and an error message;
    the scan continues.

    Args:
        base: Chain parameters; only g varies
        g_values: Grid; the default 24 points over [-0.55, 0.60] when omitted
        pump_site: (cell, sublattice), a label such as '1A', or a 1-based index
        strength: Pump strength Gamma
        solver: 'direct' or 'spectral'
        n_jobs: Worker threads
        window_fraction: Edge-candidate window

    Raises:
        RegimeError: t1 >= t2, where the edge candidate is undefined
    """
    base.validate()
    if not base.is_topological:
        raise RegimeError(f"crossover scan needs t1 < t2, got t1={base.t1}, t2={base.t2}")
    grid = ScanSpec().g_grid() if g_values is None else np.asarray(g_values, dtype=float)
    _ssh_pump_index(base.n_cells, pump_site)

    def evaluate(g: float) -> CrossoverRow:
        try:
            return ssh_crossover_point(base.with_g(g), pump_site, strength, solver, window_fraction)
        except SkinLockError as e:
            logger.warning("crossover point g=%g failed: %s", g, e)
            return CrossoverRow.failed(float(g), str(e))

    rows = _run_points(evaluate, [float(g) for g in grid], n_jobs)
    failures = sum(1 for row in rows if not row.ok)
    logger.info("crossover scan over %d g values done (%d failed, %d sign change(s))",
                len(rows), failures, count_sign_changes(rows))
    return rows


def count_sign_changes(rows: Sequence[CrossoverRow]) -> int:
    """Sign changes of O_edge - O_slow across successful rows; exact zeros are skipped."""
    signs = [np.sign(row.edge_minus_slow) for row in rows if row.ok and row.edge_minus_slow != 0]
    return int(sum(1 for a, b in zip(signs, signs[1:]) if a != b))
