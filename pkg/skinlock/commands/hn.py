"""
Hatano-Nelson commands: steady-state profiles, the source-position scan
and the occupation spectrum.
"""

import logging
from typing import List

import numpy as np

from ..errors import DarkSourceError
from ..models import OccupationRow, ProfileRow, RunConfig, SourceScanRow
from ..services import (
    Pipeline, balanced_residual, hn_source_scan, loading_factors, single_mode_agreement,
    single_mode_approximation, source_scan_deviation, source_scan_peaks, spectral_gap_ratio,
)
from .base import argmax_site, as_model, open_writer

logger = logging.getLogger(__name__)


def _single_mode_summary(pipeline: Pipeline) -> dict:
    site = pipeline.pump_site
    if site is None:
        return {}
    spectrum = pipeline.spectrum()
    strength = pipeline.config.pump_strength
    loadings = loading_factors(spectrum, site, strength)
    summary = {
        'pump_site': site,
        'loadings_normalized': loadings.normalized,
        'subleading_loading_sum': loadings.subleading_sum(pipeline.diagnostics().mode_indices['slow']),
    }
    try:
        approximation = single_mode_approximation(spectrum, site, strength)
    except DarkSourceError as e:
        logger.warning("no single-mode prediction: %s", e)
        return summary
    agreement = single_mode_agreement(spectrum, pipeline.orbitals().nu_max, site, strength)
    summary['single_mode'] = {
        'mode_index': approximation.mode_index,
        'loading': approximation.loading,
        **agreement.to_dict(),
    }
    return summary


def cmd_hn_profiles(config: RunConfig) -> List[str]:
    """
    Steady-state profiles of a pumped Hatano-Nelson chain.

    Writes hn_profiles.csv (slow right mode, dominant orbital and density per
    site), hn_summary.json (rates, occupations, locking overlap, loadings),
    spectrum.json and correlator.json.
    """
    config = as_model(config, 'hn')
    pipeline = Pipeline(config)
    writer = open_writer(config)

    rows = pipeline.profile_rows()
    correlator = pipeline.steady_state()
    spectrum = pipeline.spectrum()
    report = pipeline.diagnostics()
    orbitals = pipeline.orbitals()

    writer.write_csv('hn_profiles.csv', ProfileRow.CSV_HEADER, rows)
    summary = {
        'betas': {'re': spectrum.betas.real, 'im': spectrum.betas.imag},
        'occupations': orbitals.occupations,
        'occupations_normalized': report.occupation_spectrum_normalized,
        'O1': report.overlaps['slow'],
        'slow_mode_index': report.mode_indices['slow'],
        'spectral_gap_ratio': spectral_gap_ratio(spectrum),
        'residual': correlator.residual,
        'balanced_residual': balanced_residual(pipeline.relaxation_matrix(), correlator,
                                               pipeline.source_matrix())[0],
        'locked': report.locked,
        'tie_indices': list(report.tie_indices),
        'argmax': {
            'R_slow_sq': argmax_site([row.r_slow_sq for row in rows]),
            'phi_max_sq': argmax_site([row.phi_max_sq for row in rows]),
            'density_norm': argmax_site([row.density_norm for row in rows]),
        },
    }
    summary.update(_single_mode_summary(pipeline))
    writer.write_json('hn_summary.json', summary)
    writer.write_json('spectrum.json', spectrum.to_dict())
    writer.write_json('correlator.json', correlator.to_dict(list(spectrum.labels)))
    print(f"O1 = {report.overlaps['slow']:.12g}, nu_max = {orbitals.nu_max:.12g}")
    return writer.written


def cmd_hn_source_scan(config: RunConfig) -> List[str]:
    """Leading occupation against the slow-mode loading as the pump moves along the chain."""
    config = as_model(config, 'hn')
    rows = hn_source_scan(config.hn, config.pump_strength, config.scan.sites, config.solver,
                          config.threads)
    writer = open_writer(config)
    writer.write_csv('source_scan.csv', SourceScanRow.CSV_HEADER, rows)
    peak_nu, peak_a1 = source_scan_peaks(rows)
    deviation = source_scan_deviation(rows)
    writer.write_json('source_scan.json', {
        'max_deviation': deviation,
        'argmax_nu_max': peak_nu,
        'argmax_A1': peak_a1,
        'peaks_agree': peak_nu == peak_a1,
    })
    print(f"max |nu_max_norm - A1_norm| = {deviation:.6e}; peaks at s={peak_nu} and s={peak_a1}")
    return writer.written


def cmd_hn_occupations(config: RunConfig) -> List[str]:
    config = as_model(config, 'hn')
    pipeline = Pipeline(config)
    rows = pipeline.occupation_rows()
    writer = open_writer(config)
    writer.write_csv('occupations.csv', OccupationRow.CSV_HEADER, rows)
    separation = float(1.0 - rows[1].nu_norm) if len(rows) > 1 else float(np.nan)
    print(f"nu_max = {rows[0].nu:.12g}, 1 - nu_2/nu_1 = {separation:.12g}")
    writer.write_json('occupations.json', {
        'nu_max': rows[0].nu,
        'separation': separation,
        'locked': pipeline.diagnostics().locked,
    })
    return writer.written
