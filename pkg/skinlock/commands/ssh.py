"""
SSH commands: profiles at representative nonreciprocities and the
edge/slow crossover scan.
"""

import logging
from typing import List

from ..models import CrossoverRow, ProfileRow, RunConfig
from ..services import Pipeline, count_sign_changes, overlap, ssh_crossover_scan, ssh_edge_envelopes
from .base import argmax_site, as_model, open_writer

logger = logging.getLogger(__name__)


def profile_file_name(g: float) -> str:
    """ssh_profiles_g-0.25.csv, ssh_profiles_g+0.20.csv."""
    return f"ssh_profiles_g{g:+.2f}.csv"


def cmd_ssh_profiles(config: RunConfig) -> List[str]:
    """
    Profiles of the pumped SSH chain at each configured g.

    One CSV per g, plus ssh_profiles.json holding the edge and slow overlaps,
    the mode indices and the overlap of phi_max with the analytic right
    edge envelope.
    """
    config = as_model(config, 'ssh')
    writer = open_writer(config)
    base = Pipeline(config)
    points = []
    for g in config.scan.profile_g:
        pipeline = base.with_ssh_g(g)
        rows = pipeline.profile_rows()
        writer.write_csv(profile_file_name(g), ProfileRow.CSV_HEADER, rows)

        report = pipeline.diagnostics()
        right_envelope, _ = ssh_edge_envelopes(pipeline.config.ssh)
        points.append({
            'g': g,
            'O_edge': report.overlaps['edge'],
            'O_slow': report.overlaps['slow'],
            'edge_mode_index': report.mode_indices['edge'],
            'slow_mode_index': report.mode_indices['slow'],
            'edge_envelope_overlap': overlap(right_envelope, pipeline.orbitals().phi_max),
            'locked': report.locked,
            'argmax_phi_max_sq': argmax_site([row.phi_max_sq for row in rows]),
        })
        print(f"g={g:+.2f}: O_edge = {report.overlaps['edge']:.6g}, O_slow = {report.overlaps['slow']:.6g}")
    writer.write_json('ssh_profiles.json', {'points': points})
    return writer.written


def cmd_ssh_crossover(config: RunConfig) -> List[str]:
    """O_edge and O_slow over the g grid; failed points are kept as empty rows."""
    config = as_model(config, 'ssh')
    rows = ssh_crossover_scan(config.ssh, config.scan.g_grid(), config.pump_site, config.pump_strength,
                              config.solver, config.threads, config.edge_window)
    writer = open_writer(config)
    writer.write_csv('crossover.csv', CrossoverRow.CSV_HEADER, rows)
    changes = count_sign_changes(rows)
    writer.write_json('crossover.json', {
        'sign_changes': changes,
        'failures': [{'g': row.g, 'error': row.error} for row in rows if not row.ok],
    })
    print(f"{len(rows)} points, {changes} sign change(s) of O_edge - O_slow")
    return writer.written
