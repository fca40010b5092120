"""
Inverse-design command: microscopic realization and local jump operators
for a target (X, Y).
"""

import logging
from typing import List

from ..errors import InfeasibilityError
from ..models import RunConfig
from ..services import Pipeline, check_jump_set, inverse_design, realize_hn, realize_ssh, validate_jump_set
from .base import open_writer

logger = logging.getLogger(__name__)

REALIZERS = {'hn': realize_hn, 'ssh': realize_ssh}


def cmd_inverse_design(config: RunConfig) -> List[str]:
    """
    Realize the configured target and validate its jump set.

    Built-in chains use the local jump decomposition; without a pump site
    they are pumped uniformly with the pump strength. A custom (X, Y) gets the
    formal realization only.

    Writes realization.json, and for built-in chains jumps.json and
    validation.json. An infeasible decomposition writes infeasibility.json
    with the per-site deficits before the error propagates.

    Raises:
        InfeasibilityError: no local decomposition, or Gamma^- not PSD
        ValidationFailure: the jump set does not rebuild the target
    """
    pipeline = Pipeline(config)
    writer = open_writer(config)
    Y = pipeline.source_matrix(default_uniform=True)

    realize = REALIZERS.get(config.model)
    if realize is None:
        realization = inverse_design(pipeline.relaxation_matrix(), Y)
        writer.write_json('realization.json', realization.to_dict())
        if not realization.is_physical:
            raise InfeasibilityError(
                f"Gamma^- has negative eigenvalue {realization.min_loss_eigenvalue:.6g}")
        print(f"physical realization, min eigenvalue of Gamma^- = {realization.min_loss_eigenvalue:.6g}")
        return writer.written

    params = config.hn if config.model == 'hn' else config.ssh
    try:
        realization = realize(params, pump=Y)
    except InfeasibilityError as e:
        writer.write_json('infeasibility.json', {'message': str(e), 'deficits': e.deficits})
        raise

    jumps = realization.jumps
    writer.write_json('realization.json', realization.to_dict())
    writer.write_json('jumps.json', jumps.to_dict())
    report = check_jump_set(jumps, realization)
    writer.write_json('validation.json', report.to_dict())
    if not report.passed:
        validate_jump_set(jumps, realization)
    print(f"{len(jumps.loss_vectors)} loss and {len(jumps.gain_vectors)} gain jumps; "
          f"max reconstruction error {report.max_error:.3e}")
    return writer.written
