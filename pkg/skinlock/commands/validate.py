"""
Validation command: the invariant suite on a configured (X, Y).
"""

import logging
from typing import List

from ..errors import ValidationFailure
from ..models import RunConfig
from ..services import Pipeline
from .base import open_writer

logger = logging.getLogger(__name__)


def cmd_validate(config: RunConfig) -> List[str]:
    """
    Run every invariant check and write validation.json.

    X and Y come from custom_x / custom_y when given, otherwise from the
    configured model and pump.

    Raises:
        ValidationFailure: one or more checks failed (exit status 1)
    """
    if config.custom_x and config.model != 'custom-file':
        data = config.to_dict()
        data['model'] = 'custom-file'
        config = RunConfig.from_dict(data)
    pipeline = Pipeline(config)
    checks = pipeline.invariant_suite()
    writer = open_writer(config)
    failed = [check for check in checks if not check.passed]
    writer.write_json('validation.json', {
        'passed': not failed,
        'checks': [check.to_dict() for check in checks],
    })
    for check in checks:
        status = "ok" if check.passed else "FAILED"
        if check.tolerance is None:
            status = "info"
        print(f"{check.name:26s} {check.value:.3e}  {status}")
    if failed:
        worst = failed[0]
        raise ValidationFailure(f"{len(failed)} invariant check(s) failed: "
                                f"{', '.join(check.name for check in failed)}",
                                quantity=worst.name, deviation=worst.value)
    return writer.written
