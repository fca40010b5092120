"""
Oracle command: the full master equation against the correlator equation.
"""

from typing import List

from ..errors import ValidationFailure
from ..models import RunConfig
from ..services import oracle_check
from .base import open_writer


def cmd_oracle_check(config: RunConfig) -> List[str]:
    """
    Integrate the master equation of the configured oracle chain.

    Writes oracle.json and oracle_trajectory.csv (t, max deviation) and
    prints the largest trajectory deviation.

    Raises:
        ValidationFailure: the trajectory or its equation-of-motion residual
            deviates beyond tolerance
    """
    report = oracle_check(config.oracle)
    writer = open_writer(config)
    writer.write_json('oracle.json', report.to_dict())
    writer.write_csv('oracle_trajectory.csv', ('t', 'max_deviation'),
                     zip(report.compared_times, report.deviations))
    print(f"max trajectory deviation = {report.max_trajectory_deviation:.3e} "
          f"(EOM residual {report.eom_residual:.3e})")
    if not report.passed:
        quantity = ('trajectory' if report.max_trajectory_deviation > report.tolerance
                    else 'eom_residual')
        deviation = max(report.max_trajectory_deviation, report.eom_residual)
        raise ValidationFailure(f"oracle deviates by {deviation:.3e} (tolerance {report.tolerance:.0e})",
                                quantity=quantity, deviation=deviation)
    return writer.written
