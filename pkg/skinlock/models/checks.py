"""
Invariant check results for SkinLock validation runs.
"""

import math
from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class InvariantCheck:
    """
    One measured invariant.

    Attributes:
        name: What was checked
        value: Measured deviation
        tolerance: Largest accepted deviation; None for report-only entries
        detail: Optional note on a skipped check or the bound used
        strict: Require value < tolerance rather than <=
    """
    name: str
    value: float
    tolerance: Optional[float] = None
    detail: str = ""
    strict: bool = False

    @property
    def passed(self) -> bool:
        if self.tolerance is None:
            return True
        if self.strict:
            return math.isfinite(self.value) and self.value < self.tolerance
        return math.isfinite(self.value) and self.value <= self.tolerance

    def to_dict(self) -> dict:
        return {
            'name': self.name,
            'value': self.value,
            'tolerance': self.tolerance,
            'passed': self.passed,
            'detail': self.detail,
        }
