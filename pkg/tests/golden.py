"""
Frozen reference values for the SkinLock tests.

Quantities without a closed form are measured once and stored in
golden/values.json; later runs compare against the stored value. A key
missing from the store fails the test. Set SKINLOCK_RECORD_GOLDEN=1 to
write the current values into the store instead of comparing.
"""

import json
import os

GOLDEN_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'golden')
GOLDEN_PATH = os.path.join(GOLDEN_DIR, 'values.json')
ARTIFACT_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'artifacts')
RECORD_ENV = 'SKINLOCK_RECORD_GOLDEN'


def _load() -> dict:
    if not os.path.exists(GOLDEN_PATH):
        return {}
    with open(GOLDEN_PATH, 'r', encoding='utf-8') as f:
        return json.load(f)


def _store(values: dict) -> None:
    os.makedirs(GOLDEN_DIR, exist_ok=True)
    with open(GOLDEN_PATH, 'w', encoding='utf-8', newline='\n') as f:
        json.dump(values, f, indent=2, sort_keys=True)
        f.write("\n")


def _recording() -> bool:
    return os.environ.get(RECORD_ENV, '') not in ('', '0')


def check_golden(testcase, key: str, value: float, tolerance: float) -> None:
    """Assert value against the stored golden value, or record it when recording is enabled."""
    values = _load()
    if _recording():
        values[key] = float(value)
        _store(values)
        return
    if key not in values:
        testcase.fail(f"golden value {key!r} missing from {GOLDEN_PATH}; "
                      f"rerun with {RECORD_ENV}=1 to record it")
    testcase.assertLessEqual(abs(float(value) - values[key]), tolerance,
                             f"{key}: {value!r} drifted from golden {values[key]!r}")
