"""
Output files of one SkinLock run.

A RunWriter owns an output directory. Every file it writes carries the
toolkit version and the full run configuration: JSON files embed them as
top-level keys, CSV files as two leading '#' comment lines ahead of the
fixed header. No timestamps are written, so an identical configuration
reproduces byte-identical files.
"""

import csv
import json
import logging
import os
from typing import Iterable, List, Optional, Sequence

import numpy as np

from .. import __version__
from .matrix_io import dumps, to_jsonable

logger = logging.getLogger(__name__)

CSV_DIGITS = ".12g"


def format_cell(value) -> str:
    """CSV cell text: 12 significant digits for floats."""
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), CSV_DIGITS)
    return str(value)


class RunWriter:
    """
    Writes CSV and JSON outputs into one directory.

    Usage:
        writer = RunWriter("out", config.to_dict())
        writer.write_csv("source_scan.csv", SourceScanRow.CSV_HEADER, rows)
        writer.write_json("summary.json", {"O1": 0.99})
    """

    def __init__(self, out_dir: str, config: Optional[dict] = None):
        """
        Initialize the writer.

        Args:
            out_dir: Output directory, created if missing
            config: RunConfig.to_dict() embedded in every file
        """
        self.out_dir = out_dir
        self.config = config or {}
        self.written: List[str] = []
        self._ensure_directory_exists()

    def _ensure_directory_exists(self) -> None:
        if self.out_dir:
            os.makedirs(self.out_dir, exist_ok=True)

    def path(self, name: str) -> str:
        return os.path.join(self.out_dir, name)

    def _record(self, path: str) -> str:
        self.written.append(path)
        logger.info("wrote %s", path)
        return path

    def write_csv(self, name: str, header: Sequence[str], rows: Iterable) -> str:
        """
        Write a CSV file with a fixed header.

        Args:
            name: File name inside the output directory
            header: Column names
            rows: Objects with csv_row() or plain sequences

        Returns:
            Path of the written file
        """
        path = self.path(name)
        with open(path, 'w', encoding='utf-8', newline='') as f:
            f.write(f"# skinlock {__version__}\n")
            f.write("# config " + json.dumps(to_jsonable(self.config), separators=(',', ':')) + "\n")
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(header)
            for row in rows:
                cells = row.csv_row() if hasattr(row, 'csv_row') else row
                writer.writerow([format_cell(cell) for cell in cells])
        return self._record(path)

    def write_json(self, name: str, payload: dict) -> str:
        """Write a JSON object preceded by the version and config keys."""
        document = {'version': __version__, 'config': self.config}
        document.update(payload)
        path = self.path(name)
        with open(path, 'w', encoding='utf-8', newline='\n') as f:
            f.write(dumps(document))
        return self._record(path)


def read_csv_rows(path: str) -> List[dict]:
    """Rows of a RunWriter CSV as dicts of strings, comment lines skipped."""
    with open(path, 'r', encoding='utf-8', newline='') as f:
        lines = [line for line in f if not line.startswith('#')]
    return list(csv.DictReader(lines))
