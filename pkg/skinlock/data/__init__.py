"""
SkinLock Data Layer

This module handles file formats and run outputs.
"""

from .matrix_io import (
    dumps, matrix_to_dict, read_jump_set, read_json, read_pump_rates, read_relaxation_matrix,
    read_source_matrix, to_jsonable, write_json,
)
from .run_writer import RunWriter, format_cell, read_csv_rows

__all__ = [
    'dumps', 'matrix_to_dict', 'read_jump_set', 'read_json', 'read_pump_rates',
    'read_relaxation_matrix', 'read_source_matrix', 'to_jsonable', 'write_json',
    'RunWriter', 'format_cell', 'read_csv_rows',
]
