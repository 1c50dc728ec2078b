"""
Reporting utilities (CSV tables, Excel, text) for ehdo.
"""

from .simple_text_report import (
    build_experiment_summary_text,
    build_oracle_summary_text,
    build_solution_summary_text,
    build_waterfill_summary_text,
    format_cell_progress,
)
from .excel_report import export_tables_to_excel
from .tables import experiment_table, frame_to_csv, oracle_table, slot_table, waterfill_table

__all__ = [
    "build_experiment_summary_text",
    "build_oracle_summary_text",
    "build_solution_summary_text",
    "build_waterfill_summary_text",
    "format_cell_progress",
    "export_tables_to_excel",
    "experiment_table",
    "frame_to_csv",
    "oracle_table",
    "slot_table",
    "waterfill_table",
]
