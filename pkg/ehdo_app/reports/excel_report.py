"""
Excel workbook export: a summary sheet plus one sheet per table.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any, Dict

import pandas as pd


def export_tables_to_excel(
    filepath: Path,
    summary: Dict[str, Any],
    tables: Dict[str, pd.DataFrame],
) -> None:
    """
    Write `summary` as a Parameter/Value sheet, then each table on its own sheet.
    """
    df = pd.DataFrame({"Parameter": list(summary.keys()), "Value": [str(v) for v in summary.values()]})
    with pd.ExcelWriter(str(filepath), engine="openpyxl") as writer:
        df.to_excel(writer, sheet_name="Summary", index=False)
        writer.sheets["Summary"].column_dimensions["A"].width = 24
        writer.sheets["Summary"].column_dimensions["B"].width = 40
        for name, table in tables.items():
            # Excel caps sheet names at 31 characters
            sheet = name[:31]
            table.to_excel(writer, sheet_name=sheet, index=False)
