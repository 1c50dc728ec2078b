"""
Run traceability: inputs, options, outputs, timestamp, package version.
"""

from __future__ import annotations

import platform
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Dict

import numpy as np

from .. import __version__


@dataclass(slots=True)
class RunSnapshot:
    """Provenance record written next to every output."""
    timestamp: datetime
    command: str
    inputs: Dict[str, Any] = field(default_factory=dict)
    options: Dict[str, Any] = field(default_factory=dict)
    outputs: Dict[str, Any] = field(default_factory=dict)
    summary: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "timestamp": self.timestamp.isoformat(),
            "command": self.command,
            "version": __version__,
            "python": platform.python_version(),
            "numpy": np.__version__,
            "inputs": self.inputs,
            "options": self.options,
            "outputs": self.outputs,
            "summary": self.summary,
        }


def create_snapshot(
    command: str,
    inputs: Dict[str, Any],
    options: Dict[str, Any],
    outputs: Dict[str, Any],
    residuals: object | None = None,
) -> RunSnapshot:
    """Build a snapshot; a residual report with `lines` adds a pass/fail summary."""
    summary = ""
    if residuals is not None and getattr(residuals, "lines", None):
        from .kkt import ResidualResult

        passed = sum(1 for ln in residuals.lines if ln.result == ResidualResult.PASS)
        failed = sum(1 for ln in residuals.lines if ln.result == ResidualResult.FAIL)
        summary = f"KKT: {passed} passed, {failed} failed"

    return RunSnapshot(
        timestamp=datetime.now(timezone.utc),
        command=command,
        inputs=dict(inputs),
        options=dict(options),
        outputs=dict(outputs),
        summary=summary,
    )
