"""
Exception types raised by the ehdo services.

Infeasible policies are not errors; they come back as reports.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(slots=True)
class EhdoError(Exception):
    message: str

    def __str__(self) -> str:  # pragma: no cover - trivial
        return self.message


@dataclass(slots=True)
class InputError(EhdoError):
    """Malformed instance, policy length mismatch, negative rate."""


@dataclass(slots=True)
class ParameterError(EhdoError):
    """Transform coefficients outside the convexity condition."""


@dataclass(slots=True)
class RangeError(EhdoError):
    """Rate too large for the inverse rate map to be evaluated."""


@dataclass(slots=True)
class ConfigError(EhdoError):
    """Experiment configuration violates a precondition."""


@dataclass(slots=True)
class OracleRefusal(EhdoError):
    """Grid search asked for a horizon it will not enumerate."""


@dataclass(slots=True)
class ConvergenceError(EhdoError):
    """Newton budget exhausted; carries the best iterate seen."""

    q: Any = None
    duals: Any = None
    residuals: Any = None
    iterations: int = 0
    details: dict = field(default_factory=dict)
