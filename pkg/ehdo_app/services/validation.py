"""
Feasibility checks for power policies.

Detects battery overdraw (energy causality), queue overdraw (data
causality) and negative powers. Infeasibility is reported, never raised.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import List

import numpy as np

from ..config.limits import FEASIBILITY_TOL
from ..errors import InputError
from ..models import PowerPolicy, RateFunction, ScenarioInstance
from .dynamics import check_policy_length


class ValidationSeverity(Enum):
    OK = "ok"
    WARNING = "warning"
    ERROR = "error"


@dataclass(slots=True)
class ValidationIssue:
    code: str
    severity: ValidationSeverity
    message: str
    slot: int | None = None
    value: float | None = None
    limit: float | None = None


@dataclass(slots=True)
class FeasibilityReport:
    """Per-slot verdicts; slot t is index t-1."""

    valid: bool
    battery_ok: np.ndarray
    queue_ok: np.ndarray
    power_ok: np.ndarray
    # RHS minus LHS of the cumulative constraints
    battery_slack: np.ndarray
    queue_slack: np.ndarray
    tol: float = FEASIBILITY_TOL
    issues: List[ValidationIssue] = field(default_factory=list)

    @property
    def has_errors(self) -> bool:
        return any(i.severity == ValidationSeverity.ERROR for i in self.issues)

    def battery_tight(self) -> np.ndarray:
        """Slots whose cumulative battery constraint holds with equality (within tol)."""
        return np.abs(self.battery_slack) <= self.tol

    def queue_tight(self) -> np.ndarray:
        return np.abs(self.queue_slack) <= self.tol


def _cumulative(values: np.ndarray) -> np.ndarray:
    # Extended-precision running sums, accumulated t = 1..T
    return np.cumsum(np.asarray(values, dtype=np.longdouble))


def check_feasibility(
    instance: ScenarioInstance,
    policy: PowerPolicy,
    rate: RateFunction,
    tol: float = FEASIBILITY_TOL,
) -> FeasibilityReport:
    """
    Check sum_{i<=t} p_i <= E0 + sum_{i<=t} H_i, sum_{i<=t} r(p_i) <= Q0 + sum_{i<=t} D_i
    and p_t >= 0, each up to tol, for every slot.
    """
    if tol < 0:
        raise InputError(f"tol must be nonnegative, got {tol}.")
    check_policy_length(instance, policy)
    p = policy.powers
    r = rate.rate(np.maximum(p, 0.0), instance.channel_gains)

    energy_rhs = instance.initial_energy + _cumulative(instance.energy_arrivals)
    data_rhs = instance.initial_queue + _cumulative(instance.data_arrivals)
    battery_slack = np.asarray(energy_rhs - _cumulative(p), dtype=float)
    queue_slack = np.asarray(data_rhs - _cumulative(r), dtype=float)

    battery_ok = battery_slack >= -tol
    queue_ok = queue_slack >= -tol
    power_ok = p >= -tol

    issues: List[ValidationIssue] = []
    for t in np.flatnonzero(~battery_ok):
        issues.append(
            ValidationIssue(
                code="BATTERY_OVERDRAW",
                severity=ValidationSeverity.ERROR,
                message=f"Slot {t + 1}: cumulative power exceeds harvested energy by {-battery_slack[t]:.3e}.",
                slot=int(t) + 1,
                value=float(-battery_slack[t]),
                limit=tol,
            )
        )
    for t in np.flatnonzero(~queue_ok):
        issues.append(
            ValidationIssue(
                code="QUEUE_OVERDRAW",
                severity=ValidationSeverity.ERROR,
                message=f"Slot {t + 1}: cumulative rate exceeds arrived data by {-queue_slack[t]:.3e}.",
                slot=int(t) + 1,
                value=float(-queue_slack[t]),
                limit=tol,
            )
        )
    for t in np.flatnonzero(~power_ok):
        issues.append(
            ValidationIssue(
                code="NEGATIVE_POWER",
                severity=ValidationSeverity.ERROR,
                message=f"Slot {t + 1}: power {p[t]:.3e} is negative.",
                slot=int(t) + 1,
                value=float(p[t]),
                limit=-tol,
            )
        )

    valid = bool(np.all(battery_ok) and np.all(queue_ok) and np.all(power_ok))
    return FeasibilityReport(
        valid=valid,
        battery_ok=battery_ok,
        queue_ok=queue_ok,
        power_ok=power_ok,
        battery_slack=battery_slack,
        queue_slack=queue_slack,
        tol=tol,
        issues=issues,
    )
