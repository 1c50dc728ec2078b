"""
Directional water-filling for throughput maximisation under energy causality.

Each slot is a column of width w_t standing on ground delta_t. Slot t
pours its harvested energy (E0 + H_1 for the first slot) into its own
column. Walls between slots let water flow right only, so a column
merges into the segment on its left whenever that segment stands higher.
Inside a segment the level nu solves sum_{delta_t < nu} w_t (nu - delta_t) = V
and the slot power is p_t = w_t (nu - delta_t)^+.

Weighted form (delay problem with a non-empty queue): w_t = T+1-t,
delta_t = 1/((T+1-t) g_t). Unweighted form: w_t = 1, delta_t = 1/g_t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List

import numpy as np

from ..config.limits import EPS
from ..errors import InputError
from ..models import PowerPolicy, ScenarioInstance
from .validation import ValidationIssue, ValidationSeverity


@dataclass(frozen=True, slots=True, eq=False)
class WaterTank:
    widths: np.ndarray
    grounds: np.ndarray
    inflows: np.ndarray

    @property
    def horizon(self) -> int:
        return int(self.widths.size)

    @property
    def volume(self) -> float:
        return math.fsum(self.inflows)

    @classmethod
    def from_instance(cls, instance: ScenarioInstance, weighted: bool = True) -> "WaterTank":
        widths = instance.weights if weighted else np.ones(instance.horizon)
        inflows = np.array(instance.energy_arrivals, dtype=float)
        inflows[0] += instance.initial_energy
        return cls(widths=widths, grounds=1.0 / (widths * instance.channel_gains), inflows=inflows)


@dataclass(slots=True)
class Segment:
    start: int
    stop: int
    volume: float
    level: float


@dataclass(slots=True)
class WaterLevels:
    """nu_t per slot; dry slots carry their ground level."""

    levels: np.ndarray
    dry: np.ndarray


@dataclass(slots=True)
class WaterFillResult:
    powers: PowerPolicy
    levels: WaterLevels
    tank: WaterTank
    segments: List[Segment] = field(default_factory=list)

    @property
    def depths(self) -> np.ndarray:
        return self.powers.powers / self.tank.widths


def solve_level(widths: np.ndarray, grounds: np.ndarray, volume: float) -> float:
    """
    Level nu with sum_{grounds < nu} widths * (nu - grounds) = volume.

    With no water the level is the lowest ground.
    """
    order = np.argsort(grounds, kind="stable")
    w = np.asarray(widths, dtype=float)[order]
    d = np.asarray(grounds, dtype=float)[order]
    if volume <= 0:
        return float(d[0])
    width_sum = 0.0
    weighted_ground = 0.0
    for k in range(d.size):
        width_sum += w[k]
        weighted_ground += w[k] * d[k]
        level = (volume + weighted_ground) / width_sum
        if k + 1 == d.size or level <= d[k + 1]:
            return float(level)
    raise AssertionError("unreachable")  # pragma: no cover


def _pour(tank: WaterTank, seg: Segment) -> float:
    s = slice(seg.start, seg.stop)
    return solve_level(tank.widths[s], tank.grounds[s], seg.volume)


def directional_water_filling(tank: WaterTank) -> WaterFillResult:
    stack: List[Segment] = []
    for t in range(tank.horizon):
        seg = Segment(start=t, stop=t + 1, volume=float(tank.inflows[t]), level=0.0)
        seg.level = _pour(tank, seg)
        while stack and stack[-1].level > seg.level:
            left = stack.pop()
            seg = Segment(start=left.start, stop=seg.stop, volume=left.volume + seg.volume, level=0.0)
            seg.level = _pour(tank, seg)
        stack.append(seg)

    powers = np.zeros(tank.horizon)
    for seg in stack:
        s = slice(seg.start, seg.stop)
        powers[s] = tank.widths[s] * np.maximum(seg.level - tank.grounds[s], 0.0)
    policy = PowerPolicy(powers=powers)
    return WaterFillResult(
        powers=policy,
        levels=_levels(policy.powers, tank),
        tank=tank,
        segments=stack,
    )


def _levels(powers: np.ndarray, tank: WaterTank) -> WaterLevels:
    dry = powers <= 0
    levels = tank.grounds + np.where(dry, 0.0, powers / tank.widths)
    return WaterLevels(levels=levels, dry=dry)


def weighted_dwf(instance: ScenarioInstance) -> WaterFillResult:
    """Unique maximiser of sum_t (T+1-t) log(1 + g_t p_t) under energy causality; D and Q0 are ignored."""
    return directional_water_filling(WaterTank.from_instance(instance, weighted=True))


def unweighted_dwf(instance: ScenarioInstance) -> WaterFillResult:
    """Throughput-maximising baseline: sum_t log(1 + g_t p_t), same walls."""
    return directional_water_filling(WaterTank.from_instance(instance, weighted=False))


def water_levels(instance: ScenarioInstance, policy: PowerPolicy, weighted: bool = True) -> WaterLevels:
    if len(policy) != instance.horizon:
        raise InputError(f"Policy has {len(policy)} slots but the scenario horizon is {instance.horizon}.")
    if np.any(policy.powers < 0):
        raise InputError("Water levels need nonnegative powers.")
    return _levels(policy.powers, WaterTank.from_instance(instance, weighted=weighted))


def dual_water_levels(instance: ScenarioInstance, battery_duals, bound_duals) -> np.ndarray:
    """
    nu_t = 1 / (T * (sum_{i>=t} lam_i - g_t eta_t)) from the multipliers of the
    throughput solve in rate space (objective scaled by 1/T, bounds on q).
    """
    lam = np.asarray(battery_duals, dtype=float)
    eta = np.asarray(bound_duals, dtype=float)
    tail = np.cumsum(lam[::-1])[::-1]
    return 1.0 / (instance.horizon * (tail - instance.channel_gains * eta))


@dataclass(slots=True)
class LevelCheck:
    passed: bool
    issues: List[ValidationIssue] = field(default_factory=list)


def verify_level_monotonicity(
    levels: WaterLevels | np.ndarray,
    policy: PowerPolicy,
    instance: ScenarioInstance,
    tol: float = 1e-8,
) -> LevelCheck:
    """
    Nondecreasing levels across consecutive wet slots; equal levels where the
    battery constraint after the first of the pair is slack by more than tol.
    """
    nu = np.asarray(getattr(levels, "levels", levels), dtype=float)
    T = instance.horizon
    if nu.size != T or len(policy) != T:
        raise InputError(f"Levels, policy and scenario must share horizon {T}.")
    wet = policy.powers > EPS
    slack = instance.energy_budget() - np.cumsum(policy.powers)

    issues: List[ValidationIssue] = []
    for t in range(T - 1):
        if not (wet[t] and wet[t + 1]):
            continue
        if nu[t + 1] < nu[t] - tol:
            issues.append(
                ValidationIssue(
                    code="LEVEL_DECREASE",
                    severity=ValidationSeverity.ERROR,
                    message=f"Level drops from slot {t + 1} ({nu[t]:.6g}) to slot {t + 2} ({nu[t + 1]:.6g}).",
                    slot=t + 1,
                    value=float(nu[t] - nu[t + 1]),
                    limit=tol,
                )
            )
        elif slack[t] > tol and abs(nu[t + 1] - nu[t]) > tol:
            issues.append(
                ValidationIssue(
                    code="LEVEL_STEP_AT_SLACK",
                    severity=ValidationSeverity.ERROR,
                    message=(
                        f"Battery is slack after slot {t + 1} but levels differ "
                        f"({nu[t]:.6g} vs {nu[t + 1]:.6g})."
                    ),
                    slot=t + 1,
                    value=float(abs(nu[t + 1] - nu[t])),
                    limit=tol,
                )
            )
    return LevelCheck(passed=not issues, issues=issues)
