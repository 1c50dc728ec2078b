from __future__ import annotations

from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Dict, List, Tuple

from ..config.limits import (
    DEFAULT_E0,
    DEFAULT_MEAN_D,
    DEFAULT_MEAN_H,
    DEFAULT_Q0,
    DEFAULT_RUNS,
    DEFAULT_SEED,
    DEFAULT_T,
    INVERSION_TIE_TOL,
)
from ..errors import ConfigError


class ChannelModel(Enum):
    CONSTANT = "constant"
    NAKAGAMI2 = "nakagami2"


class PolicyKind(Enum):
    DELAY_MIN = "DM"
    THROUGHPUT_MAX = "TM"


@dataclass(frozen=True, slots=True)
class ExperimentConfig:
    horizon: int = DEFAULT_T
    initial_energy: float = DEFAULT_E0
    initial_queue: float = DEFAULT_Q0
    mean_energy: Tuple[float, ...] = DEFAULT_MEAN_H
    mean_data: Tuple[float, ...] = DEFAULT_MEAN_D
    runs: int = DEFAULT_RUNS
    seed: int = DEFAULT_SEED
    channel: ChannelModel = ChannelModel.CONSTANT
    policies: Tuple[PolicyKind, ...] = (PolicyKind.DELAY_MIN,)
    tie_tol: float = INVERSION_TIE_TOL
    # Count tied pairs as inversions (weak inversion number)
    count_ties: bool = False

    def __post_init__(self) -> None:
        if self.horizon < 1:
            raise ConfigError(f"T must be at least 1, got {self.horizon}.")
        if self.runs < 1:
            raise ConfigError(f"runs must be at least 1, got {self.runs}.")
        if self.initial_energy < 0 or self.initial_queue < 0:
            raise ConfigError("E0 and Q0 must be nonnegative.")
        if not self.mean_energy or not self.mean_data:
            raise ConfigError("Mean arrival grids must not be empty.")
        if any(m < 0 for m in self.mean_energy) or any(m < 0 for m in self.mean_data):
            raise ConfigError("Mean arrivals must be nonnegative.")
        if self.tie_tol < 0:
            raise ConfigError("tie_tol must be nonnegative.")

    def cells(self) -> List[Tuple[float, float]]:
        """(E[H], E[D]) pairs in output order: E[D] outer, E[H] inner."""
        return [(mh, md) for md in self.mean_data for mh in self.mean_energy]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "T": self.horizon,
            "E0": self.initial_energy,
            "Q0": self.initial_queue,
            "mean_H": list(self.mean_energy),
            "mean_D": list(self.mean_data),
            "runs": self.runs,
            "seed": self.seed,
            "channel": self.channel.value,
            "policies": [p.value for p in self.policies],
            "tie_tol": self.tie_tol,
            "count_ties": self.count_ties,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any], **overrides: Any) -> "ExperimentConfig":
        """Build from a JSON mapping; absent keys fall back to the reference setup."""
        kwargs: Dict[str, Any] = {}
        try:
            if "T" in data:
                kwargs["horizon"] = int(data["T"])
            if "E0" in data:
                kwargs["initial_energy"] = float(data["E0"])
            if "Q0" in data:
                kwargs["initial_queue"] = float(data["Q0"])
            if "mean_H" in data:
                kwargs["mean_energy"] = tuple(float(v) for v in data["mean_H"])
            if "mean_D" in data:
                kwargs["mean_data"] = tuple(float(v) for v in data["mean_D"])
            if "runs" in data:
                kwargs["runs"] = int(data["runs"])
            if "seed" in data:
                kwargs["seed"] = int(data["seed"])
            if "channel" in data:
                kwargs["channel"] = ChannelModel(data["channel"])
            if "policies" in data:
                kwargs["policies"] = tuple(PolicyKind(p) for p in data["policies"])
            if "tie_tol" in data:
                kwargs["tie_tol"] = float(data["tie_tol"])
            if "count_ties" in data:
                kwargs["count_ties"] = bool(data["count_ties"])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"Malformed experiment config: {exc}") from exc
        kwargs.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**kwargs)


@dataclass(slots=True)
class CellResult:
    """Aggregate of one (E[H], E[D], policy) cell; runs counts the values averaged."""

    mean_energy: float
    mean_data: float
    policy: str
    metric: str
    average: float
    stderr: float
    runs: int
    failed_runs: int = 0

    @property
    def flagged(self) -> bool:
        return self.failed_runs > 0


@dataclass(slots=True)
class CellGap:
    """Cell-average delay advantage L_TM - L_DM of the delay-minimising policy."""

    mean_energy: float
    mean_data: float
    gap: float

    @property
    def flagged(self) -> bool:
        # With harvested energy the advantage must be strictly positive
        return self.mean_energy > 0 and not self.gap > 0


@dataclass(slots=True)
class ExperimentResult:
    kind: str
    config: ExperimentConfig
    rng_algorithm: str
    cells: List[CellResult] = field(default_factory=list)
    # Per-run failure messages keyed "cell_index:run_index"
    failures: Dict[str, str] = field(default_factory=dict)
    # Per-run dominance violations (delay comparison only)
    dominance_violations: int = 0
    min_gap: float | None = None
    # Per-cell average gaps (delay comparison only)
    gaps: List[CellGap] = field(default_factory=list)

    @property
    def any_flagged(self) -> bool:
        return any(c.flagged for c in self.cells)

    @property
    def gap_violations(self) -> List[CellGap]:
        return [g for g in self.gaps if g.flagged]

    def rows(self) -> List[Dict[str, Any]]:
        """One CSV row per cell per policy."""
        return [
            {
                "E_H": c.mean_energy,
                "E_D": c.mean_data,
                "policy": c.policy,
                "metric": c.metric,
                "avg_metric": c.average,
                "stderr": c.stderr,
                "R": c.runs,
                "failed": c.failed_runs,
                "seed": self.config.seed,
            }
            for c in self.cells
        ]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "config": self.config.to_dict(),
            "rng_algorithm": self.rng_algorithm,
            "cells": [asdict(c) for c in self.cells],
            "failures": dict(self.failures),
            "dominance_violations": self.dominance_violations,
            "min_gap": self.min_gap,
            "gaps": [asdict(g) for g in self.gaps],
        }
