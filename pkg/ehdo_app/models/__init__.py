"""
Domain models for the ehdo package.

Immutable values only; the services never mutate them.
"""

from .rate import RateFunction, LogRate, LOG_RATE
from .scenario import ScenarioInstance, PowerPolicy, RatePolicy, Trajectory
from .experiment import (
    ChannelModel,
    PolicyKind,
    ExperimentConfig,
    CellResult,
    CellGap,
    ExperimentResult,
)

__all__ = [
    "RateFunction",
    "LogRate",
    "LOG_RATE",
    "ScenarioInstance",
    "PowerPolicy",
    "RatePolicy",
    "Trajectory",
    "ChannelModel",
    "PolicyKind",
    "ExperimentConfig",
    "CellResult",
    "CellGap",
    "ExperimentResult",
]
