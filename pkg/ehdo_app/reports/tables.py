"""
Tabular outputs as pandas DataFrames, with the column names the CSV files use.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
import pandas as pd

from ..models import LOG_RATE, PowerPolicy, RateFunction, ScenarioInstance
from ..services.dynamics import simulate_trajectory

if TYPE_CHECKING:
    from ..models import ExperimentResult
    from ..services.oracle import OracleBatch
    from ..services.waterfill import WaterFillResult


SLOT_COLUMNS = ["t", "H_t", "D_t", "g_t", "p_t", "r_t", "E_t", "Q_t"]
WATERFILL_COLUMNS = ["t", "w_t", "delta_t", "inflow", "p_t", "d_t", "nu_t", "dry"]
EXPERIMENT_COLUMNS = ["E_H", "E_D", "policy", "metric", "avg_metric", "stderr", "R", "failed", "seed"]


def slot_table(instance: ScenarioInstance, policy: PowerPolicy, rate: RateFunction = LOG_RATE) -> pd.DataFrame:
    """Per-slot arrivals, power, rate and the battery / queue levels after the slot."""
    traj = simulate_trajectory(instance, policy, rate)
    return pd.DataFrame(
        {
            "t": np.arange(1, instance.horizon + 1),
            "H_t": instance.energy_arrivals,
            "D_t": instance.data_arrivals,
            "g_t": instance.channel_gains,
            "p_t": policy.powers,
            "r_t": rate.rate(policy.powers, instance.channel_gains),
            "E_t": traj.energy[1:],
            "Q_t": traj.queue[1:],
        },
        columns=SLOT_COLUMNS,
    )


def waterfill_table(result: "WaterFillResult") -> pd.DataFrame:
    tank = result.tank
    return pd.DataFrame(
        {
            "t": np.arange(1, tank.horizon + 1),
            "w_t": tank.widths,
            "delta_t": tank.grounds,
            "inflow": tank.inflows,
            "p_t": result.powers.powers,
            "d_t": result.depths,
            "nu_t": result.levels.levels,
            "dry": result.levels.dry,
        },
        columns=WATERFILL_COLUMNS,
    )


def experiment_table(result: "ExperimentResult") -> pd.DataFrame:
    return pd.DataFrame(result.rows(), columns=EXPERIMENT_COLUMNS)


def oracle_table(batch: "OracleBatch") -> pd.DataFrame:
    return pd.DataFrame(
        [
            {
                "instance": c.index,
                "T": c.horizon,
                "solver": c.solver_value,
                "oracle": c.oracle_value,
                "bound": c.error_bound,
                "passed": c.passed,
            }
            for c in batch.checks
        ],
        columns=["instance", "T", "solver", "oracle", "bound", "passed"],
    )


def frame_to_csv(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, float_format="%.12g")
