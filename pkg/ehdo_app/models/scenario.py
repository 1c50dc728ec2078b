from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Dict, Sequence

import numpy as np

from ..errors import InputError


def _frozen_vector(values: Sequence[float] | np.ndarray, label: str) -> np.ndarray:
    """Copy into a read-only float64 vector, rejecting NaN/inf and non-1-D input."""
    try:
        arr = np.array(values, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{label} must be a sequence of numbers: {exc}") from exc
    if arr.ndim != 1:
        raise InputError(f"{label} must be one-dimensional, got shape {arr.shape}.")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{label} contains non-finite values.")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, slots=True, eq=False)
class ScenarioInstance:
    """
    One offline problem: horizon, initial battery and queue, per-slot energy
    arrivals H, data arrivals D and channel power gains g.

    Energy is in arbitrary energy units, data in nats.
    """

    initial_energy: float
    initial_queue: float
    energy_arrivals: np.ndarray
    data_arrivals: np.ndarray
    channel_gains: np.ndarray

    def __post_init__(self) -> None:
        H = _frozen_vector(self.energy_arrivals, "H")
        D = _frozen_vector(self.data_arrivals, "D")
        g = _frozen_vector(self.channel_gains, "g")
        object.__setattr__(self, "energy_arrivals", H)
        object.__setattr__(self, "data_arrivals", D)
        object.__setattr__(self, "channel_gains", g)

        T = H.size
        if T < 1:
            raise InputError("Horizon T must be at least 1.")
        if D.size != T or g.size != T:
            raise InputError(f"H, D and g must all have length T={T} (got D={D.size}, g={g.size}).")
        for label, value in (("E0", self.initial_energy), ("Q0", self.initial_queue)):
            if not math.isfinite(value) or value < 0:
                raise InputError(f"{label} must be a finite nonnegative number, got {value}.")
        if np.any(H < 0):
            raise InputError("Energy arrivals H must be nonnegative.")
        if np.any(D < 0):
            raise InputError("Data arrivals D must be nonnegative.")
        if np.any(g <= 0):
            raise InputError("Channel gains g must be strictly positive.")
        object.__setattr__(self, "initial_energy", float(self.initial_energy))
        object.__setattr__(self, "initial_queue", float(self.initial_queue))

    @property
    def horizon(self) -> int:
        return int(self.energy_arrivals.size)

    @property
    def weights(self) -> np.ndarray:
        """Delay weights T+1-t for t = 1..T."""
        T = self.horizon
        return np.arange(T, 0, -1, dtype=float)

    def energy_budget(self) -> np.ndarray:
        """E0 + sum_{i<=t} H_i for each t."""
        return self.initial_energy + np.cumsum(self.energy_arrivals)

    def data_budget(self) -> np.ndarray:
        """Q0 + sum_{i<=t} D_i for each t."""
        return self.initial_queue + np.cumsum(self.data_arrivals)

    def total_energy(self) -> float:
        return float(self.initial_energy + math.fsum(self.energy_arrivals))

    def with_initial_energy(self, initial_energy: float) -> "ScenarioInstance":
        return ScenarioInstance(
            initial_energy=initial_energy,
            initial_queue=self.initial_queue,
            energy_arrivals=self.energy_arrivals,
            data_arrivals=self.data_arrivals,
            channel_gains=self.channel_gains,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "T": self.horizon,
            "E0": self.initial_energy,
            "Q0": self.initial_queue,
            "H": self.energy_arrivals.tolist(),
            "D": self.data_arrivals.tolist(),
            "g": self.channel_gains.tolist(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ScenarioInstance":
        missing = [k for k in ("T", "E0", "Q0", "H", "D", "g") if k not in data]
        if missing:
            raise InputError(f"Scenario is missing keys: {', '.join(missing)}.")
        try:
            T = int(data["T"])
            instance = cls(
                initial_energy=float(data["E0"]),
                initial_queue=float(data["Q0"]),
                energy_arrivals=data["H"],
                data_arrivals=data["D"],
                channel_gains=data["g"],
            )
        except (TypeError, ValueError) as exc:
            raise InputError(f"Scenario has a malformed field: {exc}") from exc
        if instance.horizon != T:
            raise InputError(f"Scenario declares T={T} but its arrays have length {instance.horizon}.")
        return instance


@dataclass(frozen=True, slots=True, eq=False)
class PowerPolicy:
    """Transmit power p_t per slot."""

    powers: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "powers", _frozen_vector(self.powers, "p"))

    def __len__(self) -> int:
        return int(self.powers.size)


@dataclass(frozen=True, slots=True, eq=False)
class RatePolicy:
    """Per-slot rates q_t, the variables of the convex transformed problem."""

    rates: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "rates", _frozen_vector(self.rates, "q"))

    def __len__(self) -> int:
        return int(self.rates.size)


@dataclass(frozen=True, slots=True, eq=False)
class Trajectory:
    """Battery levels E[0..T] and queue lengths Q[0..T] induced by a policy."""

    energy: np.ndarray
    queue: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "energy", _frozen_vector(self.energy, "E"))
        object.__setattr__(self, "queue", _frozen_vector(self.queue, "Q"))
        if self.energy.size != self.queue.size:
            raise InputError("Battery and queue trajectories must have the same length.")

    @property
    def horizon(self) -> int:
        return int(self.queue.size) - 1
