"""
Brute-force lattice search for tiny horizons.

Ground truth for the barrier solver and the water-filling routine. The
first T-1 coordinates are enumerated in lexicographic order; the last one
is taken as the largest lattice value the remaining budgets allow, since
both objectives improve strictly in it.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterator, List, Sequence

import numpy as np

from ..config.limits import ORACLE_MAX_T
from ..errors import EhdoError, InputError, OracleRefusal
from ..models import LOG_RATE, RateFunction, ScenarioInstance
from .dynamics import objective_constant

logger = logging.getLogger(__name__)

# Lattice size above which a slow sweep is logged
_LARGE_SWEEP = 10**8


@dataclass(frozen=True, slots=True)
class GridSpec:
    points: int = 2001

    def __post_init__(self) -> None:
        if self.points < 2:
            raise InputError(f"A lattice needs at least 2 points per axis, got {self.points}.")


@dataclass(slots=True)
class OracleResult:
    best: np.ndarray
    value: float
    error_bound: float
    spacing: float


def _check_horizon(instance: ScenarioInstance) -> int:
    T = instance.horizon
    if T > ORACLE_MAX_T:
        raise OracleRefusal(f"Grid search is limited to T <= {ORACLE_MAX_T}; got T={T}.")
    return T


def _axis(upper: float, grid: GridSpec) -> tuple[np.ndarray, float]:
    if not np.isfinite(upper):
        raise InputError("Lattice domain must be finite.")
    return np.linspace(0.0, upper, grid.points), upper / (grid.points - 1)


def _prefix_blocks(n: int, dims: int) -> Iterator[np.ndarray]:
    """Lattice indices of the first `dims` coordinates, (dims, M) blocks in lexicographic order."""
    if dims == 0:
        yield np.zeros((0, 1), dtype=np.intp)
        return
    if dims == 1:
        yield np.arange(n)[None, :]
        return
    tail = np.indices((n,) * (dims - 1)).reshape(dims - 1, -1)
    for head in range(n):
        yield np.vstack([np.full(tail.shape[1], head, dtype=np.intp), tail])


def _warn_if_large(n: int, T: int) -> None:
    if n ** max(T - 1, 0) > _LARGE_SWEEP:
        logger.warning("Lattice sweep over %d^%d prefixes; this will be slow.", n, T - 1)


def grid_search_delay(
    instance: ScenarioInstance,
    rate: RateFunction = LOG_RATE,
    grid: GridSpec | None = None,
) -> OracleResult:
    """
    Best average queue length over the q-lattice [0, Q0 + sum D]^T.

    Flooring the true optimum to the lattice stays feasible and costs at most
    sum_t (T+1-t)/T * h over slots with a nonzero budget, which never exceeds
    max_t (T+1-t)/T * h * T; that sum is the reported error_bound.
    """
    grid = grid or GridSpec()
    T = _check_horizon(instance)
    n = grid.points
    _warn_if_large(n, T)
    axis, h = _axis(float(instance.data_budget()[-1]), grid)
    g = instance.channel_gains
    power = np.vstack([rate.inverse(axis, g[t]) for t in range(T)])
    energy_rhs = instance.energy_budget()
    data_rhs = instance.data_budget()
    cost = -instance.weights / T
    c0 = objective_constant(instance)

    best_idx: np.ndarray | None = None
    best_value = np.inf
    for idx in _prefix_blocks(n, T - 1):
        P = idx.shape[0]
        spent = np.cumsum(power[np.arange(P)[:, None], idx], axis=0)
        sent = np.cumsum(axis[idx], axis=0)
        ok = np.all(spent <= energy_rhs[:P, None], axis=0) & np.all(sent <= data_rhs[:P, None], axis=0)
        room_e = energy_rhs[-1] - (spent[-1] if P else np.zeros(idx.shape[1]))
        room_d = data_rhs[-1] - (sent[-1] if P else np.zeros(idx.shape[1]))
        last = np.minimum(
            np.searchsorted(power[-1], room_e, side="right"),
            np.searchsorted(axis, room_d, side="right"),
        ) - 1
        ok &= last >= 0
        if not np.any(ok):
            continue
        values = c0 + cost[:P] @ axis[idx] + cost[-1] * axis[np.maximum(last, 0)]
        values = np.where(ok, values, np.inf)
        j = int(np.argmin(values))
        if values[j] < best_value:
            best_value = float(values[j])
            best_idx = np.append(idx[:, j], last[j])

    if best_idx is None:  # pragma: no cover - q = 0 is always on the lattice and feasible
        raise EhdoError("No feasible lattice point.")
    # Slots with an empty energy or data budget are pinned to the lattice point 0
    open_slots = (energy_rhs > 0) & (data_rhs > 0)
    bound = float(np.sum(instance.weights[open_slots]) / T * h)
    return OracleResult(best=axis[best_idx], value=best_value, error_bound=bound, spacing=h)


def grid_search_weighted_throughput(
    instance: ScenarioInstance,
    grid: GridSpec | None = None,
) -> OracleResult:
    """Best sum_t (T+1-t) log(1 + g_t p_t) over the p-lattice [0, E0 + sum H]^T."""
    grid = grid or GridSpec()
    T = _check_horizon(instance)
    n = grid.points
    _warn_if_large(n, T)
    axis, h = _axis(instance.total_energy(), grid)
    w = instance.weights
    g = instance.channel_gains
    gain = np.vstack([w[t] * np.log1p(g[t] * axis) for t in range(T)])
    energy_rhs = instance.energy_budget()

    best_idx: np.ndarray | None = None
    best_value = -np.inf
    for idx in _prefix_blocks(n, T - 1):
        P = idx.shape[0]
        spent = np.cumsum(axis[idx], axis=0)
        ok = np.all(spent <= energy_rhs[:P, None], axis=0)
        room = energy_rhs[-1] - (spent[-1] if P else np.zeros(idx.shape[1]))
        last = np.searchsorted(axis, room, side="right") - 1
        ok &= last >= 0
        if not np.any(ok):
            continue
        values = gain[np.arange(P)[:, None], idx].sum(axis=0) + gain[-1][np.maximum(last, 0)]
        values = np.where(ok, values, -np.inf)
        j = int(np.argmax(values))
        if values[j] > best_value:
            best_value = float(values[j])
            best_idx = np.append(idx[:, j], last[j])

    if best_idx is None:  # pragma: no cover
        raise EhdoError("No feasible lattice point.")
    bound = float(np.sum((w * g)[energy_rhs > 0]) * h)
    return OracleResult(best=axis[best_idx], value=best_value, error_bound=bound, spacing=h)


# ---------------------------------------------------------------------------
# Randomised cross-check against the barrier solver
# ---------------------------------------------------------------------------


@dataclass(slots=True)
class OracleCheck:
    index: int
    horizon: int
    solver_value: float
    oracle_value: float
    error_bound: float
    passed: bool
    note: str = ""


@dataclass(slots=True)
class OracleBatch:
    seed: int
    checks: List[OracleCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def random_small_instance(rng: np.random.Generator, horizon: int) -> ScenarioInstance:
    return ScenarioInstance(
        initial_energy=float(rng.uniform(0.0, 2.0)),
        initial_queue=float(rng.uniform(0.0, 2.0)),
        energy_arrivals=rng.uniform(0.0, 2.0, horizon),
        data_arrivals=rng.uniform(0.0, 2.0, horizon),
        channel_gains=rng.uniform(0.5, 2.0, horizon),
    )


def cross_check_solver(
    count: int,
    seed: int,
    grid: GridSpec | None = None,
    horizons: Sequence[int] = (2, 3),
    options=None,
    slack: float = 1e-6,
) -> OracleBatch:
    """Solve `count` random instances both ways; pass when |oracle - solver| <= bound + slack."""
    from .solver import solve_delay_minimization

    grid = grid or GridSpec()
    rng = np.random.Generator(np.random.PCG64(seed))
    batch = OracleBatch(seed=seed)
    for i in range(count):
        T = int(horizons[i % len(horizons)])
        instance = random_small_instance(rng, T)
        oracle = grid_search_delay(instance, LOG_RATE, grid)
        try:
            solver_value = solve_delay_minimization(instance, LOG_RATE, options).objective
        except EhdoError as exc:
            batch.checks.append(
                OracleCheck(i, T, np.nan, oracle.value, oracle.error_bound, passed=False, note=str(exc))
            )
            continue
        gap = oracle.value - solver_value
        passed = -slack <= gap <= oracle.error_bound + slack
        batch.checks.append(OracleCheck(i, T, solver_value, oracle.value, oracle.error_bound, passed))
    return batch
