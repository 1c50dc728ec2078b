"""
Random scenarios, the inversion-number statistic and the two experiment
pipelines: inversion numbers of the delay-optimal power against mean
harvested energy, and delay of the delay-optimal policy against the
throughput-maximising baseline under Nakagami-2 fading.

Every run draws from its own PCG64 stream keyed by (cell index, run index)
under the base seed, so results do not depend on how runs are spread over
worker processes.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict
from typing import Any, Callable, Dict, List, Tuple

import numpy as np

from ..config.limits import INVERSION_TIE_TOL, NAKAGAMI_M
from ..errors import ConfigError, EhdoError, InputError
from ..models import (
    LOG_RATE,
    CellGap,
    CellResult,
    ChannelModel,
    ExperimentConfig,
    ExperimentResult,
    PolicyKind,
    ScenarioInstance,
)
from .dynamics import queue_capped_delay
from .solver import SolverOptions, solve_delay_minimization
from .waterfill import unweighted_dwf

logger = logging.getLogger(__name__)

RNG_ALGORITHM = "PCG64"
# Per-run slack allowed on L_DM <= L_TM
DOMINANCE_TOL = 1e-6

INVERSION_KIND = "inversion"
DELAY_KIND = "delay"


def inversion_number(p, tie_tol: float = INVERSION_TIE_TOL, count_ties: bool = False) -> int:
    """
    Pairs t1 < t2 with p_t1 > p_t2 + tie_tol.

    With count_ties, pairs within tie_tol of each other are counted too
    (p_t1 >= p_t2 - tie_tol).
    """
    if tie_tol < 0:
        raise InputError(f"tie_tol must be nonnegative, got {tie_tol}.")
    values = np.asarray(getattr(p, "powers", p), dtype=float)
    diff = values[:, None] - values[None, :]
    upper = np.triu(np.ones(diff.shape, dtype=bool), k=1)
    hits = diff >= -tie_tol if count_ties else diff > tie_tol
    return int(np.count_nonzero(hits & upper))


def sample_uniform_trace(mean: float, horizon: int, rng: np.random.Generator) -> np.ndarray:
    """i.i.d. Uniform[0, 2 mean]; all zeros when mean is 0."""
    if mean < 0:
        raise InputError(f"Mean arrival must be nonnegative, got {mean}.")
    if mean == 0:
        return np.zeros(horizon)
    return rng.uniform(0.0, 2.0 * mean, size=horizon)


def sample_nakagami2_gains(horizon: int, rng: np.random.Generator, m: float = NAKAGAMI_M) -> np.ndarray:
    """Unit-mean Nakagami-m power gains: Gamma(shape m, scale 1/m)."""
    return rng.gamma(m, 1.0 / m, size=horizon)


def run_generator(seed: int, cell: int, run: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=(cell, run))))


def draw_scenario(config: ExperimentConfig, mean_energy: float, mean_data: float, rng) -> ScenarioInstance:
    """Draw H, then D, then (for fading) g from one run stream."""
    T = config.horizon
    H = sample_uniform_trace(mean_energy, T, rng)
    D = sample_uniform_trace(mean_data, T, rng)
    g = sample_nakagami2_gains(T, rng) if config.channel is ChannelModel.NAKAGAMI2 else np.ones(T)
    return ScenarioInstance(
        initial_energy=config.initial_energy,
        initial_queue=config.initial_queue,
        energy_arrivals=H,
        data_arrivals=D,
        channel_gains=g,
    )


# ---------------------------------------------------------------------------
# Cell workers. Arguments and results are plain containers so they cross
# process boundaries unchanged.
# ---------------------------------------------------------------------------


def _inversion_cell(task: Tuple[int, float, float, Dict[str, Any], Dict[str, Any]]) -> Dict[str, Any]:
    index, mean_energy, mean_data, config_data, options_data = task
    config = ExperimentConfig.from_dict(config_data)
    options = SolverOptions(**options_data)
    metrics: Dict[str, List[float]] = {p.value: [] for p in config.policies}
    failures: Dict[int, str] = {}
    for run in range(config.runs):
        instance = draw_scenario(config, mean_energy, mean_data, run_generator(config.seed, index, run))
        try:
            for policy in config.policies:
                if policy is PolicyKind.DELAY_MIN:
                    powers = solve_delay_minimization(instance, LOG_RATE, options).powers
                else:
                    powers = unweighted_dwf(instance).powers
                metrics[policy.value].append(
                    float(inversion_number(powers, config.tie_tol, config.count_ties))
                )
        except EhdoError as exc:
            failures[run] = str(exc)
    return {"index": index, "metrics": metrics, "failures": failures, "violations": 0, "min_gap": None}


def _delay_cell(task: Tuple[int, float, float, Dict[str, Any], Dict[str, Any]]) -> Dict[str, Any]:
    index, mean_energy, mean_data, config_data, options_data = task
    config = ExperimentConfig.from_dict(config_data)
    options = SolverOptions(**options_data)
    metrics: Dict[str, List[float]] = {PolicyKind.DELAY_MIN.value: [], PolicyKind.THROUGHPUT_MAX.value: []}
    failures: Dict[int, str] = {}
    violations = 0
    min_gap = math.inf
    for run in range(config.runs):
        instance = draw_scenario(config, mean_energy, mean_data, run_generator(config.seed, index, run))
        try:
            delay_dm = solve_delay_minimization(instance, LOG_RATE, options).objective
        except EhdoError as exc:
            failures[run] = str(exc)
            continue
        delay_tm, _ = queue_capped_delay(instance, unweighted_dwf(instance).powers, LOG_RATE)
        gap = delay_tm - delay_dm
        if gap < -DOMINANCE_TOL:
            violations += 1
            logger.warning("Cell %d run %d: DM delay exceeds TM by %.3e", index, run, -gap)
        min_gap = min(min_gap, gap)
        metrics[PolicyKind.DELAY_MIN.value].append(delay_dm)
        metrics[PolicyKind.THROUGHPUT_MAX.value].append(delay_tm)
    return {
        "index": index,
        "metrics": metrics,
        "failures": failures,
        "violations": violations,
        "min_gap": None if math.isinf(min_gap) else min_gap,
    }


def _aggregate(values: List[float]) -> Tuple[float, float]:
    """Mean and standard error (sample std / sqrt(n))."""
    n = len(values)
    if n == 0:
        return math.nan, math.nan
    average = math.fsum(values) / n
    stderr = float(np.std(values, ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return average, stderr


def _run_cells(
    kind: str,
    worker: Callable[[Tuple], Dict[str, Any]],
    config: ExperimentConfig,
    options: SolverOptions | None,
    threads: int,
    progress: Callable[[CellResult], None] | None,
) -> ExperimentResult:
    if threads < 1:
        raise ConfigError(f"threads must be at least 1, got {threads}.")
    options = options or SolverOptions()
    cells = config.cells()
    tasks = [
        (index, mean_energy, mean_data, config.to_dict(), asdict(options))
        for index, (mean_energy, mean_data) in enumerate(cells)
    ]
    metric = "inversion_number" if kind == INVERSION_KIND else "average_delay"
    result = ExperimentResult(kind=kind, config=config, rng_algorithm=RNG_ALGORITHM)
    min_gap: float | None = None

    def collect(outputs) -> None:
        nonlocal min_gap
        # executor.map yields in task order, so the reduction is indexed
        for out in outputs:
            mean_energy, mean_data = cells[out["index"]]
            averages: Dict[str, float] = {}
            for policy, values in out["metrics"].items():
                average, stderr = _aggregate(values)
                averages[policy] = average
                cell = CellResult(
                    mean_energy=mean_energy,
                    mean_data=mean_data,
                    policy=policy,
                    metric=metric,
                    average=average,
                    stderr=stderr,
                    runs=len(values),
                    failed_runs=len(out["failures"]),
                )
                result.cells.append(cell)
                if progress is not None:
                    progress(cell)
            if kind == DELAY_KIND:
                gap = averages[PolicyKind.THROUGHPUT_MAX.value] - averages[PolicyKind.DELAY_MIN.value]
                result.gaps.append(CellGap(mean_energy=mean_energy, mean_data=mean_data, gap=gap))
            for run, message in out["failures"].items():
                result.failures[f"{out['index']}:{run}"] = message
            result.dominance_violations += out["violations"]
            if out["min_gap"] is not None:
                min_gap = out["min_gap"] if min_gap is None else min(min_gap, out["min_gap"])

    logger.info("Running %s experiment: %d cells x %d runs on %d worker(s)", kind, len(cells), config.runs, threads)
    if threads == 1:
        collect(map(worker, tasks))
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            collect(pool.map(worker, tasks))
    result.min_gap = min_gap
    if result.failures:
        logger.warning("%d run(s) failed; affected cells are flagged", len(result.failures))
    for g in result.gap_violations:
        logger.warning("E[H]=%g E[D]=%g: average TM-DM gap %.3e is not positive", g.mean_energy, g.mean_data, g.gap)
    return result


def run_inversion_experiment(
    config: ExperimentConfig,
    options: SolverOptions | None = None,
    threads: int = 1,
    progress: Callable[[CellResult], None] | None = None,
) -> ExperimentResult:
    """Average inversion number of the optimal power per (E[H], E[D]) cell; constant gains only."""
    if config.channel is not ChannelModel.CONSTANT:
        raise ConfigError("The inversion experiment needs constant channel gains (channel = 'constant').")
    return _run_cells(INVERSION_KIND, _inversion_cell, config, options, threads, progress)


def run_delay_comparison(
    config: ExperimentConfig,
    options: SolverOptions | None = None,
    threads: int = 1,
    progress: Callable[[CellResult], None] | None = None,
) -> ExperimentResult:
    """
    Average delay of the delay-minimising (DM) and throughput-maximising (TM)
    policies per cell, under Nakagami-2 fading. Both policies are always run;
    `policies` in the config is not consulted.
    """
    if config.channel is not ChannelModel.NAKAGAMI2:
        raise ConfigError("The delay comparison needs Nakagami-2 fading (channel = 'nakagami2').")
    return _run_cells(DELAY_KIND, _delay_cell, config, options, threads, progress)
