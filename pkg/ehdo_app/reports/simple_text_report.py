"""
Plain-text summaries printed by the command line.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

from ..models import ScenarioInstance

if TYPE_CHECKING:
    from ..models import CellResult, ExperimentResult
    from ..services.oracle import OracleBatch
    from ..services.solver import SolveOutcome
    from ..services.waterfill import LevelCheck, WaterFillResult


def build_solution_summary_text(instance: ScenarioInstance, outcome: "SolveOutcome", trace_timestamp: str = "") -> str:
    lines: list[str] = []
    lines.append(f"Horizon: T={instance.horizon}, E0={instance.initial_energy:g}, Q0={instance.initial_queue:g}")
    lines.append(f"Minimum average queue length: {outcome.objective:.6f}")
    lines.append("Power: " + ", ".join(f"{p:.6g}" for p in outcome.powers.powers))
    lines.append(f"Newton steps: {outcome.iterations} (final barrier weight {outcome.barrier:.1e})")
    for ln in outcome.residuals.lines:
        lines.append(f"  {ln.name}: {ln.value:.3e} [{ln.result.value}]")
    if trace_timestamp:
        lines.append(f"Calculated: {trace_timestamp}")
    return "\n".join(lines)


def build_waterfill_summary_text(result: "WaterFillResult", check: "LevelCheck") -> str:
    lines = ["Power: " + ", ".join(f"{p:.6g}" for p in result.powers.powers)]
    lines.append("Water levels: " + ", ".join(
        f"{nu:.6g}{'*' if dry else ''}" for nu, dry in zip(result.levels.levels, result.levels.dry)
    ))
    lines.append(f"Segments: {len(result.segments)}; dry slots marked *")
    lines.append("Level check: " + ("pass" if check.passed else f"{len(check.issues)} violation(s)"))
    for issue in check.issues:
        lines.append(f"  {issue.code}: {issue.message}")
    return "\n".join(lines)


def format_cell_progress(cell: "CellResult") -> str:
    flag = "  FLAGGED" if cell.flagged else ""
    return (
        f"E[H]={cell.mean_energy:g} E[D]={cell.mean_data:g} {cell.policy}: "
        f"{cell.metric}={cell.average:.4f} +/- {cell.stderr:.4f} (R={cell.runs}){flag}"
    )


def build_experiment_summary_text(result: "ExperimentResult") -> str:
    lines = [f"Experiment: {result.kind}, {len(result.cells)} cell rows, RNG {result.rng_algorithm}"]
    lines.append(f"Seed: {result.config.seed}, runs per cell: {result.config.runs}")
    if result.min_gap is not None:
        lines.append(
            f"Dominance: {result.dominance_violations} violation(s), smallest TM-DM gap {result.min_gap:.3e}"
        )
    for g in result.gaps:
        mark = "  FLAGGED" if g.flagged else ""
        lines.append(f"  E[H]={g.mean_energy:g} E[D]={g.mean_data:g}: average TM-DM gap {g.gap:.4f}{mark}")
    if result.failures:
        lines.append(f"Failed runs: {len(result.failures)}")
    return "\n".join(lines)


def build_oracle_summary_text(batch: "OracleBatch") -> str:
    lines = []
    for c in batch.checks:
        verdict = "PASS" if c.passed else "FAIL"
        lines.append(
            f"#{c.index} T={c.horizon}: solver {c.solver_value:.6f} oracle {c.oracle_value:.6f} "
            f"bound {c.error_bound:.2e} {verdict}{' ' + c.note if c.note else ''}"
        )
    passed = sum(1 for c in batch.checks if c.passed)
    lines.append(f"{passed}/{len(batch.checks)} instances within bound")
    return "\n".join(lines)
