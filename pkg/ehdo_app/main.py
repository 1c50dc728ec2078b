"""
Command-line entry point for ehdo.

Subcommands: solve, waterfill, tm-baseline, experiment-inversion,
experiment-delay, oracle-check. Exit codes: 0 success, 2 bad input or
configuration, 3 solver did not converge, 4 flagged results.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Sequence

import numpy as np

from . import __version__
from .config.limits import BARRIER_FACTOR, KKT_TOL, MAX_NEWTON_ITERS
from .config.settings import Settings, init_logging
from .errors import ConvergenceError, EhdoError
from .models import LOG_RATE, ExperimentConfig, PowerPolicy
from .reports import (
    build_experiment_summary_text,
    build_oracle_summary_text,
    build_solution_summary_text,
    build_waterfill_summary_text,
    experiment_table,
    export_tables_to_excel,
    format_cell_progress,
    frame_to_csv,
    oracle_table,
    slot_table,
    waterfill_table,
)
from .services.dynamics import queue_capped_delay
from .services.file_service import load_experiment_config, load_scenario, write_json_atomic, write_text_atomic
from .services.montecarlo import run_delay_comparison, run_inversion_experiment
from .services.oracle import GridSpec, cross_check_solver
from .services.solver import SolverOptions, solve_delay_minimization
from .services.traceability import create_snapshot
from .services.waterfill import unweighted_dwf, verify_level_monotonicity, weighted_dwf

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CONVERGENCE = 3
EXIT_FLAGGED = 4


def _solver_options(args: argparse.Namespace) -> SolverOptions:
    return SolverOptions(tolerance=args.tol, max_iters=args.max_iters, barrier_factor=args.barrier_factor)


def _output_dir(args: argparse.Namespace) -> Path:
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_solve(args: argparse.Namespace) -> int:
    instance = load_scenario(args.input)
    opts = _solver_options(args)
    outcome = solve_delay_minimization(instance, LOG_RATE, opts)
    out = _output_dir(args)

    slots = slot_table(instance, outcome.powers)
    snapshot = create_snapshot(
        "solve",
        inputs={"scenario": str(args.input), **instance.to_dict()},
        options=_options_dict(opts),
        outputs={"L_star": outcome.objective},
        residuals=outcome.residuals,
    )
    solution = {
        "p": outcome.powers.powers.tolist(),
        "q": outcome.rates.rates.tolist(),
        "L_star": outcome.objective,
        "kkt_residuals": outcome.residuals.to_dict(),
        "iterations": outcome.iterations,
        "duals": outcome.duals.to_dict(),
        "fixed_slots": list(outcome.fixed_slots),
        "provenance": snapshot.to_dict(),
    }
    write_json_atomic(out / "solution.json", solution)
    write_text_atomic(out / "slots.csv", frame_to_csv(slots))
    if args.excel:
        export_tables_to_excel(Path(args.excel), {"L_star": outcome.objective, "iterations": outcome.iterations}, {"Slots": slots})
    print(build_solution_summary_text(instance, outcome, snapshot.timestamp.isoformat()))
    return EXIT_OK


def cmd_waterfill(args: argparse.Namespace) -> int:
    instance = load_scenario(args.input)
    result = unweighted_dwf(instance) if args.unweighted else weighted_dwf(instance)
    check = verify_level_monotonicity(result.levels, result.powers, instance)
    out = _output_dir(args)
    table = waterfill_table(result)
    snapshot = create_snapshot(
        "waterfill",
        inputs={"scenario": str(args.input), **instance.to_dict()},
        options={"weighted": not args.unweighted},
        outputs={"p": result.powers.powers.tolist(), "levels_pass": check.passed},
    )
    write_text_atomic(out / "waterfill.csv", frame_to_csv(table))
    write_json_atomic(out / "waterfill.json", snapshot.to_dict())
    if args.excel:
        export_tables_to_excel(Path(args.excel), {"weighted": not args.unweighted}, {"Water levels": table})
    print(build_waterfill_summary_text(result, check))
    return EXIT_OK


def cmd_tm_baseline(args: argparse.Namespace) -> int:
    instance = load_scenario(args.input)
    result = unweighted_dwf(instance)
    delay, delivered = queue_capped_delay(instance, result.powers, LOG_RATE)
    # Power actually spent on the delivered data
    effective = PowerPolicy(powers=LOG_RATE.inverse(delivered, instance.channel_gains))
    out = _output_dir(args)
    snapshot = create_snapshot(
        "tm-baseline",
        inputs={"scenario": str(args.input), **instance.to_dict()},
        options={},
        outputs={"L_TM": delay},
    )
    write_json_atomic(
        out / "tm_baseline.json",
        {
            "p": result.powers.powers.tolist(),
            "delivered": delivered.tolist(),
            "L_TM": delay,
            "provenance": snapshot.to_dict(),
        },
    )
    write_text_atomic(out / "slots.csv", frame_to_csv(slot_table(instance, effective)))
    print(f"Throughput-maximising baseline: average queue length {delay:.6f}")
    return EXIT_OK


def _load_config(args: argparse.Namespace, defaults: Dict[str, Any]) -> ExperimentConfig:
    overrides = {"seed": args.seed, "runs": args.runs}
    if args.input is None:
        return ExperimentConfig.from_dict(defaults, **overrides)
    return load_experiment_config(args.input, **overrides)


def cmd_experiment(args: argparse.Namespace, kind: str) -> int:
    # Without a config file each experiment runs its reference setup
    defaults = {"channel": "nakagami2", "policies": ["DM", "TM"]} if kind == "delay" else {}
    config = _load_config(args, defaults)
    opts = _solver_options(args)

    def progress(cell) -> None:
        print(format_cell_progress(cell), flush=True)

    runner = run_inversion_experiment if kind == "inversion" else run_delay_comparison
    result = runner(config, opts, threads=args.threads, progress=progress)

    out = _output_dir(args)
    table = experiment_table(result)
    snapshot = create_snapshot(
        f"experiment-{kind}",
        inputs={"config": None if args.input is None else str(args.input)},
        options=_options_dict(opts) | {"threads": args.threads},
        outputs={"cells": len(result.cells), "flagged": result.any_flagged},
    )
    write_text_atomic(out / "result.csv", frame_to_csv(table))
    write_json_atomic(out / "result.json", {**result.to_dict(), "provenance": snapshot.to_dict()})
    if args.excel:
        export_tables_to_excel(Path(args.excel), config.to_dict() | {"rng": result.rng_algorithm}, {"Cells": table})
    print(build_experiment_summary_text(result))
    flagged = result.any_flagged or result.dominance_violations or result.gap_violations
    return EXIT_FLAGGED if flagged else EXIT_OK


def cmd_oracle_check(args: argparse.Namespace) -> int:
    batch = cross_check_solver(
        count=args.runs or 20,
        seed=args.seed if args.seed is not None else 0,
        grid=GridSpec(points=args.grid_points),
        options=_solver_options(args),
    )
    print(build_oracle_summary_text(batch))
    if args.output:
        out = _output_dir(args)
        write_text_atomic(out / "oracle.csv", frame_to_csv(oracle_table(batch)))
    return EXIT_OK if batch.passed else EXIT_FLAGGED


def _options_dict(opts: SolverOptions) -> Dict[str, Any]:
    return {
        "tolerance": opts.tolerance,
        "max_iters": opts.max_iters,
        "barrier_factor": opts.barrier_factor,
    }


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ehdo",
        description="Offline delay-optimal power allocation for energy-harvesting transmitters.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def solver_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--tol", type=float, default=KKT_TOL, help="KKT residual tolerance")
        p.add_argument("--max-iters", type=int, default=MAX_NEWTON_ITERS, help="Newton step budget")
        p.add_argument("--barrier-factor", type=float, default=BARRIER_FACTOR, help="barrier weight multiplier")

    def excel_flag(p: argparse.ArgumentParser) -> None:
        p.add_argument("--excel", type=Path, default=None, help="also write an .xlsx workbook")

    p = sub.add_parser("solve", help="minimise the average queue length of one scenario")
    p.add_argument("--input", type=Path, required=True, help="scenario JSON")
    p.add_argument("--output", type=Path, required=True, help="output directory")
    solver_flags(p)
    excel_flag(p)

    p = sub.add_parser("waterfill", help="directional water-filling of one scenario")
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--output", type=Path, required=True)
    p.add_argument("--unweighted", action="store_true", help="unit widths (throughput maximisation)")
    excel_flag(p)

    p = sub.add_parser("tm-baseline", help="throughput-maximising powers and their queue-capped delay")
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--output", type=Path, required=True)

    for name in ("experiment-inversion", "experiment-delay"):
        p = sub.add_parser(name, help=f"Monte-Carlo {name.split('-')[1]} experiment")
        p.add_argument("--input", type=Path, default=None, help="experiment config JSON (defaults if absent)")
        p.add_argument("--output", type=Path, required=True)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--runs", type=int, default=None)
        p.add_argument("--threads", type=int, default=1)
        solver_flags(p)
        excel_flag(p)

    p = sub.add_parser("oracle-check", help="cross-check the solver against grid search on random T<=3 instances")
    p.add_argument("--output", type=Path, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--runs", type=int, default=None, help="number of random instances (default 20)")
    p.add_argument("--grid-points", type=int, default=2001)
    solver_flags(p)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    commands = {
        "solve": cmd_solve,
        "waterfill": cmd_waterfill,
        "tm-baseline": cmd_tm_baseline,
        "experiment-inversion": lambda a: cmd_experiment(a, "inversion"),
        "experiment-delay": lambda a: cmd_experiment(a, "delay"),
        "oracle-check": cmd_oracle_check,
    }
    try:
        return commands[args.command](args)
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.residuals is not None:
            print(f"  residuals: {json.dumps(exc.residuals.to_dict())}", file=sys.stderr)
        if exc.q is not None:
            print(f"  last iterate q: {np.asarray(exc.q).tolist()}", file=sys.stderr)
        print(f"  Newton steps: {exc.iterations}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (EhdoError, json.JSONDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main(argv: List[str] | None = None) -> None:
    """Bootstraps logging and dispatches the subcommand."""
    settings = Settings.default()
    init_logging(settings)
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
