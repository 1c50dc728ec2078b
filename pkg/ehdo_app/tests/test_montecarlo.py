"""Tests for random scenarios, inversion numbers and the experiment pipelines."""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np
import pytest

from ehdo_app.errors import ConfigError, InputError
from ehdo_app.models import ChannelModel, ExperimentConfig, PolicyKind
from ehdo_app.services.montecarlo import (
    RNG_ALGORITHM,
    draw_scenario,
    inversion_number,
    run_delay_comparison,
    run_generator,
    run_inversion_experiment,
    sample_nakagami2_gains,
    sample_uniform_trace,
)
from ehdo_app.services.file_service import load_experiment_config
from ehdo_app.services.solver import SolverOptions


class TestInversionNumber:
    def test_decreasing(self):
        assert inversion_number([3.0, 2.0, 1.0]) == 3

    def test_nondecreasing(self):
        assert inversion_number([1.0, 2.0, 3.0]) == 0
        assert inversion_number([1.0, 1.0, 2.0]) == 0

    def test_strictly_decreasing_ten(self):
        assert inversion_number(np.arange(10, 0, -1, dtype=float)) == 45

    def test_ties(self):
        p = [1.0, 1.0 + 1e-12, 0.0]
        assert inversion_number(p) == 2
        assert inversion_number(p, count_ties=True) == 3

    def test_reversal_partitions_pairs(self):
        rng = np.random.default_rng(2)
        p = np.round(rng.uniform(0, 1, 12), 1)
        pairs = 12 * 11 // 2
        assert inversion_number(p) + inversion_number(p[::-1], count_ties=True) == pairs

    def test_negative_tolerance(self):
        with pytest.raises(InputError):
            inversion_number([1.0, 0.0], tie_tol=-1e-9)


class TestSampling:
    def test_zero_mean_is_degenerate(self):
        rng = run_generator(1, 0, 0)
        assert sample_uniform_trace(0.0, 5, rng).tolist() == [0.0] * 5

    def test_uniform_support_and_mean(self):
        draws = sample_uniform_trace(1.0, 100_000, np.random.default_rng(4))
        assert draws.min() >= 0.0 and draws.max() <= 2.0
        stderr = draws.std(ddof=1) / math.sqrt(draws.size)
        assert abs(draws.mean() - 1.0) <= 4 * stderr

    def test_nakagami_moments(self):
        g = sample_nakagami2_gains(100_000, np.random.default_rng(5))
        assert np.all(g > 0)
        assert g.mean() == pytest.approx(1.0, abs=0.01)
        assert g.var() == pytest.approx(0.5, abs=0.02)

    def test_run_streams(self):
        a = run_generator(42, 3, 7).uniform(size=4)
        b = run_generator(42, 3, 7).uniform(size=4)
        c = run_generator(42, 3, 8).uniform(size=4)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_draw_scenario_channel(self):
        cfg = ExperimentConfig(horizon=6, channel=ChannelModel.NAKAGAMI2, runs=1)
        inst = draw_scenario(cfg, 1.0, 2.0, run_generator(0, 0, 0))
        assert inst.horizon == 6
        assert inst.initial_energy == cfg.initial_energy
        assert np.all(inst.data_arrivals <= 4.0)
        assert not np.all(inst.channel_gains == 1.0)
        flat = draw_scenario(ExperimentConfig(horizon=6, runs=1), 1.0, 2.0, run_generator(0, 0, 0))
        assert flat.channel_gains.tolist() == [1.0] * 6


def _small(**overrides):
    data = dict(horizon=4, runs=3, seed=123, mean_energy=(0.5, 1.5), mean_data=(0.0, 1.0))
    data.update(overrides)
    return ExperimentConfig(**data)


class TestInversionExperiment:
    def test_zero_harvest_cell(self):
        cfg = ExperimentConfig(runs=2, mean_energy=(0.0,), mean_data=(0.0,))
        res = run_inversion_experiment(cfg)
        assert len(res.cells) == 1
        cell = res.cells[0]
        assert cell.average == 30.0
        assert cell.stderr == 0.0
        assert not cell.flagged

    def test_weak_count_zero_harvest(self):
        # Q0 = 1 never binds on one unit of energy, so data arrivals change nothing
        cfg = ExperimentConfig(runs=4, mean_energy=(0.0,), mean_data=(0.0, 1.0, 2.0), count_ties=True)
        res = run_inversion_experiment(cfg)
        assert [c.mean_data for c in res.cells] == [0.0, 1.0, 2.0]
        assert [c.average for c in res.cells] == [45.0, 45.0, 45.0]
        assert all(c.stderr == 0.0 and c.runs == 4 and not c.flagged for c in res.cells)

    def test_shipped_reference_config_counts_ties(self):
        path = Path(__file__).resolve().parents[2] / "examples_data" / "inversion_config.json"
        cfg = load_experiment_config(path, runs=2, mean_energy=(0.0,))
        assert cfg.count_ties
        assert {c.average for c in run_inversion_experiment(cfg).cells} == {45.0}

    def test_decreases_with_harvested_energy(self):
        for count_ties in (False, True):
            cfg = ExperimentConfig(runs=20, seed=7, mean_energy=(0.0, 2.5), mean_data=(0.0,), count_ties=count_ties)
            low, high = run_inversion_experiment(cfg).cells
            assert high.average <= low.average + 2 * max(low.stderr, high.stderr)

    def test_failed_runs_are_not_counted(self):
        res = run_inversion_experiment(_small(mean_energy=(1.0,), mean_data=(0.0,)), SolverOptions(max_iters=1))
        cell = res.cells[0]
        assert cell.runs == 0
        assert cell.failed_runs == 3
        assert cell.flagged
        assert math.isnan(cell.average)
        assert len(res.failures) == 3
        assert res.rows()[0]["R"] == 0

    def test_grid_and_provenance(self):
        res = run_inversion_experiment(_small())
        assert res.rng_algorithm == RNG_ALGORITHM
        assert [(c.mean_energy, c.mean_data) for c in res.cells] == _small().cells()
        assert all(c.runs == 3 and c.policy == "DM" for c in res.cells)
        assert all(0 <= c.average <= 6 for c in res.cells)
        rows = res.rows()
        assert rows[0]["seed"] == 123

    def test_both_policies(self):
        cfg = _small(policies=(PolicyKind.DELAY_MIN, PolicyKind.THROUGHPUT_MAX), mean_energy=(1.0,), mean_data=(0.0,))
        res = run_inversion_experiment(cfg)
        assert [c.policy for c in res.cells] == ["DM", "TM"]

    def test_needs_constant_channel(self):
        with pytest.raises(ConfigError):
            run_inversion_experiment(_small(channel=ChannelModel.NAKAGAMI2))

    def test_threads_validated(self):
        with pytest.raises(ConfigError):
            run_inversion_experiment(_small(), threads=0)

    def test_same_result_across_worker_counts(self):
        serial = run_inversion_experiment(_small())
        parallel = run_inversion_experiment(_small(), threads=2)
        assert [c.average for c in serial.cells] == [c.average for c in parallel.cells]

    def test_progress_callback(self):
        seen = []
        run_inversion_experiment(_small(), progress=seen.append)
        assert len(seen) == 4


class TestDelayComparison:
    def test_dm_dominates_tm(self):
        res = run_delay_comparison(_small(channel=ChannelModel.NAKAGAMI2))
        assert res.dominance_violations == 0
        assert res.min_gap is not None and res.min_gap >= -1e-6
        assert len(res.cells) == 8
        by_cell = {}
        for c in res.cells:
            by_cell.setdefault((c.mean_energy, c.mean_data), {})[c.policy] = c.average
        for averages in by_cell.values():
            assert averages["DM"] <= averages["TM"] + 1e-6

    def test_cell_gaps_positive_with_harvest(self):
        res = run_delay_comparison(_small(channel=ChannelModel.NAKAGAMI2, mean_data=(1.0,), runs=5))
        assert [(g.mean_energy, g.mean_data) for g in res.gaps] == [(0.5, 1.0), (1.5, 1.0)]
        assert all(g.gap > 0 for g in res.gaps)
        assert res.gap_violations == []
        averages = {(c.mean_energy, c.policy): c.average for c in res.cells}
        assert res.gaps[0].gap == pytest.approx(averages[(0.5, "TM")] - averages[(0.5, "DM")])

    def test_needs_fading_channel(self):
        with pytest.raises(ConfigError):
            run_delay_comparison(_small())

    def test_result_dict(self):
        res = run_delay_comparison(_small(channel=ChannelModel.NAKAGAMI2, mean_energy=(1.0,), mean_data=(1.0,)))
        data = res.to_dict()
        assert data["kind"] == "delay"
        assert data["config"]["channel"] == "nakagami2"
        assert {c["policy"] for c in data["cells"]} == {"DM", "TM"}
