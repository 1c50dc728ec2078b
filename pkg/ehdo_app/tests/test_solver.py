"""Tests for the barrier solver of the transformed delay problem."""

from __future__ import annotations

import math

import numpy as np
import pytest

from ehdo_app.errors import ConfigError, ConvergenceError
from ehdo_app.models import LOG_RATE, ScenarioInstance
from ehdo_app.services.dynamics import weighted_objective
from ehdo_app.services.montecarlo import inversion_number
from ehdo_app.services.solver import (
    SolverOptions,
    build_transformed_problem,
    solve_delay_minimization,
    solve_transformed,
    solve_weighted_throughput,
)
from ehdo_app.services.validation import check_feasibility


class TestSolverOptions:
    @pytest.mark.parametrize(
        "kwargs",
        [{"tolerance": 0.0}, {"max_iters": 0}, {"barrier_factor": 1.0}, {"initial_barrier": -1.0}],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ConfigError):
            SolverOptions(**kwargs)


class TestBuildTransformedProblem:
    def test_single_slot(self):
        inst = ScenarioInstance(
            initial_energy=1.0,
            initial_queue=1.0,
            energy_arrivals=[0.0],
            data_arrivals=[0.0],
            channel_gains=[1.0],
        )
        prob = build_transformed_problem(inst)
        assert prob.cost.tolist() == [-1.0]
        assert prob.energy_rhs.tolist() == [1.0]
        assert prob.data_rhs.tolist() == [1.0]
        # e^q - 1 <= 1 is tight at q = log 2
        assert prob.battery_values([math.log(2.0)])[0] == pytest.approx(0.0, abs=1e-15)

    def test_two_slot_rows(self, two_slot):
        prob = build_transformed_problem(two_slot)
        assert prob.horizon == 2
        assert prob.includes_queue
        np.testing.assert_allclose(prob.cost, [-1.0, -0.5])
        np.testing.assert_allclose(prob.battery_values([0.0, 0.0]), [-2.0, -2.0])
        np.testing.assert_allclose(prob.queue_values([1.0, 1.0]), [-4.0, -3.0])
        assert prob.constant == 5.0

    def test_objective_constant(self):
        inst = ScenarioInstance(
            initial_energy=0.0,
            initial_queue=0.0,
            energy_arrivals=[0.0, 0.0, 0.0],
            data_arrivals=[1.0, 1.0, 1.0],
            channel_gains=[1.0, 1.0, 1.0],
        )
        assert build_transformed_problem(inst).constant == pytest.approx(2.0)

    def test_throughput_form_drops_queue(self, two_slot):
        prob = build_transformed_problem(two_slot, include_queue=False)
        assert not prob.includes_queue
        assert prob.queue_values([0.0, 0.0]) is None


class TestSolveDelayMinimization:
    def test_interior_optimum(self, two_slot):
        out = solve_delay_minimization(two_slot)
        np.testing.assert_allclose(out.powers.powers, [5 / 3, 1 / 3], atol=1e-6)
        np.testing.assert_allclose(out.rates.rates, [math.log(8 / 3), math.log(4 / 3)], atol=1e-6)
        assert out.objective == pytest.approx(3.87533, abs=1e-5)
        assert out.residuals.passed(1e-8)

    def test_battery_bound_optimum(self, tight_battery):
        out = solve_delay_minimization(tight_battery)
        np.testing.assert_allclose(out.powers.powers, [1.0, 1.0], atol=1e-6)
        assert out.duals.battery[0] > 0

    def test_queue_bound_optimum(self):
        inst = ScenarioInstance(
            initial_energy=100.0,
            initial_queue=1.0,
            energy_arrivals=[0.0, 0.0],
            data_arrivals=[0.0, 0.0],
            channel_gains=[1.0, 1.0],
        )
        out = solve_delay_minimization(inst)
        np.testing.assert_allclose(out.rates.rates, [1.0, 0.0], atol=1e-6)
        assert out.objective == pytest.approx(0.0, abs=1e-6)

    def test_no_energy(self, no_energy):
        out = solve_delay_minimization(no_energy)
        assert out.powers.powers.tolist() == [0.0, 0.0, 0.0]
        # Q0 + (1/T) sum (T+1-t) D_t = 1 + (3 + 2 + 1) * 0.5 / 3
        assert out.objective == pytest.approx(2.0)
        assert out.fixed_slots == (1, 2, 3)
        assert out.iterations == 0

    def test_single_slot_without_energy(self):
        inst = ScenarioInstance(
            initial_energy=0.0,
            initial_queue=2.0,
            energy_arrivals=[0.0],
            data_arrivals=[0.7],
            channel_gains=[1.0],
        )
        out = solve_delay_minimization(inst)
        assert out.rates.rates.tolist() == [0.0]
        assert out.objective == pytest.approx(2.7)

    def test_energy_arrives_late(self):
        inst = ScenarioInstance(
            initial_energy=0.0,
            initial_queue=3.0,
            energy_arrivals=[0.0, 2.0, 0.0],
            data_arrivals=[0.0, 0.0, 0.0],
            channel_gains=[1.0, 1.0, 1.0],
        )
        out = solve_delay_minimization(inst)
        assert out.powers.powers[0] == 0.0
        assert 1 in out.fixed_slots
        assert check_feasibility(inst, out.powers, LOG_RATE, tol=1e-6).valid

    def test_feasible_and_consistent_on_random_instances(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            T = int(rng.integers(2, 11))
            inst = ScenarioInstance(
                initial_energy=float(rng.uniform(0, 2)),
                initial_queue=float(rng.uniform(0, 2)),
                energy_arrivals=rng.uniform(0, 2, T),
                data_arrivals=rng.uniform(0, 2, T),
                channel_gains=rng.gamma(2.0, 0.5, T),
            )
            out = solve_delay_minimization(inst)
            assert check_feasibility(inst, out.powers, LOG_RATE, tol=1e-6).valid
            assert weighted_objective(inst, out.powers, LOG_RATE) == pytest.approx(out.objective, abs=1e-6)
            assert out.residuals.max_residual <= 1e-8

    def test_deterministic(self, two_slot):
        a = solve_delay_minimization(two_slot)
        b = solve_delay_minimization(two_slot)
        assert np.array_equal(a.rates.rates, b.rates.rates)
        assert a.objective == b.objective
        assert a.iterations == b.iterations

    def test_iteration_budget(self, two_slot):
        with pytest.raises(ConvergenceError) as info:
            solve_delay_minimization(two_slot, options=SolverOptions(max_iters=1))
        err = info.value
        assert err.iterations == 1
        assert err.q is not None and err.q.shape == (2,)
        assert err.residuals.max_residual > 1e-8

    def test_residual_lines(self, two_slot):
        out = solve_delay_minimization(two_slot)
        assert [ln.code for ln in out.residuals.lines] == ["KKT_STAT", "KKT_PRIMAL", "KKT_DUAL", "KKT_COMP"]
        assert all(ln.margin >= 0 for ln in out.residuals.lines)

    def test_zero_harvest_profile(self, zero_harvest):
        out = solve_delay_minimization(zero_harvest)
        nu = 5 / 34
        expected = [10 * nu - 1, 9 * nu - 1, 8 * nu - 1, 7 * nu - 1] + [0.0] * 6
        np.testing.assert_allclose(out.powers.powers, expected, atol=1e-6)
        # Tail slots are exactly zero, so the weak count sees 15 ties
        assert inversion_number(out.powers) == 30
        assert inversion_number(out.powers, count_ties=True) == 45

    def test_zero_harvest_multipliers(self, zero_harvest):
        out = solve_delay_minimization(zero_harvest)
        assert out.residuals.passed(1e-8)
        assert out.fixed_slots == (5, 6, 7, 8, 9, 10)
        # Rows 4..10 bind together; the last one carries the multiplier
        assert out.duals.battery[:9].tolist() == [0.0] * 9
        assert out.duals.battery[9] == pytest.approx(0.68, rel=1e-9)
        assert np.all(out.duals.bounds[4:] > 0.05)

    def test_binding_row_is_exact(self, two_slot):
        out = solve_delay_minimization(two_slot)
        prob = build_transformed_problem(two_slot)
        assert prob.battery_values(out.rates.rates)[1] == pytest.approx(0.0, abs=1e-12)
        assert out.duals.battery[0] == 0.0
        assert out.duals.battery[1] == pytest.approx(0.375, rel=1e-9)
        assert out.residuals.complementarity <= 1e-12

    def test_more_initial_energy_never_hurts(self):
        rng = np.random.default_rng(23)
        for _ in range(10):
            T = int(rng.integers(2, 11))
            inst = ScenarioInstance(
                initial_energy=float(rng.uniform(0, 2)),
                initial_queue=float(rng.uniform(0, 2)),
                energy_arrivals=rng.uniform(0, 2, T),
                data_arrivals=rng.uniform(0, 2, T),
                channel_gains=rng.gamma(2.0, 0.5, T),
            )
            base = solve_delay_minimization(inst).objective
            richer = solve_delay_minimization(inst.with_initial_energy(inst.initial_energy + 0.5)).objective
            assert richer <= base + 1e-8

    def test_random_instances_at_default_tolerance(self):
        rng = np.random.default_rng(29)
        for _ in range(30):
            inst = ScenarioInstance(
                initial_energy=1.0,
                initial_queue=1.0,
                energy_arrivals=rng.uniform(0, 2 * float(rng.choice([0.0, 0.5, 2.5, 5.0])), 10),
                data_arrivals=rng.uniform(0, 2 * float(rng.choice([0.0, 1.0, 2.0])), 10),
                channel_gains=rng.gamma(2.0, 0.5, 10),
            )
            out = solve_delay_minimization(inst)
            assert out.residuals.passed(1e-8)


class TestSolveWeightedThroughput:
    def test_two_slot(self, two_slot):
        out = solve_weighted_throughput(two_slot)
        np.testing.assert_allclose(out.powers.powers, [5 / 3, 1 / 3], atol=1e-6)
        assert out.throughput == pytest.approx(2 * math.log(8 / 3) + math.log(4 / 3), abs=1e-6)

    def test_queue_ignored(self):
        # A tiny queue would bind in the delay problem but not here
        inst = ScenarioInstance(
            initial_energy=2.0,
            initial_queue=0.1,
            energy_arrivals=[0.0, 0.0],
            data_arrivals=[0.0, 0.0],
            channel_gains=[1.0, 1.0],
        )
        out = solve_weighted_throughput(inst)
        np.testing.assert_allclose(out.powers.powers, [5 / 3, 1 / 3], atol=1e-6)
        assert out.duals.queue.tolist() == [0.0, 0.0]


class TestSolveTransformed:
    def test_explicit_initial_barrier(self, two_slot):
        prob = build_transformed_problem(two_slot)
        out = solve_transformed(prob, SolverOptions(initial_barrier=1.0, barrier_factor=20.0))
        np.testing.assert_allclose(out.powers.powers, [5 / 3, 1 / 3], atol=1e-6)
