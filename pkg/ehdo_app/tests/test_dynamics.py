"""Tests for battery / queue recursions and the delay metric."""

from __future__ import annotations

import math

import numpy as np
import pytest

from ehdo_app.errors import InputError
from ehdo_app.models import LOG_RATE, PowerPolicy, ScenarioInstance, Trajectory
from ehdo_app.services.dynamics import (
    average_queue_length,
    delay_of_policy,
    objective_constant,
    queue_capped_delay,
    simulate_trajectory,
    weighted_objective,
)


def _single_slot():
    return ScenarioInstance(
        initial_energy=1.0,
        initial_queue=1.0,
        energy_arrivals=[0.0],
        data_arrivals=[0.0],
        channel_gains=[1.0],
    )


OPTIMAL_TWO_SLOT = PowerPolicy(powers=[5.0 / 3.0, 1.0 / 3.0])


class TestSimulateTrajectory:
    def test_zero_power(self):
        traj = simulate_trajectory(_single_slot(), PowerPolicy(powers=[0.0]), LOG_RATE)
        assert traj.energy.tolist() == [1.0, 1.0]
        assert traj.queue.tolist() == [1.0, 1.0]

    def test_single_step(self):
        traj = simulate_trajectory(_single_slot(), PowerPolicy(powers=[1.0]), LOG_RATE)
        assert traj.energy.tolist() == [1.0, 0.0]
        assert traj.queue[1] == pytest.approx(0.30685, abs=1e-5)

    def test_two_slot(self, two_slot):
        traj = simulate_trajectory(two_slot, OPTIMAL_TWO_SLOT, LOG_RATE)
        assert traj.queue[1] == pytest.approx(4.01917, abs=1e-5)
        assert traj.queue[2] == pytest.approx(3.73149, abs=1e-5)
        assert traj.energy[2] == pytest.approx(0.0, abs=1e-12)

    def test_infeasible_policy_not_clipped(self, two_slot):
        traj = simulate_trajectory(two_slot, PowerPolicy(powers=[3.0, 0.0]), LOG_RATE)
        assert traj.energy[1] == pytest.approx(-1.0)

    def test_length_mismatch(self, two_slot):
        with pytest.raises(InputError):
            simulate_trajectory(two_slot, PowerPolicy(powers=[1.0]), LOG_RATE)

    def test_unrolled_form_matches_recursion(self):
        rng = np.random.default_rng(31)
        for _ in range(5):
            T = int(rng.integers(1, 12))
            inst = ScenarioInstance(
                initial_energy=float(rng.uniform(0, 2)),
                initial_queue=float(rng.uniform(0, 2)),
                energy_arrivals=rng.uniform(0, 2, T),
                data_arrivals=rng.uniform(0, 2, T),
                channel_gains=rng.gamma(2.0, 0.5, T),
            )
            policy = PowerPolicy(powers=rng.uniform(0, 1.5, T))
            traj = simulate_trajectory(inst, policy, LOG_RATE)
            rates = np.log1p(inst.channel_gains * policy.powers)
            # Q_t = Q0 + sum_{i<=t} (D_i - r_i), E_t = E0 + sum_{i<=t} (H_i - p_i)
            np.testing.assert_allclose(
                traj.queue[1:], inst.initial_queue + np.cumsum(inst.data_arrivals - rates), atol=1e-12
            )
            np.testing.assert_allclose(
                traj.energy[1:], inst.initial_energy + np.cumsum(inst.energy_arrivals - policy.powers), atol=1e-12
            )


class TestDelayMetric:
    def test_constant_queue(self):
        assert average_queue_length(Trajectory(energy=[0.0, 0.0, 0.0], queue=[1.0, 1.0, 1.0])) == 1.0

    def test_arithmetic_mean(self):
        assert average_queue_length(Trajectory(energy=[0.0, 0.0, 0.0], queue=[0.0, 2.0, 4.0])) == 3.0

    def test_two_slot_average(self, two_slot):
        assert delay_of_policy(two_slot, OPTIMAL_TWO_SLOT, LOG_RATE) == pytest.approx(3.87533, abs=1e-5)

    def test_summation_form_matches_recursion(self, two_slot):
        avg = delay_of_policy(two_slot, OPTIMAL_TWO_SLOT, LOG_RATE)
        assert weighted_objective(two_slot, OPTIMAL_TWO_SLOT, LOG_RATE) == pytest.approx(avg, abs=1e-12)

    def test_summation_form_random(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            T = int(rng.integers(1, 12))
            inst = ScenarioInstance(
                initial_energy=float(rng.uniform(0, 3)),
                initial_queue=float(rng.uniform(0, 3)),
                energy_arrivals=rng.uniform(0, 2, T),
                data_arrivals=rng.uniform(0, 2, T),
                channel_gains=rng.gamma(2.0, 0.5, T),
            )
            policy = PowerPolicy(powers=rng.uniform(0, 1, T))
            assert weighted_objective(inst, policy, LOG_RATE) == pytest.approx(
                delay_of_policy(inst, policy, LOG_RATE), abs=1e-10
            )

    def test_no_data_no_power(self, two_slot):
        assert weighted_objective(two_slot, PowerPolicy(powers=[0.0, 0.0]), LOG_RATE) == 5.0

    def test_weights(self):
        inst = ScenarioInstance(
            initial_energy=0.0,
            initial_queue=0.0,
            energy_arrivals=[0.0, 0.0, 0.0],
            data_arrivals=[1.0, 1.0, 1.0],
            channel_gains=[1.0, 1.0, 1.0],
        )
        assert weighted_objective(inst, PowerPolicy(powers=[0.0, 0.0, 0.0]), LOG_RATE) == pytest.approx(2.0)
        assert objective_constant(inst) == pytest.approx(2.0)


class TestQueueCappedDelay:
    def test_cap_binds(self):
        inst = ScenarioInstance(
            initial_energy=10.0,
            initial_queue=0.5,
            energy_arrivals=[0.0, 0.0],
            data_arrivals=[0.0, 0.0],
            channel_gains=[1.0, 1.0],
        )
        delay, delivered = queue_capped_delay(inst, PowerPolicy(powers=[math.e - 1.0, 1.0]), LOG_RATE)
        np.testing.assert_allclose(delivered, [0.5, 0.0])
        assert delay == 0.0

    def test_no_cap_matches_plain_delay(self, two_slot):
        delay, delivered = queue_capped_delay(two_slot, OPTIMAL_TWO_SLOT, LOG_RATE)
        assert delay == pytest.approx(delay_of_policy(two_slot, OPTIMAL_TWO_SLOT, LOG_RATE), abs=1e-12)
        np.testing.assert_allclose(delivered, [math.log(8 / 3), math.log(4 / 3)])
