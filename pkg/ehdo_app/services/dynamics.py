"""
Battery and queue dynamics, and the two equivalent forms of the delay metric.

E_t = E_{t-1} + H_t - p_t
Q_t = Q_{t-1} + D_t - r_{g_t}(p_t)
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import InputError
from ..models import PowerPolicy, RateFunction, ScenarioInstance, Trajectory


def check_policy_length(instance: ScenarioInstance, policy: PowerPolicy) -> None:
    if len(policy) != instance.horizon:
        raise InputError(
            f"Policy has {len(policy)} slots but the scenario horizon is {instance.horizon}."
        )


def simulate_trajectory(
    instance: ScenarioInstance,
    policy: PowerPolicy,
    rate: RateFunction,
) -> Trajectory:
    """
    Run the recursions forward from (E0, Q0).

    No clipping: an infeasible policy yields negative levels, which
    check_feasibility reports.
    """
    check_policy_length(instance, policy)
    T = instance.horizon
    rates = rate.rate(policy.powers, instance.channel_gains)

    energy = np.empty(T + 1)
    queue = np.empty(T + 1)
    energy[0] = instance.initial_energy
    queue[0] = instance.initial_queue
    for t in range(T):
        energy[t + 1] = energy[t] + instance.energy_arrivals[t] - policy.powers[t]
        queue[t + 1] = queue[t] + instance.data_arrivals[t] - rates[t]
    return Trajectory(energy=energy, queue=queue)


def average_queue_length(trajectory: Trajectory) -> float:
    """(1/T) * sum_{t=1..T} Q_t."""
    T = trajectory.horizon
    if T < 1:
        raise InputError("Trajectory needs at least one slot after the initial state.")
    return math.fsum(trajectory.queue[1:]) / T


def weighted_objective(
    instance: ScenarioInstance,
    policy: PowerPolicy,
    rate: RateFunction,
) -> float:
    """Q0 + (1/T) * sum_t (T+1-t) * (D_t - r_{g_t}(p_t))."""
    check_policy_length(instance, policy)
    T = instance.horizon
    rates = rate.rate(policy.powers, instance.channel_gains)
    terms = instance.weights * (instance.data_arrivals - rates)
    return instance.initial_queue + math.fsum(terms) / T


def objective_constant(instance: ScenarioInstance) -> float:
    """The q-independent part Q0 + (1/T) * sum_t (T+1-t) * D_t."""
    T = instance.horizon
    return instance.initial_queue + math.fsum(instance.weights * instance.data_arrivals) / T


def delay_of_policy(instance: ScenarioInstance, policy: PowerPolicy, rate: RateFunction) -> float:
    """Average queue length of the trajectory a policy induces."""
    return average_queue_length(simulate_trajectory(instance, policy, rate))


def queue_capped_delay(
    instance: ScenarioInstance,
    policy: PowerPolicy,
    rate: RateFunction,
) -> tuple[float, np.ndarray]:
    """
    Average queue length when each slot can send at most what is queued.

    Returns (L, delivered) where delivered_t = min(r_t, Q_{t-1} + D_t).
    Energy a capped slot leaves unused is not moved elsewhere.
    """
    check_policy_length(instance, policy)
    T = instance.horizon
    rates = rate.rate(policy.powers, instance.channel_gains)
    delivered = np.empty(T)
    queue = instance.initial_queue
    levels = np.empty(T)
    for t in range(T):
        available = queue + instance.data_arrivals[t]
        delivered[t] = min(rates[t], available)
        queue = max(available - delivered[t], 0.0)
        levels[t] = queue
    return math.fsum(levels) / T, delivered
