"""
Change of variables phi_t(q) = r_{g_t}^{-1}(a_t q + b_t).

With a_t > 0 the transformed delay problem is a standard convex program;
the solver only ever uses the canonical a_t = 1, b_t = 0, which turns each
variable into the slot's rate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InputError, ParameterError
from ..models import PowerPolicy, RateFunction, RatePolicy, ScenarioInstance


@dataclass(frozen=True, slots=True, eq=False)
class TransformFamily:
    slope: np.ndarray
    offset: np.ndarray
    rate: RateFunction
    gains: np.ndarray

    @property
    def horizon(self) -> int:
        return int(self.gains.size)

    @property
    def is_canonical(self) -> bool:
        return bool(np.all(self.slope == 1.0) and np.all(self.offset == 0.0))

    def forward(self, q) -> np.ndarray:
        """phi_t(q_t): power from transformed variable."""
        return self.rate.inverse(self.slope * np.asarray(q, dtype=float) + self.offset, self.gains)

    def pullback(self, p) -> np.ndarray:
        """phi_t^{-1}(p_t) = (r_{g_t}(p_t) - b_t) / a_t."""
        return (self.rate.rate(np.asarray(p, dtype=float), self.gains) - self.offset) / self.slope


def build_transform(a, b, rate: RateFunction, gains) -> TransformFamily:
    a = np.array(a, dtype=float)
    b = np.array(b, dtype=float)
    gains = np.array(gains, dtype=float)
    if not (a.shape == b.shape == gains.shape) or a.ndim != 1:
        raise InputError(
            f"a, b and gains must be 1-D with equal length (got {a.shape}, {b.shape}, {gains.shape})."
        )
    bad = np.flatnonzero(~(a > 0))
    if bad.size:
        t = int(bad[0])
        raise ParameterError(
            f"a_{t + 1} = {a[t]} breaks the convexity condition: every a_t must be > 0."
        )
    if np.any(gains <= 0):
        raise InputError("Channel gains must be strictly positive.")
    for arr in (a, b, gains):
        arr.setflags(write=False)
    return TransformFamily(slope=a, offset=b, rate=rate, gains=gains)


def canonical_transform(instance: ScenarioInstance, rate: RateFunction) -> TransformFamily:
    T = instance.horizon
    return build_transform(np.ones(T), np.zeros(T), rate, instance.channel_gains)


def map_policy(transform: TransformFamily, q: RatePolicy) -> PowerPolicy:
    """p_t = phi_t(q_t); negative q has no preimage in the power domain."""
    if len(q) != transform.horizon:
        raise InputError(f"Rate policy has {len(q)} slots, transform has {transform.horizon}.")
    if np.any(q.rates < 0):
        t = int(np.flatnonzero(q.rates < 0)[0])
        raise InputError(f"q_{t + 1} = {q.rates[t]} is negative.")
    return PowerPolicy(powers=transform.forward(q.rates))


def pull_back_policy(transform: TransformFamily, p: PowerPolicy) -> RatePolicy:
    if len(p) != transform.horizon:
        raise InputError(f"Power policy has {len(p)} slots, transform has {transform.horizon}.")
    return RatePolicy(rates=transform.pullback(p.powers))
