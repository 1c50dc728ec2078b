"""
KKT residuals for the transformed (convex) delay problem.

Lagrangian: c.q + sum_t lam_t B_t(q) + sum_t mu_t Qc_t(q) - sum_t eta_t q_t with
  B_t(q)  = sum_{i<=t} phi_i(q_i) - (E0 + sum_{i<=t} H_i)
  Qc_t(q) = sum_{i<=t} q_i - (Q0 + sum_{i<=t} D_i)
Each block is reported as a max-norm so one tolerance covers all four.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, List

import numpy as np

from ..errors import InputError

if TYPE_CHECKING:
    from .solver import TransformedProblem


class ResidualResult(Enum):
    PASS = "PASS"
    FAIL = "FAIL"


@dataclass(frozen=True, slots=True, eq=False)
class Duals:
    """Multipliers for battery rows, queue rows and q >= 0 bounds (length T each)."""

    battery: np.ndarray
    queue: np.ndarray
    bounds: np.ndarray

    def to_dict(self) -> dict:
        return {
            "battery": self.battery.tolist(),
            "queue": self.queue.tolist(),
            "bounds": self.bounds.tolist(),
        }


@dataclass(slots=True)
class ResidualLine:
    code: str
    name: str
    value: float
    limit: float
    result: ResidualResult
    margin: float


@dataclass(slots=True)
class ResidualReport:
    stationarity: float
    primal: float
    dual: float
    complementarity: float
    lines: List[ResidualLine] = field(default_factory=list)

    @property
    def max_residual(self) -> float:
        return max(self.stationarity, self.primal, self.dual, self.complementarity)

    def passed(self, tol: float) -> bool:
        return self.max_residual <= tol

    def with_limit(self, tol: float) -> "ResidualReport":
        """Attach pass/fail lines against tol."""
        blocks = (
            ("KKT_STAT", "Stationarity", self.stationarity),
            ("KKT_PRIMAL", "Primal feasibility", self.primal),
            ("KKT_DUAL", "Dual feasibility", self.dual),
            ("KKT_COMP", "Complementary slackness", self.complementarity),
        )
        self.lines = [
            ResidualLine(
                code=code,
                name=name,
                value=value,
                limit=tol,
                result=ResidualResult.PASS if value <= tol else ResidualResult.FAIL,
                margin=tol - value,
            )
            for code, name, value in blocks
        ]
        return self

    def to_dict(self) -> dict:
        return {
            "stationarity": self.stationarity,
            "primal": self.primal,
            "dual": self.dual,
            "complementarity": self.complementarity,
            "max": self.max_residual,
        }


def kkt_residuals(problem: "TransformedProblem", q, duals: Duals) -> ResidualReport:
    """Max-norm residuals of the four KKT blocks at (q, duals)."""
    q = np.asarray(getattr(q, "rates", q), dtype=float)
    T = problem.horizon
    if q.shape != (T,) or any(arr.shape != (T,) for arr in (duals.battery, duals.queue, duals.bounds)):
        raise InputError(f"KKT check needs q and every dual block of length {T}.")

    lam, mu, eta = duals.battery, duals.queue, duals.bounds
    battery_vals = problem.battery_values(q)
    queue_vals = problem.queue_values(q)
    if queue_vals is None:
        # Throughput form: no queue rows, so mu must vanish
        queue_vals = np.zeros(T)

    # Suffix sums: row t touches every i <= t
    lam_tail = np.cumsum(lam[::-1])[::-1]
    mu_tail = np.cumsum(mu[::-1])[::-1]
    grad = problem.cost + problem.inverse_derivative(q) * lam_tail + mu_tail - eta
    stationarity = float(np.max(np.abs(grad)))

    primal = float(max(0.0, np.max(battery_vals), np.max(queue_vals), np.max(-q)))
    dual = float(max(0.0, -np.min(lam), -np.min(mu), -np.min(eta)))
    complementarity = float(
        max(
            np.max(np.abs(lam * battery_vals)),
            np.max(np.abs(mu * queue_vals)),
            np.max(np.abs(eta * q)),
        )
    )
    return ResidualReport(
        stationarity=stationarity,
        primal=primal,
        dual=dual,
        complementarity=complementarity,
    )
