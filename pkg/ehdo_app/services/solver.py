"""
Offline delay-minimal power allocation.

The delay problem is non-convex in power, but after the canonical change
of variables q_t = r_{g_t}(p_t) it reads

    minimise   c0 + sum_t c_t q_t,          c_t = -(T+1-t)/T
    subject to sum_{i<=t} phi_i(q_i) <= E0 + sum_{i<=t} H_i     (battery, convex)
               sum_{i<=t} q_i        <= Q0 + sum_{i<=t} D_i     (queue, linear)
               q_t >= 0

which is solved here with a log-barrier interior-point method: damped
Newton centering, barrier weight multiplied by a fixed factor between
stages. Once a stage is centred, the rows and slots it shows as binding
are solved exactly as equalities, which gives the multipliers as well.

Dropping the queue rows gives the weighted-throughput problem, solved by
the same code.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import linalg

from ..config.limits import (
    ACTIVE_SET_MIN_BARRIER,
    ACTIVE_SET_SNAP,
    BARRIER_FACTOR,
    EPS,
    FORWARD_MAP_CAP,
    KKT_TOL,
    MAX_NEWTON_ITERS,
)
from ..errors import ConfigError, ConvergenceError
from ..models import LOG_RATE, PowerPolicy, RateFunction, RatePolicy, ScenarioInstance
from .dynamics import objective_constant
from .kkt import Duals, ResidualReport, kkt_residuals
from .transform import TransformFamily, canonical_transform, map_policy

logger = logging.getLogger(__name__)

# Half the squared Newton decrement at which a stage counts as centred
_CENTERING_TOL = 1e-20
# Below this decrement a full Newton step is taken whenever it stays feasible
_PURE_NEWTON_DECREMENT = 0.25
_ARMIJO = 0.25
_BACKTRACK = 0.5
_MAX_BACKTRACKS = 80
_MAX_BARRIER = 1e16
# Face Newton residual, as a fraction of the KKT tolerance, that counts as solved
_CROSSOVER_SETTLED = 0.1
_CROSSOVER_STEPS = 25
# Sign corrections of one stage's face guess before the barrier moves on
_FACE_ATTEMPTS = 4


@dataclass(frozen=True, slots=True)
class SolverOptions:
    tolerance: float = KKT_TOL
    max_iters: int = MAX_NEWTON_ITERS
    barrier_factor: float = BARRIER_FACTOR
    # None: start from the number of barrier terms
    initial_barrier: float | None = None
    polish: bool = True

    def __post_init__(self) -> None:
        if not self.tolerance > 0:
            raise ConfigError(f"Solver tolerance must be positive, got {self.tolerance}.")
        if self.max_iters < 1:
            raise ConfigError(f"Newton budget must be at least 1, got {self.max_iters}.")
        if not self.barrier_factor > 1:
            raise ConfigError(f"Barrier factor must exceed 1, got {self.barrier_factor}.")
        if self.initial_barrier is not None and not self.initial_barrier > 0:
            raise ConfigError(f"Initial barrier weight must be positive, got {self.initial_barrier}.")


@dataclass(frozen=True, slots=True, eq=False)
class TransformedProblem:
    """Data of the convex program in q; rows and variables indexed by slot."""

    cost: np.ndarray
    constant: float
    energy_rhs: np.ndarray
    # None when the queue rows are dropped
    data_rhs: np.ndarray | None
    transform: TransformFamily

    @property
    def horizon(self) -> int:
        return int(self.cost.size)

    @property
    def includes_queue(self) -> bool:
        return self.data_rhs is not None

    def forward(self, q) -> np.ndarray:
        return self.transform.forward(q)

    def inverse_derivative(self, q) -> np.ndarray:
        t = self.transform
        return t.slope * t.rate.inverse_derivative(t.slope * q + t.offset, t.gains)

    def inverse_second_derivative(self, q) -> np.ndarray:
        t = self.transform
        return t.slope**2 * t.rate.inverse_second_derivative(t.slope * q + t.offset, t.gains)

    def objective(self, q) -> float:
        return self.constant + math.fsum(self.cost * np.asarray(q, dtype=float))

    def battery_values(self, q) -> np.ndarray:
        """B_t(q): cumulative power minus cumulative energy budget (<= 0 when feasible)."""
        return np.cumsum(self.forward(q)) - self.energy_rhs

    def queue_values(self, q) -> np.ndarray | None:
        if self.data_rhs is None:
            return None
        return np.cumsum(np.asarray(q, dtype=float)) - self.data_rhs


@dataclass(slots=True)
class SolveOutcome:
    rates: RatePolicy
    powers: PowerPolicy
    # c0 + c.q, the average queue length when the queue rows are present
    objective: float
    # sum_t (T+1-t) q_t
    throughput: float
    duals: Duals
    residuals: ResidualReport
    iterations: int
    barrier: float
    # 1-based slots pinned to zero by presolve or polishing
    fixed_slots: Tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {
            "q": self.rates.rates.tolist(),
            "p": self.powers.powers.tolist(),
            "objective": self.objective,
            "weighted_throughput": self.throughput,
            "duals": self.duals.to_dict(),
            "residuals": self.residuals.to_dict(),
            "iterations": self.iterations,
            "barrier": self.barrier,
            "fixed_slots": list(self.fixed_slots),
        }


def build_transformed_problem(
    instance: ScenarioInstance,
    rate: RateFunction = LOG_RATE,
    include_queue: bool = True,
) -> TransformedProblem:
    T = instance.horizon
    cost = -instance.weights / T
    energy_rhs = instance.energy_budget()
    data_rhs = instance.data_budget() if include_queue else None
    for arr in (cost, energy_rhs, data_rhs):
        if arr is not None:
            arr.setflags(write=False)
    return TransformedProblem(
        cost=cost,
        constant=objective_constant(instance),
        energy_rhs=energy_rhs,
        data_rhs=data_rhs,
        transform=canonical_transform(instance, rate),
    )


# ---------------------------------------------------------------------------
# Barrier internals. Rows with index < lead have a zero right-hand side and
# carry no barrier term; variables outside `free` are pinned at zero.
# ---------------------------------------------------------------------------


def _suffix(values: np.ndarray) -> np.ndarray:
    return np.cumsum(values[::-1])[::-1]


def _zero_budget_prefix(problem: TransformedProblem) -> Tuple[int, int]:
    """Leading slots whose energy (k) or data (m) budget is exactly zero."""
    # Budgets are nondecreasing and nonnegative, so zeros form a prefix
    k = int(np.count_nonzero(problem.energy_rhs <= 0))
    m = int(np.count_nonzero(problem.data_rhs <= 0)) if problem.includes_queue else 0
    return k, m


def _slacks(problem: TransformedProblem, q: np.ndarray, lead: int):
    battery = -problem.battery_values(q)[lead:]
    queue = problem.queue_values(q)
    return battery, (None if queue is None else -queue[lead:])


def _barrier_value(problem, q, free, lead, tau) -> float:
    x = q[free]
    if np.any(x <= 0) or np.any(q > FORWARD_MAP_CAP):
        return math.inf
    s_b, s_q = _slacks(problem, q, lead)
    if np.any(s_b <= 0) or (s_q is not None and np.any(s_q <= 0)):
        return math.inf
    value = tau * float(problem.cost[free] @ x) - np.sum(np.log(s_b)) - np.sum(np.log(x))
    if s_q is not None:
        value -= np.sum(np.log(s_q))
    return float(value)


def _barrier_derivatives(problem, q, free, lead, tau):
    T = problem.horizon
    lower = np.tril(np.ones((T, T)))[lead:][:, free]
    d1 = problem.inverse_derivative(q)
    d2 = problem.inverse_second_derivative(q)
    x = q[free]

    s_b, s_q = _slacks(problem, q, lead)
    inv_b = np.zeros(T)
    inv_b[lead:] = 1.0 / s_b
    tail_b = _suffix(inv_b)

    grad = tau * problem.cost + d1 * tail_b
    jac_b = lower * d1[free]
    hess = jac_b.T @ (jac_b * (inv_b[lead:] ** 2)[:, None])
    hess += np.diag(d2[free] * tail_b[free] + 1.0 / x**2)
    if s_q is not None:
        inv_q = np.zeros(T)
        inv_q[lead:] = 1.0 / s_q
        grad = grad + _suffix(inv_q)
        hess += lower.T @ (lower * (inv_q[lead:] ** 2)[:, None])
    return grad[free] - 1.0 / x, hess


def _newton_direction(hess: np.ndarray, grad: np.ndarray) -> np.ndarray:
    try:
        factor = linalg.cho_factor(hess, check_finite=False)
        return -linalg.cho_solve(factor, grad, check_finite=False)
    except linalg.LinAlgError:
        logger.debug("Hessian not positive definite; least-squares Newton step")
        return -linalg.lstsq(hess, grad, check_finite=False)[0]


def _line_search(problem, q, free, lead, tau, step, decrement) -> float:
    x = q[free]
    shrinking = step < 0
    s = 1.0
    if np.any(shrinking):
        s = min(1.0, 0.99 * float(np.min(-x[shrinking] / step[shrinking])))
    current = _barrier_value(problem, q, free, lead, tau)
    pure = math.sqrt(max(decrement, 0.0)) < _PURE_NEWTON_DECREMENT
    trial = q.copy()
    for _ in range(_MAX_BACKTRACKS):
        trial[free] = x + s * step
        value = _barrier_value(problem, trial, free, lead, tau)
        if math.isfinite(value) and (pure or value <= current - _ARMIJO * s * decrement):
            return s
        s *= _BACKTRACK
    return 0.0


def _center(problem, q, free, lead, tau, iterations, budget) -> int:
    """Damped Newton on the barrier function at weight tau; updates q in place."""
    previous = math.inf
    while iterations < budget:
        grad, hess = _barrier_derivatives(problem, q, free, lead, tau)
        step = _newton_direction(hess, grad)
        decrement = float(-grad @ step)
        if decrement / 2.0 <= _CENTERING_TOL:
            break
        # Rounding floor: decrement no longer shrinks
        if decrement < 1e-12 and decrement >= 0.5 * previous:
            break
        previous = decrement
        s = _line_search(problem, q, free, lead, tau, step, decrement)
        iterations += 1
        if s == 0.0:
            break
        q[free] = q[free] + s * step
    return iterations


def _strictly_feasible_start(problem, free, lead) -> np.ndarray:
    """Equal small rates on the free slots, halved until every slack keeps half its budget."""
    q = np.zeros(problem.horizon)
    level = 1.0
    for _ in range(1100):
        q[free] = level
        s_b, s_q = _slacks(problem, q, lead)
        ok = np.all(s_b >= 0.5 * problem.energy_rhs[lead:])
        if ok and s_q is not None:
            ok = np.all(s_q >= 0.5 * problem.data_rhs[lead:])
        if ok:
            return q
        level *= 0.5
    raise ConvergenceError("No strictly feasible starting point found.", q=q)


def _stationary_bound_duals(problem, q, lam, mu) -> np.ndarray:
    return problem.cost + problem.inverse_derivative(q) * _suffix(lam) + _suffix(mu)


def _cover_zero_budget_prefix(problem, q, lam, mu, eta, pinned, budgets) -> None:
    """Raise the last zero-budget rows until no pinned eta in the prefix is negative."""
    k, m = budgets
    if m:
        mu[m - 1] += max(0.0, float(np.max(-eta[:m])))
        eta[pinned] = _stationary_bound_duals(problem, q, lam, mu)[pinned]
    if k > m:
        d1 = problem.inverse_derivative(q)
        lam[k - 1] += max(0.0, float(np.max(-eta[m:k] / d1[m:k])))
        eta[pinned] = _stationary_bound_duals(problem, q, lam, mu)[pinned]


def _barrier_duals(problem, q, free, lead, budgets, tau) -> Duals:
    """
    lam = 1/(tau s_B), mu = 1/(tau s_Q), eta = 1/(tau q) on the barrier terms.

    Pinned variables take eta from stationarity; the zero-budget prefix
    rows absorb whatever would leave those eta negative.
    """
    T = problem.horizon
    lam = np.zeros(T)
    mu = np.zeros(T)
    eta = np.zeros(T)
    s_b, s_q = _slacks(problem, q, lead)
    lam[lead:] = 1.0 / (tau * s_b)
    if s_q is not None:
        mu[lead:] = 1.0 / (tau * s_q)
    eta[free] = 1.0 / (tau * q[free])

    pinned = ~free
    if np.any(pinned):
        eta[pinned] = _stationary_bound_duals(problem, q, lam, mu)[pinned]
        _cover_zero_budget_prefix(problem, q, lam, mu, eta, pinned, budgets)
    return Duals(battery=lam, queue=mu, bounds=eta)


def _bound_active(problem, q, previous, free, lead, tau, opts: SolverOptions) -> np.ndarray:
    """
    Free variables heading to zero at the barrier rate: small, shrinking by
    close to the barrier factor per stage, and keeping a positive bound
    multiplier when stationarity is evaluated at zero.
    """
    snapped = np.zeros_like(free)
    if previous is None or tau < ACTIVE_SET_MIN_BARRIER:
        return snapped
    idx = np.flatnonzero(free)
    x = q[idx]
    ratio = x / np.maximum(previous[idx], np.finfo(float).tiny)
    candidates = (x <= ACTIVE_SET_SNAP) & (ratio <= opts.barrier_factor**-0.75)
    if not np.any(candidates):
        return snapped

    T = problem.horizon
    lam = np.zeros(T)
    mu = np.zeros(T)
    s_b, s_q = _slacks(problem, q, lead)
    lam[lead:] = 1.0 / (tau * s_b)
    if s_q is not None:
        mu[lead:] = 1.0 / (tau * s_q)
    eta_at_zero = _stationary_bound_duals(problem, np.zeros(T), lam, mu)[idx]
    hit = candidates & (eta_at_zero > opts.tolerance)
    snapped[idx[hit]] = True
    return snapped


@dataclass(frozen=True, slots=True, eq=False)
class _ActiveSet:
    """Guessed optimal face: positive variables and one binding row per tied group."""

    support: np.ndarray
    battery: Tuple[int, ...]
    queue: Tuple[int, ...]
    # Multiplier starting values for the kept rows
    battery_start: np.ndarray
    queue_start: np.ndarray
    # Rows ruled out by an earlier attempt on this stage
    dropped_battery: frozenset = frozenset()
    dropped_queue: frozenset = frozenset()

    @property
    def key(self) -> tuple:
        return self.support.tobytes(), self.battery, self.queue


def _binding_rows(slack, rhs, reach, cut, tau, dropped) -> Tuple[Tuple[int, ...], np.ndarray]:
    """
    Rows with slack <= cut, one per group of equal reach.

    Rows that see the same positive variables differ only in their budget;
    the smallest budget binds, and on equal budgets the last row is kept so
    its multiplier reaches every zero slot in between. Rows that see no
    positive variable are left out.
    """
    kept: list = []
    start: list = []
    for t in np.flatnonzero(slack <= cut):
        if reach[t] == 0 or int(t) in dropped:
            continue
        estimate = 1.0 / (tau * max(float(slack[t]), EPS))
        if kept and reach[kept[-1]] == reach[t]:
            start[-1] += estimate
            if rhs[t] <= rhs[kept[-1]]:
                kept[-1] = int(t)
            continue
        kept.append(int(t))
        start.append(estimate)
    return tuple(kept), np.array(start, dtype=float)


def _guess_active_set(
    problem, q, support, tau, dropped_battery=frozenset(), dropped_queue=frozenset()
) -> _ActiveSet | None:
    """
    Classify at the current barrier weight: a slack below 1/sqrt(tau) is on
    its bound, where its barrier multiplier already exceeds it. The caller
    applies the same cut to the variables to pick `support`.
    """
    if not np.any(support):
        return None
    cut = 1.0 / math.sqrt(tau)
    reach = np.cumsum(support)
    s_b, s_q = _slacks(problem, q, 0)
    battery, battery_start = _binding_rows(s_b, problem.energy_rhs, reach, cut, tau, dropped_battery)
    queue, queue_start = (), np.zeros(0)
    if s_q is not None:
        queue, queue_start = _binding_rows(s_q, problem.data_rhs, reach, cut, tau, dropped_queue)
    # Each positive slot needs a binding row at or after it to balance its cost
    if max(battery + queue, default=-1) < int(np.flatnonzero(support)[-1]):
        return None
    return _ActiveSet(support, battery, queue, battery_start, queue_start, dropped_battery, dropped_queue)


def _refine_face(problem, q, free, tau, face: _ActiveSet, duals: Duals, tol: float) -> _ActiveSet | None:
    """
    Next guess after a face failed on sign alone: slots whose bound
    multiplier went negative become positive, and rows whose multiplier
    went negative are dropped together with their ties.
    """
    support = face.support | (free & (duals.bounds < -tol))
    reach = np.cumsum(face.support)

    def ties(rows, multipliers, rhs) -> set:
        out = set()
        for t in rows:
            if multipliers[t] < -tol:
                out.update(int(r) for r in np.flatnonzero((reach == reach[t]) & (rhs == rhs[t])))
        return out

    drop_b = face.dropped_battery | ties(face.battery, duals.battery, problem.energy_rhs)
    drop_q = face.dropped_queue
    if face.queue:
        drop_q = drop_q | ties(face.queue, duals.queue, problem.data_rhs)
    if np.array_equal(support, face.support) and drop_b == face.dropped_battery and drop_q == face.dropped_queue:
        return None
    return _guess_active_set(problem, q, support, tau, frozenset(drop_b), frozenset(drop_q))


def _face_system(problem, x, lam, mu, idx, rows_b, rows_q):
    """Residual and Jacobian of the KKT equations restricted to a face."""
    T = problem.horizon
    d1 = problem.inverse_derivative(x)
    d2 = problem.inverse_second_derivative(x)
    lam_tail = _suffix(lam)
    stationarity = (problem.cost + d1 * lam_tail + _suffix(mu))[idx]
    battery = problem.battery_values(x)[rows_b]
    queue = problem.queue_values(x)[rows_q] if rows_q.size else np.zeros(0)
    residual = np.concatenate([stationarity, battery, queue])

    lower = np.tril(np.ones((T, T)))
    jac_b = lower[rows_b][:, idx] * d1[idx]
    jac_q = lower[rows_q][:, idx]
    n, nb = idx.size, rows_b.size
    jac = np.zeros((residual.size, residual.size))
    jac[:n, :n] = np.diag(d2[idx] * lam_tail[idx])
    jac[n : n + nb, :n] = jac_b
    jac[:n, n : n + nb] = jac_b.T
    jac[n + nb :, :n] = jac_q
    jac[:n, n + nb :] = jac_q.T
    return residual, jac


def _crossover(problem, q, face: _ActiveSet, budgets, tol: float, budget: int):
    """
    Newton on the equality system of a guessed face, starting from the
    barrier iterate. Rows of the face hold with equality and the remaining
    slots sit exactly at zero, so slacks and complementarity are exact.

    Returns (q, duals, steps); q and duals are None when Newton leaves the
    face or does not settle within the budget.
    """
    T = problem.horizon
    idx = np.flatnonzero(face.support)
    rows_b = np.array(face.battery, dtype=int)
    rows_q = np.array(face.queue, dtype=int)
    x = np.where(face.support, q, 0.0)
    lam = np.zeros(T)
    mu = np.zeros(T)
    lam[rows_b] = face.battery_start
    mu[rows_q] = face.queue_start

    previous = math.inf
    steps = 0
    while True:
        residual, jac = _face_system(problem, x, lam, mu, idx, rows_b, rows_q)
        size = float(np.max(np.abs(residual)))
        if not math.isfinite(size):
            return None, None, steps
        settled = size <= _CROSSOVER_SETTLED * tol
        # Run on to the rounding floor: stop once Newton no longer halves the residual
        if size == 0.0 or (settled and size > 0.5 * previous):
            break
        if steps >= budget:
            if settled:
                break
            return None, None, steps
        delta = linalg.lstsq(jac, -residual, check_finite=False)[0]
        steps += 1
        x[idx] += delta[: idx.size]
        lam[rows_b] += delta[idx.size : idx.size + rows_b.size]
        mu[rows_q] += delta[idx.size + rows_b.size :]
        if np.any(x[idx] <= 0) or np.any(x[idx] > FORWARD_MAP_CAP):
            return None, None, steps
        previous = size

    pinned = ~face.support
    eta = np.zeros(T)
    eta[pinned] = _stationary_bound_duals(problem, x, lam, mu)[pinned]
    _cover_zero_budget_prefix(problem, x, lam, mu, eta, pinned, budgets)
    return x, Duals(battery=lam, queue=mu, bounds=eta), steps


def solve_transformed(problem: TransformedProblem, options: SolverOptions | None = None) -> SolveOutcome:
    """
    Barrier solve of the transformed problem.

    After each centred stage the iterate guesses its optimal face (binding
    rows, zero slots) and Newton on that face's equality system finishes the
    solve once the face passes the KKT check; otherwise the barrier weight
    grows and the guess is retried when it changes.

    Deterministic: identical input and options give bit-identical output.
    Raises ConvergenceError (carrying the last iterate) when the Newton
    budget runs out before every KKT residual is within tolerance.
    """
    opts = options or SolverOptions()
    T = problem.horizon
    budgets = _zero_budget_prefix(problem)
    lead = max(budgets)

    free = np.zeros(T, dtype=bool)
    free[lead:] = True
    q = _strictly_feasible_start(problem, free, lead) if lead < T else np.zeros(T)

    rows = (T - lead) * (2 if problem.includes_queue else 1)
    tau = opts.initial_barrier or float(max(1, rows + T - lead))
    iterations = 0
    previous: np.ndarray | None = None
    tried: set = set()

    while True:
        if np.any(free):
            iterations = _center(problem, q, free, lead, tau, iterations, opts.max_iters)
        if opts.polish:
            snapped = _bound_active(problem, q, previous, free, lead, tau, opts)
            if np.any(snapped):
                logger.debug("Pinning slots %s to zero at barrier %.1e", (np.flatnonzero(snapped) + 1).tolist(), tau)
                q[snapped] = 0.0
                free &= ~snapped
                continue

        duals = _barrier_duals(problem, q, free, lead, budgets, tau)
        report = kkt_residuals(problem, q, duals).with_limit(opts.tolerance)
        logger.debug(
            "barrier %.1e: %d Newton steps, max KKT residual %.3e", tau, iterations, report.max_residual
        )
        if report.passed(opts.tolerance):
            break
        face = None
        if opts.polish and iterations < opts.max_iters and np.any(free):
            face = _guess_active_set(problem, q, free & (q > 1.0 / math.sqrt(tau)), tau)
        accepted = False
        for _ in range(_FACE_ATTEMPTS):
            if face is None or face.key in tried or iterations >= opts.max_iters:
                break
            tried.add(face.key)
            budget = min(_CROSSOVER_STEPS, opts.max_iters - iterations)
            q_face, duals_face, steps = _crossover(problem, q, face, budgets, opts.tolerance, budget)
            iterations += steps
            if q_face is None:
                break
            report_face = kkt_residuals(problem, q_face, duals_face).with_limit(opts.tolerance)
            logger.debug(
                "barrier %.1e: face with battery rows %s, queue rows %s, KKT residual %.3e",
                tau,
                [t + 1 for t in face.battery],
                [t + 1 for t in face.queue],
                report_face.max_residual,
            )
            if report_face.passed(opts.tolerance):
                q, duals, report = q_face, duals_face, report_face
                free = face.support.copy()
                accepted = True
                break
            face = _refine_face(problem, q, free, tau, face, duals_face, opts.tolerance)
        if accepted:
            break
        if iterations >= opts.max_iters or not np.any(free) or tau >= _MAX_BARRIER:
            raise ConvergenceError(
                f"Barrier method stopped after {iterations} Newton steps with KKT residual "
                f"{report.max_residual:.3e} > {opts.tolerance:.1e}.",
                q=q.copy(),
                duals=duals,
                residuals=report,
                iterations=iterations,
                details={"barrier": tau},
            )
        previous = q.copy()
        tau *= opts.barrier_factor

    rates = RatePolicy(rates=q)
    powers = map_policy(problem.transform, rates)
    outcome = SolveOutcome(
        rates=rates,
        powers=powers,
        objective=problem.objective(q),
        throughput=math.fsum(-problem.cost * q * T),
        duals=duals,
        residuals=report,
        iterations=iterations,
        barrier=tau,
        fixed_slots=tuple(int(t) + 1 for t in np.flatnonzero(~free)),
    )
    logger.info(
        "Solved T=%d in %d Newton steps: objective %.6f, KKT %.2e", T, iterations, outcome.objective, report.max_residual
    )
    return outcome


def solve_delay_minimization(
    instance: ScenarioInstance,
    rate: RateFunction = LOG_RATE,
    options: SolverOptions | None = None,
) -> SolveOutcome:
    """Minimum average queue length over feasible power policies."""
    return solve_transformed(build_transformed_problem(instance, rate), options)


def solve_weighted_throughput(
    instance: ScenarioInstance,
    rate: RateFunction = LOG_RATE,
    options: SolverOptions | None = None,
) -> SolveOutcome:
    """
    Maximise sum_t (T+1-t) r_{g_t}(p_t) under energy causality only.

    Same barrier method with the queue rows dropped; `throughput` holds the
    maximised value and `objective` the matching delay-form expression.
    """
    return solve_transformed(build_transformed_problem(instance, rate, include_queue=False), options)
