"""
Numerical tolerances, solver defaults and the reference simulation setup.

Everything tunable from the command line starts from these values.
"""

from __future__ import annotations

# Absolute slack allowed on cumulative battery / queue constraints
FEASIBILITY_TOL = 1e-9

# Max-norm target for every KKT residual block
KKT_TOL = 1e-8

# Newton iteration budget across all barrier stages
MAX_NEWTON_ITERS = 200

# Barrier weight multiplier between centering stages
BARRIER_FACTOR = 10.0

# Rates above this (nats) would overflow exp() in the inverse log-rate
FORWARD_MAP_CAP = 700.0

# Bound-active variables at or below this rate are snapped to zero,
# once the barrier weight has reached ACTIVE_SET_MIN_BARRIER
ACTIVE_SET_SNAP = 1e-4
ACTIVE_SET_MIN_BARRIER = 1e6

# Power differences within this are ties when counting inversions
INVERSION_TIE_TOL = 1e-9

# Grid search cost is n**T; refuse anything longer
ORACLE_MAX_T = 4

# Reference simulation setup: horizon, initial battery / queue
DEFAULT_T = 10
DEFAULT_E0 = 1.0
DEFAULT_Q0 = 1.0

# Mean energy / data arrival grids
DEFAULT_MEAN_H = tuple(0.5 * k for k in range(11))
DEFAULT_MEAN_D = (0.0, 1.0, 2.0)

DEFAULT_RUNS = 10_000
DEFAULT_SEED = 20170101

# Nakagami-m shape for the fading experiment
NAKAGAMI_M = 2.0

# Floating-point tolerance
EPS = 1e-12
