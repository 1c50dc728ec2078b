"""
ehdo: offline delay-optimal transmission for an energy-harvesting transmitter.

This package contains the domain models, the convex solver, the
water-filling engine, Monte-Carlo experiments and the command-line entry.
"""

__version__ = "0.1.0"
