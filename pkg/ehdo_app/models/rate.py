"""
Per-slot rate functions r_g(p): data delivered at transmit power p over gain g.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from ..config.limits import FORWARD_MAP_CAP
from ..errors import RangeError


class RateFunction(ABC):
    """
    Strictly increasing, concave, C2 rate map with r_g(0) = 0.

    All methods are elementwise over numpy arrays (or scalars) of powers or
    rates paired with gains of the same shape.
    """

    name: str = "rate"

    @abstractmethod
    def rate(self, p, g):
        """r_g(p)."""

    @abstractmethod
    def inverse(self, q, g):
        """r_g^{-1}(q): the power needed to deliver q."""

    @abstractmethod
    def derivative(self, p, g):
        """dr_g/dp at p."""

    @abstractmethod
    def inverse_derivative(self, q, g):
        """d r_g^{-1}/dq at q."""

    @abstractmethod
    def inverse_second_derivative(self, q, g):
        """d2 r_g^{-1}/dq2 at q."""


@dataclass(frozen=True, slots=True)
class LogRate(RateFunction):
    """r_g(p) = log(1 + g p), in nats."""

    name: str = "log"

    def rate(self, p, g):
        return np.log1p(np.multiply(g, p))

    def inverse(self, q, g):
        q = np.asarray(q, dtype=float)
        if np.any(q > FORWARD_MAP_CAP):
            raise RangeError(
                f"Rate {float(np.max(q)):.3f} nats exceeds the {FORWARD_MAP_CAP:.0f}-nat cap "
                "of the inverse rate map."
            )
        return np.expm1(q) / np.asarray(g, dtype=float)

    def derivative(self, p, g):
        g = np.asarray(g, dtype=float)
        return g / (1.0 + g * np.asarray(p, dtype=float))

    def inverse_derivative(self, q, g):
        return np.exp(np.asarray(q, dtype=float)) / np.asarray(g, dtype=float)

    def inverse_second_derivative(self, q, g):
        # e^q / g is its own derivative
        return self.inverse_derivative(q, g)


LOG_RATE = LogRate()
