"""Pytest configuration and fixtures."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import pytest

# Ensure project root is on path when running tests
_project_root = Path(__file__).resolve().parents[2]
if str(_project_root) not in sys.path:
    sys.path.insert(0, str(_project_root))

from ehdo_app.models import ScenarioInstance


@pytest.fixture
def two_slot():
    """T=2, E0=2, Q0=5, no arrivals, unit gains: p* = (5/3, 1/3), L* ~ 3.87533."""
    return ScenarioInstance(
        initial_energy=2.0,
        initial_queue=5.0,
        energy_arrivals=[0.0, 0.0],
        data_arrivals=[0.0, 0.0],
        channel_gains=[1.0, 1.0],
    )


@pytest.fixture
def tight_battery():
    """Slot-1 battery constraint binds: p* = (1, 1)."""
    return ScenarioInstance(
        initial_energy=1.0,
        initial_queue=5.0,
        energy_arrivals=[0.0, 1.0],
        data_arrivals=[0.0, 0.0],
        channel_gains=[1.0, 1.0],
    )


@pytest.fixture
def no_energy():
    """No energy at all: every power is zero."""
    return ScenarioInstance(
        initial_energy=0.0,
        initial_queue=1.0,
        energy_arrivals=[0.0, 0.0, 0.0],
        data_arrivals=[0.5, 0.5, 0.5],
        channel_gains=[1.0, 1.0, 1.0],
    )


@pytest.fixture
def zero_harvest():
    """T=10, E0=Q0=1, H=D=0, g=1: the zero-harvest cell of the inversion experiment."""
    return ScenarioInstance(
        initial_energy=1.0,
        initial_queue=1.0,
        energy_arrivals=[0.0] * 10,
        data_arrivals=[0.0] * 10,
        channel_gains=[1.0] * 10,
    )


@pytest.fixture
def scenario_file(tmp_path, two_slot):
    """The two-slot scenario written as JSON."""
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(two_slot.to_dict()), encoding="utf-8")
    return path
