"""
File service for scenario and experiment-config JSON files, and for
atomic output writes (write to a temporary sibling, then rename).
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Any, Dict

from ..errors import ConfigError, InputError
from ..models import ExperimentConfig, ScenarioInstance


def _read_json(filepath: Path) -> Dict[str, Any]:
    try:
        with open(filepath, "r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as exc:
        raise InputError(f"{filepath}: malformed JSON ({exc.msg} at line {exc.lineno}).") from exc
    if not isinstance(data, dict):
        raise InputError(f"{filepath}: expected a JSON object at the top level.")
    return data


def load_scenario(filepath: Path) -> ScenarioInstance:
    """
    Load a scenario file.

    Args:
        filepath: JSON object with keys T, E0, Q0, H, D, g

    Returns:
        Validated ScenarioInstance
    """
    return ScenarioInstance.from_dict(_read_json(Path(filepath)))


def save_scenario(filepath: Path, instance: ScenarioInstance) -> None:
    write_json_atomic(Path(filepath), instance.to_dict())


def load_experiment_config(filepath: Path, **overrides: Any) -> ExperimentConfig:
    """Load an experiment config; non-None overrides (seed, runs) win over the file."""
    try:
        data = _read_json(Path(filepath))
    except InputError as exc:
        raise ConfigError(exc.message) from exc
    return ExperimentConfig.from_dict(data, **overrides)


def write_text_atomic(filepath: Path, text: str) -> None:
    filepath = Path(filepath)
    filepath.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{filepath.name}.", dir=filepath.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, filepath)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def write_json_atomic(filepath: Path, data: Dict[str, Any]) -> None:
    write_text_atomic(filepath, json.dumps(data, indent=2) + "\n")
