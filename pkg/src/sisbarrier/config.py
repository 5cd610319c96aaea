"""JSON job configuration for the command-line tool.

All durations are converted to hours once, here. Example::

    {
      "m": 2, "n_elements": 3,
      "lambda_per_hour": 1e-5,
      "t1": 30, "t1_unit": "days",
      "partial_tests": 3, "coverage": 0.5,
      "demand_rate_per_year": 0.1,
      "simulation": {"trials": 1000000, "seed": 7, "grid_points": 13},
      "sweep": {"parameter": "t1", "start": 180, "stop": 720, "steps": 3, "scale": "log"},
      "target_sil": 2
    }
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

import numpy as np

from .errors import BarrierError, ConfigError
from .model import BarrierSpec
from .oracle import SimulationConfig

UNIT_HOURS = {"hours": 1.0, "days": 24.0}
SWEEP_PARAMETERS = ("t1", "lambda", "coverage", "partial_tests")

_TOP_KEYS = {
    "m", "n_elements", "lambda_per_hour", "t1", "t1_unit", "partial_tests", "coverage",
    "demand_rate_per_year", "simulation", "sweep", "target_sil", "name",
}
_SIM_KEYS = {"trials", "seed", "grid_points", "batch_size", "workers"}
_SWEEP_KEYS = {"parameter", "values", "start", "stop", "steps", "scale"}


@dataclass(frozen=True)
class SweepConfig:
    parameter: str
    values: tuple[float, ...]


@dataclass(frozen=True)
class JobConfig:
    spec: BarrierSpec
    t1_unit: str = "hours"
    demand_rate_per_year: Optional[float] = None
    simulation: Optional[SimulationConfig] = None
    sweep: Optional[SweepConfig] = None
    target_sil: Optional[int] = None
    name: Optional[str] = None

    def spec_for(self, parameter: str, value: float) -> BarrierSpec:
        """The job's spec with one sweep parameter replaced (t1 in the job's unit)."""
        if parameter == "t1":
            return self.spec.with_changes(t1_hours=value * UNIT_HOURS[self.t1_unit])
        if parameter == "lambda":
            return self.spec.with_changes(failure_rate=value)
        if parameter == "coverage":
            return self.spec.with_changes(coverage=value)
        if parameter == "partial_tests":
            return self.spec.with_changes(partial_tests=_as_int(value, "partial_tests"))
        raise ConfigError(f"unknown sweep parameter {parameter!r}")


def _as_int(value: Any, key: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or value != int(value):
        raise ConfigError(f"{key} must be an integer, got {value!r}")
    return int(value)


def _as_float(value: Any, key: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(f"{key} must be a finite number, got {value!r}")
    return float(value)


def _check_keys(block: dict, allowed: set, where: str) -> None:
    if not isinstance(block, dict):
        raise ConfigError(f"{where} must be a JSON object")
    unknown = set(block) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(sorted(unknown))}")


def _require(block: dict, key: str, where: str = "config"):
    if key not in block:
        raise ConfigError(f"missing required key {key!r} in {where}")
    return block[key]


def _parse_simulation(block: dict) -> SimulationConfig:
    _check_keys(block, _SIM_KEYS, "simulation")
    kwargs = {"trials": _as_int(_require(block, "trials", "simulation"), "trials")}
    for key in ("seed", "grid_points", "batch_size", "workers"):
        if key in block:
            kwargs[key] = _as_int(block[key], key)
    return SimulationConfig(**kwargs)


def _parse_sweep(block: dict) -> SweepConfig:
    _check_keys(block, _SWEEP_KEYS, "sweep")
    parameter = _require(block, "parameter", "sweep")
    if parameter not in SWEEP_PARAMETERS:
        raise ConfigError(f"sweep parameter must be one of {SWEEP_PARAMETERS}, got {parameter!r}")
    if "values" in block:
        raw = block["values"]
        if not isinstance(raw, list):
            raise ConfigError("sweep values must be a list")
        values = [_as_float(v, "sweep value") for v in raw]
    else:
        start = _as_float(_require(block, "start", "sweep"), "start")
        stop = _as_float(_require(block, "stop", "sweep"), "stop")
        steps = _as_int(_require(block, "steps", "sweep"), "steps")
        if steps < 1:
            raise ConfigError("sweep steps must be >= 1")
        scale = block.get("scale", "linear")
        if scale == "linear":
            values = np.linspace(start, stop, steps).tolist()
        elif scale == "log":
            if start <= 0 or stop <= 0:
                raise ConfigError("log sweeps need positive bounds")
            values = np.geomspace(start, stop, steps).tolist()
        else:
            raise ConfigError(f"sweep scale must be 'linear' or 'log', got {scale!r}")
    if not values:
        raise ConfigError("sweep range is empty")
    return SweepConfig(parameter, tuple(values))


def parse_config(data: dict) -> JobConfig:
    """Validate a decoded JSON document and build the job."""
    _check_keys(data, _TOP_KEYS, "config")
    unit = data.get("t1_unit", "hours")
    if unit not in UNIT_HOURS:
        raise ConfigError(f"t1_unit must be 'hours' or 'days', got {unit!r}")
    try:
        spec = BarrierSpec.of(
            m=_as_int(_require(data, "m"), "m"),
            n_elements=_as_int(_require(data, "n_elements"), "n_elements"),
            failure_rate=_as_float(_require(data, "lambda_per_hour"), "lambda_per_hour"),
            t1_hours=_as_float(_require(data, "t1"), "t1") * UNIT_HOURS[unit],
            partial_tests=_as_int(data.get("partial_tests", 1), "partial_tests"),
            coverage=_as_float(data.get("coverage", 0.0), "coverage"),
        )
        demand = data.get("demand_rate_per_year")
        if demand is not None:
            demand = _as_float(demand, "demand_rate_per_year")
            if demand <= 0:
                raise ConfigError("demand_rate_per_year must be positive")
        simulation = _parse_simulation(data["simulation"]) if "simulation" in data else None
    except ConfigError:
        raise
    except BarrierError as exc:
        raise ConfigError(str(exc)) from exc
    sweep = _parse_sweep(data["sweep"]) if "sweep" in data else None
    target = data.get("target_sil")
    if target is not None:
        target = _as_int(target, "target_sil")
        if not 1 <= target <= 4:
            raise ConfigError("target_sil must be between 1 and 4")
    name = data.get("name")
    return JobConfig(spec, unit, demand, simulation, sweep, target, name)


def load_config(path: str | Path) -> JobConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc
    return parse_config(data)
