"""Scenario configuration and method dispatch shared by the CLI and tests."""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, replace

from . import closedform, oracle
from .model import ModelParams, build_polariton_basis
from .presets import DEFAULT_SAMPLES, get_preset
from .traces import METHODS, CoherentState, InitialState, IntensityTrace, NumberState, TimeGrid

CONFIG_KEYS = ("omega_c", "omega_ex", "g", "A", "B", "gamma1", "gamma2", "state", "n", "nbar", "phi",
               "t_end", "n_samples", "method", "preset", "tolerance")


@dataclass(frozen=True)
class ScenarioConfig:
    params: ModelParams
    state: InitialState
    grid: TimeGrid
    method: str = "closed_general"
    convention: str = "exact"
    tolerance: float | None = None
    preset: str | None = None

    def __post_init__(self):
        validate(self.params, self.method)


def validate(params: ModelParams, method: str):
    if method not in METHODS:
        raise ValueError(f"method must be one of {', '.join(METHODS)}, got {method!r}")
    if method == "closed_resonant" and params.delta != 0:
        raise ValueError(f"closed_resonant requires delta = 0, got delta = {params.delta!r}")
    if method == "oracle_full" and params.gamma_sum != 0:
        raise ValueError("oracle_full requires gamma1 = gamma2 = 0")


def evaluate(params: ModelParams, state: InitialState, grid: TimeGrid, method: str = "closed_general",
             convention: str = "exact") -> IntensityTrace:
    """Intensity trace from any of the four evaluators."""
    validate(params, method)
    basis = build_polariton_basis(params)
    if method.startswith("closed"):
        return closedform.intensity(params, state, grid, method, convention, basis)
    mode = "secular" if method == "oracle_secular" else "full"
    return oracle.oracle_intensity(params, basis, state, grid, mode)


def _float(raw: dict, key: str, default=None):
    if key not in raw:
        if default is None:
            raise ValueError(f"missing required key {key!r}")
        return default
    try:
        value = float(raw[key])
    except ValueError:
        raise ValueError(f"key {key!r} is not a number: {raw[key]!r}") from None
    if not math.isfinite(value):
        raise ValueError(f"key {key!r} must be finite, got {raw[key]!r}")
    return value


def _state(raw: dict) -> InitialState:
    kind = raw.get("state", "number").strip().lower()
    if kind == "number":
        n = _float(raw, "n")
        if n != int(n):
            raise ValueError(f"number state needs an integer n, got {raw['n']!r}")
        return NumberState(int(n))
    if kind == "coherent":
        key = "nbar" if "nbar" in raw else "n"
        return CoherentState(_float(raw, key), _float(raw, "phi", 0.0))
    raise ValueError(f"state must be 'number' or 'coherent', got {kind!r}")


def read_config_text(text: str) -> dict:
    """Flat key=value pairs; section headers are optional and merged."""
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    stripped = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith(("#", ";"))]
    if stripped and not stripped[0].lstrip().startswith("["):
        text = "[scenario]\n" + text
    parser.read_string(text)
    raw = {}
    for section in parser.sections():
        for key, value in parser.items(section):
            if key not in CONFIG_KEYS:
                raise ValueError(f"unknown config key {key!r}")
            raw[key] = value.strip()
    return raw


def config_from_mapping(raw: dict, convention: str = "exact") -> ScenarioConfig:
    """Build a scenario; a preset key replaces every physics key."""
    raw = dict(raw)
    tolerance = _float(raw, "tolerance") if "tolerance" in raw else None
    preset_name = raw.get("preset") or None
    if preset_name:
        preset = get_preset(preset_name)
        params, state = preset.params, preset.state
        t_end = _float(raw, "t_end", preset.t_end)
        n_samples = _float(raw, "n_samples", float(preset.n_samples))
        method = raw.get("method", preset.method)
    else:
        params = ModelParams(
            omega_c=_float(raw, "omega_c", 0.0),
            omega_ex=_float(raw, "omega_ex", 0.0),
            g=_float(raw, "g"),
            A=_float(raw, "A", 0.0),
            B=_float(raw, "B", 0.0),
            gamma1=_float(raw, "gamma1", 0.0),
            gamma2=_float(raw, "gamma2", 0.0),
        )
        state = _state(raw)
        t_end = _float(raw, "t_end")
        n_samples = _float(raw, "n_samples", float(DEFAULT_SAMPLES))
        method = raw.get("method", "closed_general")
    if n_samples != int(n_samples):
        raise ValueError(f"n_samples must be an integer, got {n_samples!r}")
    grid = TimeGrid(t_end, int(n_samples))
    return ScenarioConfig(params, state, grid, method.strip(), convention, tolerance, preset_name)


def with_method(config: ScenarioConfig, method: str) -> ScenarioConfig:
    return replace(config, method=method)
