"""Initial states, time grids and intensity traces shared by every evaluator."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .model import ModelParams

METHODS = ("closed_general", "closed_resonant", "oracle_secular", "oracle_full")


@dataclass(frozen=True)
class NumberState:
    """Excitons in the Fock state |N>, photons in vacuum."""

    N: int

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 0:
            raise ValueError(f"N must be a non-negative integer, got {self.N!r}")
        object.__setattr__(self, "N", int(self.N))

    @property
    def kind(self) -> str:
        return "number"

    @property
    def excitation(self) -> float:
        return float(self.N)


@dataclass(frozen=True)
class CoherentState:
    """Excitons in the coherent state beta = sqrt(nbar) exp(i phi), photons in vacuum."""

    nbar: float
    phi: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.nbar) and self.nbar >= 0):
            raise ValueError(f"nbar must be non-negative, got {self.nbar!r}")
        if not math.isfinite(self.phi):
            raise ValueError(f"phi must be finite, got {self.phi!r}")
        object.__setattr__(self, "nbar", float(self.nbar))
        object.__setattr__(self, "phi", float(self.phi) % (2.0 * math.pi))

    @property
    def kind(self) -> str:
        return "coherent"

    @property
    def excitation(self) -> float:
        return self.nbar

    @property
    def beta(self) -> complex:
        return math.sqrt(self.nbar) * complex(math.cos(self.phi), math.sin(self.phi))


InitialState = Union[NumberState, CoherentState]


@dataclass(frozen=True)
class TimeGrid:
    t_end: float
    n_samples: int

    def __post_init__(self):
        if not (math.isfinite(self.t_end) and self.t_end > 0):
            raise ValueError(f"t_end must be positive, got {self.t_end!r}")
        if int(self.n_samples) != self.n_samples or self.n_samples < 2:
            raise ValueError(f"n_samples must be an integer >= 2, got {self.n_samples!r}")
        object.__setattr__(self, "n_samples", int(self.n_samples))

    @property
    def spacing(self) -> float:
        return self.t_end / (self.n_samples - 1)

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.t_end, self.n_samples)


@dataclass(frozen=True, eq=False)
class IntensityTrace:
    times: np.ndarray
    intensity: np.ndarray
    method: str
    state: InitialState
    params: ModelParams
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.times.shape != self.intensity.shape:
            raise ValueError("times and intensity must have the same shape")

    @property
    def params_digest(self) -> str:
        return self.params.digest()

    @property
    def spacing(self) -> float:
        return float(self.times[1] - self.times[0])

    def same_grid(self, other: "IntensityTrace") -> bool:
        return self.times.shape == other.times.shape and np.array_equal(self.times, other.times)
