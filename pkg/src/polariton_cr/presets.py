"""Twelve named scenarios in three families: number states at resonance,
detuned number states with phase-space filling, coherent states at resonance.

Units: gamma = 1, so times are in units of 1/gamma and g = 1000, A = 10.
fig2c uses B = 0.3A like fig2b and fig2d.
Time spans are our choice: three number-state revival periods, a little over
two coherent revival periods, and t = 6 for the detuned family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import ModelParams
from .traces import CoherentState, InitialState, NumberState, TimeGrid

G = 1000.0
A = 0.01 * G
DEFAULT_SAMPLES = 20000

_NUMBER_SPAN = 3 * 2 * math.pi / A
_COHERENT_SPAN = 2.2 * 4 * math.pi / A
_DETUNED_SPAN = 6.0


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    params: ModelParams
    state: InitialState
    t_end: float
    method: str
    n_samples: int = DEFAULT_SAMPLES

    @property
    def grid(self) -> TimeGrid:
        return TimeGrid(self.t_end, self.n_samples)


def _fig1(name, N, gamma):
    damp = "with dissipation" if gamma else "without dissipation"
    return Preset(name, f"number state N={N}, resonant, B=0, {damp}",
                  ModelParams.resonant(G, A, 0.0, gamma, gamma), NumberState(N), _NUMBER_SPAN, "closed_resonant")


def _fig2(name, delta_over_g, b_over_a):
    b_label = f"{b_over_a:g}A" if b_over_a else "0"
    return Preset(name, f"number state N=10, delta={delta_over_g:g}g, B={b_label}, gamma=1",
                  ModelParams.detuned(G, delta_over_g * G, A, b_over_a * A, 1.0, 1.0), NumberState(10),
                  _DETUNED_SPAN, "closed_general")


def _fig3(name, nbar, gamma):
    damp = "with dissipation" if gamma else "without dissipation"
    return Preset(name, f"coherent state nbar={nbar:g}, resonant, B=0, {damp}",
                  ModelParams.resonant(G, A, 0.0, gamma, gamma), CoherentState(nbar), _COHERENT_SPAN,
                  "closed_resonant")


PRESETS = {
    p.name: p
    for p in (
        _fig1("fig1a", 2, 0.0),
        _fig1("fig1b", 2, 1.0),
        _fig1("fig1c", 11, 0.0),
        _fig1("fig1d", 11, 1.0),
        _fig2("fig2a", 0.2, 0.0),
        _fig2("fig2b", 0.2, 0.3),
        _fig2("fig2c", 0.4, 0.3),
        _fig2("fig2d", 0.6, 0.3),
        _fig3("fig3a", 2.0, 0.0),
        _fig3("fig3b", 2.0, 1.0),
        _fig3("fig3c", 11.0, 0.0),
        _fig3("fig3d", 11.0, 1.0),
    )
}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
