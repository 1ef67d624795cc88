"""Collapse and revival of cavity emission from interacting exciton polaritons."""

from .analysis import (
    Comparison,
    GridMismatch,
    InsufficientResolution,
    RevivalReport,
    carrier_frequency,
    collapse_time_estimate,
    compare_traces,
    detect_revivals,
)
from .closedform import (
    envelope_coherent,
    envelope_number,
    intensity,
    intensity_coherent,
    intensity_coherent_resonant,
    intensity_number,
    intensity_number_resonant,
    wigner_d_matrix,
    wigner_d_top_row,
)
from .model import (
    MaterialInputs,
    ModelParams,
    PolaritonBasis,
    WeakNonlinearityWarning,
    build_polariton_basis,
    material_coefficients,
)
from .oracle import oracle_intensity
from .presets import PRESETS, get_preset
from .scenario import ScenarioConfig, evaluate
from .traces import CoherentState, IntensityTrace, NumberState, TimeGrid

__version__ = "0.1.0"
