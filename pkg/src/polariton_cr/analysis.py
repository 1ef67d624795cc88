"""Collapse and revival observables extracted from intensity traces."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.ndimage import maximum_filter1d, minimum_filter1d, uniform_filter1d

from .closedform import envelope_number
from .model import ModelParams, PolaritonBasis
from .traces import CoherentState, IntensityTrace, NumberState


class InsufficientResolution(ValueError):
    pass


class GridMismatch(ValueError):
    pass


NO_COLLAPSE = "no collapse detected"
NO_REVIVAL = "no revival detected"


@dataclass(frozen=True, eq=False)
class RevivalReport:
    center_level: float
    carrier_frequency: float
    collapse_time: float | None
    revival_times: np.ndarray
    revival_amplitudes: np.ndarray
    grid_resolution: float
    status: str = "ok"
    details: dict = field(default_factory=dict)

    @property
    def revival_spacing(self) -> float | None:
        """Mean spacing between envelope peaks; the first peak is measured from t = 0."""
        if len(self.revival_times) >= 2:
            return float(np.mean(np.diff(self.revival_times)))
        if len(self.revival_times) == 1:
            return float(self.revival_times[0])
        return None

    def as_dict(self) -> dict:
        return {
            "status": self.status,
            "center_level": self.center_level,
            "carrier_frequency": self.carrier_frequency,
            "collapse_time": self.collapse_time,
            "revival_times": list(map(float, self.revival_times)),
            "revival_amplitudes": list(map(float, self.revival_amplitudes)),
            "revival_spacing": self.revival_spacing,
            "grid_resolution": self.grid_resolution,
        }


def _zero_crossings(t, x):
    s = np.signbit(x)
    idx = np.nonzero(s[:-1] != s[1:])[0]
    x0, x1 = x[idx], x[idx + 1]
    frac = x0 / (x0 - x1)
    return t[idx] + frac * (t[idx + 1] - t[idx])


def _pre_collapse_crossings(t, x):
    """Crossings up to the first half-cycle whose swing drops below half the initial one."""
    zc = _zero_crossings(t, x)
    if len(zc) < 3:
        return zc
    edges = np.searchsorted(t, zc)
    bounds = np.concatenate(([0], edges, [len(t)]))
    swings = np.array([np.max(np.abs(x[a:b])) if b > a else 0.0 for a, b in zip(bounds[:-1], bounds[1:])])
    reference = swings[0] if swings[0] > 0 else np.max(swings)
    small = np.nonzero(swings[1:] < 0.5 * reference)[0]
    stop = small[0] + 1 if len(small) else len(zc)
    return zc[:stop]


def carrier_frequency(trace: IntensityTrace, min_samples_per_period: float = 10.0) -> float:
    """Angular carrier frequency from the mean zero-crossing spacing before collapse."""
    t, I = trace.times, trace.intensity
    dt = trace.spacing

    def estimate(x):
        zc = _pre_collapse_crossings(t, x)
        if len(zc) < 3:
            raise InsufficientResolution("fewer than three carrier zero crossings before collapse")
        return math.pi * (len(zc) - 1) / (zc[-1] - zc[0])

    omega = estimate(I - np.mean(I))
    w = max(3, int(round(2.0 * math.pi / omega / dt)))
    omega = estimate(I - uniform_filter1d(I, w, mode="reflect"))
    samples = 2.0 * math.pi / omega / dt
    if samples < min_samples_per_period:
        raise InsufficientResolution(
            f"carrier period spans {samples:.1f} samples, need at least {min_samples_per_period}"
        )
    return omega


def _crests(t, y, lo, hi):
    """Parabolically interpolated local extrema of y in [lo, hi): (times, |values|)."""
    lo, hi = max(lo, 1), min(hi, len(y) - 1)
    seg = np.arange(lo, hi)
    if seg.size == 0:
        return np.empty(0), np.empty(0)
    ym, y0, yp = y[seg - 1], y[seg], y[seg + 1]
    is_ext = ((y0 >= ym) & (y0 > yp)) | ((y0 <= ym) & (y0 < yp))
    seg, ym, y0, yp = seg[is_ext], ym[is_ext], y0[is_ext], yp[is_ext]
    curv = ym - 2.0 * y0 + yp
    with np.errstate(divide="ignore", invalid="ignore"):
        shift = np.where(curv != 0, 0.5 * (ym - yp) / curv, 0.0)
    shift = np.clip(shift, -0.5, 0.5)
    value = y0 - 0.25 * (ym - yp) * shift
    dt = t[1] - t[0]
    return t[seg] + shift * dt, np.abs(value)


def _refine_peak(t, y, i_peak, i_lo, i_hi, floor):
    """Sub-sample envelope peak from a quadratic fit of log crest heights."""
    ct, cv = _crests(t, y, i_lo, i_hi)
    keep = cv >= floor
    ct, cv = ct[keep], cv[keep]
    t0 = t[i_peak]
    if len(ct) < 5:
        return t0, None
    tau = ct - t0
    c2, c1, c0 = np.polyfit(tau, np.log(cv), 2)
    if c2 >= 0:
        return t0, None
    tp = -c1 / (2.0 * c2)
    if not (tau.min() <= tp <= tau.max()):
        return t0, None
    return t0 + tp, math.exp(c0 - c1 * c1 / (4.0 * c2))


def detect_revivals(trace: IntensityTrace, contrast_threshold: float = 0.05, revival_threshold: float = 0.5,
                    compensate_decay: bool = True) -> RevivalReport:
    """Locate collapse and revivals of the carrier contrast.

    contrast(t) = (max - min over one carrier period) / (2 * center_level).
    With ``compensate_decay`` the trace's own exp(-(g1+g2)t/2) factor is divided
    out before thresholding and peak location, so revival times measure the
    nonlinear envelope alone; the reported amplitudes always include the decay.
    """
    t, I = trace.times, trace.intensity
    dt = trace.spacing
    center = float(np.mean(I))
    carrier = carrier_frequency(trace)
    if center <= 0:
        raise ValueError("trace has no positive center level")
    w = max(3, int(math.ceil(2.0 * math.pi / carrier / dt)))
    contrast = (maximum_filter1d(I, w, mode="nearest") - minimum_filter1d(I, w, mode="nearest")) / (2.0 * center)
    decay = trace.params.decay_factor(t) if compensate_decay else np.ones_like(t)
    with np.errstate(divide="ignore", invalid="ignore"):
        env = np.where(decay > 0, contrast / decay, 0.0)

    half = w // 2
    first = float(env[min(half, len(env) - 1)])
    base = dict(center_level=center, carrier_frequency=carrier, grid_resolution=dt)
    details = {"window_samples": w, "first_contrast": first, "decay_compensated": compensate_decay}

    below = np.nonzero(env[half:] < contrast_threshold)[0]
    if len(below) == 0:
        return RevivalReport(collapse_time=None, revival_times=np.empty(0), revival_amplitudes=np.empty(0),
                             status=NO_COLLAPSE, details=details, **base)
    i_collapse = half + int(below[0])
    collapse_time = float(t[i_collapse])

    level = revival_threshold * first
    above = env >= level
    above[: i_collapse + 1] = False
    # contiguous runs above the revival level
    edges = np.diff(above.astype(np.int8))
    starts = list(np.nonzero(edges == 1)[0] + 1)
    ends = list(np.nonzero(edges == -1)[0] + 1)
    if above[-1]:
        ends.append(len(env))
    # merge runs split by window jitter near the threshold
    merged = []
    for a, b in zip(starts, ends):
        if merged and a - merged[-1][1] <= 2 * w:
            merged[-1][1] = b
        else:
            merged.append([a, b])

    y = (I - uniform_filter1d(I, w, mode="reflect")) / (center * np.where(decay > 0, decay, 1.0))
    times, amps = [], []
    for a, b in merged:
        if b >= len(env) - half:
            continue  # truncated by the end of the trace
        i_peak = a + int(np.argmax(env[a:b]))
        peak = env[i_peak]
        # widen to where the envelope stays above 70 % of the peak
        lo = i_peak
        while lo > 0 and env[lo - 1] >= 0.7 * peak:
            lo -= 1
        hi = i_peak
        while hi < len(env) - 1 and env[hi + 1] >= 0.7 * peak:
            hi += 1
        tp, height = _refine_peak(t, y, i_peak, lo, hi + 1, 0.5 * peak)
        if height is None:
            height = peak
        amp = min(1.0, float(height * trace.params.decay_factor(tp))) if compensate_decay else min(1.0, float(height))
        times.append(float(tp))
        amps.append(amp)

    status = "ok" if times else NO_REVIVAL
    return RevivalReport(collapse_time=collapse_time, revival_times=np.array(times), revival_amplitudes=np.array(amps),
                         status=status, details=details, **base)


def collapse_time_estimate(state, params: ModelParams, basis: PolaritonBasis) -> float:
    """Time at which the slow envelope first reaches 1/e.

    Coherent: 2 nbar sin^2(A_eff t / 4) = 1 with A_eff = 2|2A12 - A11 - A22|
    (A_eff = A at resonance); short-time form 2 sqrt(2) / (A_eff sqrt(nbar)).
    Number: |u^2 + v^2 exp(2 i chi t)|^(N-1) = 1/e.
    """
    chi = abs(basis.chi)
    if chi == 0:
        raise ValueError("effective nonlinearity vanishes; there is no collapse")
    if isinstance(state, CoherentState):
        if 2.0 * state.nbar < 1.0:
            raise ValueError("envelope never falls to 1/e for nbar < 1/2")
        a_eff = 2.0 * chi
        return 4.0 / a_eff * math.asin(1.0 / math.sqrt(2.0 * state.nbar))
    if isinstance(state, NumberState):
        if state.N < 2:
            raise ValueError("a single excitation has no nonlinear envelope")
        rhs = (1.0 - math.exp(-2.0 / (state.N - 1))) / basis.sin2_2theta
        if rhs > 1.0:
            raise ValueError("envelope never falls to 1/e at this detuning")
        t_c = math.asin(math.sqrt(rhs)) / chi
        assert abs(envelope_number(state.N, basis, t_c) - math.exp(-1.0)) < 1e-9
        return t_c
    raise TypeError(f"unsupported state {state!r}")


class Comparison(NamedTuple):
    max_abs: float
    rms: float
    argmax_t: float


def compare_traces(a: IntensityTrace, b: IntensityTrace) -> Comparison:
    if not a.same_grid(b):
        raise GridMismatch("traces are sampled on different time grids")
    diff = np.abs(a.intensity - b.intensity)
    i = int(np.argmax(diff))
    return Comparison(float(diff[i]), float(np.sqrt(np.mean(diff**2))), float(a.times[i]) if diff[i] > 0 else 0.0)
