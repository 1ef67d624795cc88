"""Physical parameters and the linear (Hopfield) diagonalization.

All frequencies share one caller-chosen unit and hbar = 1.
"""

from __future__ import annotations

import hashlib
import math
import warnings
from dataclasses import dataclass, astuple

import numpy as np


class WeakNonlinearityWarning(UserWarning):
    """Raised when N * max(A, B) is no longer small compared with g."""


WEAK_NONLINEARITY_RATIO = 0.2


@dataclass(frozen=True)
class ModelParams:
    omega_c: float
    omega_ex: float
    g: float
    A: float = 0.0
    B: float = 0.0
    gamma1: float = 0.0
    gamma2: float = 0.0

    def __post_init__(self):
        for name, value in zip(("omega_c", "omega_ex", "g", "A", "B", "gamma1", "gamma2"), astuple(self)):
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if self.g <= 0:
            raise ValueError(f"g must be positive, got {self.g!r}")
        for name in ("A", "B", "gamma1", "gamma2"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative, got {getattr(self, name)!r}")

    @property
    def delta(self) -> float:
        return self.omega_c - self.omega_ex

    @property
    def gamma_sum(self) -> float:
        return self.gamma1 + self.gamma2

    def decay_factor(self, t):
        """Amplitude factor exp(-(gamma1 + gamma2) t / 2) carried by the cross term."""
        return np.exp(-0.5 * self.gamma_sum * np.asarray(t, dtype=float))

    def digest(self) -> str:
        payload = ",".join(repr(float(x)) for x in astuple(self))
        return hashlib.sha256(payload.encode()).hexdigest()[:16]

    @classmethod
    def resonant(cls, g, A=0.0, B=0.0, gamma1=0.0, gamma2=0.0, omega=0.0) -> "ModelParams":
        return cls(omega, omega, g, A, B, gamma1, gamma2)

    @classmethod
    def detuned(cls, g, delta, A=0.0, B=0.0, gamma1=0.0, gamma2=0.0, omega_ex=0.0) -> "ModelParams":
        return cls(omega_ex + delta, omega_ex, g, A, B, gamma1, gamma2)


def is_weakly_nonlinear(params: ModelParams, n_max) -> bool:
    return n_max * max(params.A, params.B) <= WEAK_NONLINEARITY_RATIO * params.g


def check_weak_nonlinearity(params: ModelParams, n_max, stacklevel=3) -> bool:
    """Warn (never raise) when the secular treatment is outside its regime."""
    ok = is_weakly_nonlinear(params, n_max)
    if not ok:
        warnings.warn(
            f"N_max*max(A,B) = {n_max * max(params.A, params.B):g} exceeds "
            f"{WEAK_NONLINEARITY_RATIO}*g = {WEAK_NONLINEARITY_RATIO * params.g:g}; "
            "secular approximation may be inaccurate",
            WeakNonlinearityWarning,
            stacklevel=stacklevel,
        )
    return ok


@dataclass(frozen=True)
class PolaritonBasis:
    delta: float
    Delta: float
    theta: float
    u: float
    v: float
    omega1: float
    omega2: float
    A11: float
    A22: float
    A12: float

    @property
    def chi(self) -> float:
        """Slow beat frequency 2*A12 - A11 - A22 between adjacent polariton-number sectors."""
        return 2.0 * self.A12 - self.A11 - self.A22

    @property
    def sin2_2theta(self) -> float:
        return (2.0 * self.u * self.v) ** 2


def polariton_coefficients(u, v, A, B):
    """Return (A11, A22, A12) for Hopfield coefficients u (exciton) and v (photon)."""
    A11 = u**3 * (A * u + 2.0 * B * v)
    A22 = v**3 * (A * v - 2.0 * B * u)
    A12 = 2.0 * u * v * (A * u * v - B * (u * u - v * v))
    return A11, A22, A12


def build_polariton_basis(params: ModelParams) -> PolaritonBasis:
    """Diagonalize the linear exciton-photon problem.

    The mixing angle is fixed by 2*theta = atan2(2g, -delta), which keeps
    theta in (0, pi/2), gives theta = pi/4 at resonance and makes the lower
    branch exciton-like for a blue-detuned cavity.
    """
    if params.g <= 0:
        raise ValueError("g must be positive for a non-degenerate transformation")
    delta = params.delta
    two_theta = math.atan2(2.0 * params.g, -delta)
    theta = 0.5 * two_theta
    u, v = math.sin(theta), math.cos(theta)
    Delta = math.hypot(delta, 2.0 * params.g)
    mean = 0.5 * (params.omega_c + params.omega_ex)
    A11, A22, A12 = polariton_coefficients(u, v, params.A, params.B)
    return PolaritonBasis(
        delta=delta,
        Delta=Delta,
        theta=theta,
        u=u,
        v=v,
        omega1=mean - 0.5 * Delta,
        omega2=mean + 0.5 * Delta,
        A11=A11,
        A22=A22,
        A12=A12,
    )


@dataclass(frozen=True)
class MaterialInputs:
    Ry_ex: float
    a_ex: float
    S: float
    g: float

    def __post_init__(self):
        for name in ("Ry_ex", "a_ex", "S", "g"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be strictly positive, got {value!r}")

    @property
    def saturation_density(self) -> float:
        return 7.0 / (16.0 * math.pi * self.a_ex**2)


def material_coefficients(m: MaterialInputs) -> tuple[float, float]:
    """Exciton-exciton constant A and phase-space filling constant B.

    2A = 6 Ry a^2 / S and B = g / (n_sat S) with n_sat = 7 / (16 pi a^2).
    """
    A = 3.0 * m.Ry_ex * m.a_ex**2 / m.S
    B = m.g / (m.saturation_density * m.S)
    return A, B
