"""Analytic light intensity for excitonic number and coherent initial states.

Every evaluator returns the photon number <a^dag a>(t) under the secular
polariton Hamiltonian, with the phenomenological decay
exp(-(gamma1 + gamma2) t / 2) attached to the cross-coherence term only.

Two conventions are offered:

``"exact"`` (default)
    The closed form that reproduces brute-force propagation of the secular
    Hamiltonian.  Relative to the literature expressions the slow nonlinear
    factor is complex conjugated with respect to the exp(i Delta t) carrier, so
    the resonant carrier is 2g - B(N-1) and, for coherent states, the Poisson
    resummation keeps the exp(-i (A11-A22) t) phase inside the exponent.
``"printed"``
    The literature expressions verbatim (carrier 2g + B(N-1), mean-field
    prefactor exp(i (A11-A22)(<N>-1) t) for coherent states).
``"alt_prefactor"`` (coherent states only)
    As ``"printed"`` with the prefactor exp(2i (A11-A22)(<N>/2 - 1) t).

All agree whenever the slow factor is real, in particular for delta = 0, B = 0.
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath
import numpy as np

from .model import ModelParams, PolaritonBasis, build_polariton_basis, check_weak_nonlinearity
from .traces import CoherentState, IntensityTrace, NumberState, TimeGrid

CONVENTIONS = ("exact", "printed")
COHERENT_CONVENTIONS = ("exact", "printed", "alt_prefactor")

_RESONANCE_TOL = 1e-12


def _check_convention(convention, allowed):
    if convention not in allowed:
        raise ValueError(f"convention must be one of {allowed}, got {convention!r}")


def _require_resonant(params: ModelParams):
    if abs(params.delta) > _RESONANCE_TOL * params.g:
        raise ValueError(f"resonant formula requires delta = 0, got delta = {params.delta!r}")


def _times(t):
    return np.asarray(t, dtype=float)


# --- Wigner d elements -----------------------------------------------------


def _half_integer(x) -> Fraction:
    f = Fraction(x).limit_denominator(2)
    if f != Fraction(x) or f.denominator not in (1, 2):
        raise ValueError(f"{x!r} is not an integer or half-integer")
    return f


def _check_jm(j, m):
    j, m = _half_integer(j), _half_integer(m)
    if j < 0 or abs(m) > j or (j - m).denominator != 1:
        raise ValueError(f"invalid angular momentum pair (j={j}, m={m})")
    return j, m


def wigner_d_top_row(j, m, phi) -> float:
    """d^j_{j,m}(phi) from the closed form.

    (-1)^(j-m) * C(2j, j+m)^(1/2) * cos(phi/2)^(j+m) * sin(phi/2)^(j-m)
    """
    j, m = _check_jm(j, m)
    jp, jm = int(j + m), int(j - m)
    sign = -1.0 if jm % 2 else 1.0
    return sign * math.sqrt(math.comb(int(2 * j), jp)) * math.cos(phi / 2) ** jp * math.sin(phi / 2) ** jm


def wigner_d_top_row_recursive(j, phi) -> np.ndarray:
    """Top row d^j_{j,m}(phi) for m = -j..j (ascending), built downward from m = j.

    Uses d_{j,m} = -tan(phi/2) * sqrt((j+m+1)/(j-m)) * d_{j,m+1}; undefined where
    cos(phi/2) = 0.
    """
    j = _check_jm(j, j)[0]
    n = int(2 * j)
    c, s = math.cos(phi / 2), math.sin(phi / 2)
    if c == 0.0:
        raise ValueError("recursion is singular at cos(phi/2) = 0")
    row = np.empty(n + 1)
    row[n] = c**n
    tan_half = s / c
    for k in range(n - 1, -1, -1):
        m = Fraction(k) - j
        row[k] = -tan_half * math.sqrt(float((j + m + 1) / (j - m))) * row[k + 1]
    return row


# Above this block size the alternating Wigner sum loses digits in double precision.
_FLOAT_WIGNER_MAX = 32


def wigner_d_matrix(two_j: int, beta: float) -> np.ndarray:
    """Full real matrix d^j_{m',m}(beta) = <j,m'|exp(-i beta J_y)|j,m>.

    Rows and columns are indexed by k = j + m (0..2j), i.e. by exciton number
    when |j,m> has j+m excitons and j-m photons.
    """
    n = int(two_j)
    if n != two_j or n < 0:
        raise ValueError(f"2j must be a non-negative integer, got {two_j!r}")
    if n > _FLOAT_WIGNER_MAX:
        return _wigner_d_matrix_mp(n, beta)
    c, s = math.cos(beta / 2), math.sin(beta / 2)
    fact = [math.factorial(i) for i in range(n + 1)]
    d = np.empty((n + 1, n + 1))
    for a in range(n + 1):  # a = j + m'
        for b in range(n + 1):  # b = j + m
            pref = math.sqrt(fact[a] * fact[n - a] * fact[b] * fact[n - b])
            terms = []
            for q in range(max(0, b - a), min(b, n - a) + 1):
                den = fact[b - q] * fact[q] * fact[a - b + q] * fact[n - a - q]
                sign = -1.0 if (a - b + q) % 2 else 1.0
                terms.append(sign * pref / den * c ** (n + b - a - 2 * q) * s ** (a - b + 2 * q))
            d[a, b] = math.fsum(terms)
    return d


def _wigner_d_matrix_mp(n: int, beta: float, dps: int = 60) -> np.ndarray:
    with mpmath.workdps(dps):
        half = mpmath.mpf(beta) / 2
        c, s = mpmath.cos(half), mpmath.sin(half)
        fact = [mpmath.factorial(i) for i in range(n + 1)]
        d = np.empty((n + 1, n + 1))
        for a in range(n + 1):
            for b in range(n + 1):
                pref = mpmath.sqrt(fact[a] * fact[n - a] * fact[b] * fact[n - b])
                acc = mpmath.mpf(0)
                for q in range(max(0, b - a), min(b, n - a) + 1):
                    den = fact[b - q] * fact[q] * fact[a - b + q] * fact[n - a - q]
                    term = pref / den * c ** (n + b - a - 2 * q) * s ** (a - b + 2 * q)
                    acc += -term if (a - b + q) % 2 else term
                d[a, b] = float(acc)
    return d


# --- slow factors -----------------------------------------------------------


def slow_factor(basis: PolaritonBasis, t) -> np.ndarray:
    """w(t) = exp(-i(A11-A22)t) (u^2 exp(i chi t) + v^2 exp(-i chi t)).

    The cross-coherence of the |N> sector is proportional to w^(N-1); all the
    nonlinear time dependence enters through this one complex factor.
    """
    t = _times(t)
    u2, v2 = basis.u**2, basis.v**2
    chi = basis.chi
    alpha = basis.A11 - basis.A22
    return np.exp(-1j * alpha * t) * (u2 * np.exp(1j * chi * t) + v2 * np.exp(-1j * chi * t))


def number_modulation(basis: PolaritonBasis, N: int, t, convention="exact") -> np.ndarray:
    _check_convention(convention, CONVENTIONS)
    if N == 0:
        return np.zeros_like(_times(t), dtype=complex)
    w = slow_factor(basis, t)
    if convention == "printed":
        w = np.conj(w)
    return w ** (N - 1)


def coherent_modulation(basis: PolaritonBasis, nbar: float, t, convention="exact") -> np.ndarray:
    _check_convention(convention, COHERENT_CONVENTIONS)
    t = _times(t)
    if convention == "exact":
        return np.exp(nbar * (slow_factor(basis, t) - 1.0))
    u2, v2 = basis.u**2, basis.v**2
    chi = basis.chi
    alpha = basis.A11 - basis.A22
    inner = nbar * (u2 * np.exp(-1j * chi * t) + v2 * np.exp(1j * chi * t) - 1.0)
    if convention == "printed":
        prefactor = np.exp(1j * alpha * (nbar - 1.0) * t)
    else:
        prefactor = np.exp(2j * alpha * (nbar / 2.0 - 1.0) * t)
    return prefactor * np.exp(inner)


def _assemble(basis: PolaritonBasis, params: ModelParams, excitation, modulation, t):
    s = basis.sin2_2theta
    carrier = np.exp(1j * basis.Delta * t) * params.decay_factor(t)
    return 0.5 * excitation * s * (1.0 - np.real(carrier * modulation))


# --- intensities -----------------------------------------------------------


def intensity_number(params: ModelParams, basis: PolaritonBasis, N: int, grid: TimeGrid,
                     convention="exact") -> IntensityTrace:
    """Photon number for excitons initially in |N> (general detuning)."""
    state = NumberState(N)
    check_weak_nonlinearity(params, state.N)
    t = grid.times
    I = _assemble(basis, params, state.N, number_modulation(basis, state.N, t, convention), t)
    return IntensityTrace(t, I, "closed_general", state, params, {"convention": convention})


def intensity_number_resonant(params: ModelParams, N: int, grid: TimeGrid, convention="exact") -> IntensityTrace:
    """(N/2) {1 - cos[(2g +/- B(N-1)) t] cos(At/2)^(N-1) exp(-(g1+g2)t/2)} at delta = 0.

    The minus sign is the exact secular result, the plus sign the printed one.
    """
    _require_resonant(params)
    _check_convention(convention, CONVENTIONS)
    state = NumberState(N)
    check_weak_nonlinearity(params, state.N)
    t = grid.times
    if state.N == 0:
        I = np.zeros_like(t)
    else:
        sign = -1.0 if convention == "exact" else 1.0
        carrier = 2.0 * params.g + sign * params.B * (state.N - 1)
        envelope = np.cos(0.5 * params.A * t) ** (state.N - 1)
        I = 0.5 * state.N * (1.0 - np.cos(carrier * t) * envelope * params.decay_factor(t))
    return IntensityTrace(t, I, "closed_resonant", state, params, {"convention": convention})


def intensity_coherent(params: ModelParams, basis: PolaritonBasis, nbar: float, grid: TimeGrid,
                       convention="exact", phi: float = 0.0) -> IntensityTrace:
    """Photon number for an excitonic coherent state of mean number nbar.

    ``phi`` is recorded on the trace but never enters the computation.
    """
    state = CoherentState(nbar, phi)
    t = grid.times
    I = _assemble(basis, params, state.nbar, coherent_modulation(basis, state.nbar, t, convention), t)
    return IntensityTrace(t, I, "closed_general", state, params, {"convention": convention})


def intensity_coherent_resonant(params: ModelParams, nbar: float, grid: TimeGrid, convention="exact",
                                phi: float = 0.0) -> IntensityTrace:
    """Resonant coherent-state intensity.

    printed: (n/2) {1 - cos[(2g + B(n-1)) t] exp(-2n sin^2(At/4)) exp(-(g1+g2)t/2)}
    exact:   (n/2) {1 - Re[exp(2igt) exp(n (exp(-iBt) cos(At/2) - 1))] exp(-(g1+g2)t/2)}
    """
    _require_resonant(params)
    _check_convention(convention, COHERENT_CONVENTIONS)
    state = CoherentState(nbar, phi)
    n = state.nbar
    t = grid.times
    g, A, B = params.g, params.A, params.B
    if convention == "exact":
        mod = np.exp(2j * g * t) * np.exp(n * (np.exp(-1j * B * t) * np.cos(0.5 * A * t) - 1.0))
        osc = np.real(mod)
    else:
        shift = (n - 1.0) if convention == "printed" else (n - 2.0)
        osc = np.cos((2.0 * g + B * shift) * t) * np.exp(-2.0 * n * np.sin(0.25 * A * t) ** 2)
    I = 0.5 * n * (1.0 - osc * params.decay_factor(t))
    return IntensityTrace(t, I, "closed_resonant", state, params, {"convention": convention})


def cross_coherence_number(params: ModelParams, basis: PolaritonBasis, N: int, t) -> np.ndarray:
    """<p1^dag(t) p2(t)> for |N>, summed over angular-momentum components.

    Polariton amplitudes of |j,j> are the top-row elements d^j_{j,m}(2 theta);
    p1^dag p2 acts as -J_- in the rotated frame.
    """
    if N < 1:
        raise ValueError("cross-coherence needs N >= 1")
    t = _times(t)
    j = Fraction(N, 2)
    two_theta = 2.0 * basis.theta
    row = np.array([wigner_d_top_row(j, Fraction(k) - j, two_theta) for k in range(N + 1)])
    total = np.zeros(t.shape, dtype=complex)
    # index k = j + m'; the |m'> component has n1 = j - m', n2 = j + m' polaritons
    for k in range(1, N + 1):
        n1, n2 = N - k, k
        ladder = math.sqrt(n2 * (n1 + 1))
        phase = 2.0 * ((basis.A11 - basis.A12) * n1 + (basis.A12 - basis.A22) * (n2 - 1))
        total += row[k] * row[k - 1] * ladder * np.exp(1j * phase * t)
    linear = np.exp(1j * (basis.omega1 - basis.omega2) * t)
    return -linear * params.decay_factor(t) * total


def envelope_number(N: int, basis: PolaritonBasis, t) -> np.ndarray:
    """|u^2 + v^2 exp(2 i chi t)|^(N-1); reduces to |cos(At/2)|^(N-1) at delta = 0."""
    if N < 1:
        return np.ones_like(_times(t))
    return np.abs(slow_factor(basis, t)) ** (N - 1)


def envelope_coherent(nbar: float, basis: PolaritonBasis, t, convention="exact") -> np.ndarray:
    """Magnitude of the coherent-state modulation.

    printed: exp[n (cos(chi t) - 1)] = exp(-2n sin^2(chi t / 2)),
    exact:   exp[n (Re w(t) - 1)], which also dephases through A11 - A22.
    """
    _check_convention(convention, COHERENT_CONVENTIONS)
    t = _times(t)
    if convention == "exact":
        return np.exp(nbar * (np.real(slow_factor(basis, t)) - 1.0))
    return np.exp(nbar * (np.cos(basis.chi * t) - 1.0))


def intensity(params: ModelParams, state, grid: TimeGrid, method="closed_general", convention="exact",
              basis: PolaritonBasis | None = None) -> IntensityTrace:
    """Dispatch on state kind for the two closed-form methods."""
    if basis is None:
        basis = build_polariton_basis(params)
    if method == "closed_general":
        if isinstance(state, NumberState):
            return intensity_number(params, basis, state.N, grid, convention)
        return intensity_coherent(params, basis, state.nbar, grid, convention, phi=state.phi)
    if method == "closed_resonant":
        if isinstance(state, NumberState):
            return intensity_number_resonant(params, state.N, grid, convention)
        return intensity_coherent_resonant(params, state.nbar, grid, convention, phi=state.phi)
    raise ValueError(f"not a closed-form method: {method!r}")
