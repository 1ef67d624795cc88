"""Exact propagation in the truncated two-mode Fock space.

Both Hamiltonians conserve the total excitation number, so every computation
is done block by block.  Inside the block with ``n`` quanta the basis vector
with index ``k`` holds ``k`` excitons and ``n - k`` photons (the angular
momentum state |j, m> with j = n/2, k = j + m).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .closedform import wigner_d_matrix
from .model import ModelParams, PolaritonBasis, build_polariton_basis, check_weak_nonlinearity
from .traces import CoherentState, IntensityTrace, NumberState, TimeGrid

MODES = ("secular", "full")
PATHS = ("matrix_spectral", "polariton_rotation")

POISSON_TAIL = 1e-12


def _photon_lowering(n: int) -> np.ndarray:
    """a restricted to block n -> block n-1."""
    L = np.zeros((n, n + 1))
    k = np.arange(n)
    L[k, k] = np.sqrt(n - k)
    return L


def _exciton_lowering(n: int) -> np.ndarray:
    """b restricted to block n -> block n-1."""
    L = np.zeros((n, n + 1))
    k = np.arange(1, n + 1)
    L[k - 1, k] = np.sqrt(k)
    return L


def full_hamiltonian(params: ModelParams, n: int) -> np.ndarray:
    """omega_c a^dag a + omega_ex b^dag b + g(a^dag b + h.c.) + A b^dag b^dag b b - B(b^dag b^dag b a + h.c.)."""
    k = np.arange(n + 1, dtype=float)
    H = np.diag(params.omega_c * (n - k) + params.omega_ex * k + params.A * k * (k - 1))
    # |k> -> |k+1>: b^dag a gives sqrt((k+1)(n-k)); b^dag b^dag b a gives k sqrt((k+1)(n-k))
    kk = k[:-1]
    hop = np.sqrt((kk + 1) * (n - kk)) * (params.g - params.B * kk)
    H[np.arange(1, n + 1), np.arange(n)] = hop
    H[np.arange(n), np.arange(1, n + 1)] = hop
    return H


def _polariton_lowerings(basis: PolaritonBasis, n: int):
    La, Lb = _photon_lowering(n), _exciton_lowering(n)
    return -basis.v * La + basis.u * Lb, basis.u * La + basis.v * Lb


def secular_hamiltonian(basis: PolaritonBasis, n: int) -> np.ndarray:
    """Effective polariton Hamiltonian written back in the exciton/photon basis.

    Built by substituting p1 = -v a + u b, p2 = u a + v b into the normal
    ordered quartic form, using the block-to-block lowering maps.
    """
    dim = n + 1
    if n == 0:
        return np.zeros((1, 1))
    P1, P2 = _polariton_lowerings(basis, n)
    H = basis.omega1 * P1.T @ P1 + basis.omega2 * P2.T @ P2
    if n >= 2:
        Q1, Q2 = _polariton_lowerings(basis, n - 1)
        H = H + basis.A11 * P1.T @ Q1.T @ Q1 @ P1
        H = H + basis.A22 * P2.T @ Q2.T @ Q2 @ P2
        H = H + 2.0 * basis.A12 * P1.T @ Q2.T @ Q2 @ P1
    assert H.shape == (dim, dim)
    return H


def jy_matrix(n: int) -> np.ndarray:
    """J_y = (J_+ - J_-)/(2i) with J_+ = b^dag a."""
    k = np.arange(n)
    Jp = np.zeros((n + 1, n + 1))
    Jp[k + 1, k] = np.sqrt((k + 1) * (n - k))
    return (Jp - Jp.T) / 2j


def secular_spectrum(basis: PolaritonBasis, n1, n2):
    """E(n1, n2) = w1 n1 + w2 n2 + A11 n1(n1-1) + A22 n2(n2-1) + 2 A12 n1 n2."""
    n1 = np.asarray(n1)
    n2 = np.asarray(n2)
    if np.any(n1 < 0) or np.any(n2 < 0):
        raise ValueError("polariton numbers must be non-negative")
    return (basis.omega1 * n1 + basis.omega2 * n2 + basis.A11 * n1 * (n1 - 1)
            + basis.A22 * n2 * (n2 - 1) + 2.0 * basis.A12 * n1 * n2)


def rotation_matrix(basis: PolaritonBasis, n: int) -> np.ndarray:
    """exp(-2i theta J_y) in block n; column q is the polariton state with n2 = q."""
    return wigner_d_matrix(n, 2.0 * basis.theta)


@dataclass(eq=False)
class FockBlock:
    n_total: int
    mode: str
    hamiltonian: np.ndarray
    jy: np.ndarray
    basis: PolaritonBasis
    _spectral: dict = field(default_factory=dict, repr=False)

    @property
    def dim(self) -> int:
        return self.n_total + 1

    @property
    def j(self) -> float:
        return self.n_total / 2

    def spectral(self, path="matrix_spectral"):
        """Return (energies, eigenvectors as columns) for the requested path."""
        if path not in PATHS:
            raise ValueError(f"unknown path {path!r}")
        if path not in self._spectral:
            if path == "matrix_spectral":
                E, V = np.linalg.eigh(self.hamiltonian)
            else:
                if self.mode != "secular":
                    raise ValueError("polariton_rotation path only applies to secular blocks")
                q = np.arange(self.dim)
                E = secular_spectrum(self.basis, self.n_total - q, q)
                V = rotation_matrix(self.basis, self.n_total)
            self._spectral[path] = (E, V)
        return self._spectral[path]

    def observables(self) -> dict:
        """Block matrices of n1, n2, p1^dag p2, p2^dag p1 and a^dag a."""
        n = self.n_total
        k = np.arange(n + 1, dtype=float)
        if n == 0:
            z = np.zeros((1, 1))
            return {"n1": z, "n2": z, "p1dag_p2": z, "p2dag_p1": z, "photons": z}
        P1, P2 = _polariton_lowerings(self.basis, n)
        return {
            "n1": P1.T @ P1,
            "n2": P2.T @ P2,
            "p1dag_p2": P1.T @ P2,
            "p2dag_p1": P2.T @ P1,
            "photons": np.diag(n - k),
        }


def build_block(params: ModelParams, basis: PolaritonBasis, n_total: int, mode="secular") -> FockBlock:
    if int(n_total) != n_total or n_total < 0:
        raise ValueError(f"n_total must be a non-negative integer, got {n_total!r}")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    n_total = int(n_total)
    check_weak_nonlinearity(params, n_total)
    H = full_hamiltonian(params, n_total) if mode == "full" else secular_hamiltonian(basis, n_total)
    return FockBlock(n_total, mode, H, jy_matrix(n_total), basis)


def evolve_block(block: FockBlock, amplitudes, t, path="matrix_spectral") -> np.ndarray:
    """Propagate block amplitudes by exp(-iHt); decay is not applied here.

    ``t`` may be a scalar (returns shape (dim,)) or 1-D array (returns (len(t), dim)).
    """
    psi0 = np.asarray(amplitudes, dtype=complex)
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValueError("t must be non-negative")
    E, V = block.spectral(path)
    c = V.T @ psi0
    phase = np.multiply.outer(t_arr, E)
    z = (np.cos(phase) - 1j * np.sin(phase)) * c
    return z @ V.T.astype(complex)


def _tridiagonal(op: np.ndarray):
    """Split a tridiagonal matrix into (diagonal, O[k, k+1], O[k+1, k])."""
    d0, up, low = np.diag(op).copy(), np.diag(op, 1).copy(), np.diag(op, -1).copy()
    if op.shape[0] > 2 and np.any(np.triu(op, 2)) | np.any(np.tril(op, -2)):
        raise ValueError("observable is not tridiagonal")
    return d0, up, low


@dataclass(eq=False)
class StateVector:
    blocks: dict
    metadata: dict = field(default_factory=dict)

    @property
    def norm(self) -> float:
        return math.sqrt(sum(float(np.vdot(a, a).real) for _, a in sorted(self.blocks.items())))


def coherent_truncation(nbar: float, tail=POISSON_TAIL) -> int:
    """Smallest N_max with Poisson tail P(N > N_max) < tail, never below nbar + 10 sqrt(nbar) + 10."""
    floor = int(math.ceil(nbar + 10.0 * math.sqrt(nbar) + 10.0))
    if nbar == 0:
        return floor
    n_max = floor
    while stats.poisson.sf(n_max, nbar) >= tail:
        n_max += 1
    return n_max


def initial_state_vector(state) -> StateVector:
    """Photons in vacuum, so each block holds only its all-exciton component k = n."""
    if isinstance(state, NumberState):
        amp = np.zeros(state.N + 1, dtype=complex)
        amp[state.N] = 1.0
        return StateVector({state.N: amp}, {"normalization": "exact"})
    if isinstance(state, CoherentState):
        n_max = coherent_truncation(state.nbar)
        n = np.arange(n_max + 1)
        log_p = stats.poisson.logpmf(n, state.nbar) if state.nbar > 0 else np.where(n == 0, 0.0, -np.inf)
        weights = np.exp(log_p)
        tail = max(0.0, 1.0 - weights.sum())
        weights = weights / weights.sum()
        blocks = {}
        for N in range(n_max + 1):
            if weights[N] == 0.0:
                continue
            amp = np.zeros(N + 1, dtype=complex)
            amp[N] = math.sqrt(weights[N]) * np.exp(1j * N * state.phi)
            blocks[N] = amp
        meta = {"normalization": "renormalized_after_truncation", "n_max": n_max, "discarded_tail": tail}
        return StateVector(blocks, meta)
    raise TypeError(f"unsupported initial state {state!r}")


def expectation_total_number(state: StateVector) -> float:
    return float(sum(n * np.vdot(a, a).real for n, a in sorted(state.blocks.items())))


@dataclass(eq=False)
class OraclePieces:
    """Time series assembled from the gamma = 0 evolved state."""

    times: np.ndarray
    n1: np.ndarray
    n2: np.ndarray
    p1dag_p2: np.ndarray
    p2dag_p1: np.ndarray
    photons: np.ndarray
    norm2: np.ndarray
    total_number: np.ndarray
    metadata: dict


def oracle_pieces(params: ModelParams, basis: PolaritonBasis, state, times, mode="secular",
                  path="matrix_spectral") -> OraclePieces:
    times = np.asarray(times, dtype=float)
    sv = initial_state_vector(state)
    keys = ("n1", "n2", "p1dag_p2", "p2dag_p1", "photons")
    acc = {k: np.zeros(times.shape, dtype=complex) for k in keys}
    norm2 = np.zeros(times.shape)
    total = np.zeros(times.shape)
    warn_n = max(sv.blocks) if sv.blocks else 0
    check_weak_nonlinearity(params, warn_n)
    for n in sorted(sv.blocks):
        amp = sv.blocks[n]
        H = full_hamiltonian(params, n) if mode == "full" else secular_hamiltonian(basis, n)
        block = FockBlock(n, mode, H, jy_matrix(n), basis)
        psi = evolve_block(block, amp, times, path)
        pop = psi.real**2 + psi.imag**2
        hop = np.conj(psi[:, :-1]) * psi[:, 1:]
        block_obs = block.observables()
        ops = [_tridiagonal(block_obs[k]) for k in keys]
        diag = np.stack([o[0] for o in ops], axis=1)
        upper = np.stack([o[1] for o in ops], axis=1)
        lower = np.stack([o[2] for o in ops], axis=1)
        values = pop @ diag + hop @ upper + np.conj(hop @ lower)
        for i, k in enumerate(keys):
            acc[k] += values[:, i]
        p = pop.sum(axis=1)
        norm2 += p
        total += n * p
    meta = dict(sv.metadata)
    meta.update(mode=mode, path=path)
    return OraclePieces(times, acc["n1"], acc["n2"], acc["p1dag_p2"], acc["p2dag_p1"], acc["photons"],
                        norm2, total, meta)


def assemble_intensity(pieces: OraclePieces, params: ModelParams, basis: PolaritonBasis):
    """u^2 <n2> + v^2 <n1> - uv (D(t) <p1^dag p2> + D(t) <p2^dag p1>), D = exp(-(g1+g2)t/2).

    Returns (real intensity, max imaginary residue).
    """
    u, v = basis.u, basis.v
    decay = params.decay_factor(pieces.times)
    total = u * u * pieces.n2 + v * v * pieces.n1 - u * v * decay * (pieces.p1dag_p2 + pieces.p2dag_p1)
    residue = float(np.max(np.abs(total.imag))) if total.size else 0.0
    return total.real, residue


def oracle_intensity(params: ModelParams, basis: PolaritonBasis | None, state, grid: TimeGrid, mode="secular",
                     path="matrix_spectral") -> IntensityTrace:
    """Brute-force photon number with decay applied to the cross-coherence only."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if mode == "full" and params.gamma_sum != 0:
        raise ValueError("mode='full' supports only gamma1 = gamma2 = 0")
    if basis is None:
        basis = build_polariton_basis(params)
    pieces = oracle_pieces(params, basis, state, grid.times, mode, path)
    I, residue = assemble_intensity(pieces, params, basis)
    meta = dict(pieces.metadata)
    meta["imag_residue"] = residue
    method = "oracle_secular" if mode == "secular" else "oracle_full"
    return IntensityTrace(grid.times, I, method, state, params, meta)
