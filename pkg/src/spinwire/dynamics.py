"""Time evolution inside the single-excitation subspace.

All propagation goes through one spectral decomposition; the mean-diagonal
offset of the spectrum is applied as a separate unimodular factor
exp(-i alpha offset t), so a uniform field only ever touches the global
phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, ParameterError
from .model import ChainParams, build_single_excitation, site_vector
from .spectral import SpectralDecomposition, eigendecompose

NORM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class ExcitationState:
    """Amplitudes b_m on the basis states phi(m)."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.ndim != 1 or amps.size == 0:
            raise ParameterError("amplitudes must be a non-empty 1-D array")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_TOL:
            raise ParameterError(f"amplitudes must be normalized, got norm {norm!r}")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def at_site(cls, n_sites: int, site: int = 1) -> ExcitationState:
        return cls(site_vector(n_sites, site))

    @property
    def dimension(self) -> int:
        return self.amplitudes.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True)
class TransferResult:
    time: float
    amplitude: complex
    magnitude: float
    nodes_used: int | None = None

    @classmethod
    def from_amplitude(cls, time: float, amplitude: complex, nodes_used: int | None = None):
        amplitude = complex(amplitude)
        return cls(float(time), amplitude, abs(amplitude), nodes_used)


def _phase_factors(decomp: SpectralDecomposition, times: np.ndarray, alpha: float) -> np.ndarray:
    """exp(-i alpha lambda_k t) as a (len(times), N) array."""
    at = alpha * times
    global_phase = np.exp(-1j * decomp.offset * at)
    return global_phase[:, None] * np.exp(-1j * np.outer(at, decomp.centered_eigenvalues))


def evolve(
    decomp: SpectralDecomposition, initial: ExcitationState, time: float, alpha: float = 1.0
) -> ExcitationState:
    """V exp(-i alpha Lambda t) V^dagger b(0)."""
    if initial.dimension != decomp.dimension:
        raise DimensionMismatch(
            f"state has {initial.dimension} sites, decomposition has {decomp.dimension}"
        )
    if not math.isfinite(time):
        raise ParameterError(f"time must be finite, got {time}")
    if time == 0:
        return initial
    v = decomp.eigenvectors
    coeffs = v.conj().T @ initial.amplitudes
    phases = _phase_factors(decomp, np.array([float(time)]), alpha)[0]
    return ExcitationState(v @ (phases * coeffs))


def transfer_weights(
    decomp: SpectralDecomposition, source: int = 1, target: int | None = None
) -> np.ndarray:
    """w_k = V[target, k] conj(V[source, k]) so that <target|U(t)|source> = sum_k w_k e_k(t)."""
    n = decomp.dimension
    target = n if target is None else target
    for name, site in (("source", source), ("target", target)):
        if not 1 <= site <= n:
            raise ParameterError(f"{name} must be in [1, {n}], got {site}")
    v = decomp.eigenvectors
    return v[target - 1] * np.conj(v[source - 1])


def transfer_amplitudes(
    decomp: SpectralDecomposition,
    times: Sequence[float] | np.ndarray,
    alpha: float = 1.0,
    source: int = 1,
    target: int | None = None,
) -> np.ndarray:
    """Complex <target| exp(-i alpha H t) |source> for every t.

    Each row is reduced independently, so splitting ``times`` into chunks
    gives bitwise the same values as one call.
    """
    times = np.asarray(times, dtype=float).reshape(-1)
    if not np.all(np.isfinite(times)):
        raise ParameterError("times must be finite")
    w = transfer_weights(decomp, source, target)
    return np.sum(_phase_factors(decomp, times, alpha) * w, axis=1)


def transfer_amplitude(params: ChainParams, time: float) -> TransferResult:
    """F(t) = <phi(N)| exp(-i alpha H t) |phi(1)>."""
    return fidelity_series(params, [time])[0]


def fidelity_series(params: ChainParams, times: Iterable[float]) -> list[TransferResult]:
    times = np.asarray(list(times), dtype=float)
    decomp = eigendecompose(build_single_excitation(params))
    values = transfer_amplitudes(decomp, times, params.alpha)
    return [TransferResult.from_amplitude(t, f) for t, f in zip(times, values)]
