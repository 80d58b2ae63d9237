"""Continuum formulas for the uniform chain and the fidelity integral.

These are evaluated as written: the dispersion E(theta), the mode ansatz
with its field-corrected last component, the normalization beta^2 and the
theta-integral for F(t). The exact finite-chain answer lives in
:mod:`spinwire.dynamics`; nothing here is treated as ground truth.

Powers omega ** (k/2) use the square root conj(Gamma)/|Gamma| of omega
(see :attr:`EffectiveCoupling.half_phase`), under which the mode vector
has unit norm with beta^2 as defined below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss

from .dynamics import TransferResult, transfer_amplitudes
from .errors import (
    ParameterError,
    QuadratureNonConvergence,
    ThetaOutOfRange,
    ZeroCoupling,
    ZeroDenominator,
    ZeroField,
)
from .model import ChainParams, build_single_excitation
from .spectral import eigendecompose

GL_ORDER = 16
_THETA_SLACK = 1e-12


@dataclass(frozen=True)
class QuadratureSpec:
    """Composite Gauss-Legendre on [-pi, pi] with node doubling.

    ``node_count`` is the starting total node count; panels hold
    ``GL_ORDER`` nodes each, so it is rounded up to a multiple of that.
    """

    node_count: int = 64
    refinement_tolerance: float = 1e-8
    max_refinements: int = 20

    def __post_init__(self):
        if self.node_count < GL_ORDER:
            raise ParameterError(f"node_count must be >= {GL_ORDER}, got {self.node_count}")
        if not 0 < self.refinement_tolerance <= 1e-4:
            raise ParameterError(
                f"refinement_tolerance must be in (0, 1e-4], got {self.refinement_tolerance}"
            )
        if self.max_refinements < 1:
            raise ParameterError(f"max_refinements must be >= 1, got {self.max_refinements}")


@dataclass(frozen=True, eq=False)
class ContinuumMode:
    theta: float
    energy: float
    amplitudes: np.ndarray
    beta: float


def _check_uniform(params: ChainParams) -> tuple[float, float]:
    b = params.uniform_field
    modulus = params.coupling().modulus
    return b, modulus


def _check_theta(theta: float) -> float:
    theta = float(theta)
    if not -math.pi - _THETA_SLACK <= theta <= math.pi + _THETA_SLACK:
        raise ThetaOutOfRange(f"theta must lie in [-pi, pi], got {theta}")
    return theta


def _check_continuum(params: ChainParams) -> tuple[float, float]:
    b, modulus = _check_uniform(params)
    if b == 0:
        raise ZeroField("continuum formulas divide by B; got B = 0")
    if modulus == 0:
        raise ZeroCoupling("continuum formulas need Gamma != 0")
    return b, modulus


def dispersion(params: ChainParams, theta: float) -> float:
    """E(theta) = -(B + 2|Gamma| cos theta)."""
    b, modulus = _check_uniform(params)
    theta = _check_theta(theta)
    return -(b + 2.0 * modulus * math.cos(theta))


def _denominator(n: int, ratio: float, theta: np.ndarray) -> np.ndarray:
    """(sin N th + ratio sin (N+1) th)^2 + sum_{n<N} sin^2(n th), vectorized."""
    last = np.sin(n * theta) + ratio * np.sin((n + 1) * theta)
    total = last * last
    for k in range(1, n):
        s = np.sin(k * theta)
        total += s * s
    return total


def beta_squared(params: ChainParams, theta: float) -> float:
    b, modulus = _check_continuum(params)
    theta = _check_theta(theta)
    if min(abs(theta), abs(abs(theta) - math.pi)) < _THETA_SLACK:
        raise ZeroDenominator(f"every sin(n theta) vanishes at theta = {theta}")
    denom = float(_denominator(params.n_sites, modulus / b, np.array([theta]))[0])
    if denom == 0.0:
        raise ZeroDenominator(f"normalization denominator vanishes at theta = {theta}")
    return 1.0 / denom


def paper_eigenvector(params: ChainParams, theta: float) -> ContinuumMode:
    """The mode ansatz a_theta(m) = beta omega^((m-1)/2) sin(m theta).

    The last component carries the extra term
    (Gamma*/B) omega^((N-2)/2) sin((N+1) theta).
    """
    beta2 = beta_squared(params, theta)
    b = params.uniform_field
    coupling = params.coupling()
    s = coupling.half_phase
    n = params.n_sites
    m = np.arange(1, n + 1)
    powers = np.exp(1j * math.atan2(s.imag, s.real) * (m - 1))
    amps = powers * np.sin(m * theta)
    amps[-1] += (coupling.gamma.conjugate() / b) * powers[-1] / s * math.sin((n + 1) * theta)
    beta = math.sqrt(beta2)
    return ContinuumMode(
        theta=float(theta),
        energy=dispersion(params, theta),
        amplitudes=beta * amps,
        beta=beta,
    )


@lru_cache(maxsize=64)
def _gl_rule(node_count: int) -> tuple[np.ndarray, np.ndarray]:
    panels = -(-node_count // GL_ORDER)
    x, w = leggauss(GL_ORDER)
    edges = np.linspace(-np.pi, np.pi, panels + 1)
    half = 0.5 * np.diff(edges)[:, None]
    mid = 0.5 * (edges[:-1] + edges[1:])[:, None]
    nodes = (half * x + mid).ravel()
    weights = (half * w).ravel()
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return nodes, weights


class _FidelityIntegrand:
    """Caches the t-independent part of the integrand per node count."""

    def __init__(self, params: ChainParams):
        self.b, self.modulus = _check_continuum(params)
        self.n = params.n_sites
        self.alpha = params.alpha
        self.ratio = self.modulus / self.b
        s = params.coupling().half_phase
        self.prefactor = np.exp(1j * math.atan2(s.imag, s.real) * (self.n - 1)) / (2 * np.pi)
        self._static: dict[int, tuple[np.ndarray, np.ndarray]] = {}

    def static(self, node_count: int) -> tuple[np.ndarray, np.ndarray]:
        if node_count not in self._static:
            theta, weights = _gl_rule(node_count)
            last = np.sin(self.n * theta) + self.ratio * np.sin((self.n + 1) * theta)
            g = np.sin(theta) * last / _denominator(self.n, self.ratio, theta)
            self._static[node_count] = (np.cos(theta), weights * g)
        return self._static[node_count]

    def integral(self, time: float, node_count: int) -> complex:
        cos_theta, weighted = self.static(node_count)
        osc = np.exp(2j * self.alpha * time * self.modulus * cos_theta)
        value = np.sum(weighted * osc)
        return complex(self.prefactor * np.exp(1j * self.alpha * self.b * time) * value)

    def converge(self, time: float, quad: QuadratureSpec) -> tuple[complex, int]:
        nodes = -(-quad.node_count // GL_ORDER) * GL_ORDER
        previous = self.integral(time, nodes)
        for _ in range(quad.max_refinements):
            nodes *= 2
            current = self.integral(time, nodes)
            change = abs(current - previous)
            if change <= quad.refinement_tolerance * abs(current):
                return current, nodes
            previous = current
        raise QuadratureNonConvergence(
            f"no convergence at t={time} after {quad.max_refinements} doublings "
            f"({nodes} nodes; last relative change {change / max(abs(current), 1e-300):.3e})"
        )


def fidelity_integral(
    params: ChainParams, time: float, quad: QuadratureSpec | None = None
) -> TransferResult:
    """F(t) from the theta-integral, converged by node doubling.

    ``nodes_used`` on the result is the node count of the accepted value.
    """
    return fidelity_integral_series(params, [time], quad)[0]


def fidelity_integral_series(
    params: ChainParams, times: Sequence[float], quad: QuadratureSpec | None = None
) -> list[TransferResult]:
    quad = quad or QuadratureSpec()
    integrand = _FidelityIntegrand(params)
    results = []
    for t in times:
        t = float(t)
        if not math.isfinite(t):
            raise ParameterError(f"time must be finite, got {t}")
        value, nodes = integrand.converge(t, quad)
        results.append(TransferResult.from_amplitude(t, value, nodes_used=nodes))
    return results


def compare_with_exact(
    params: ChainParams, times: Sequence[float], quad: QuadratureSpec | None = None
) -> dict:
    """Analytic-vs-exact deviations over a time grid, as plain data."""
    analytic = fidelity_integral_series(params, times, quad)
    decomp = eigendecompose(build_single_excitation(params))
    exact = transfer_amplitudes(decomp, [r.time for r in analytic], params.alpha)
    a = np.array([r.amplitude for r in analytic])
    mag_dev = np.abs(np.abs(a) - np.abs(exact))
    worst = int(np.argmax(mag_dev))
    return {
        "points": len(analytic),
        "max_magnitude_discrepancy": float(mag_dev[worst]),
        "worst_time": analytic[worst].time,
        "max_complex_discrepancy": float(np.max(np.abs(a - exact))),
        "max_exact_magnitude": float(np.max(np.abs(exact))),
        "max_analytic_magnitude": float(np.max(np.abs(a))),
        "max_nodes_used": max(r.nodes_used for r in analytic),
    }
