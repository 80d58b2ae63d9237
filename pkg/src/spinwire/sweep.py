"""Parameter sweeps, fidelity maximization and the uniform-field scan."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ._io import format_float
from .dynamics import transfer_amplitudes
from .errors import ParameterError
from .model import ChainParams, build_single_excitation
from .spectral import eigendecompose

B_INVARIANCE_TOL = 1e-10
RESOLUTION = 1e-6
REFINE_POINTS = 9
SHRINK = 4.0


def _axis(values: Sequence[float], name: str) -> np.ndarray:
    axis = np.asarray(values, dtype=float).reshape(-1)
    if axis.size == 0:
        raise ParameterError(f"{name} must be non-empty")
    if not np.all(np.isfinite(axis)):
        raise ParameterError(f"{name} must be finite")
    if np.any(np.diff(axis) <= 0):
        raise ParameterError(f"{name} must be strictly increasing")
    return axis


def _magnitudes(params: ChainParams, t_axis: np.ndarray, d_axis: np.ndarray) -> np.ndarray:
    """|F(t_i; D_j)| with one eigendecomposition per D."""
    out = np.empty((t_axis.size, d_axis.size))
    for j, d in enumerate(d_axis):
        decomp = eigendecompose(build_single_excitation(params.with_d(d)))
        out[:, j] = np.abs(transfer_amplitudes(decomp, t_axis, params.alpha))
    return out


@dataclass(frozen=True, eq=False)
class SweepGrid:
    """|F| on a (t, D) grid; ``values[i, j]`` is at ``(t_axis[i], d_axis[j])``."""

    t_axis: np.ndarray
    d_axis: np.ndarray
    values: np.ndarray
    params: ChainParams

    def column(self, d: float) -> np.ndarray:
        j = int(np.flatnonzero(self.d_axis == d)[0])
        return self.values[:, j]

    def to_csv(self) -> str:
        lines = ["t,D,F_abs"]
        for i, t in enumerate(self.t_axis):
            ts = format_float(t)
            for j, d in enumerate(self.d_axis):
                lines.append(f"{ts},{format_float(d)},{format_float(self.values[i, j])}")
        return "\n".join(lines) + "\n"


def sweep_td(params: ChainParams, t_axis: Sequence[float], d_axis: Sequence[float]) -> SweepGrid:
    """Fidelity magnitude over the product grid, rows = t, columns = D."""
    t = _axis(t_axis, "t_axis")
    d = _axis(d_axis, "d_axis")
    values = _magnitudes(params, t, d)
    for arr in (t, d, values):
        arr.flags.writeable = False
    return SweepGrid(t_axis=t, d_axis=d, values=values, params=params)


@dataclass(frozen=True)
class MaximizationResult:
    best_t: float
    best_d: float
    best_fidelity: float
    evaluations: int
    converged: bool

    def to_dict(self) -> dict:
        return {
            "best_t": self.best_t,
            "best_d": self.best_d,
            "best_fidelity": self.best_fidelity,
            "evaluations": self.evaluations,
            "converged": self.converged,
        }


def maximize_fidelity(
    params: ChainParams,
    t_range: tuple[float, float],
    d_range: tuple[float, float],
    budget: int = 10_000,
) -> MaximizationResult:
    """Coarse grid search followed by 4x-shrinking local grids.

    A degenerate ``d_range`` (lo == hi) keeps D fixed and searches t only.
    Running out of budget is reported through ``converged=False``.
    Ties go to the smaller t, then the smaller D.
    """
    t_lo, t_hi = map(float, t_range)
    d_lo, d_hi = map(float, d_range)
    if not t_lo < t_hi:
        raise ParameterError(f"t_range must satisfy lo < hi, got {t_range}")
    if not d_lo <= d_hi:
        raise ParameterError(f"d_range must satisfy lo <= hi, got {d_range}")
    if budget < 100:
        raise ParameterError(f"budget must be >= 100, got {budget}")
    fixed_d = d_lo == d_hi

    if fixed_d:
        n_t, n_d = budget // 4, 1
    else:
        n_t = n_d = math.isqrt(budget // 4)
    t_axis = np.linspace(t_lo, t_hi, n_t)
    d_axis = np.array([d_lo]) if fixed_d else np.linspace(d_lo, d_hi, n_d)

    best = (-math.inf, math.inf, math.inf)  # (fidelity, t, d)
    evaluations = 0

    def scan(ts: np.ndarray, ds: np.ndarray):
        nonlocal best, evaluations
        values = _magnitudes(params, ts, ds)
        evaluations += values.size
        for (i, t), (j, d) in itertools.product(enumerate(ts), enumerate(ds)):
            f = values[i, j]
            if f > best[0] or (f == best[0] and (t, d) < (best[1], best[2])):
                best = (float(f), float(t), float(d))

    scan(t_axis, d_axis)
    half_t = (t_hi - t_lo) / (n_t - 1)
    half_d = 0.0 if fixed_d else (d_hi - d_lo) / (n_d - 1)
    step_t, step_d = half_t, half_d

    converged = False
    while True:
        if step_t < RESOLUTION and step_d < RESOLUTION:
            converged = True
            break
        cost = REFINE_POINTS * (1 if fixed_d else REFINE_POINTS)
        if evaluations + cost > budget:
            break
        _, t0, d0 = best
        ts = np.unique(np.linspace(max(t_lo, t0 - half_t), min(t_hi, t0 + half_t), REFINE_POINTS))
        if fixed_d:
            ds = np.array([d_lo])
        else:
            ds = np.unique(
                np.linspace(max(d_lo, d0 - half_d), min(d_hi, d0 + half_d), REFINE_POINTS)
            )
        scan(ts, ds)
        step_t = 2 * half_t / (REFINE_POINTS - 1)
        step_d = 2 * half_d / (REFINE_POINTS - 1)
        half_t /= SHRINK
        half_d /= SHRINK

    fidelity, t, d = best
    return MaximizationResult(
        best_t=t, best_d=d, best_fidelity=fidelity, evaluations=evaluations, converged=converged
    )


@dataclass(frozen=True)
class BScanReport:
    b_values: tuple[float, ...]
    pairs: list[dict] = field(default_factory=list)
    max_deviation: float = 0.0
    tolerance: float = B_INVARIANCE_TOL

    @property
    def passed(self) -> bool:
        return self.max_deviation < self.tolerance

    def to_dict(self) -> dict:
        return {
            "b_values": list(self.b_values),
            "pairs": self.pairs,
            "max_deviation": self.max_deviation,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def b_invariance_scan(
    params: ChainParams, b_values: Sequence[float], t_axis: Sequence[float]
) -> BScanReport:
    """Pairwise max over t of ||F(t; B1)| - |F(t; B2)|| for uniform fields."""
    t = _axis(t_axis, "t_axis")
    b_values = tuple(float(b) for b in b_values)
    curves = {}
    for b in b_values:
        decomp = eigendecompose(build_single_excitation(params.with_uniform_field(b)))
        curves[b] = np.abs(transfer_amplitudes(decomp, t, params.alpha))
    pairs = []
    for b1, b2 in itertools.combinations(b_values, 2):
        dev = float(np.max(np.abs(curves[b1] - curves[b2])))
        pairs.append({"b1": b1, "b2": b2, "max_deviation": dev})
    worst = max((p["max_deviation"] for p in pairs), default=0.0)
    return BScanReport(b_values=b_values, pairs=pairs, max_deviation=worst)
