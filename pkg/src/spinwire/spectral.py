"""Exact eigendecomposition of the single-excitation Hamiltonian.

A diagonal unitary P with entries exp(-i (m-1) arg Gamma) maps the complex
hopping chain onto a real symmetric tridiagonal matrix T with off-diagonal
-|Gamma|:  H = P T P^dagger.  T is diagonalized by LAPACK and the
eigenvectors are rotated back with P.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal

from .errors import ConvergenceFailure, ZeroCoupling
from .model import ChainParams, SingleExcitationHamiltonian, _frozen

DEGENERACY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class SymmetricTridiagonal:
    diagonal: np.ndarray
    off_diagonal: np.ndarray

    def to_dense(self) -> np.ndarray:
        n = self.diagonal.shape[0]
        t = np.diag(self.diagonal).astype(float)
        if n > 1:
            t += np.diag(self.off_diagonal, 1) + np.diag(self.off_diagonal, -1)
        return t


@dataclass(frozen=True, eq=False)
class GaugeTransform:
    """Diagonal phase matrix P; entry m is omega ** ((m - 1) / 2)."""

    phases: np.ndarray

    def matrix(self) -> np.ndarray:
        return np.diag(self.phases)


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenpairs of H, ascending.

    Eigenvalues are kept as ``offset + centered_eigenvalues`` where
    ``offset`` is the mean diagonal. For a uniform field the offset is
    exactly -B and the centered part does not depend on B at all, which is
    what keeps time evolution at large B*t free of phase round-off.
    """

    centered_eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    offset: float = 0.0

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.offset + self.centered_eigenvalues

    @property
    def dimension(self) -> int:
        return self.centered_eigenvalues.shape[0]

    def to_dense(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def gauge_reduce(h: SingleExcitationHamiltonian) -> tuple[SymmetricTridiagonal, GaugeTransform]:
    """Strip the DM phase from the hopping.

    Raises ZeroCoupling when Gamma = 0, since the phase pattern is then
    undefined.
    """
    gamma = h.coupling.gamma
    if gamma == 0:
        raise ZeroCoupling("gauge reduction needs Gamma != 0")
    phases = _gauge_phases(h.dimension, -cmath.phase(gamma))
    reduced = SymmetricTridiagonal(
        diagonal=_frozen(np.array(h.diagonal, dtype=float)),
        off_diagonal=_frozen(np.full(h.dimension - 1, -h.coupling.modulus)),
    )
    return reduced, GaugeTransform(_frozen(phases))


def _gauge_phases(n: int, angle: float) -> np.ndarray:
    # exp of a pure imaginary argument keeps every entry on the unit circle
    return np.exp(1j * angle * np.arange(n))


def eigendecompose(h: SingleExcitationHamiltonian) -> SpectralDecomposition:
    n = h.dimension
    if h.coupling.gamma == 0:
        # decoupled sites: H is already diagonal
        reduced = SymmetricTridiagonal(np.array(h.diagonal, dtype=float), np.zeros(n - 1))
        phases = np.ones(n, dtype=complex)
    else:
        reduced, transform = gauge_reduce(h)
        phases = transform.phases

    diag = reduced.diagonal
    # equal entries give an exact offset; np.mean of n copies of x need not return x
    offset = float(diag[0]) if np.all(diag == diag[0]) else float(np.mean(diag))
    centered = reduced.diagonal - offset
    if n == 1:
        mu, w = np.zeros(1), np.ones((1, 1))
    else:
        try:
            mu, w = eigh_tridiagonal(centered, reduced.off_diagonal, lapack_driver="stemr")
        except (LinAlgError, ValueError) as exc:
            raise ConvergenceFailure(f"tridiagonal eigensolver failed for N={n}: {exc}") from exc
        w = _orthonormalize_degenerate(mu, w)

    vectors = phases[:, None] * w
    vectors = _fix_phases(vectors)
    return SpectralDecomposition(
        centered_eigenvalues=_frozen(mu),
        eigenvectors=_frozen(vectors),
        offset=offset,
    )


def _orthonormalize_degenerate(mu: np.ndarray, w: np.ndarray) -> np.ndarray:
    tol = DEGENERACY_TOL * max(1.0, float(np.max(np.abs(mu))))
    breaks = np.flatnonzero(np.diff(mu) > tol) + 1
    starts = np.concatenate(([0], breaks))
    stops = np.concatenate((breaks, [mu.shape[0]]))
    for start, stop in zip(starts, stops):
        if stop - start > 1:
            q, r = np.linalg.qr(w[:, start:stop])
            # keep the solver's orientation where QR would flip a column
            w[:, start:stop] = q * np.sign(np.where(np.diag(r) == 0, 1.0, np.diag(r)))
    return w


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    """Rotate each column so its first non-negligible entry is real positive."""
    mags = np.abs(vectors)
    cutoff = 1e-12 * mags.max(axis=0)
    first = np.argmax(mags > cutoff, axis=0)
    lead = vectors[first, np.arange(vectors.shape[1])]
    rotated = vectors * (np.conj(lead) / np.abs(lead))
    rotated[first, np.arange(vectors.shape[1])] = np.abs(lead)
    return rotated


def uniform_spectrum(params: ChainParams) -> np.ndarray:
    """Closed-form spectrum -(B + 2|Gamma| cos(k pi/(N+1))), ascending."""
    b = params.uniform_field
    n = params.n_sites
    k = np.arange(1, n + 1)
    values = -(b + 2.0 * params.coupling().modulus * np.cos(k * np.pi / (n + 1)))
    return np.sort(values)
