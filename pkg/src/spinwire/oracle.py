"""Brute-force 2^N simulation of the full spin chain.

The Hamiltonian is assembled from Kronecker products of Pauli matrices,
with sigma^+- = (sigma^x +- i sigma^y)/2:

    H = -sum_j [Gamma s+_j s-_{j+1} + Gamma* s-_j s+_{j+1}] - sum_j (B_j/2)(s^z_j + 1)

Basis index convention: bit (m - 1) of the index is the spin at site m
(1 = up), so phi(m) sits at index 2**(m - 1).

This module is deliberately independent of :mod:`spinwire.spectral`; it
shares only the parameter types.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, reduce

import numpy as np
import scipy.sparse as sp

from .errors import DimensionMismatch, ParameterError, TooLarge
from .model import ChainParams

MAX_SITES = 14

# Pauli matrices in the (down, up) = (|0>, |1>) index order, so that
# sigma^z |up> = +|up> and sigma^+ = (sigma^x + i sigma^y)/2 maps down -> up.
_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, 1j], [-1j, 0]], dtype=complex)
_SZ = np.array([[-1, 0], [0, 1]], dtype=complex)
_SPLUS = sp.csr_matrix((_SX + 1j * _SY) / 2)
_SMINUS = sp.csr_matrix((_SX - 1j * _SY) / 2)
_ID = sp.identity(2, dtype=complex, format="csr")


def _site_operator(op, site: int, n_sites: int) -> sp.csr_matrix:
    """op acting on ``site`` (1-based), identity elsewhere.

    Kronecker order puts site N leftmost so site 1 is the least significant bit.
    """
    op = sp.csr_matrix(op)
    factors = [op if m == site else _ID for m in range(n_sites, 0, -1)]
    return reduce(lambda a, b: sp.kron(a, b, format="csr"), factors)


@dataclass(frozen=True, eq=False)
class FullHamiltonian:
    n_sites: int
    matrix: sp.csr_matrix

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def _eigh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.linalg.eigh(self.matrix.toarray())

    def hermiticity_error(self) -> float:
        diff = self.matrix - self.matrix.conj().T
        return float(abs(diff).max()) if diff.nnz else 0.0

    def number_commutator_norm(self) -> float:
        n = self.n_sites
        ident = sp.identity(self.dimension, dtype=complex, format="csr")
        number = sum(0.5 * (_site_operator(_SZ, j, n) + ident) for j in range(1, n + 1))
        comm = self.matrix @ number - number @ self.matrix
        return float(abs(comm).max()) if comm.nnz else 0.0

    def single_excitation_block(self) -> np.ndarray:
        idx = [1 << (m - 1) for m in range(1, self.n_sites + 1)]
        return self.matrix[idx][:, idx].toarray()


@dataclass(frozen=True, eq=False)
class FullState:
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        size = amps.shape[0] if amps.ndim == 1 else 0
        if size == 0 or size & (size - 1):
            raise ParameterError("amplitudes must be a 1-D array of length 2**N")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > 1e-10:
            raise ParameterError(f"amplitudes must be normalized, got norm {norm!r}")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_sites(self) -> int:
        return self.amplitudes.shape[0].bit_length() - 1

    @classmethod
    def basis(cls, n_sites: int, index: int) -> FullState:
        amps = np.zeros(1 << n_sites, dtype=complex)
        amps[index] = 1.0
        return cls(amps)

    @classmethod
    def sender(cls, n_sites: int, a: complex, b: complex) -> FullState:
        """a|00...0> + b|10...0>, the sender qubit on site 1."""
        amps = np.zeros(1 << n_sites, dtype=complex)
        amps[0] = a
        amps[1] = b
        return cls(amps)

    def single_excitation_amplitudes(self) -> np.ndarray:
        return self.amplitudes[[1 << m for m in range(self.n_sites)]]


def build_full(params: ChainParams) -> FullHamiltonian:
    n = params.n_sites
    if n > MAX_SITES:
        raise TooLarge(f"full simulation is capped at N={MAX_SITES}, got N={n}")
    gamma = params.coupling().gamma
    dim = 1 << n
    ident = sp.identity(dim, dtype=complex, format="csr")
    h = sp.csr_matrix((dim, dim), dtype=complex)
    for j in range(1, n):
        h = h - gamma * (_site_operator(_SPLUS, j, n) @ _site_operator(_SMINUS, j + 1, n))
        h = h - np.conj(gamma) * (_site_operator(_SMINUS, j, n) @ _site_operator(_SPLUS, j + 1, n))
    for j, b in enumerate(params.field.values, start=1):
        h = h - (b / 2) * (_site_operator(_SZ, j, n) + ident)
    h.eliminate_zeros()
    return FullHamiltonian(n_sites=n, matrix=h.tocsr())


def full_evolve(h: FullHamiltonian, state: FullState, time: float, alpha: float = 1.0) -> FullState:
    if state.amplitudes.shape[0] != h.dimension:
        raise DimensionMismatch(
            f"state dimension {state.amplitudes.shape[0]} != Hamiltonian dimension {h.dimension}"
        )
    if time == 0:
        return state
    energies, vectors = h._eigh
    coeffs = vectors.conj().T @ state.amplitudes
    return FullState(vectors @ (np.exp(-1j * alpha * energies * time) * coeffs))


def excitation_numbers(n_sites: int) -> np.ndarray:
    """Popcount of every basis index, i.e. the diagonal of sum_j (s^z_j + 1)/2."""
    idx = np.arange(1 << n_sites)
    counts = np.zeros(idx.shape, dtype=np.int64)
    for m in range(n_sites):
        counts += (idx >> m) & 1
    return counts


def excitation_number(state: FullState) -> float:
    probs = np.abs(state.amplitudes) ** 2
    return float(probs @ excitation_numbers(state.n_sites))


def full_transfer_amplitude(
    params: ChainParams, time: float, h: FullHamiltonian | None = None
) -> complex:
    """<0...01| exp(-i alpha H t) |10...0> in the full space."""
    h = h or build_full(params)
    out = full_evolve(h, FullState.basis(params.n_sites, 1), time, params.alpha)
    return complex(out.amplitudes[1 << (params.n_sites - 1)])
