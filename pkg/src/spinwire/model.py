"""Chain parameters and the single-excitation Hamiltonian.

The chain is open: N sites, N - 1 bonds. Every bond carries the same
complex hopping Gamma = (J + iD)/2 and site m feels a field B_m. In the
single-excitation basis phi(m) = |0...1_m...0> the Hamiltonian is

    H = -[[B_1, Gamma, 0, ...], [Gamma*, B_2, Gamma, ...], ...]

and that matrix, minus sign included, is what gets stored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import NonUniformField, ParameterError, ZeroCoupling


def _frozen(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


@dataclass(frozen=True)
class FieldProfile:
    """Per-site magnetic field B_1 ... B_N."""

    values: tuple[float, ...]

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        if not values:
            raise ParameterError("field: profile must contain at least one site")
        if not all(math.isfinite(v) for v in values):
            raise ParameterError("field: all entries must be finite")
        object.__setattr__(self, "values", values)

    @classmethod
    def constant(cls, b: float, n_sites: int) -> FieldProfile:
        return cls((float(b),) * n_sites)

    @property
    def uniform(self) -> bool:
        first = self.values[0]
        return all(v == first for v in self.values)

    def __len__(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.array(self.values, dtype=float)


@dataclass(frozen=True)
class ChainParams:
    """Everything that defines a chain and its time scale.

    ``alpha`` multiplies ``H t`` in the propagator ``exp(-i alpha H t)``
    and never enters the matrix itself.
    """

    n_sites: int
    j_coupling: float
    d_coupling: float
    field: FieldProfile
    alpha: float = 1.0

    def __post_init__(self):
        if isinstance(self.n_sites, bool) or int(self.n_sites) != self.n_sites:
            raise ParameterError(f"n_sites must be an integer, got {self.n_sites!r}")
        object.__setattr__(self, "n_sites", int(self.n_sites))
        if self.n_sites < 1:
            raise ParameterError(f"n_sites must be >= 1, got {self.n_sites}")
        for name in ("j_coupling", "d_coupling", "alpha"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ParameterError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if not self.alpha > 0:
            raise ParameterError(f"alpha must be > 0, got {self.alpha}")
        if not isinstance(self.field, FieldProfile):
            object.__setattr__(self, "field", FieldProfile(tuple(self.field)))
        if len(self.field) != self.n_sites:
            raise ParameterError(
                f"field must have n_sites={self.n_sites} entries, got {len(self.field)}"
            )

    @classmethod
    def uniform(
        cls,
        n_sites: int,
        j_coupling: float = 1.0,
        d_coupling: float = 0.0,
        b_field: float = 0.0,
        alpha: float = 1.0,
    ) -> ChainParams:
        if isinstance(n_sites, bool) or int(n_sites) != n_sites or n_sites < 1:
            raise ParameterError(f"n_sites must be >= 1, got {n_sites!r}")
        return cls(
            n_sites=int(n_sites),
            j_coupling=j_coupling,
            d_coupling=d_coupling,
            field=FieldProfile.constant(b_field, int(n_sites)),
            alpha=alpha,
        )

    @property
    def uniform_field(self) -> float:
        """The common field value; raises NonUniformField otherwise."""
        if not self.field.uniform:
            raise NonUniformField("operation requires a uniform field profile")
        return self.field.values[0]

    def coupling(self) -> EffectiveCoupling:
        return effective_coupling(self.j_coupling, self.d_coupling)

    def with_d(self, d_coupling: float) -> ChainParams:
        return replace(self, d_coupling=float(d_coupling))

    def with_uniform_field(self, b_field: float) -> ChainParams:
        return replace(self, field=FieldProfile.constant(b_field, self.n_sites))


@dataclass(frozen=True)
class EffectiveCoupling:
    gamma: complex
    modulus: float

    @property
    def omega(self) -> complex:
        """conj(Gamma)/Gamma, unimodular."""
        if self.gamma == 0:
            raise ZeroCoupling("omega is undefined for J = D = 0")
        return self.gamma.conjugate() / self.gamma

    @property
    def half_phase(self) -> complex:
        """The square root of omega equal to conj(Gamma)/|Gamma|.

        This is the branch for which ``omega ** ((m - 1) / 2)`` means
        ``half_phase ** (m - 1)`` and the gauge-reduced hopping is -|Gamma|.
        """
        if self.gamma == 0:
            raise ZeroCoupling("omega is undefined for J = D = 0")
        return self.gamma.conjugate() / self.modulus


def effective_coupling(j_coupling: float, d_coupling: float) -> EffectiveCoupling:
    """Gamma = (J + iD)/2 with its modulus ``hypot(J, D)/2``."""
    gamma = complex(j_coupling, d_coupling) / 2
    return EffectiveCoupling(gamma=gamma, modulus=math.hypot(j_coupling, d_coupling) / 2)


@dataclass(frozen=True, eq=False)
class SingleExcitationHamiltonian:
    """Hermitian tridiagonal H restricted to one up-spin.

    ``diagonal[m] = -B_m``, ``super_diagonal[k] = -Gamma``; the
    sub-diagonal is the exact conjugate of the super-diagonal.
    """

    diagonal: np.ndarray
    super_diagonal: np.ndarray
    coupling: EffectiveCoupling

    @property
    def dimension(self) -> int:
        return self.diagonal.shape[0]

    @property
    def sub_diagonal(self) -> np.ndarray:
        return np.conj(self.super_diagonal)

    def to_dense(self) -> np.ndarray:
        n = self.dimension
        h = np.zeros((n, n), dtype=complex)
        idx = np.arange(n)
        h[idx, idx] = self.diagonal
        h[idx[:-1], idx[1:]] = self.super_diagonal
        h[idx[1:], idx[:-1]] = self.sub_diagonal
        return h


def build_single_excitation(params: ChainParams) -> SingleExcitationHamiltonian:
    coupling = params.coupling()
    n = params.n_sites
    diagonal = -params.field.as_array()
    # store +0.0 rather than -0.0 for B = 0
    diagonal[diagonal == 0] = 0.0
    super_diagonal = np.full(n - 1, -coupling.gamma, dtype=complex)
    return SingleExcitationHamiltonian(
        diagonal=_frozen(diagonal),
        super_diagonal=_frozen(super_diagonal),
        coupling=coupling,
    )


def site_vector(n_sites: int, site: int) -> np.ndarray:
    """phi(site) as a length-N complex vector; sites are 1-based."""
    if not 1 <= site <= n_sites:
        raise ParameterError(f"site must be in [1, {n_sites}], got {site}")
    v = np.zeros(n_sites, dtype=complex)
    v[site - 1] = 1.0
    return v
