"""Quantum state transfer through an XY spin chain with DM interaction."""

from .analytic import (
    ContinuumMode,
    QuadratureSpec,
    beta_squared,
    dispersion,
    fidelity_integral,
    fidelity_integral_series,
    paper_eigenvector,
)
from .dynamics import (
    ExcitationState,
    TransferResult,
    evolve,
    fidelity_series,
    transfer_amplitude,
    transfer_amplitudes,
)
from .model import (
    ChainParams,
    EffectiveCoupling,
    FieldProfile,
    SingleExcitationHamiltonian,
    build_single_excitation,
    effective_coupling,
)
from .oracle import FullHamiltonian, FullState, build_full, excitation_number, full_evolve
from .spectral import (
    GaugeTransform,
    SpectralDecomposition,
    eigendecompose,
    gauge_reduce,
    uniform_spectrum,
)
from .sweep import (
    BScanReport,
    MaximizationResult,
    SweepGrid,
    b_invariance_scan,
    maximize_fidelity,
    sweep_td,
)

__version__ = "0.1.0"
