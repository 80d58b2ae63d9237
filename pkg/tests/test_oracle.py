import math

import numpy as np
import pytest

from spinwire import (
    ChainParams,
    FieldProfile,
    FullState,
    build_full,
    build_single_excitation,
    eigendecompose,
    evolve,
    excitation_number,
    full_evolve,
    ExcitationState,
    transfer_amplitudes,
)
from spinwire.errors import DimensionMismatch, TooLarge
from spinwire.oracle import full_transfer_amplitude
from spinwire.verify import random_params, random_unit, run_verification


def test_single_site_is_diagonal():
    h = build_full(ChainParams.uniform(1, 1.0, 3.0, 4.0)).matrix.toarray()
    np.testing.assert_array_equal(h, [[0, 0], [0, -4.0]])


def test_two_site_block():
    h = build_full(ChainParams.uniform(2, 1.0, 0.0, 0.0))
    np.testing.assert_array_equal(h.single_excitation_block(), [[0, -0.5], [-0.5, 0]])
    # |00> and |11> are untouched by hopping with B = 0
    dense = h.matrix.toarray()
    assert dense[0, 0] == 0 and dense[3, 3] == 0


def test_two_site_hand_assembly():
    # sigma^+ = |up><down| in (down, up) order; Gamma s+_1 s-_2 moves site 2 -> site 1
    g = complex(0.8, -1.7) / 2
    b = 3.0
    h = build_full(ChainParams.uniform(2, 0.8, -1.7, b)).matrix.toarray()
    hand = np.zeros((4, 4), dtype=complex)
    hand[1, 2] = -g      # <10|H|01>, index 1 = site 1 up, index 2 = site 2 up
    hand[2, 1] = -g.conjugate()
    hand[1, 1] = hand[2, 2] = -b
    hand[3, 3] = -2 * b
    np.testing.assert_allclose(h, hand, atol=1e-15)


@pytest.mark.parametrize("n", [1, 3, 6])
def test_vacuum_energy_is_zero(n):
    params = ChainParams(n, 1.3, -0.4, FieldProfile(tuple(np.linspace(1, 9, n))))
    h = build_full(params).matrix
    assert h[0, 0] == 0
    assert h[0].nnz == 0


@pytest.mark.parametrize("n", [2, 5, 8])
def test_structure(n, rng):
    params = random_params(rng, n, uniform=False)
    h = build_full(params)
    assert h.hermiticity_error() < 1e-13
    assert h.number_commutator_norm() < 1e-12
    np.testing.assert_allclose(
        h.single_excitation_block(), build_single_excitation(params).to_dense(), atol=0
    )


def test_memory_guard():
    with pytest.raises(TooLarge):
        build_full(ChainParams.uniform(15))


def test_sender_a_amplitude_constant(rng):
    params = random_params(rng, 6)
    h = build_full(params)
    a, b = 0.6, 0.8j
    state = FullState.sender(6, a, b)
    for t in np.linspace(0, 25, 11):
        assert abs(abs(full_evolve(h, state, t).amplitudes[0]) - abs(a)) < 1e-10


def test_vacuum_unchanged():
    h = build_full(ChainParams.uniform(5, 1.0, 2.0, 30.0))
    vac = FullState.basis(5, 0)
    out = full_evolve(h, vac, 3.7)
    assert abs(out.amplitudes[0] - 1) < 1e-12


def test_zero_time_identity(rng):
    h = build_full(ChainParams.uniform(4, 1.0, 1.0, 1.0))
    s = FullState(random_unit(rng, 16))
    assert full_evolve(h, s, 0.0) is s


def test_dimension_mismatch():
    h = build_full(ChainParams.uniform(3))
    with pytest.raises(DimensionMismatch):
        full_evolve(h, FullState.basis(2, 0), 1.0)


def test_excitation_number_examples():
    assert excitation_number(FullState.basis(4, 0)) == 0
    assert excitation_number(FullState.basis(4, 1)) == 1
    r = 1 / math.sqrt(2)
    amps = np.zeros(4, dtype=complex)
    amps[1] = amps[3] = r  # |10> and |11>
    assert abs(excitation_number(FullState(amps)) - 1.5) < 1e-15


@pytest.mark.parametrize("n", [3, 7, 10])
def test_excitation_conservation(n, rng):
    h = build_full(random_params(rng, n, uniform=False))
    s = FullState(random_unit(rng, 1 << n))
    before = excitation_number(s)
    for t in (0.1, 2.0, 19.0):
        out = full_evolve(h, s, t)
        assert abs(np.linalg.norm(out.amplitudes) - 1) < 1e-10
        assert abs(excitation_number(out) - before) < 1e-10


@pytest.mark.parametrize("n", [2, 4, 7, 10])
def test_subspace_equivalence(n, rng):
    params = random_params(rng, n)
    h = build_full(params)
    decomp = eigendecompose(build_single_excitation(params))
    times = rng.uniform(0, 10, size=5)
    exact = transfer_amplitudes(decomp, times)
    for t, f in zip(times, exact):
        assert abs(full_transfer_amplitude(params, t, h) - f) < 1e-8
    b0 = random_unit(rng, n)
    embedded = np.zeros(1 << n, dtype=complex)
    embedded[[1 << m for m in range(n)]] = b0
    for t in times:
        sub = evolve(decomp, ExcitationState(b0), t).amplitudes
        full = full_evolve(h, FullState(embedded), t).single_excitation_amplitudes()
        assert np.max(np.abs(sub - full)) < 1e-8


def test_verification_report_passes():
    report = run_verification(n_max=5, trials_per_n=1, times_per_trial=3, seed=3)
    assert report["passed"]
    names = {c["name"] for c in report["checks"]}
    assert "transfer_amplitude_equivalence" in names
    assert all(c["max_deviation"] < c["tolerance"] for c in report["checks"])
    assert "analytic_comparison" not in report


def test_verification_is_seeded():
    a = run_verification(n_max=4, trials_per_n=1, times_per_trial=2, seed=11)
    b = run_verification(n_max=4, trials_per_n=1, times_per_trial=2, seed=11)
    assert a == b
