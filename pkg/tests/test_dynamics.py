import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinwire import (
    ChainParams,
    ExcitationState,
    FieldProfile,
    build_single_excitation,
    eigendecompose,
    evolve,
    fidelity_series,
    transfer_amplitude,
    transfer_amplitudes,
)
from spinwire.errors import DimensionMismatch, ParameterError


def decomp_of(params):
    return eigendecompose(build_single_excitation(params))


def test_evolve_zero_time_is_identity():
    params = ChainParams.uniform(6, 1.0, 2.0, 3.0)
    state = ExcitationState(np.full(6, 1 / math.sqrt(6), dtype=complex))
    assert evolve(decomp_of(params), state, 0.0).amplitudes is state.amplitudes


@pytest.mark.parametrize("t", [0.3, 2.0, 17.5])
def test_evolve_single_site_phase(t):
    b, alpha = 7.0, 1.3
    params = ChainParams.uniform(1, 1.0, 0.0, b, alpha)
    out = evolve(decomp_of(params), ExcitationState.at_site(1), t, alpha)
    assert abs(out.amplitudes[0] - cmath.exp(1j * alpha * b * t)) < 1e-13
    assert abs(abs(out.amplitudes[0]) - 1) < 1e-14


def test_evolve_two_sites_full_swap():
    params = ChainParams.uniform(2, 1.0, 0.0, 0.0)
    out = evolve(decomp_of(params), ExcitationState.at_site(2, 1), math.pi, 1.0)
    assert abs(out.amplitudes[0]) < 1e-15
    assert abs(abs(out.amplitudes[1]) - 1) < 1e-15


def test_evolve_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        evolve(decomp_of(ChainParams.uniform(3)), ExcitationState.at_site(4), 1.0)


def test_excitation_state_must_be_normalized():
    with pytest.raises(ParameterError):
        ExcitationState(np.array([1.0, 1.0]))


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 80),
    st.floats(-5, 5),
    st.floats(-5, 5),
    st.floats(-200, 200),
    st.floats(-500, 500),
    st.integers(0, 2**32 - 1),
)
def test_unitarity(n, j, d, b, t, seed):
    rng = np.random.default_rng(seed)
    params = ChainParams(n, j, d, FieldProfile(tuple(b + rng.normal(size=n))))
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    out = evolve(decomp_of(params), ExcitationState(v / np.linalg.norm(v)), t)
    assert abs(out.norm() - 1) < 1e-10


def test_transfer_single_site():
    for t in (0.0, 1.0, 123.0):
        assert abs(transfer_amplitude(ChainParams.uniform(1, 2.0, 1.0, 4.0), t).magnitude - 1) < 1e-14


def test_transfer_two_sites_quarter():
    r = transfer_amplitude(ChainParams.uniform(2, 1.0, 0.0, 0.0), math.pi / 2)
    assert abs(r.magnitude - math.sqrt(2) / 2) < 1e-14
    assert r.magnitude == abs(r.amplitude)


@pytest.mark.parametrize("b", [0.0, 1.0, 500.0, -37.25])
def test_transfer_two_sites_perfect(b):
    assert abs(transfer_amplitude(ChainParams.uniform(2, 1.0, 0.0, b), math.pi).magnitude - 1) < 1e-12


def test_transfer_three_sites_closed_form():
    # spectrum (-sqrt2 g, 0, sqrt2 g): <3|U|1> = (cos(sqrt2 g t) - 1)/2 up to phase
    params = ChainParams.uniform(3, 1.0, 0.0, 0.0)
    g = 0.5
    times = np.linspace(0, 20, 301)
    got = np.array([r.magnitude for r in fidelity_series(params, times)])
    np.testing.assert_allclose(got, np.abs(np.cos(math.sqrt(2) * g * times) - 1) / 2, atol=1e-13)


def test_fidelity_series_zero_time():
    assert fidelity_series(ChainParams.uniform(1), [0.0])[0].magnitude == 1.0
    assert fidelity_series(ChainParams.uniform(5, 1.0, 1.0, 3.0), [0.0])[0].magnitude < 1e-15


def test_fidelity_series_two_sites_grid():
    times = np.linspace(0, 2 * math.pi, 257)
    got = [r.magnitude for r in fidelity_series(ChainParams.uniform(2, 1.0, 0.0, 0.0), times)]
    np.testing.assert_allclose(got, np.abs(np.sin(times / 2)), atol=1e-14)


def test_fidelity_series_matches_pointwise(reference_params):
    times = np.linspace(0, 200, 37)
    series = fidelity_series(reference_params, times)
    for t, r in zip(times, series):
        single = transfer_amplitude(reference_params, t)
        assert abs(single.amplitude - r.amplitude) < 1e-12
        assert r.time == t


def test_chunked_evaluation_is_bitwise_identical(reference_params):
    decomp = decomp_of(reference_params)
    times = np.linspace(0, 200, 101)
    whole = transfer_amplitudes(decomp, times)
    chunks = np.concatenate([transfer_amplitudes(decomp, c) for c in np.array_split(times, 7)])
    assert whole.tobytes() == chunks.tobytes()


def test_dm_rotation_property():
    times = np.linspace(-30, 30, 121)
    a = np.abs(transfer_amplitudes(decomp_of(ChainParams.uniform(9, 3.0, 4.0, 2.0)), times))
    b = np.abs(transfer_amplitudes(decomp_of(ChainParams.uniform(9, 5.0, 0.0, 2.0)), times))
    assert np.max(np.abs(a - b)) < 1e-10


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 60), st.floats(-5, 5), st.floats(-5, 5), st.floats(-1000, 1000))
def test_uniform_field_invariance(n, j, d, b):
    times = np.linspace(0, 100, 50)
    ref = np.abs(transfer_amplitudes(decomp_of(ChainParams.uniform(n, j, d, 0.0)), times))
    got = np.abs(transfer_amplitudes(decomp_of(ChainParams.uniform(n, j, d, b)), times))
    assert np.max(np.abs(ref - got)) < 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 60), st.floats(-5, 5), st.floats(-5, 5), st.floats(-100, 100), st.floats(0, 300))
def test_time_reversal(n, j, d, b, t):
    decomp = decomp_of(ChainParams.uniform(n, j, d, b))
    fwd, back = np.abs(transfer_amplitudes(decomp, [t, -t]))
    assert abs(fwd - back) < 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 60), st.floats(-5, 5), st.floats(-5, 5), st.floats(0, 300))
def test_magnitude_bounded(n, j, d, t):
    r = transfer_amplitude(ChainParams.uniform(n, j, d, 10.0), t)
    assert 0 <= r.magnitude <= 1 + 1e-10
    assert abs(r.magnitude - abs(r.amplitude)) < 1e-14


def test_alpha_rescales_time():
    a = transfer_amplitude(ChainParams.uniform(7, 1.0, 2.0, 3.0, alpha=2.0), 1.5)
    b = transfer_amplitude(ChainParams.uniform(7, 1.0, 2.0, 3.0, alpha=1.0), 3.0)
    assert abs(a.amplitude - b.amplitude) < 1e-12


def test_times_must_be_finite():
    with pytest.raises(ParameterError):
        fidelity_series(ChainParams.uniform(2), [0.0, math.nan])
