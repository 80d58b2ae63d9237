import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinwire import ChainParams, FieldProfile, build_single_excitation, effective_coupling
from spinwire.errors import NonUniformField, ParameterError, ZeroCoupling

couplings = st.floats(-20, 20, allow_nan=False, allow_subnormal=False)
fields = st.floats(-1000, 1000, allow_nan=False)


def test_effective_coupling_real():
    c = effective_coupling(1.0, 0.0)
    assert c.gamma == 0.5 + 0j
    assert c.modulus == 0.5
    assert c.omega == 1


def test_effective_coupling_reference_values():
    c = effective_coupling(1.0, 14.455)
    assert c.gamma == complex(0.5, 7.2275)


def test_effective_coupling_modulus():
    assert effective_coupling(3.0, 4.0).modulus == 2.5


def test_zero_coupling_omega():
    c = effective_coupling(0.0, 0.0)
    assert c.modulus == 0.0
    with pytest.raises(ZeroCoupling):
        c.omega


@given(couplings, couplings)
def test_coupling_invariants(j, d):
    c = effective_coupling(j, d)
    if c.gamma == 0:
        return
    assert abs(abs(c.omega) - 1) < 1e-14
    assert math.isclose(c.modulus**2, (c.gamma * c.gamma.conjugate()).real, rel_tol=1e-14)
    # half_phase squares to omega
    assert abs(c.half_phase**2 - c.omega) < 1e-14


def test_two_site_matrix():
    h = build_single_excitation(ChainParams.uniform(2, 1.0, 0.0, 500.0))
    np.testing.assert_array_equal(h.to_dense(), [[-500, -0.5], [-0.5, -500]])


def test_one_site_matrix():
    h = build_single_excitation(ChainParams.uniform(1, 2.0, 3.0, 4.5))
    assert h.dimension == 1
    np.testing.assert_array_equal(h.to_dense(), [[-4.5]])


def test_pure_dm_matrix():
    h = build_single_excitation(ChainParams.uniform(3, 0.0, 2.0, 0.0)).to_dense()
    expected = np.array([[0, -1j, 0], [1j, 0, -1j], [0, 1j, 0]])
    np.testing.assert_array_equal(h, expected)


@settings(max_examples=50)
@given(st.integers(1, 40), couplings, couplings, st.lists(fields, min_size=40, max_size=40))
def test_hermitian_exactly(n, j, d, b):
    params = ChainParams(n, j, d, FieldProfile(tuple(b[:n])))
    h = build_single_excitation(params)
    np.testing.assert_array_equal(h.sub_diagonal, np.conj(h.super_diagonal))
    dense = h.to_dense()
    np.testing.assert_array_equal(dense, dense.conj().T)
    assert h.diagonal.dtype.kind == "f"
    np.testing.assert_array_equal(h.diagonal, -np.array(b[:n]))


@given(st.integers(1, 30), couplings, couplings, fields, fields)
def test_uniform_field_only_shifts_diagonal(n, j, d, b1, b2):
    h1 = build_single_excitation(ChainParams.uniform(n, j, d, b1)).to_dense()
    h2 = build_single_excitation(ChainParams.uniform(n, j, d, b2)).to_dense()
    t1 = h1 + b1 * np.eye(n)
    t2 = h2 + b2 * np.eye(n)
    np.testing.assert_array_equal(t1, t2)


def test_deterministic():
    p = ChainParams.uniform(17, 1.3, -0.7, 12.0)
    a = build_single_excitation(p).to_dense()
    b = build_single_excitation(p).to_dense()
    assert a.tobytes() == b.tobytes()


def test_matrix_is_read_only():
    h = build_single_excitation(ChainParams.uniform(3, 1.0, 0.0, 1.0))
    with pytest.raises(ValueError):
        h.diagonal[0] = 3.0


@pytest.mark.parametrize(
    "kwargs, field_name",
    [
        (dict(n_sites=0), "n_sites"),
        (dict(n_sites=3, alpha=0.0), "alpha"),
        (dict(n_sites=3, alpha=-1.0), "alpha"),
        (dict(n_sites=3, j_coupling=math.inf), "j_coupling"),
    ],
)
def test_validation_names_field(kwargs, field_name):
    with pytest.raises(ParameterError, match=field_name):
        ChainParams.uniform(**kwargs)


def test_field_length_must_match():
    with pytest.raises(ParameterError, match="field"):
        ChainParams(3, 1.0, 0.0, FieldProfile((1.0, 2.0)))


def test_field_profile_uniform_flag():
    assert FieldProfile.constant(2.0, 4).uniform
    assert not FieldProfile((1.0, 1.0, 1.0 + 1e-15)).uniform


def test_uniform_field_accessor():
    assert ChainParams.uniform(4, b_field=3.5).uniform_field == 3.5
    with pytest.raises(NonUniformField):
        ChainParams(2, 1.0, 0.0, FieldProfile((1.0, 2.0))).uniform_field


def test_params_hashable_and_immutable():
    p = ChainParams.uniform(5, 1.0, 2.0, 3.0)
    assert hash(p) == hash(ChainParams.uniform(5, 1.0, 2.0, 3.0))
    with pytest.raises(AttributeError):
        p.n_sites = 4
