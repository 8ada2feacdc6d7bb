import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hulthen_kg.model import (CouplingLimit, PoleError, PotentialParams, QuantumNumbers,
                              centrifugal_gamma, greene_aldrich_centrifugal, scalar_potential,
                              vector_potential)


@pytest.mark.parametrize("dim,l,expected", [(3, 0, 0), (3, 1, 2), (5, 2, 12)])
def test_gamma_values(dim, l, expected):
    assert centrifugal_gamma(dim, l) == expected
    assert QuantumNumbers(1, l, dim).gamma == expected


@given(st.integers(1, 10), st.integers(1, 10))
def test_gamma_depends_on_d_plus_2l(dim, l):
    assert centrifugal_gamma(dim + 2, l - 1) == centrifugal_gamma(dim, l)


def test_gamma_rejects_bad_input():
    with pytest.raises(ValueError):
        centrifugal_gamma(0, 1)
    with pytest.raises(ValueError):
        QuantumNumbers(-1, 0, 3)


def test_vector_potential_matches_direct_formula():
    # frozen from a 30-digit mpmath evaluation of -V0 (1+aE) e^{-dr} / (1 - q e^{-dr})
    p = PotentialParams(2.0, 2.0, a=1.0, delta=0.01)
    assert vector_potential(1.0, -0.9629, p) == pytest.approx(-7.38296183323027802, rel=1e-13)
    assert scalar_potential(1.0, -0.9629, p) == pytest.approx(-7.38296183323027802, rel=1e-13)


def test_potentials_vanish_at_large_r():
    p = PotentialParams(2.0, 1.0, a=1.0, delta=0.5)
    assert abs(vector_potential(500.0, 0.3, p)) < 1e-100
    assert abs(scalar_potential(500.0, 0.3, p)) < 1e-100


@given(st.floats(-0.99, 0.99), st.floats(-0.99, 0.99))
def test_a_zero_removes_energy_dependence(e1, e2):
    p = PotentialParams(2.0, 1.5, a=0.0, delta=0.05)
    assert vector_potential(3.0, e1, p) == vector_potential(3.0, e2, p)


@given(st.floats(1e-3, 1e3), st.floats(0.01, 0.99))
def test_attractive_wells(r, eps_minus):
    # epsilon = 1 + aE > 0 with a = 1 means E > -1
    p = PotentialParams(1.0, 0.5, a=1.0, delta=0.1)
    E = eps_minus - 1.0 + 1e-6
    assert vector_potential(r, E, p) < 0
    assert scalar_potential(r, E, p) < 0


def test_greene_aldrich_close_to_inverse_square_for_small_delta_r():
    r, delta = 1.0, 0.01
    assert abs(greene_aldrich_centrifugal(r, delta, 1.0) * r**2 - 1) < 0.01


@given(st.floats(1e-4, 0.1), st.floats(0.1, 10.0))
def test_greene_aldrich_error_is_first_order(delta_r, r):
    delta = delta_r / r
    rel = abs(greene_aldrich_centrifugal(r, delta, 1.0) - 1 / r**2) * r**2
    assert rel <= delta_r


def test_greene_aldrich_limits():
    assert greene_aldrich_centrifugal(1e4, 0.1, 1.0) == 0
    r = np.array([0.5, 2.0, 7.0])
    np.testing.assert_allclose(greene_aldrich_centrifugal(r, 0.3, 0.0), 0.09 * np.exp(-0.6 * r))


def test_pole_is_guarded():
    with pytest.raises(PoleError):
        greene_aldrich_centrifugal(0.0, 0.1, 1.0)


@pytest.mark.parametrize("limit,v0,s0", [("emes", 2, 2), ("emos", 2, -2),
                                         ("vector", 2, 0), ("scalar", 0, 2)])
def test_limit_constructors(limit, v0, s0):
    p = PotentialParams.for_limit(limit, 2.0, a=1.0)
    assert (p.v0, p.s0) == (v0, s0)
    assert p.limit is CouplingLimit(limit)


def test_invariants_enforced():
    with pytest.raises(ValueError):
        PotentialParams(2, 1, limit="emes")
    with pytest.raises(ValueError):
        PotentialParams(2, 2, q=1.5)
    with pytest.raises(ValueError):
        PotentialParams(2, 2, delta=0)
    with pytest.raises(ValueError):
        PotentialParams(2, 2, mass=-1)


def test_validity_flag():
    p = PotentialParams(2, 2, delta=0.01)
    assert p.greene_aldrich_valid(50.0)
    assert not p.greene_aldrich_valid(150.0)
