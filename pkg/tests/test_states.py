import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gaussimag import (
    GaussianState,
    InvalidStateError,
    coherent,
    conjugate,
    induced_real,
    is_real,
    random_state,
    squeezed,
    state_from_dict,
    state_to_dict,
    symplectic_form,
    thermal,
    validate_state,
)

OMEGA_1 = np.array([[0.0, 1.0], [-1.0, 0.0]])


def test_symplectic_form_one_mode_exact():
    assert np.array_equal(symplectic_form(1), OMEGA_1)


def test_symplectic_form_two_modes_block_diagonal():
    om = symplectic_form(2)
    expect = np.zeros((4, 4))
    expect[:2, :2] = OMEGA_1
    expect[2:, 2:] = OMEGA_1
    assert np.array_equal(om, expect)


def test_symplectic_form_squares_to_minus_identity():
    om = symplectic_form(3)
    assert np.array_equal(om @ om, -np.eye(6))
    assert np.array_equal(om.T, -om)


def test_symplectic_form_rejects_zero_modes():
    with pytest.raises(ValueError):
        symplectic_form(0)


def test_validate_vacuum():
    s = validate_state([0.0, 0.0], np.eye(2))
    assert s.modes == 1
    assert is_real(s)


def test_validate_rejects_uncertainty_violation():
    # eigenvalues of V + i*Omega are 0.5 +- 1, so the minimum is -0.5
    with pytest.raises(InvalidStateError) as err:
        validate_state([0.0, 0.0], 0.5 * np.eye(2))
    assert "uncertainty" in str(err.value)
    assert "-0.5" in str(err.value)


def test_validate_accepts_thermal_cov():
    s = validate_state([0.0, 0.0], 3.0 * np.eye(2))
    assert s.uncertainty_margin() == pytest.approx(2.0)


def test_validate_rejects_asymmetric_cov():
    cov = np.array([[1.0, 0.1], [0.0, 1.0]])
    with pytest.raises(InvalidStateError, match="symmetric"):
        validate_state([0.0, 0.0], cov)


def test_validate_rejects_bad_shapes():
    with pytest.raises(InvalidStateError):
        validate_state([0.0, 0.0, 0.0], np.eye(3))
    with pytest.raises(InvalidStateError):
        validate_state([0.0, 0.0], np.eye(4))
    with pytest.raises(InvalidStateError):
        validate_state([[0.0, 0.0]], np.eye(2))


def test_state_arrays_are_frozen():
    s = thermal(1.0)
    with pytest.raises(ValueError):
        s.cov[0, 0] = 5.0


def test_is_real_examples():
    assert is_real(thermal(1.0))
    assert not is_real(coherent(1j))
    assert is_real(squeezed(0.5))


def test_conjugate_coherent():
    s = coherent(1 + 1j)
    assert np.allclose(s.mean, [2.0, 2.0])
    c = conjugate(s)
    assert np.array_equal(c.mean, np.array([2.0, -2.0]))
    assert np.array_equal(c.cov, np.eye(2))


def test_conjugate_flips_offdiagonal_of_imaginary_squeezed():
    s = squeezed(0.5j)
    c = conjugate(s)
    assert c.cov[0, 1] == -s.cov[0, 1]
    assert c.cov[0, 0] == s.cov[0, 0]
    assert c.cov[1, 1] == s.cov[1, 1]


def test_induced_real_of_imaginary_coherent_is_vacuum():
    bar = induced_real(coherent(1j))
    assert np.array_equal(bar.mean, np.zeros(2))
    assert np.array_equal(bar.cov, np.eye(2))


def test_induced_real_keeps_squeezed_diagonals():
    s = squeezed(0.4 * np.exp(0.3j))
    bar = induced_real(s)
    assert bar.cov[0, 1] == 0.0
    assert bar.cov[0, 0] == s.cov[0, 0]
    assert bar.cov[1, 1] == s.cov[1, 1]
    assert is_real(bar)


def test_thermal_values():
    assert np.array_equal(thermal(0.0).cov, np.eye(2))
    assert np.array_equal(thermal(1.0).cov, 3.0 * np.eye(2))
    assert np.array_equal(thermal(2.5).cov, 6.0 * np.eye(2))
    with pytest.raises(ValueError):
        thermal(-0.1)


def test_coherent_values():
    assert np.array_equal(coherent(0).mean, np.zeros(2))
    assert np.array_equal(coherent(1 + 1j).mean, np.array([2.0, 2.0]))
    assert np.array_equal(coherent(1j).mean, np.array([0.0, 2.0]))


def test_squeezed_values():
    assert np.allclose(squeezed(0).cov, np.eye(2))
    v = squeezed(0.5).cov
    assert v[0, 0] == pytest.approx(math.e)
    assert v[1, 1] == pytest.approx(1.0 / math.e)
    assert v[0, 1] == pytest.approx(0.0, abs=1e-15)
    v = squeezed(0.5j).cov
    assert v[0, 0] == pytest.approx(math.cosh(1.0))
    assert v[1, 1] == pytest.approx(math.cosh(1.0))
    assert v[0, 1] == pytest.approx(math.sinh(1.0))


def test_random_state_deterministic():
    a = random_state(1, 1.0, 7)
    b = random_state(1, 1.0, 7)
    assert np.array_equal(a.mean, b.mean)
    assert np.array_equal(a.cov, b.cov)


def test_random_state_seeds_differ():
    a = random_state(1, 1.0, 7)
    b = random_state(1, 1.0, 8)
    assert not np.array_equal(a.mean, b.mean)


def test_random_state_rejects_bad_args():
    with pytest.raises(ValueError):
        random_state(0, 1.0, 1)
    with pytest.raises(ValueError):
        random_state(1, 0.0, 1)


def test_thousand_random_states_validate_and_conjugate():
    """Every seeded draw is physical, and so is its conjugate."""
    for seed in range(1000):
        s = random_state(1 + seed % 2, 1.0, seed)
        c = conjugate(s)
        assert isinstance(c, GaussianState)
        assert c.uncertainty_margin() >= -1e-9


@given(st.integers(0, 10**9), st.sampled_from([1, 2]))
def test_conjugate_is_an_involution(seed, modes):
    s = random_state(modes, 1.0, seed)
    back = conjugate(conjugate(s))
    assert np.array_equal(back.mean, s.mean)
    assert np.array_equal(back.cov, s.cov)


@given(st.integers(0, 10**9))
def test_real_iff_conjugation_fixed_point(seed):
    s = random_state(1, 1.0, seed)
    c = conjugate(s)
    fixed = np.array_equal(c.mean, s.mean) and np.array_equal(c.cov, s.cov)
    assert is_real(s) == fixed
    r = induced_real(s)
    rc = conjugate(r)
    assert np.array_equal(rc.mean, r.mean)
    assert np.array_equal(rc.cov, r.cov)


@given(st.integers(0, 10**9), st.sampled_from([1, 2]))
def test_induced_real_is_real_and_idempotent(seed, modes):
    s = random_state(modes, 1.5, seed)
    r = induced_real(s)
    assert is_real(r)
    again = induced_real(r)
    assert np.array_equal(again.mean, r.mean)
    assert np.array_equal(again.cov, r.cov)


def test_real_state_is_fixed_by_induced_real():
    t = thermal(0.7)
    r = induced_real(t)
    assert np.array_equal(r.mean, t.mean)
    assert np.array_equal(r.cov, t.cov)


def test_state_json_roundtrip():
    s = random_state(2, 1.0, 42)
    doc = state_to_dict(s)
    back = state_from_dict(doc)
    assert back.modes == 2
    assert np.allclose(back.mean, s.mean)
    assert np.allclose(back.cov, s.cov)


def test_state_from_dict_rejects_wrong_lengths():
    good = state_to_dict(thermal(1.0))
    bad = dict(good, mean=[0.0, 0.0, 0.0])
    with pytest.raises(InvalidStateError, match="length"):
        state_from_dict(bad)
    bad = dict(good, cov=[[1.0, 0.0]])
    with pytest.raises(InvalidStateError):
        state_from_dict(bad)
    with pytest.raises(InvalidStateError, match="missing"):
        state_from_dict({"modes": 1, "mean": [0.0, 0.0]})
    with pytest.raises(InvalidStateError):
        state_from_dict({"modes": 0, "mean": [], "cov": []})
