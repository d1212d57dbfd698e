import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gaussimag import (
    InvalidChannelError,
    RealChannelClass,
    apply_channel,
    channel_from_dict,
    channel_to_dict,
    classify_real,
    coherent,
    compose,
    conjugate,
    induced_real,
    is_real,
    random_real_channel,
    random_state,
    real_condition_report,
    squeezed,
    validate_channel,
)

IDENTITY = dict(d=np.zeros(2), T=np.eye(2), N=np.zeros((2, 2)))
REPLACE_BY_VACUUM = dict(d=np.zeros(2), T=np.zeros((2, 2)), N=np.eye(2))
QUARTER_ROTATION = dict(
    d=np.zeros(2), T=np.array([[0.0, -1.0], [1.0, 0.0]]), N=np.zeros((2, 2))
)


def test_identity_channel_is_valid():
    ch = validate_channel(**IDENTITY)
    assert ch.modes == 1
    assert ch.cp_margin() == pytest.approx(0.0, abs=1e-12)


def test_replace_by_vacuum_is_valid():
    # eigenvalues of I + i*Omega are 0 and 2
    ch = validate_channel(**REPLACE_BY_VACUUM)
    assert ch.cp_margin() == pytest.approx(0.0, abs=1e-12)


def test_noiseless_attenuator_is_rejected():
    # eigenvalues of i*Omega - (i/4)*Omega are +-3/4
    with pytest.raises(InvalidChannelError) as err:
        validate_channel(np.zeros(2), 0.5 * np.eye(2), np.zeros((2, 2)))
    assert "-0.75" in str(err.value)


def test_validate_rejects_asymmetric_noise():
    n = np.array([[1.0, 0.2], [0.0, 1.0]])
    with pytest.raises(InvalidChannelError, match="symmetric"):
        validate_channel(np.zeros(2), np.eye(2), n)


def test_validate_rejects_dimension_mismatch():
    with pytest.raises(InvalidChannelError):
        validate_channel(np.zeros(3), np.eye(2), np.zeros((2, 2)))
    with pytest.raises(InvalidChannelError):
        validate_channel(np.zeros(2), np.eye(4), np.zeros((2, 2)))


def test_apply_identity_keeps_state():
    ch = validate_channel(**IDENTITY)
    s = squeezed(0.3j)
    out = apply_channel(ch, s)
    assert np.allclose(out.mean, s.mean)
    assert np.allclose(out.cov, s.cov)


def test_apply_replace_by_vacuum():
    ch = validate_channel(**REPLACE_BY_VACUUM)
    out = apply_channel(ch, squeezed(0.5))
    assert np.allclose(out.mean, np.zeros(2))
    assert np.allclose(out.cov, np.eye(2))


def test_apply_quarter_rotation_moves_mean():
    ch = validate_channel(**QUARTER_ROTATION)
    out = apply_channel(ch, coherent(1))
    assert np.allclose(out.mean, [0.0, 2.0])


def test_apply_rejects_mode_mismatch():
    ch = validate_channel(**IDENTITY)
    with pytest.raises(ValueError, match="mode"):
        apply_channel(ch, random_state(2, 1.0, 0))


def test_classify_identity_is_covariant_real():
    assert classify_real(validate_channel(**IDENTITY)) == RealChannelClass.COVARIANT_REAL


def test_classify_replace_by_vacuum_is_both():
    cls = classify_real(validate_channel(**REPLACE_BY_VACUUM))
    assert cls == RealChannelClass.COVARIANT_AND_COMPLETELY_REAL


def test_classify_quarter_rotation_not_real():
    ch = validate_channel(**QUARTER_ROTATION)
    assert classify_real(ch) == RealChannelClass.NOT_REAL
    report = {c.key: c for c in real_condition_report(ch)}
    # the offending entry of the quarter rotation is T[2][1] = 1
    assert not report["t_parity_block_diagonal"].passed
    assert report["t_parity_block_diagonal"].index == (2, 1)
    assert not report["t_even_rows_zero"].passed


def test_classify_rejects_nothing_but_flags_displacement():
    ch = validate_channel([0.0, 0.5], np.eye(2), np.zeros((2, 2)))
    assert classify_real(ch) == RealChannelClass.NOT_REAL
    report = {c.key: c for c in real_condition_report(ch)}
    assert not report["d_even_zero"].passed
    assert report["d_even_zero"].index == (2,)


REAL_KINDS = [
    RealChannelClass.COMPLETELY_REAL,
    RealChannelClass.COVARIANT_REAL,
    RealChannelClass.COVARIANT_AND_COMPLETELY_REAL,
]


@pytest.mark.parametrize("kind", REAL_KINDS)
@pytest.mark.parametrize("modes", [1, 2])
def test_random_real_channel_classifies_exactly(kind, modes):
    for seed in range(25):
        ch = random_real_channel(modes, kind, seed)
        assert classify_real(ch) == kind
        assert ch.cp_margin() >= -1e-9


def test_random_real_channel_deterministic():
    a = random_real_channel(1, RealChannelClass.COVARIANT_REAL, 5)
    b = random_real_channel(1, RealChannelClass.COVARIANT_REAL, 5)
    assert np.array_equal(a.T, b.T)
    assert np.array_equal(a.N, b.N)
    assert np.array_equal(a.d, b.d)


def test_random_completely_real_has_zero_even_rows():
    ch = random_real_channel(2, RealChannelClass.COMPLETELY_REAL, 3)
    assert np.array_equal(ch.T[1::2, :], np.zeros((2, 4)))


def test_random_real_channel_rejects_not_real():
    with pytest.raises(ValueError):
        random_real_channel(1, RealChannelClass.NOT_REAL, 0)


@given(st.integers(0, 10**8))
def test_completely_real_output_is_real(seed):
    ch = random_real_channel(1, RealChannelClass.COMPLETELY_REAL, seed)
    st_in = random_state(1, 1.0, seed + 1)
    assert is_real(apply_channel(ch, st_in))


@given(st.integers(0, 10**8))
def test_covariant_real_commutes_with_conjugation(seed):
    ch = random_real_channel(1, RealChannelClass.COVARIANT_REAL, seed)
    s = random_state(1, 1.0, seed + 1)
    lhs = apply_channel(ch, conjugate(s))
    rhs = conjugate(apply_channel(ch, s))
    assert np.abs(lhs.mean - rhs.mean).max() <= 1e-10
    assert np.abs(lhs.cov - rhs.cov).max() <= 1e-10
    lhs = apply_channel(ch, induced_real(s))
    rhs = induced_real(apply_channel(ch, s))
    assert np.abs(lhs.mean - rhs.mean).max() <= 1e-10
    assert np.abs(lhs.cov - rhs.cov).max() <= 1e-10


@pytest.mark.parametrize("kind", REAL_KINDS)
def test_real_channels_preserve_real_states(kind):
    for seed in range(20):
        ch = random_real_channel(1, kind, seed)
        real_in = induced_real(random_state(1, 1.0, seed + 100))
        assert is_real(apply_channel(ch, real_in))


def test_composition_of_covariant_real_stays_covariant_real():
    for seed in range(20):
        a = random_real_channel(1, RealChannelClass.COVARIANT_REAL, seed)
        b = random_real_channel(1, RealChannelClass.COVARIANT_REAL, seed + 999)
        combined = compose(a, b)
        assert classify_real(combined) == RealChannelClass.COVARIANT_REAL


def test_compose_matches_sequential_application():
    a = random_real_channel(1, RealChannelClass.COVARIANT_REAL, 1)
    b = random_real_channel(1, RealChannelClass.COMPLETELY_REAL, 2)
    s = random_state(1, 1.0, 3)
    direct = apply_channel(a, apply_channel(b, s))
    via = apply_channel(compose(a, b), s)
    assert np.allclose(direct.mean, via.mean)
    assert np.allclose(direct.cov, via.cov)


def test_channel_json_roundtrip():
    ch = random_real_channel(2, RealChannelClass.COVARIANT_REAL, 9)
    back = channel_from_dict(channel_to_dict(ch))
    assert back.modes == 2
    assert np.allclose(back.T, ch.T)
    assert np.allclose(back.N, ch.N)
    assert np.allclose(back.d, ch.d)


def test_channel_from_dict_rejects_bad_documents():
    with pytest.raises(InvalidChannelError, match="missing"):
        channel_from_dict({"modes": 1})
    good = channel_to_dict(validate_channel(**IDENTITY))
    with pytest.raises(InvalidChannelError):
        channel_from_dict(dict(good, d=[0.0]))
    with pytest.raises(InvalidChannelError):
        channel_from_dict(dict(good, T=[[1.0]]))
