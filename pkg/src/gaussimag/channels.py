"""Gaussian channels (d, T, N) and the classification of real channels.

A channel acts affinely on a state: mean -> T @ mean + d and
cov -> T @ cov @ T.T + N. Physicality is the complete-positivity condition
N + i*(Omega - T Omega T.T) >= 0. A channel is *real* when it maps every
real Gaussian state to a real Gaussian state; real channels split into the
completely real kind (all outputs are real) and the covariant kind
(the channel commutes with conjugation), which overlap.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .states import (
    EPS_PSD,
    EPS_REAL,
    SYM_TOL,
    GaussianState,
    symplectic_form,
    validate_state,
)

__all__ = [
    "GaussianChannel",
    "InvalidChannelError",
    "RealChannelClass",
    "ConditionCheck",
    "validate_channel",
    "apply_channel",
    "real_condition_report",
    "classify_real",
    "random_real_channel",
    "compose",
    "channel_to_dict",
    "channel_from_dict",
]


class InvalidChannelError(ValueError):
    """(d, T, N) does not describe a completely positive Gaussian channel."""


class RealChannelClass(enum.Enum):
    """Classification of a Gaussian channel with respect to realness."""

    NOT_REAL = "NotReal"
    COMPLETELY_REAL = "CompletelyReal"
    COVARIANT_REAL = "CovariantReal"
    COVARIANT_AND_COMPLETELY_REAL = "CovariantAndCompletelyReal"


@dataclass(frozen=True, eq=False)
class GaussianChannel:
    """Immutable (d, T, N) triple; build through :func:`validate_channel`."""

    modes: int
    d: np.ndarray
    T: np.ndarray
    N: np.ndarray

    def cp_margin(self) -> float:
        """Minimum eigenvalue of N + i*(Omega - T Omega T.T)."""
        omega = symplectic_form(self.modes)
        herm = self.N + 1j * (omega - self.T @ omega @ self.T.T)
        return float(np.linalg.eigvalsh(herm)[0])


@dataclass(frozen=True)
class ConditionCheck:
    """Outcome of one of the four realness pattern tests.

    ``worst`` is the largest offending magnitude and ``index`` its 1-based
    position (matching the q1, p1, ... ordering); both are None when the
    pattern has no entries to offend (e.g. a zero block).
    """

    key: str
    label: str
    passed: bool
    worst: float | None
    index: tuple[int, ...] | None


def validate_channel(d, T, N, *, eps_psd: float = EPS_PSD) -> GaussianChannel:
    """Validate (d, T, N) and return the channel.

    Raises :class:`InvalidChannelError` on dimension mismatch, asymmetric
    noise matrix, or a complete-positivity violation (naming the failing
    eigenvalue).
    """
    d = np.array(d, dtype=float)
    T = np.array(T, dtype=float)
    N = np.array(N, dtype=float)
    if d.ndim != 1 or d.shape[0] < 2 or d.shape[0] % 2 != 0:
        raise InvalidChannelError(
            f"d must be a vector of length 2*modes, got shape {d.shape}"
        )
    dim = d.shape[0]
    if T.shape != (dim, dim) or N.shape != (dim, dim):
        raise InvalidChannelError(
            f"T and N must both be {dim} x {dim}, got {T.shape} and {N.shape}"
        )
    asym = float(np.abs(N - N.T).max())
    if asym > SYM_TOL:
        raise InvalidChannelError(
            f"noise matrix is not symmetric: max |N - N.T| = {asym:.6g} "
            f"exceeds {SYM_TOL:.1g}"
        )
    N = (N + N.T) / 2.0
    modes = dim // 2
    omega = symplectic_form(modes)
    herm = N + 1j * (omega - T @ omega @ T.T)
    min_eig = float(np.linalg.eigvalsh(herm)[0])
    if min_eig < -eps_psd:
        raise InvalidChannelError(
            f"complete positivity violated: min eigenvalue of "
            f"N + i*(Omega - T Omega T.T) is {min_eig:.6g} "
            f"(allowed >= {-eps_psd:.1g})"
        )
    d.setflags(write=False)
    T.setflags(write=False)
    N.setflags(write=False)
    return GaussianChannel(modes=modes, d=d, T=T, N=N)


def apply_channel(channel: GaussianChannel, state: GaussianState) -> GaussianState:
    """Apply the channel: mean -> T mean + d, cov -> T cov T.T + N."""
    if channel.modes != state.modes:
        raise ValueError(
            f"channel acts on {channel.modes} mode(s) but state has {state.modes}"
        )
    mean = channel.T @ state.mean + channel.d
    cov = channel.T @ state.cov @ channel.T.T + channel.N
    return validate_state(mean, cov)


def _max_abs(block: np.ndarray) -> tuple[float, tuple[int, ...]]:
    flat = int(np.abs(block).argmax())
    idx = np.unravel_index(flat, block.shape)
    return float(abs(block[idx])), tuple(int(i) for i in idx)


def real_condition_report(
    channel: GaussianChannel, *, eps_real: float = EPS_REAL
) -> list[ConditionCheck]:
    """Evaluate the four structural conditions behind real-channel classes.

    The first two (displacement and noise patterns) are necessary for any
    real channel; the last two are the alternative patterns on T that pick
    the completely real and the covariant real class respectively.
    """
    d, T, N = channel.d, channel.T, channel.N
    checks = []

    worst, idx = _max_abs(d[1::2])
    checks.append(
        ConditionCheck(
            key="d_even_zero",
            label="displacement even entries zero",
            passed=worst <= eps_real,
            worst=worst,
            index=(2 * idx[0] + 2,),
        )
    )

    block = N[0::2, 1::2]
    worst, idx = _max_abs(block)
    checks.append(
        ConditionCheck(
            key="noise_odd_even_zero",
            label="noise odd-even block zero",
            passed=worst <= eps_real,
            worst=worst,
            index=(2 * idx[0] + 1, 2 * idx[1] + 2),
        )
    )

    block = T[1::2, :]
    worst, idx = _max_abs(block)
    checks.append(
        ConditionCheck(
            key="t_even_rows_zero",
            label="T even rows zero",
            passed=worst <= eps_real,
            worst=worst,
            index=(2 * idx[0] + 2, idx[1] + 1),
        )
    )

    oe = T[0::2, 1::2]
    eo = T[1::2, 0::2]
    worst_oe, idx_oe = _max_abs(oe)
    worst_eo, idx_eo = _max_abs(eo)
    if worst_eo >= worst_oe:
        worst, index = worst_eo, (2 * idx_eo[0] + 2, 2 * idx_eo[1] + 1)
    else:
        worst, index = worst_oe, (2 * idx_oe[0] + 1, 2 * idx_oe[1] + 2)
    checks.append(
        ConditionCheck(
            key="t_parity_block_diagonal",
            label="T parity-block-diagonal",
            passed=worst <= eps_real,
            worst=worst,
            index=index,
        )
    )
    return checks


def classify_real(
    channel: GaussianChannel, *, eps_real: float = EPS_REAL
) -> RealChannelClass:
    """Classify a validated channel per the real-channel structure theorem.

    A channel is real iff the displacement and noise patterns hold together
    with at least one of the two T patterns; channels matching both T
    patterns are reported as the overlap class, never silently as one
    branch.
    """
    checks = {c.key: c.passed for c in real_condition_report(channel, eps_real=eps_real)}
    if not (checks["d_even_zero"] and checks["noise_odd_even_zero"]):
        return RealChannelClass.NOT_REAL
    completely = checks["t_even_rows_zero"]
    covariant = checks["t_parity_block_diagonal"]
    if completely and covariant:
        return RealChannelClass.COVARIANT_AND_COMPLETELY_REAL
    if completely:
        return RealChannelClass.COMPLETELY_REAL
    if covariant:
        return RealChannelClass.COVARIANT_REAL
    return RealChannelClass.NOT_REAL


def random_real_channel(
    modes: int, kind: RealChannelClass, seed: int
) -> GaussianChannel:
    """Deterministic random channel of the requested real class.

    T and N are drawn with the parity pattern of ``kind`` (with the
    distinguishing entries bounded away from zero so the classification is
    exact), then the smallest multiple of the identity restoring complete
    positivity is added to N by binary search on [0, 10] (tolerance 1e-6)
    plus a 1e-6 margin.
    """
    if kind == RealChannelClass.NOT_REAL:
        raise ValueError("kind must be one of the real channel classes")
    if modes < 1:
        raise ValueError(f"modes must be a positive integer, got {modes}")
    rng = np.random.default_rng(seed)
    n = 2 * modes

    d = np.zeros(n)
    d[0::2] = rng.uniform(-1.0, 1.0, modes)

    T = np.zeros((n, n))
    if kind == RealChannelClass.COMPLETELY_REAL:
        T[0::2, :] = rng.normal(0.0, 0.5, (modes, n))
        # Break the parity-block pattern so the class is exactly this one.
        T[0, 1] = rng.choice([-1.0, 1.0]) * rng.uniform(0.3, 1.0)
    elif kind == RealChannelClass.COVARIANT_REAL:
        T[0::2, 0::2] = rng.normal(0.0, 0.5, (modes, modes))
        T[1::2, 1::2] = rng.normal(0.0, 0.5, (modes, modes))
        # Keep an even row alive so the even-rows-zero pattern fails.
        T[1, 1] = rng.choice([-1.0, 1.0]) * rng.uniform(0.3, 1.0)
    else:  # COVARIANT_AND_COMPLETELY_REAL
        T[0::2, 0::2] = rng.normal(0.0, 0.5, (modes, modes))

    a = rng.normal(0.0, 0.3, (modes, modes))
    n_odd = np.triu(a) + np.triu(a, 1).T
    a = rng.normal(0.0, 0.3, (modes, modes))
    n_even = np.triu(a) + np.triu(a, 1).T
    N = np.zeros((n, n))
    N[0::2, 0::2] = n_odd
    N[1::2, 1::2] = n_even

    omega = symplectic_form(modes)
    base = N + 1j * (omega - T @ omega @ T.T)

    def cp_min(lam: float) -> float:
        return float(np.linalg.eigvalsh(base + lam * np.eye(n))[0])

    if cp_min(0.0) >= 0.0:
        lam = 0.0
    else:
        lo, hi = 0.0, 10.0
        if cp_min(hi) < 0.0:
            raise RuntimeError("CP repair failed: shift of 10 not sufficient")
        while hi - lo > 1e-6:
            mid = (lo + hi) / 2.0
            if cp_min(mid) >= 0.0:
                hi = mid
            else:
                lo = mid
        lam = hi
    N = N + (lam + 1e-6) * np.eye(n)

    channel = validate_channel(d, T, N)
    assert classify_real(channel) == kind
    return channel


def compose(outer: GaussianChannel, inner: GaussianChannel) -> GaussianChannel:
    """Composition outer after inner as a single Gaussian channel."""
    if outer.modes != inner.modes:
        raise ValueError(
            f"cannot compose channels on {outer.modes} and {inner.modes} mode(s)"
        )
    t = outer.T @ inner.T
    d = outer.T @ inner.d + outer.d
    n = outer.T @ inner.N @ outer.T.T + outer.N
    return validate_channel(d, t, n)


def channel_to_dict(channel: GaussianChannel) -> dict:
    """JSON-ready dict: {"modes": N, "d": [...], "T": [[...]], "N": [[...]]}."""
    return {
        "modes": channel.modes,
        "d": channel.d.tolist(),
        "T": channel.T.tolist(),
        "N": channel.N.tolist(),
    }


def channel_from_dict(data: dict, *, eps_psd: float = EPS_PSD) -> GaussianChannel:
    """Parse and validate the JSON channel format."""
    if not isinstance(data, dict):
        raise InvalidChannelError(
            f"channel document must be an object, got {type(data).__name__}"
        )
    missing = {"modes", "d", "T", "N"} - set(data)
    if missing:
        raise InvalidChannelError(f"channel document missing keys: {sorted(missing)}")
    modes = data["modes"]
    if not isinstance(modes, int) or modes < 1:
        raise InvalidChannelError(f"modes must be a positive integer, got {modes!r}")
    try:
        d = np.asarray(data["d"], dtype=float)
        T = np.asarray(data["T"], dtype=float)
        N = np.asarray(data["N"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvalidChannelError(f"channel document is not numeric: {exc}") from exc
    if d.shape != (2 * modes,):
        raise InvalidChannelError(
            f"d must have length {2 * modes} for {modes} mode(s), got shape {d.shape}"
        )
    if T.shape != (2 * modes, 2 * modes) or N.shape != (2 * modes, 2 * modes):
        raise InvalidChannelError(
            f"T and N must be {2 * modes} x {2 * modes}, got {T.shape} and {N.shape}"
        )
    return validate_channel(d, T, N, eps_psd=eps_psd)
