"""Gaussian states in the mean-vector / covariance-matrix representation.

Quadrature convention: q = a + a^dag and p = -i(a - a^dag), so the vacuum
covariance matrix is the identity. All vectors and matrices use the
interleaved ordering (q1, p1, q2, p2, ..., qN, pN).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

# Tolerances (absolute). EPS_PSD bounds how far the minimum eigenvalue of
# V + i*Omega may dip below zero; EPS_REAL is the entrywise zero test used
# by realness checks; SYM_TOL is the asymmetry accepted before symmetrizing.
EPS_PSD = 1e-9
EPS_REAL = 1e-10
SYM_TOL = 1e-12

__all__ = [
    "EPS_PSD",
    "EPS_REAL",
    "SYM_TOL",
    "GaussianState",
    "InvalidStateError",
    "UncertaintyBoundaryWarning",
    "symplectic_form",
    "validate_state",
    "is_real",
    "conjugate",
    "induced_real",
    "thermal",
    "coherent",
    "squeezed",
    "random_state",
    "state_to_dict",
    "state_from_dict",
]


class InvalidStateError(ValueError):
    """(mean, cov) does not describe a physical Gaussian state."""


class UncertaintyBoundaryWarning(UserWarning):
    """State was accepted only thanks to the eigenvalue tolerance."""


def symplectic_form(modes: int) -> np.ndarray:
    """Return the 2N x 2N symplectic form, [[0, 1], [-1, 0]] per mode.

    Entries are exactly 0 and +-1. The result O satisfies O.T == -O and
    O @ O == -identity.
    """
    if modes < 1:
        raise ValueError(f"modes must be a positive integer, got {modes}")
    omega = np.zeros((2 * modes, 2 * modes))
    for l in range(modes):
        omega[2 * l, 2 * l + 1] = 1.0
        omega[2 * l + 1, 2 * l] = -1.0
    return omega


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Immutable (mean, covariance) description of an N-mode Gaussian state.

    Instances should come from :func:`validate_state` or one of the
    constructors below, which enforce the physicality conditions and freeze
    the arrays.
    """

    modes: int
    mean: np.ndarray
    cov: np.ndarray

    def uncertainty_margin(self) -> float:
        """Minimum eigenvalue of the Hermitian matrix cov + i*Omega.

        Nonnegative (up to EPS_PSD) for physical states; zero for pure ones.
        """
        omega = symplectic_form(self.modes)
        return float(np.linalg.eigvalsh(self.cov + 1j * omega)[0])


def validate_state(mean, cov, *, eps_psd: float = EPS_PSD) -> GaussianState:
    """Validate (mean, cov) and return the corresponding Gaussian state.

    Checks, in order: shapes, covariance symmetry (within SYM_TOL, then
    symmetrized), the uncertainty relation min eig(V + i*Omega) >= -eps_psd,
    and positive definiteness of V. On failure raises
    :class:`InvalidStateError` naming the violated condition and the
    offending eigenvalue or entry.

    States whose uncertainty eigenvalue is negative but within tolerance are
    accepted with an :class:`UncertaintyBoundaryWarning`.
    """
    mean = np.array(mean, dtype=float)
    cov = np.array(cov, dtype=float)
    if mean.ndim != 1:
        raise InvalidStateError(f"mean must be a vector, got shape {mean.shape}")
    dim = mean.shape[0]
    if dim < 2 or dim % 2 != 0:
        raise InvalidStateError(
            f"mean length must be 2*modes with modes >= 1, got length {dim}"
        )
    if cov.shape != (dim, dim):
        raise InvalidStateError(
            f"cov must have shape ({dim}, {dim}) to match the mean, got {cov.shape}"
        )
    asym = float(np.abs(cov - cov.T).max())
    if asym > SYM_TOL:
        raise InvalidStateError(
            f"covariance matrix is not symmetric: max |V - V.T| = {asym:.6g} "
            f"exceeds {SYM_TOL:.1g}"
        )
    cov = (cov + cov.T) / 2.0

    modes = dim // 2
    omega = symplectic_form(modes)
    min_unc = float(np.linalg.eigvalsh(cov + 1j * omega)[0])
    if min_unc < -eps_psd:
        raise InvalidStateError(
            f"uncertainty relation violated: min eigenvalue of V + i*Omega "
            f"is {min_unc:.6g} (allowed >= {-eps_psd:.1g})"
        )
    min_cov = float(np.linalg.eigvalsh(cov)[0])
    if min_cov <= 0.0:
        raise InvalidStateError(
            f"covariance matrix is not positive definite: min eigenvalue "
            f"is {min_cov:.6g}"
        )
    if min_unc < -1e-12:
        # Genuinely below the boundary but inside tolerance: flag it.
        warnings.warn(
            f"state sits {-min_unc:.3g} below the uncertainty boundary "
            f"(within tolerance {eps_psd:.1g})",
            UncertaintyBoundaryWarning,
            stacklevel=2,
        )
    mean.setflags(write=False)
    cov.setflags(write=False)
    return GaussianState(modes=modes, mean=mean, cov=cov)


def is_real(state: GaussianState, *, eps_real: float = EPS_REAL) -> bool:
    """True iff every Fock-basis matrix element of the state is real.

    Holds exactly when all even-indexed mean entries (the p components) and
    all odd-even covariance entries (the q-p cross blocks) vanish. The test
    is entrywise on the stored data with tolerance ``eps_real``.
    """
    if np.abs(state.mean[1::2]).max() > eps_real:
        return False
    return float(np.abs(state.cov[0::2, 1::2]).max()) <= eps_real


def conjugate(state: GaussianState) -> GaussianState:
    """Return the Gaussian state whose Fock matrix is the complex conjugate.

    The conjugate is again Gaussian; it has mean entries sign-flipped on the
    p components and covariance entries sign-flipped on the q-p cross blocks.
    """
    signs = np.ones(2 * state.modes)
    signs[1::2] = -1.0
    mean = signs * state.mean
    cov = np.outer(signs, signs) * state.cov
    return validate_state(mean, cov)


def induced_real(state: GaussianState) -> GaussianState:
    """Real Gaussian state with the averaged mean and covariance.

    Averages the state with its conjugate at the (mean, cov) level. The
    result is real, physical, and a fixed point of both :func:`conjugate`
    and this map. It is *not* the real part of the density matrix, which is
    generally non-Gaussian.
    """
    conj = conjugate(state)
    return validate_state(
        (state.mean + conj.mean) / 2.0, (state.cov + conj.cov) / 2.0
    )


def thermal(nbar: float) -> GaussianState:
    """One-mode thermal state with mean photon number ``nbar``.

    Zero mean, covariance (2*nbar + 1) * identity. ``nbar=0`` is the vacuum.
    """
    if nbar < 0:
        raise ValueError(f"nbar must be nonnegative, got {nbar}")
    return validate_state(np.zeros(2), (2.0 * nbar + 1.0) * np.eye(2))


def coherent(alpha: complex) -> GaussianState:
    """One-mode coherent state: mean (2 Re alpha, 2 Im alpha), unit covariance."""
    alpha = complex(alpha)
    return validate_state([2.0 * alpha.real, 2.0 * alpha.imag], np.eye(2))


def squeezed(zeta: complex) -> GaussianState:
    """One-mode squeezed vacuum with complex squeezing parameter ``zeta``.

    Writing zeta = r * exp(i*theta), the covariance matrix is
    [[cosh 2r + cos(theta) sinh 2r, sin(theta) sinh 2r],
     [sin(theta) sinh 2r, cosh 2r - cos(theta) sinh 2r]] with zero mean.
    """
    zeta = complex(zeta)
    r = abs(zeta)
    theta = np.angle(zeta) if r > 0 else 0.0
    ch, sh = np.cosh(2.0 * r), np.sinh(2.0 * r)
    cov = np.array(
        [
            [ch + np.cos(theta) * sh, np.sin(theta) * sh],
            [np.sin(theta) * sh, ch - np.cos(theta) * sh],
        ]
    )
    return validate_state(np.zeros(2), cov)


def random_state(modes: int, max_nbar: float, seed: int) -> GaussianState:
    """Deterministic random N-mode Gaussian state.

    The covariance matrix is S diag(nu_1, nu_1, ..., nu_N, nu_N) S.T with
    the nu_l uniform in [1, 2*max_nbar + 1] (so the state is physical by
    construction) and S = expm(Omega @ H) a random symplectic matrix built
    from a symmetric H with Gaussian(0, 0.3) entries. Mean entries are
    uniform in [-2, 2].
    """
    if modes < 1:
        raise ValueError(f"modes must be a positive integer, got {modes}")
    if max_nbar <= 0:
        raise ValueError(f"max_nbar must be positive, got {max_nbar}")
    rng = np.random.default_rng(seed)
    n = 2 * modes
    a = rng.normal(0.0, 0.3, (n, n))
    h = np.triu(a) + np.triu(a, 1).T
    s = expm(symplectic_form(modes) @ h)
    nu = rng.uniform(1.0, 2.0 * max_nbar + 1.0, modes)
    cov = s @ np.diag(np.repeat(nu, 2)) @ s.T
    mean = rng.uniform(-2.0, 2.0, n)
    return validate_state(mean, cov)


def state_to_dict(state: GaussianState) -> dict:
    """JSON-ready dict: {"modes": N, "mean": [...], "cov": [[...]]} (row-major)."""
    return {
        "modes": state.modes,
        "mean": state.mean.tolist(),
        "cov": state.cov.tolist(),
    }


def state_from_dict(data: dict, *, eps_psd: float = EPS_PSD) -> GaussianState:
    """Parse and validate the JSON state format.

    Rejects missing keys, wrong lengths, and unphysical states with
    :class:`InvalidStateError`.
    """
    if not isinstance(data, dict):
        raise InvalidStateError(f"state document must be an object, got {type(data).__name__}")
    missing = {"modes", "mean", "cov"} - set(data)
    if missing:
        raise InvalidStateError(f"state document missing keys: {sorted(missing)}")
    modes = data["modes"]
    if not isinstance(modes, int) or modes < 1:
        raise InvalidStateError(f"modes must be a positive integer, got {modes!r}")
    try:
        mean = np.asarray(data["mean"], dtype=float)
        cov = np.asarray(data["cov"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvalidStateError(f"state document is not numeric: {exc}") from exc
    if mean.shape != (2 * modes,):
        raise InvalidStateError(
            f"mean must have length {2 * modes} for {modes} mode(s), "
            f"got shape {mean.shape}"
        )
    if cov.shape != (2 * modes, 2 * modes):
        raise InvalidStateError(
            f"cov must be a {2 * modes} x {2 * modes} matrix, got shape {cov.shape}"
        )
    return validate_state(mean, cov, eps_psd=eps_psd)
