"""Fidelity-based imaginarity measures for Gaussian states.

Two measures are provided, both of the form 1 - F(rho, sigma) with F the
Uhlmann fidelity: M compares the state with its conjugate, M' with the real
Gaussian state induced by averaging the state with its conjugate. Both are
faithful (zero exactly on real states) and monotone under real Gaussian
channels. For one mode both have closed forms in the covariance entries;
two-mode states are handled by the brute-force Fock-space route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .states import GaussianState, conjugate, induced_real, symplectic_form

# Faithfulness boundary: values at or below this count as "zero".
EPS_MEASURE = 1e-9

__all__ = [
    "EPS_MEASURE",
    "MeasureReport",
    "fidelity_one_mode",
    "measure_m",
    "measure_m_prime",
    "measure_report",
    "coherent_closed",
    "squeezed_closed",
    "report_to_dict",
]


@dataclass(frozen=True)
class MeasureReport:
    """Both measures plus the fidelities they are built from.

    ``method`` records whether the values came from the one-mode closed
    forms ("ClosedForm") or from the truncated Fock-space route ("Oracle").
    """

    M: float
    Mprime: float
    fidelity_conj: float
    fidelity_bar: float
    method: str


def fidelity_one_mode(a: GaussianState, b: GaussianState) -> float:
    """Uhlmann fidelity of two one-mode Gaussian states, in (0, 1].

    Closed form in the means and covariances:

        F = exp(-(x - y).T (V + W)^-1 (x - y) / 4)
            / sqrt(sqrt(det((V + W)/2) + Lam) - sqrt(Lam)),
        Lam = 4 det((V + i Omega)/2) det((W + i Omega)/2).

    Lam is real and nonnegative for physical states (zero iff either state
    is pure); tiny negative round-off is clamped to zero.
    """
    if a.modes != 1 or b.modes != 1:
        raise ValueError(
            f"closed-form fidelity needs one-mode states, got {a.modes} and {b.modes}"
        )
    omega = symplectic_form(1)
    vw = a.cov + b.cov
    delta = a.mean - b.mean
    lam = 4.0 * float(
        (
            np.linalg.det((a.cov + 1j * omega) / 2.0)
            * np.linalg.det((b.cov + 1j * omega) / 2.0)
        ).real
    )
    lam = max(lam, 0.0)
    try:
        solved = scipy.linalg.solve(vw, delta, assume_a="pos")
    except np.linalg.LinAlgError as exc:
        raise ValueError(f"V + W is singular or not positive definite: {exc}") from exc
    expo = math.exp(-0.25 * float(delta @ solved))
    det_avg = float(np.linalg.det(vw / 2.0))
    denom = math.sqrt(math.sqrt(det_avg + lam) - math.sqrt(lam))
    return expo / denom


def _closed_form_fidelities(state: GaussianState) -> tuple[float, float]:
    """One-mode fidelities to the conjugate and to the induced real state."""
    v = state.cov
    x2 = float(state.mean[1])
    v11, v12, v22 = float(v[0, 0]), float(v[0, 1]), float(v[1, 1])
    detv = v11 * v22 - v12 * v12

    lam = max((detv - 1.0) ** 2 / 4.0, 0.0)
    f_conj = math.exp(-x2 * x2 / (2.0 * v22)) / math.sqrt(
        math.sqrt(v11 * v22 + lam) - math.sqrt(lam)
    )

    lam_p = max((detv - 1.0) * (v11 * v22 - 1.0) / 4.0, 0.0)
    f_bar = math.exp(
        -v11 * x2 * x2 / (2.0 * (4.0 * v11 * v22 - v12 * v12))
    ) / math.sqrt(math.sqrt(v11 * v22 - 0.25 * v12 * v12 + lam_p) - math.sqrt(lam_p))
    return f_conj, f_bar


def _oracle_fidelities(state: GaussianState, cutoff: int | None) -> tuple[float, float]:
    from . import fock

    fm = fock.density_matrix(state, cutoff)
    fm_conj = fock.density_matrix(conjugate(state), fm.cutoff, nodes=fm.nodes)
    fm_bar = fock.density_matrix(induced_real(state), fm.cutoff, nodes=fm.nodes)
    return (
        fock.uhlmann_fidelity(fm, fm_conj),
        fock.uhlmann_fidelity(fm, fm_bar),
    )


def measure_report(
    state: GaussianState,
    oracle_fallback: bool = False,
    *,
    cutoff: int | None = None,
) -> MeasureReport:
    """Compute both imaginarity measures for a state.

    One-mode states use the closed forms. Two-mode states require
    ``oracle_fallback=True`` and go through the truncated Fock-space route
    (``cutoff`` overrides the per-mode truncation). More than two modes is
    unsupported.
    """
    if state.modes == 1:
        f_conj, f_bar = _closed_form_fidelities(state)
        method = "ClosedForm"
    elif state.modes == 2:
        if not oracle_fallback:
            raise ValueError(
                "two-mode measures have no closed form here; "
                "pass oracle_fallback=True to use the Fock-space route"
            )
        f_conj, f_bar = _oracle_fidelities(state, cutoff)
        method = "Oracle"
    else:
        raise ValueError(
            f"measures are supported for at most 2 modes, got {state.modes}"
        )
    m = min(max(1.0 - f_conj, 0.0), 1.0)
    m_prime = min(max(1.0 - f_bar, 0.0), 1.0)
    return MeasureReport(
        M=m,
        Mprime=m_prime,
        fidelity_conj=f_conj,
        fidelity_bar=f_bar,
        method=method,
    )


def measure_m(
    state: GaussianState, oracle_fallback: bool = False, *, cutoff: int | None = None
) -> float:
    """Imaginarity measure M = 1 - F(state, conjugate(state))."""
    return measure_report(state, oracle_fallback, cutoff=cutoff).M


def measure_m_prime(
    state: GaussianState, oracle_fallback: bool = False, *, cutoff: int | None = None
) -> float:
    """Imaginarity measure M' = 1 - F(state, induced_real(state))."""
    return measure_report(state, oracle_fallback, cutoff=cutoff).Mprime


def coherent_closed(alpha: complex) -> tuple[float, float]:
    """(M, M') for a coherent state; depends only on Im(alpha).

    M = 1 - exp(-2 Im(alpha)^2) and M' = 1 - exp(-Im(alpha)^2 / 2); both
    vanish iff alpha is real.
    """
    im = complex(alpha).imag
    return 1.0 - math.exp(-2.0 * im * im), 1.0 - math.exp(-im * im / 2.0)


def squeezed_closed(zeta: complex) -> tuple[float, float]:
    """(M, M') for a squeezed vacuum with parameter zeta = r exp(i theta).

    With s = sin(theta)^2 sinh(2r)^2: M = 1 - (1 + s)^(-1/4) and
    M' = 1 - (1 + 3s/4)^(-1/4); both vanish iff zeta is real.
    """
    zeta = complex(zeta)
    r = abs(zeta)
    theta = np.angle(zeta) if r > 0 else 0.0
    s = (math.sin(theta) * math.sinh(2.0 * r)) ** 2
    return 1.0 - (1.0 + s) ** -0.25, 1.0 - (1.0 + 0.75 * s) ** -0.25


def report_to_dict(report: MeasureReport, state: GaussianState) -> dict:
    """JSON-ready dict with all five report fields plus the input state echo."""
    from .states import state_to_dict

    return {
        "M": report.M,
        "Mprime": report.Mprime,
        "fidelity_conj": report.fidelity_conj,
        "fidelity_bar": report.fidelity_bar,
        "method": report.method,
        "state": state_to_dict(state),
    }
