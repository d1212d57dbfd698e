"""Randomized property suites behind the command line's verify command.

Each suite draws deterministic pseudo-random states/channels from a seed,
checks one family of structural claims (realness predicate, conjugation
rule, real-channel behavior, measure monotonicity, closed-form vs
brute-force agreement), and reports pass/fail counts with the worst
observed deviation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fock
from .channels import RealChannelClass, apply_channel, random_real_channel
from .measures import fidelity_one_mode, measure_report
from .states import (
    GaussianState,
    conjugate,
    induced_real,
    is_real,
    random_state,
    validate_state,
)

SUITE_NAMES = ("theorem1", "theorem2", "theorem4", "monotonicity", "oracle")

# Random one-mode states are redrawn until the brute-force layer can truncate
# them below this many Fock levels; heavier draws are valid states but out of
# desk scale for the quadrature cross-checks.
DESK_CUTOFF_CAP = 56

__all__ = [
    "SUITE_NAMES",
    "DESK_CUTOFF_CAP",
    "SuiteResult",
    "trial_seed",
    "desk_random_state",
    "random_real_state",
    "perturbed_real_state",
    "measure_gap",
    "run_suites",
]


@dataclass(frozen=True)
class SuiteResult:
    """Outcome of one property suite: counts plus the worst deviation."""

    name: str
    trials: int
    failures: int
    worst: float
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.failures == 0


def trial_seed(seed: int, *key: int) -> int:
    """Deterministic per-trial seed derived from the master seed and a key."""
    ss = np.random.SeedSequence((seed, *key))
    return int(ss.generate_state(1)[0])


def desk_random_state(modes: int, max_nbar: float, seed: int) -> GaussianState:
    """Random state redrawn until it truncates within DESK_CUTOFF_CAP levels."""
    for attempt in range(64):
        s = random_state(modes, max_nbar, trial_seed(seed, attempt))
        if fock.default_cutoff(s) <= DESK_CUTOFF_CAP:
            return s
    raise RuntimeError(f"no desk-scale state found for seed {seed}")


def random_real_state(
    max_nbar: float, seed: int, margin: float = 0.12
) -> GaussianState:
    """Random real one-mode state with a safety margin above the boundary.

    Built by averaging a random state with its conjugate (which zeroes the
    realness-violating entries exactly) and padding the covariance with
    margin * identity so that entry perturbations of 0.1 keep the state
    physical.
    """
    s = desk_random_state(1, max_nbar, seed)
    r = induced_real(s)
    if margin:
        return validate_state(r.mean, r.cov + margin * np.eye(2))
    return r


def perturbed_real_state(base: GaussianState, kind: str) -> GaussianState:
    """Violate exactly one realness condition of a real state by 0.1."""
    mean = base.mean.copy()
    cov = base.cov.copy()
    if kind == "mean":
        mean[1] += 0.1
    elif kind == "cov":
        cov[0, 1] += 0.1
        cov[1, 0] += 0.1
    else:
        raise ValueError(f"kind must be 'mean' or 'cov', got {kind!r}")
    return validate_state(mean, cov)


def _suite_theorem1(seed: int, trials: int) -> list[SuiteResult]:
    worst_real = 0.0
    weakest_pert = float("inf")
    fail_real = fail_pert = 0
    for i in range(trials):
        base = random_real_state(0.5, trial_seed(seed, 101, i))
        fm = fock.density_matrix(base)
        im = float(np.abs(fm.data.imag).max())
        worst_real = max(worst_real, im)
        if im > 1e-7:
            fail_real += 1
        pert = perturbed_real_state(base, "mean" if i % 2 == 0 else "cov")
        fmp = fock.density_matrix(pert)
        imp = float(np.abs(fmp.data.imag).max())
        weakest_pert = min(weakest_pert, imp)
        if imp < 1e-3:
            fail_pert += 1
    return [
        SuiteResult(
            "theorem1/real-states",
            trials,
            fail_real,
            worst_real,
            "max |Im| over Fock matrices of real states (tolerance 1e-07)",
        ),
        SuiteResult(
            "theorem1/perturbed-states",
            trials,
            fail_pert,
            weakest_pert,
            "min |Im| after violating one realness condition by 0.1 "
            "(must exceed 1e-03)",
        ),
    ]


def _suite_theorem2(seed: int, trials: int) -> list[SuiteResult]:
    worst = 0.0
    failures = 0
    for i in range(trials):
        s = desk_random_state(1, 0.5, trial_seed(seed, 202, i))
        dev = fock.verify_conjugation(s)
        worst = max(worst, dev)
        if dev > 1e-7:
            failures += 1
    return [
        SuiteResult(
            "theorem2",
            trials,
            failures,
            worst,
            "max |Fock(conjugate) - conj(Fock)| entry (tolerance 1e-07)",
        )
    ]


_REAL_KINDS = (
    RealChannelClass.COMPLETELY_REAL,
    RealChannelClass.COVARIANT_REAL,
    RealChannelClass.COVARIANT_AND_COMPLETELY_REAL,
)


def _state_distance(a: GaussianState, b: GaussianState) -> float:
    return max(
        float(np.abs(a.mean - b.mean).max()), float(np.abs(a.cov - b.cov).max())
    )


def _suite_theorem4(seed: int, trials: int) -> list[SuiteResult]:
    results = []
    for kc, kind in enumerate(_REAL_KINDS):
        worst = 0.0
        failures = 0
        erases = kind != RealChannelClass.COVARIANT_REAL
        covariant = kind != RealChannelClass.COMPLETELY_REAL
        for i in range(trials):
            ch = random_real_channel(1, kind, trial_seed(seed, 303, kc, i))
            st = random_state(1, 1.0, trial_seed(seed, 304, kc, i))
            out = apply_channel(ch, st)
            if erases and not is_real(out):
                failures += 1
            if covariant:
                dev = _state_distance(
                    apply_channel(ch, conjugate(st)), conjugate(out)
                )
                dev = max(
                    dev,
                    _state_distance(
                        apply_channel(ch, induced_real(st)), induced_real(out)
                    ),
                )
                worst = max(worst, dev)
                if dev > 1e-10:
                    failures += 1
            if not is_real(apply_channel(ch, induced_real(st))):
                failures += 1
        results.append(
            SuiteResult(
                f"theorem4/{kind.value}",
                trials,
                failures,
                worst,
                "worst (mean, cov) deviation in the conjugation/averaging "
                "commutation checks (tolerance 1e-10)",
            )
        )
    return results


def _suite_monotonicity(seed: int, trials: int) -> list[SuiteResult]:
    results = []
    for kc, kind in enumerate(_REAL_KINDS):
        worst = -float("inf")
        failures = 0
        for i in range(trials):
            ch = random_real_channel(1, kind, trial_seed(seed, 505, kc, i))
            st = random_state(1, 1.0, trial_seed(seed, 506, kc, i))
            rep_in = measure_report(st)
            rep_out = measure_report(apply_channel(ch, st))
            inc = max(rep_out.M - rep_in.M, rep_out.Mprime - rep_in.Mprime)
            worst = max(worst, inc)
            if inc > 1e-9:
                failures += 1
        results.append(
            SuiteResult(
                f"monotonicity/{kind.value}",
                trials,
                failures,
                worst,
                "largest measure increase under the channel "
                "(must stay below 1e-09)",
            )
        )
    return results


def _suite_oracle(seed: int, trials: int) -> list[SuiteResult]:
    worst_fid = 0.0
    worst_meas = 0.0
    failures = 0
    for i in range(trials):
        a = desk_random_state(1, 0.5, trial_seed(seed, 707, i))
        b = desk_random_state(1, 0.5, trial_seed(seed, 708, i))
        cut = max(fock.default_cutoff(a), fock.default_cutoff(b))
        fa = fock.density_matrix(a, cut)
        fb = fock.density_matrix(b, cut)
        dev = abs(fidelity_one_mode(a, b) - fock.uhlmann_fidelity(fa, fb))
        worst_fid = max(worst_fid, dev)
        if dev > 1e-6:
            failures += 1
        fac = fock.density_matrix(conjugate(a), cut, nodes=fa.nodes)
        m_oracle = 1.0 - fock.uhlmann_fidelity(fa, fac)
        dev_m = abs(measure_report(a).M - m_oracle)
        worst_meas = max(worst_meas, dev_m)
        if dev_m > 1e-6:
            failures += 1
    return [
        SuiteResult(
            "oracle",
            trials,
            failures,
            max(worst_fid, worst_meas),
            "worst |closed form - brute force| over fidelities and measures "
            "(tolerance 1e-06)",
        )
    ]


def measure_gap(seed: int, trials: int) -> float:
    """Empirical min(M - M') over random one-mode states; exploratory only.

    Whether M >= M' holds for every Gaussian state is an open question, so
    this number is reported, never asserted.
    """
    gap = float("inf")
    for i in range(trials):
        rep = measure_report(random_state(1, 1.0, trial_seed(seed, 909, i)))
        gap = min(gap, rep.M - rep.Mprime)
    return gap


_SUITES = {
    "theorem1": _suite_theorem1,
    "theorem2": _suite_theorem2,
    "theorem4": _suite_theorem4,
    "monotonicity": _suite_monotonicity,
    "oracle": _suite_oracle,
}


def run_suites(name: str, seed: int, trials: int) -> list[SuiteResult]:
    """Run one named suite, or all of them in a fixed order."""
    if name == "all":
        results = []
        for key in SUITE_NAMES:
            results.extend(_SUITES[key](seed, trials))
        return results
    if name not in _SUITES:
        raise ValueError(
            f"unknown suite {name!r}; choose from {('all',) + SUITE_NAMES}"
        )
    return _SUITES[name](seed, trials)
