"""Imaginarity of bosonic Gaussian states.

States are (mean, covariance) pairs; channels are (d, T, N) triples.
Realness and conjugation act by simple sign patterns on those data, and two
fidelity-based imaginarity measures come in closed form for one mode. A
truncated Fock-space brute force provides an independent numerical
cross-check for all of it.
"""

from .states import (
    EPS_PSD,
    EPS_REAL,
    SYM_TOL,
    GaussianState,
    InvalidStateError,
    UncertaintyBoundaryWarning,
    symplectic_form,
    validate_state,
    is_real,
    conjugate,
    induced_real,
    thermal,
    coherent,
    squeezed,
    random_state,
    state_to_dict,
    state_from_dict,
)
from .channels import (
    GaussianChannel,
    InvalidChannelError,
    RealChannelClass,
    ConditionCheck,
    validate_channel,
    apply_channel,
    real_condition_report,
    classify_real,
    random_real_channel,
    compose,
    channel_to_dict,
    channel_from_dict,
)
from .measures import (
    EPS_MEASURE,
    MeasureReport,
    fidelity_one_mode,
    measure_m,
    measure_m_prime,
    measure_report,
    coherent_closed,
    squeezed_closed,
    report_to_dict,
)
from .fock import (
    DEFAULT_TRACE_TOL,
    FockMatrix,
    OracleConvergenceError,
    InsufficientCutoffError,
    characteristic_function,
    displacement_element,
    default_cutoff,
    density_matrix,
    moments_from_fock,
    uhlmann_fidelity,
    verify_realness,
    verify_conjugation,
    fock_to_dict,
)

__version__ = "0.1.0"

__all__ = [
    "EPS_PSD",
    "EPS_REAL",
    "SYM_TOL",
    "EPS_MEASURE",
    "DEFAULT_TRACE_TOL",
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
    "MeasureReport",
    "fidelity_one_mode",
    "measure_m",
    "measure_m_prime",
    "measure_report",
    "coherent_closed",
    "squeezed_closed",
    "report_to_dict",
    "FockMatrix",
    "OracleConvergenceError",
    "InsufficientCutoffError",
    "characteristic_function",
    "displacement_element",
    "default_cutoff",
    "density_matrix",
    "moments_from_fock",
    "uhlmann_fidelity",
    "verify_realness",
    "verify_conjugation",
    "fock_to_dict",
]
