"""Command-line interface: measures, sweeps, channel classification, verify.

Exit codes: 0 success, 1 verification failure, 2 invalid input,
3 numerical non-convergence. Tolerance overrides via environment:
GI_EPS_PSD (uncertainty eigenvalue floor) and GI_FOCK_CUTOFF (Fock
truncation used by the brute-force routes).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from .channels import (
    InvalidChannelError,
    channel_from_dict,
    classify_real,
    real_condition_report,
)
from .fock import (
    InsufficientCutoffError,
    OracleConvergenceError,
    default_cutoff,
    density_matrix,
    uhlmann_fidelity,
)
from .measures import (
    coherent_closed,
    measure_report,
    report_to_dict,
    squeezed_closed,
)
from .states import (
    EPS_PSD,
    InvalidStateError,
    coherent,
    conjugate,
    squeezed,
    state_from_dict,
    thermal,
)
from .verification import measure_gap, run_suites

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INVALID_INPUT = 2
EXIT_NO_CONVERGENCE = 3

__all__ = ["RunConfig", "build_parser", "main", "console_entry"]


@dataclass
class RunConfig:
    """Everything a run depends on; (command, params, seed) reproduce it."""

    command: str
    params: dict = field(default_factory=dict)
    seed: int = 0
    eps_psd: float = EPS_PSD
    fock_cutoff: int | None = None


def _env_overrides() -> tuple[float, int | None]:
    eps = os.environ.get("GI_EPS_PSD")
    cut = os.environ.get("GI_FOCK_CUTOFF")
    try:
        eps_psd = float(eps) if eps is not None else EPS_PSD
    except ValueError as exc:
        raise InvalidStateError(f"GI_EPS_PSD is not a number: {eps!r}") from exc
    try:
        fock_cutoff = int(cut) if cut is not None else None
    except ValueError as exc:
        raise InvalidStateError(f"GI_FOCK_CUTOFF is not an integer: {cut!r}") from exc
    return eps_psd, fock_cutoff


def _parse_pair(text: str) -> complex:
    parts = text.split(",")
    if len(parts) != 2:
        raise InvalidStateError(
            f"expected 're,im' with two comma-separated numbers, got {text!r}"
        )
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError as exc:
        raise InvalidStateError(f"could not parse {text!r} as 're,im'") from exc


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InvalidStateError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidStateError(f"{path} is not valid JSON: {exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gaussimag",
        description=(
            "Imaginarity of Gaussian states: fidelity-based measures, "
            "real-channel classification, and brute-force verification."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", help="compute the measures M and M' of a state")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--state", metavar="FILE", help="state JSON file")
    src.add_argument("--thermal", type=float, metavar="NBAR",
                     help="one-mode thermal state with mean photon number NBAR")
    src.add_argument("--coherent", metavar="RE,IM",
                     help="one-mode coherent state with amplitude RE+i*IM")
    src.add_argument("--squeezed", metavar="RE,IM",
                     help="one-mode squeezed vacuum with parameter RE+i*IM")
    p.add_argument("--oracle-fallback", action="store_true",
                   help="allow the Fock-space route for two-mode states")

    p = sub.add_parser("sweep", help="emit param,M,Mprime curves as CSV")
    p.add_argument("--family", choices=("coherent", "squeezed"), required=True)
    p.add_argument("--start", type=float, default=0.0,
                   help="first parameter value (default 0)")
    p.add_argument("--stop", type=float, default=2.0,
                   help="last parameter value (default 2)")
    p.add_argument("--steps", type=int, default=41,
                   help="number of rows (default 41)")
    p.add_argument("--real-part", type=float, default=0.0,
                   help="coherent family: fixed Re(alpha) (default 0)")
    p.add_argument("--theta", type=float, default=math.pi / 2,
                   help="squeezed family: fixed phase of zeta (default pi/2)")
    p.add_argument("--output", default="-",
                   help="output CSV path, '-' for stdout (default)")
    p.add_argument("--verify-oracle", action="store_true",
                   help="cross-check every row against the Fock-space route")

    p = sub.add_parser("classify", help="classify a channel's realness structure")
    p.add_argument("--channel", metavar="FILE", required=True,
                   help="channel JSON file")

    p = sub.add_parser("verify", help="run randomized property suites")
    p.add_argument("--suite", default="all",
                   choices=("all", "theorem1", "theorem2", "theorem4",
                            "monotonicity", "oracle"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=50)
    return parser


def _state_from_args(args, eps_psd: float):
    if args.state is not None:
        return state_from_dict(_load_json(args.state), eps_psd=eps_psd)
    if args.thermal is not None:
        return thermal(args.thermal)
    if args.coherent is not None:
        return coherent(_parse_pair(args.coherent))
    return squeezed(_parse_pair(args.squeezed))


def _cmd_measure(cfg: RunConfig, args) -> int:
    state = _state_from_args(args, cfg.eps_psd)
    report = measure_report(
        state, oracle_fallback=args.oracle_fallback, cutoff=cfg.fock_cutoff
    )
    print(json.dumps(report_to_dict(report, state), indent=2, sort_keys=True))
    return EXIT_OK


def _sweep_rows(args) -> list[tuple[float, float, float]]:
    if args.steps < 1:
        raise InvalidStateError(f"steps must be >= 1, got {args.steps}")
    params = np.linspace(args.start, args.stop, args.steps)
    rows = []
    for t in params:
        if args.family == "coherent":
            m, mp = coherent_closed(complex(args.real_part, t))
        else:
            m, mp = squeezed_closed(t * complex(math.cos(args.theta),
                                                math.sin(args.theta)))
        rows.append((float(t), m, mp))
    return rows


def _verify_sweep_row(args, param: float, m: float, cutoff: int | None) -> float:
    state = (
        coherent(complex(args.real_part, param))
        if args.family == "coherent"
        else squeezed(param * complex(math.cos(args.theta), math.sin(args.theta)))
    )
    cut = cutoff if cutoff is not None else max(default_cutoff(state), 48)
    fm = density_matrix(state, cut)
    fmc = density_matrix(conjugate(state), cut, nodes=fm.nodes)
    return abs(m - (1.0 - uhlmann_fidelity(fm, fmc)))


def _cmd_sweep(cfg: RunConfig, args) -> int:
    rows = _sweep_rows(args)
    if args.verify_oracle:
        worst = 0.0
        for param, m, _ in rows:
            worst = max(worst, _verify_sweep_row(args, param, m, cfg.fock_cutoff))
        if worst > 1e-6:
            print(
                f"error: closed-form sweep deviates from the Fock-space route "
                f"by {worst:.3e} (tolerance 1e-06)",
                file=sys.stderr,
            )
            return EXIT_VERIFY_FAILED
        print(f"oracle cross-check passed, worst deviation {worst:.3e}",
              file=sys.stderr)
    text = "param,M,Mprime\n" + "".join(
        f"{p:.17g},{m:.17g},{mp:.17g}\n" for p, m, mp in rows
    )
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return EXIT_OK


def _cmd_classify(cfg: RunConfig, args) -> int:
    channel = channel_from_dict(_load_json(args.channel), eps_psd=cfg.eps_psd)
    cls = classify_real(channel)
    print(f"class: {cls.value}")
    for check in real_condition_report(channel):
        if check.passed:
            print(f"  {check.label}: pass")
        else:
            idx = "".join(f"[{i}]" for i in check.index)
            print(f"  {check.label}: FAIL (|entry{idx}| = {check.worst:.6g})")
    return EXIT_OK


def _cmd_verify(cfg: RunConfig, args) -> int:
    results = run_suites(args.suite, args.seed, args.trials)
    failed = False
    for res in results:
        status = "pass" if res.passed else "FAIL"
        print(
            f"suite {res.name}: {res.trials - res.failures}/{res.trials} "
            f"{status}, worst deviation {res.worst:.6e}"
        )
        if res.note:
            print(f"  ({res.note})")
        failed = failed or not res.passed
    gap = measure_gap(args.seed, args.trials)
    print(
        f"exploratory min(M - Mprime) over {args.trials} random states: "
        f"{gap:.6e}"
    )
    print(f"overall: {'FAIL' if failed else 'PASS'}")
    return EXIT_VERIFY_FAILED if failed else EXIT_OK


_COMMANDS = {
    "measure": _cmd_measure,
    "sweep": _cmd_sweep,
    "classify": _cmd_classify,
    "verify": _cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        eps_psd, fock_cutoff = _env_overrides()
        cfg = RunConfig(
            command=args.command,
            params={k: v for k, v in vars(args).items() if k != "command"},
            seed=getattr(args, "seed", 0),
            eps_psd=eps_psd,
            fock_cutoff=fock_cutoff,
        )
        return _COMMANDS[args.command](cfg, args)
    except (OracleConvergenceError, InsufficientCutoffError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except (InvalidStateError, InvalidChannelError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT


def console_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
