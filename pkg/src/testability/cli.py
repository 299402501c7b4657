"""Command-line interface.

Exit codes: 0 success (including invalid certificates), 1 input or schema
error, 2 infeasible or empty hypothesis, 3 numeric failure.
"""
from __future__ import annotations

import argparse
import datetime as _dt
import json
import sys
import warnings
from pathlib import Path

from . import __version__
from .effnull import (
    SubProbability,
    hull_membership_equiv,
    in_effective_null_dom,
    is_e_variable,
    make_powered_e_variable,
    polar_sup,
)
from .errors import InputError, TestabilityError
from .experiments import EXAMPLES, refinement_sweep, run_example
from .measures import Pmf, TestFn
from .minimax import check_saddle_certificate, closest_pair, minimax_risk
from .problem import ProblemFile, parse_certificate, parse_problem
from .reports import SCHEMA_VERSION, emit_report
from .scalar import FLOAT, GAP_TOL, MODES, PMF_TOL, RATIONAL

COMMANDS = ("risk", "tvdist", "certify", "effnull", "evariable", "demo", "sweep")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _pair(mu, nu):
    return {"mu": mu.values, "nu": nu.values}


def _risk(problem: ProblemFile, args) -> dict:
    rep = minimax_risk(problem.P, problem.Q, gap_tol=args.gap_tol)
    return {
        "risk": rep.risk,
        "tv": rep.tv,
        "duality_gap": rep.duality_gap,
        "worst_level": rep.worst_level,
        "worst_power": rep.worst_power,
        "optimal_test": rep.optimal_test.values,
        "closest_pair": _pair(*rep.closest_pair),
    }


def _tvdist(problem: ProblemFile, args) -> dict:
    pair = closest_pair(problem.P, problem.Q)
    return {"tv": pair.tv, "closest_pair": _pair(pair.mu, pair.nu)}


def _certify(problem: ProblemFile, args) -> dict:
    if not args.certificate:
        raise InputError("certify needs a certificate file")
    cert = parse_certificate(Path(args.certificate).read_text(encoding="utf-8"), problem.space, problem.mode)
    try:
        phi = TestFn(problem.space, cert["phi"], problem.mode)
    except InputError as exc:
        raise InputError(str(exc), "certificate.phi") from None
    try:
        mu = Pmf(problem.space, cert["mu"], problem.mode)
    except InputError as exc:
        raise InputError(str(exc), "certificate.mu") from None
    try:
        nu = Pmf(problem.space, cert["nu"], problem.mode)
    except InputError as exc:
        raise InputError(str(exc), "certificate.nu") from None
    v = check_saddle_certificate(phi, mu, nu, problem.P, problem.Q, tol=args.gap_tol)
    return {
        "valid": v.valid,
        "risk_of_phi": v.risk_of_phi,
        "tv_of_pair": v.tv_of_pair,
        "membership_ok": list(v.membership_ok),
        "gap": v.gap,
    }


def _effnull(problem: ProblemFile, args) -> dict:
    raw = args.measure_values if args.measure_values is not None else problem.measure
    if raw is None:
        raise InputError("effnull needs a measure (problem 'measure' field or --measure)")
    P = problem.P
    try:
        sub = SubProbability(problem.space, raw, problem.mode)
    except InputError as exc:
        raise InputError(str(exc), "measure") from None
    dom = in_effective_null_dom(sub, P)
    polar = polar_sup(sub, P)
    out = {
        "dominated": dom,
        "polar": {
            "member": polar.member,
            "optimum": polar.optimum,
            "cap": polar.cap,
            "witness": polar.witness.values,
            "exhausted": polar.exhausted,
        },
        "routes_agree": dom == polar.member,
    }
    total = sum(sub.values)
    if total == 1 if problem.mode == RATIONAL else abs(total - 1) <= PMF_TOL:
        in_hull, in_peff = hull_membership_equiv(Pmf(problem.space, raw, problem.mode), P)
        out["in_hull"] = in_hull
        out["hull_equiv_agree"] = in_hull == in_peff
    return out


def _evariable(problem: ProblemFile, args) -> dict:
    z, inf_power = make_powered_e_variable(problem.P, problem.Q)
    return {"e_variable": z.values, "inf_power": inf_power, "is_e_variable": is_e_variable(z, problem.P)}


def _experiment_dict(rep) -> dict:
    last = rep.records[-1]
    return {
        "example": rep.name,
        "risk": last.risk,
        "tv": last.tv,
        "passed": rep.passed,
        "quantity": rep.quantity,
        "limit_estimate": rep.limit_estimate,
        "expected_limit": rep.expected_limit,
        "trend": rep.trend,
        "records": rep.records,
        "notes": rep.notes,
        "parameters": rep.parameters,
    }


def _example_params(args) -> dict:
    params: dict = {"mode": args.mode}
    for key in ("N", "n", "m1", "m2", "r"):
        v = getattr(args, key, None)
        if v is not None:
            params[key] = v
    if getattr(args, "grid", None):
        params["grid"] = [g.strip() for g in args.grid.split(",")]
    for item in getattr(args, "param", None) or []:
        if "=" not in item:
            raise InputError(f"--param expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        params[k] = [x.strip() for x in v.split(",")] if "," in v else v
    return params


def _demo(args) -> dict:
    return _experiment_dict(run_example(args.example, _example_params(args)))


def _sweep(args) -> dict:
    try:
        sizes = [int(s) for s in args.sizes.split(",")]
    except ValueError:
        raise InputError(f"--sizes must be comma-separated integers, got {args.sizes!r}") from None
    return _experiment_dict(refinement_sweep(args.example, sizes, _example_params(args)))


_PROBLEM_COMMANDS = {
    "risk": _risk,
    "tvdist": _tvdist,
    "certify": _certify,
    "effnull": _effnull,
    "evariable": _evariable,
}


def dispatch(command: str, args: argparse.Namespace, problem: ProblemFile | None = None) -> dict:
    """Run ``command`` and return the report dictionary (not yet serialized)."""
    if command not in COMMANDS:
        raise InputError(f"unknown command {command!r}")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        if command in _PROBLEM_COMMANDS:
            if problem is None:
                raise InputError(f"{command} needs a problem file")
            result = _PROBLEM_COMMANDS[command](problem, args)
        elif command == "demo":
            result = _demo(args)
        else:
            result = _sweep(args)
    echo = {"name": command}
    for key in ("problem", "certificate", "example", "sizes", "measure"):
        if getattr(args, key, None) is not None:
            echo[key] = str(getattr(args, key))
    return {
        "schema_version": SCHEMA_VERSION,
        "command": echo,
        "mode": args.mode,
        "result": result,
        "warnings": [str(w.message) for w in caught],
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--mode", choices=MODES, default=RATIONAL, help="scalar arithmetic (default: rational)")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--tolerance", type=float, help="duality-gap tolerance (float mode only)")

    parser = _Parser(
        prog="testability",
        description="Minimax risk, closest pairs and e-variables for finite-space hypotheses.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    helps = {
        "risk": "minimax risk, optimal test and closest pair",
        "tvdist": "TV-closest pair between the hulls",
        "certify": "audit a saddle-point certificate",
        "effnull": "effective-null membership of a measure",
        "evariable": "uniformly powered bounded e-variable",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("problem", help="problem JSON file")
        if name == "certify":
            p.add_argument("certificate", help="certificate JSON file {phi, mu, nu}")
        if name == "effnull":
            p.add_argument("--measure", help="JSON list of atom masses (overrides the problem file)")

    for name in ("demo", "sweep"):
        p = sub.add_parser(name, parents=[common], help=f"{name} a named example")
        p.add_argument("example", choices=sorted(EXAMPLES))
        if name == "sweep":
            p.add_argument("--sizes", required=True, help="comma-separated sizes, e.g. 2,4,8,16")
        p.add_argument("--N", type=int, help="escaping-mass truncation level")
        p.add_argument("--n", type=int, help="atoms / points per side")
        p.add_argument("--m1", help="mean-separation null mean bound")
        p.add_argument("--m2", help="mean-separation alternative mean bound")
        p.add_argument("--r", help="tv-balls radius")
        p.add_argument("--grid", help="mean-separation grid, comma-separated")
        p.add_argument("--param", action="append", help="extra example parameter key=value")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.tolerance is not None and args.mode != FLOAT:
            raise InputError("--tolerance applies to float mode only")
        if args.tolerance is not None and not args.tolerance >= 0:
            raise InputError("--tolerance must be nonnegative")
        args.gap_tol = args.tolerance if args.tolerance is not None else GAP_TOL
        args.measure_values = None
        if getattr(args, "measure", None) is not None:
            try:
                args.measure_values = json.loads(args.measure)
            except json.JSONDecodeError as exc:
                raise InputError(f"--measure is not JSON: {exc}") from None
            if not isinstance(args.measure_values, list):
                raise InputError("--measure must be a JSON list")
        problem = None
        if hasattr(args, "problem"):
            try:
                text = Path(args.problem).read_bytes()
            except OSError as exc:
                raise InputError(f"cannot read problem file: {exc}") from None
            problem = parse_problem(text, args.mode)
        report = dispatch(args.command, args, problem)
    except TestabilityError as exc:
        print(f"testability: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"testability: {exc}", file=sys.stderr)
        return 1
    text = emit_report(report)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"report written to {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
