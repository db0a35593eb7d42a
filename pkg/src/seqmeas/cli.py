"""Command-line surface: property suites, qubit demos, distributions,
joint probabilities, and instrument dilation.

Human-readable tables go to stdout; when ``--out`` is given, a structured
JSON document with ``inputs``, ``results``, ``tolerances``, and ``seed``
fields is written there. Identical invocations produce byte-identical
documents.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import io
from .errors import ParseError, ToolkitError
from .instruments import (
    JointMethod,
    induced_observable,
    joint_probability,
    luders_instrument,
    trivial_instrument,
)
from .linalg import Tolerance
from .models import dilation_matches_instrument, ozawa_dilation, verify_reproducing
from .observables import (
    Observable,
    condition_obs,
    distribution,
    fourier_mub_pair,
    marginals,
    seq_product_obs,
)
from .qubit import (
    as_direction,
    conditioned_spin_closed_form,
    seq_spin,
    spin_observable,
    triple_spin_coefficients,
)
from .states import State, maximally_mixed
from .suites import SUITE_NAMES, SuiteReport, run_check, suite_description


def _parse_direction(text: str) -> np.ndarray:
    try:
        parts = [float(x) for x in text.split(",")]
    except ValueError as exc:
        raise ParseError(f"cannot parse direction {text!r}: {exc}") from exc
    return as_direction(parts)


def _parse_labels(text: str) -> tuple[str, ...]:
    labels = tuple(x for x in text.split(",") if x)
    if not labels:
        raise ParseError(f"empty label subset {text!r}")
    return labels


def _resolve_observable(spec: str, tol: Tolerance) -> Observable:
    if spec.startswith("fourier-mub:"):
        dim = int(spec.split(":", 1)[1])
        return fourier_mub_pair(dim, tol)[1]
    if spec.startswith("spin:"):
        return spin_observable(_parse_direction(spec.split(":", 1)[1]), tol)
    return io.observable_from_obj(io.load_json(spec), tol)


def _resolve_state(spec: str, dim_hint: int | None, tol: Tolerance) -> State:
    if spec == "maximally-mixed":
        if dim_hint is None:
            raise ParseError("maximally-mixed needs an observable to fix the dimension")
        return maximally_mixed(dim_hint, tol)
    return io.state_from_obj(io.load_json(spec), tol)


def _fmt_complex(z: complex) -> str:
    return f"{z.real:+.6f}{z.imag:+.6f}i"

def _print_matrix(name: str, m: np.ndarray) -> None:
    print(name)
    for row in m:
        print("   " + "  ".join(_fmt_complex(z) for z in row))


def _print_observable(name: str, obs: Observable) -> None:
    for label, eff in zip(obs.labels, obs.effects):
        _print_matrix(f"{name}[{label}]", eff.matrix)


def _report_lines(report: SuiteReport) -> None:
    status = "ok" if report.ok else f"{len(report.failures)} FAILURES"
    print(
        f"{report.suite:<16} dim={report.dim} cases={report.cases_run:<5} "
        f"{status:<14} {report.wall_time_s:6.2f}s"
    )
    for failure in report.failures:
        print(f"    [case {failure.case}] {failure.detail} gap={failure.gap:.3e}")


def _report_obj(report: SuiteReport) -> dict:
    return {
        "name": report.suite,
        "dim": report.dim,
        "cases_run": report.cases_run,
        "passed": report.ok,
        "failures": [
            {"case": f.case, "detail": f.detail, "gap": f.gap} for f in report.failures
        ],
    }


def _emit(doc: dict, out: str | None) -> None:
    if out:
        io.dump_json(doc, out)


def _cmd_check(args: argparse.Namespace, tol: Tolerance) -> int:
    names = SUITE_NAMES if args.suite == "all" else (args.suite,)
    reports = [run_check(name, args.dim, args.cases, args.seed, tol) for name in names]
    for report in reports:
        _report_lines(report)
    doc = {
        "command": "check",
        "inputs": {
            "suite": args.suite,
            "dim": args.dim,
            "cases": args.cases,
        },
        "seed": args.seed,
        "tolerances": {"eq_tol": tol.eq_tol, "psd_tol": tol.psd_tol},
        "results": {"suites": [_report_obj(r) for r in reports]},
    }
    _emit(doc, args.out)
    return 0 if all(r.ok for r in reports) else 1


def _cmd_demo_qubit(args: argparse.Namespace, tol: Tolerance) -> int:
    m = _parse_direction(args.m)
    n = _parse_direction(args.n)
    product = seq_spin(m, n, tol)
    overlap, conditioned = conditioned_spin_closed_form(m, n, tol)
    print(f"overlap a = {overlap:.10f}")
    _print_observable("first-then-second", product)
    _print_observable("second|first", conditioned)
    results: dict = {
        "a": overlap,
        "product": io.observable_to_obj(product),
        "conditioned": io.observable_to_obj(conditioned),
    }
    if args.r is not None:
        r = _parse_direction(args.r)
        coeffs = triple_spin_coefficients(m, n, r, tol)
        print("triple coefficients:")
        table = {}
        for signs, value in sorted(coeffs.c.items()):
            key = "".join(signs)
            table[key] = value
            print(f"   c[{key}] = {value:.10f}")
        results["triple_coefficients"] = table
    doc = {
        "command": "demo-qubit",
        "inputs": {"m": list(map(float, m)), "n": list(map(float, n)),
                   "r": None if args.r is None else list(map(float, _parse_direction(args.r)))},
        "seed": args.seed,
        "tolerances": {"eq_tol": tol.eq_tol, "psd_tol": tol.psd_tol},
        "results": results,
    }
    _emit(doc, args.out)
    return 0


def _print_distribution(name: str, labels, probs) -> None:
    print(name)
    for label, p in zip(labels, probs):
        print(f"   {label:<12} {p:.10f}")


def _cmd_dist(args: argparse.Namespace, tol: Tolerance) -> int:
    obs_a = _resolve_observable(args.obs_a, tol)
    rho = _resolve_state(args.state, obs_a.dim, tol)
    dist_a = distribution(rho, obs_a, tol)
    _print_distribution("first observable", dist_a.labels, dist_a.probs)
    results: dict = {"first": {"labels": list(dist_a.labels), "probs": list(dist_a.probs)}}
    if args.obs_b:
        obs_b = _resolve_observable(args.obs_b, tol)
        joint = distribution(rho, seq_product_obs(obs_a, obs_b, tol), tol)
        left, right = marginals(joint, tol)
        cond = distribution(rho, condition_obs(obs_b, obs_a, tol), tol)
        _print_distribution("joint (first then second)", joint.labels, joint.probs)
        _print_distribution("left marginal", left.labels, left.probs)
        _print_distribution("right marginal", right.labels, right.probs)
        _print_distribution("second|first", cond.labels, cond.probs)
        results.update(
            {
                "joint": {"labels": list(joint.labels), "probs": list(joint.probs)},
                "left": {"labels": list(left.labels), "probs": list(left.probs)},
                "right": {"labels": list(right.labels), "probs": list(right.probs)},
                "conditioned": {"labels": list(cond.labels), "probs": list(cond.probs)},
            }
        )
    doc = {
        "command": "dist",
        "inputs": {"state": args.state, "obs_a": args.obs_a, "obs_b": args.obs_b},
        "seed": args.seed,
        "tolerances": {"eq_tol": tol.eq_tol, "psd_tol": tol.psd_tol},
        "results": results,
    }
    _emit(doc, args.out)
    return 0


def _cmd_joint(args: argparse.Namespace, tol: Tolerance) -> int:
    obs_a = _resolve_observable(args.obs_a, tol)
    obs_b = _resolve_observable(args.obs_b, tol)
    rho = _resolve_state(args.state, obs_a.dim, tol)
    xs = _parse_labels(args.x)
    ys = _parse_labels(args.y)

    values: dict[str, float] = {
        "sequential": joint_probability(rho, obs_a, xs, obs_b, ys, JointMethod.sequential(), tol),
        "luders": joint_probability(rho, obs_a, xs, obs_b, ys, JointMethod.luders(), tol),
    }
    if args.method.startswith("instrument:"):
        inst = io.instrument_from_obj(io.load_json(args.method.split(":", 1)[1]), tol)
        values["instrument"] = joint_probability(
            rho, obs_a, xs, obs_b, ys, JointMethod.from_instrument(inst), tol
        )
    elif args.method.startswith("trivial:"):
        eta = io.state_from_obj(io.load_json(args.method.split(":", 1)[1]), tol)
        inst = trivial_instrument(obs_a, eta, tol)
        values["instrument"] = joint_probability(
            rho, obs_a, xs, obs_b, ys, JointMethod.from_instrument(inst), tol
        )
    elif args.method not in ("sequential", "luders"):
        raise ParseError(f"unknown method {args.method!r}")

    gaps = {
        f"{p}-vs-{q}": abs(values[p] - values[q])
        for i, p in enumerate(values)
        for q in list(values)[i + 1 :]
    }
    for name, value in values.items():
        print(f"{name:<12} {value:.10f}")
    for name, value in gaps.items():
        print(f"gap {name:<24} {value:.3e}")
    doc = {
        "command": "joint",
        "inputs": {
            "state": args.state,
            "obs_a": args.obs_a,
            "obs_b": args.obs_b,
            "x": list(xs),
            "y": list(ys),
            "method": args.method,
        },
        "seed": args.seed,
        "tolerances": {"eq_tol": tol.eq_tol, "psd_tol": tol.psd_tol},
        "results": {"probabilities": values, "gaps": gaps},
    }
    _emit(doc, args.out)
    return 0


def _cmd_dilate(args: argparse.Namespace, tol: Tolerance) -> int:
    if args.instrument.startswith("spin-luders:"):
        direction = _parse_direction(args.instrument.split(":", 1)[1])
        inst = luders_instrument(spin_observable(direction, tol), tol)
    else:
        inst = io.instrument_from_obj(io.load_json(args.instrument), tol)
    model = ozawa_dilation(inst, tol)
    deviation = verify_reproducing(
        model, trials=args.cases, seed=args.seed, expected=induced_observable(inst, tol), tol=tol
    )
    choi_gap = dilation_matches_instrument(model, inst, tol)
    print(f"base dim      {model.dim_base}")
    print(f"probe dim     {model.dim_probe}")
    print(f"reproduction deviation {deviation:.3e}")
    print(f"branch Choi distance   {choi_gap:.3e}")
    if args.out:
        io.dump_json(io.model_to_obj(model), args.out)
        print(f"model written to {args.out}")
    return 0 if deviation <= 1e-9 and choi_gap <= 1e-9 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seqmeas",
        description="Finite-dimensional quantum measurement toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--seed", type=int, default=7)
        p.add_argument("--tol", type=float, default=1e-9, help="equality tolerance")
        p.add_argument("--out", type=str, default=None, help="write structured JSON here")

    check = sub.add_parser("check", help="run a named property suite")
    check.add_argument(
        "--suite",
        required=True,
        help="one of: all, " + ", ".join(f"{n} ({suite_description(n)})" for n in SUITE_NAMES),
    )
    check.add_argument("--dim", type=int, default=2)
    check.add_argument("--cases", type=int, default=50)
    add_common(check)

    demo = sub.add_parser("demo-qubit", help="closed-form spin measurement tables")
    demo.add_argument("--m", required=True, help="first direction, e.g. 0,0,1")
    demo.add_argument("--n", required=True, help="second direction")
    demo.add_argument("--r", default=None, help="optional third direction")
    add_common(demo)

    dist = sub.add_parser("dist", help="outcome distributions and marginals")
    dist.add_argument("--state", required=True, help="file, or maximally-mixed")
    dist.add_argument("--obs-a", required=True, help="file, spin:x,y,z or fourier-mub:d")
    dist.add_argument("--obs-b", default=None)
    add_common(dist)

    joint = sub.add_parser("joint", help="compare joint probability rules")
    joint.add_argument("--state", required=True)
    joint.add_argument("--obs-a", required=True)
    joint.add_argument("--obs-b", required=True)
    joint.add_argument("--x", required=True, help="comma-separated first-outcome labels")
    joint.add_argument("--y", required=True, help="comma-separated second-outcome labels")
    joint.add_argument(
        "--method",
        default="luders",
        help="sequential | luders | instrument:FILE | trivial:ETA_FILE",
    )
    add_common(joint)

    dilate = sub.add_parser("dilate", help="dilate an instrument to a measurement model")
    dilate.add_argument("--instrument", required=True, help="file or spin-luders:x,y,z")
    dilate.add_argument("--cases", type=int, default=20, help="verification trials")
    add_common(dilate)

    return parser


_COMMANDS = {
    "check": _cmd_check,
    "demo-qubit": _cmd_demo_qubit,
    "dist": _cmd_dist,
    "joint": _cmd_joint,
    "dilate": _cmd_dilate,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        tol = Tolerance(eq_tol=args.tol, psd_tol=min(args.tol, 1e-9))
        return _COMMANDS[args.command](args, tol)
    except ToolkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
