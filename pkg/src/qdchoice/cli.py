"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 parse error,
3 degenerate postselection, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Sequence

import numpy as np

from . import __version__
from .bench import parse_angle, parse_bench
from .elements import QBS, Element, Kind, compose, element_unitary, qbs_decomposition
from .errors import DegeneratePostselectionError, ParseError
from .experiments import (
    DEFAULT_DETECTOR,
    FIG3_ALPHA_RANGE,
    FIG3_THETA_RANGE,
    ScenarioId,
    Scenario,
    build_scenario,
    evaluate,
    fig3_grids,
    open_grid,
    surface,
    verify_scenario,
)
from .measurement import outcome_probabilities, postselect, sample_shots
from .statecore import Pol, overlap, particle_state, pol_vector, tensor, wave_state

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_PARSE = 2
EXIT_DEGENERATE = 3
EXIT_IO = 4

VERIFY_GRID = (64, 64)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _angle(text: str) -> float:
    try:
        return parse_angle(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


# run


def run_report(circuit, source: str, shots: int | None = None, seed: int | None = None) -> dict:
    res = evaluate(circuit)
    report = {
        "source": source,
        "modes": circuit.d,
        "alpha": circuit.alpha,
        "postselect": None if circuit.postselect is None else circuit.postselect.name,
        "postselect_probability": res.postselect_probability,
        "detectors": [
            {
                "name": det.name,
                "mode": det.mode,
                "pol": det.pol_name,
                "probability": res.probabilities[det.name],
                "joint": res.joint[det.name],
            }
            for det in circuit.detectors
        ],
        "shots": shots,
        "seed": seed,
        "counts": None,
        "detector_counts": None,
    }
    if shots is not None:
        table = outcome_probabilities(res.detected_state)
        counts = sample_shots(table, shots, seed)
        report["counts"] = {str(label): c for label, c in counts.items()}
        report["detector_counts"] = {
            det.name: sum(
                c
                for label, c in counts.items()
                if label.mode == det.mode and (det.pol is None or label.pol is det.pol)
            )
            for det in circuit.detectors
        }
    return report


def _print_run_text(report: dict, out) -> None:
    print(f"bench: {report['source']}", file=out)
    print(f"modes: {report['modes']}  alpha: {_fmt(report['alpha'])}", file=out)
    if report["postselect"] is not None:
        print(
            f"postselect pol={report['postselect']}: probability "
            f"{_fmt(report['postselect_probability'])}",
            file=out,
        )
    for det in report["detectors"]:
        p = det["probability"]
        shown = "undefined (empty branch)" if p is None else _fmt(p)
        print(f"{det['name']} mode={det['mode']} pol={det['pol']}: {shown}", file=out)
    if report["counts"] is not None:
        print(f"shots: {report['shots']}  seed: {report['seed']}", file=out)
        for label, c in report["counts"].items():
            print(f"  |{label}>: {c}", file=out)
        for name, c in report["detector_counts"].items():
            print(f"  {name}: {c}", file=out)


def cmd_run(args) -> int:
    try:
        with open(args.bench, encoding="utf-8-sig") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read {args.bench}: {exc.strerror}", file=sys.stderr)
        return EXIT_IO
    try:
        circuit = parse_bench(text)
    except ParseError as exc:
        print(f"{args.bench}:{exc.line}: {exc.reason}", file=sys.stderr)
        return EXIT_PARSE
    seed = args.seed if args.seed is not None else (0 if args.shots is not None else None)
    try:
        report = run_report(circuit, args.bench, args.shots, seed)
    except DegeneratePostselectionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    if args.format == "json":
        json.dump(report, sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        _print_run_text(report, sys.stdout)
    return EXIT_OK


# sweep / surface


def write_sweep_csv(result, out) -> None:
    out.write("theta,alpha,intensity\n")
    for a, alpha in enumerate(result.alpha_grid):
        for t, theta in enumerate(result.theta_grid):
            out.write(f"{_fmt(theta)},{_fmt(alpha)},{_fmt(result.values[a, t])}\n")


def _grid(lo: float, hi: float, steps: int, open_interval: bool) -> np.ndarray:
    if steps == 1:
        return np.array([lo if not open_interval else 0.5 * (lo + hi)])
    return open_grid(lo, hi, steps) if open_interval else np.linspace(lo, hi, steps)


def cmd_sweep(args) -> int:
    fig3 = args.command == "surface"
    theta = _grid(args.theta_min, args.theta_max, args.theta_steps, fig3)
    alpha = np.linspace(args.alpha_min, args.alpha_max, args.alpha_steps)
    if args.alpha_steps == 1:
        alpha = np.array([args.alpha_min])
    result = surface(args.scenario, theta, alpha, args.detector, Pol[args.postselect])
    if args.out in (None, "-"):
        write_sweep_csv(result, sys.stdout)
        return EXIT_OK
    try:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            write_sweep_csv(result, fh)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc.strerror}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


# verify


def _check(name: str, deviation: float, tol: float) -> dict:
    return {"name": name, "max_deviation": float(deviation), "passed": bool(deviation <= tol)}


def element_checks(tol: float) -> list[dict]:
    """Operator-level checks that back the scenario verification."""
    checks = []
    worst = 0.0
    for d in (2, 3, 4):
        for e in _sample_elements(d):
            U = element_unitary(e, d)
            worst = max(worst, float(np.max(np.abs(U.conj().T @ U - np.eye(2 * d)))))
    checks.append(_check("element_unitarity", worst, tol))

    net = compose(qbs_decomposition(0, 1, 2, 3), 4)
    qbs = element_unitary(QBS(0, 1), 4)
    sub = [0, 1, 2, 3]  # modes 0 and 1 in the flat index convention
    checks.append(_check("qbs_decomposition", np.max(np.abs(net[np.ix_(sub, sub)] - qbs[np.ix_(sub, sub)])), tol))

    h, v = pol_vector(Pol.H), pol_vector(Pol.V)
    dev2 = dev5 = dev6 = 0.0
    for alpha in np.linspace(0, math.pi / 2, 16):
        for theta in np.linspace(0, 2 * math.pi, 16):
            p, w = particle_state(theta), wave_state(theta)
            ca, sa = math.cos(alpha), math.sin(alpha)
            base = evaluate(build_scenario(Scenario(ScenarioId.FIG2_MIXTURE, alpha, theta))).state
            dev2 = max(dev2, abs(1 - overlap(base, ca * tensor(p, v) + sa * tensor(w, h))))
            sup = evaluate(build_scenario(Scenario(ScenarioId.FIG2_SUPERPOSITION, alpha, theta))).state
            eq5 = (tensor(ca * p + sa * w, h) - tensor(ca * p - sa * w, v)) / math.sqrt(2)
            dev5 = max(dev5, abs(1 - overlap(sup, eq5)))
            post, _ = postselect(sup, Pol.H)
            phi = ca * p + sa * w
            phi /= math.sqrt(1 + math.sqrt(2) * sa * ca * math.cos(theta))
            dev6 = max(dev6, abs(1 - overlap(post, tensor(phi, h))))
    checks.append(_check("state_hyperentangled", dev2, tol))
    checks.append(_check("state_after_hwp", dev5, tol))
    checks.append(_check("state_postselected", dev6, tol))
    return checks


def _sample_elements(d: int) -> list[Element]:
    out: list[Element] = []
    for i in range(d):
        out.append(Element(Kind.PHASE, i, theta=0.7))
        out.append(Element(Kind.HWP, i, angle_deg=22.5))
        for j in range(d):
            if i != j:
                out += [Element(k, i, j) for k in (Kind.BS, Kind.PBS, Kind.QBS)]
    return out


def verify_report(tol: float = 1e-10) -> dict:
    theta, alpha = fig3_grids(*VERIFY_GRID)
    scenarios = [verify_scenario(sid, theta, alpha, tol).as_dict() for sid in ScenarioId]
    checks = element_checks(tol)
    passed = all(s["passed"] for s in scenarios) and all(c["passed"] for c in checks)
    return {
        "version": __version__,
        "tol": tol,
        "grid": {"theta_steps": len(theta), "alpha_steps": len(alpha)},
        "scenarios": scenarios,
        "checks": checks,
        "passed": passed,
    }


def cmd_verify(args) -> int:
    report = verify_report(args.tol)
    if args.format == "json":
        json.dump(report, sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        for s in report["scenarios"]:
            mark = "PASS" if s["passed"] else "FAIL"
            print(f"{mark} {s['scenario']:<22} max|dev|={s['max_deviation']:.3e} points={s['points']} skipped={s['skipped']}")
        for c in report["checks"]:
            mark = "PASS" if c["passed"] else "FAIL"
            print(f"{mark} {c['name']:<22} max|dev|={c['max_deviation']:.3e}")
        print(f"overall: {'PASS' if report['passed'] else 'FAIL'} at tol {args.tol:g}")
    return EXIT_OK if report["passed"] else EXIT_VERIFY_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qdchoice", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate a bench file")
    run.add_argument("bench")
    run.add_argument("--shots", type=int)
    run.add_argument("--seed", type=int)
    run.add_argument("--format", choices=("text", "json"), default="text")
    run.set_defaults(func=cmd_run)

    scenarios = [s.value for s in ScenarioId]
    for name, theta_rng, alpha_rng, helptext in (
        ("sweep", (0.0, 2 * math.pi), (0.0, math.pi / 2), "intensity over a theta x alpha grid"),
        ("surface", FIG3_THETA_RANGE, FIG3_ALPHA_RANGE, "sweep with the Fig. 3 grid defaults"),
    ):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("scenario", choices=scenarios)
        sp.add_argument("--theta-min", type=_angle, default=theta_rng[0])
        sp.add_argument("--theta-max", type=_angle, default=theta_rng[1])
        sp.add_argument("--theta-steps", type=int, default=256)
        sp.add_argument("--alpha-min", type=_angle, default=alpha_rng[0])
        sp.add_argument("--alpha-max", type=_angle, default=alpha_rng[1])
        sp.add_argument("--alpha-steps", type=int, default=64)
        sp.add_argument("--detector")
        sp.add_argument("--postselect", choices=("H", "V"), default="H")
        sp.add_argument("--out", help="CSV path, '-' for stdout")
        sp.set_defaults(func=cmd_sweep)

    ver = sub.add_parser("verify", help="check the simulator against the closed forms")
    ver.add_argument("--tol", type=float, default=1e-10)
    ver.add_argument("--format", choices=("text", "json"), default="text")
    ver.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "theta_steps", 1) < 1 or getattr(args, "alpha_steps", 1) < 1:
        parser.error("steps must be >= 1")
    if getattr(args, "shots", None) is not None and args.shots < 0:
        parser.error("--shots must be >= 0")
    if args.command in ("sweep", "surface"):
        try:
            sid = ScenarioId(args.scenario)
            build_scenario(Scenario(sid)).detector(args.detector or DEFAULT_DETECTOR[sid])
        except KeyError:
            parser.error(f"scenario {args.scenario} has no detector {args.detector}")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
