"""Command line interface.

Subcommands: build (validate config, write artifact), verify (run residual
suites against an artifact), orbit (CSV trace), rotnum (rotation number
estimate as JSON), render (SVG pictures).

Exit codes: 0 success, 2 verification found failing checks, 3 error budget
exceeded, 4 invalid configuration/artifact/usage.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .cantor import DEFAULT_EPS
from .circle import CirclePoint, fixed_decimal
from .config import (
    BuildConfig,
    canonical_json,
    load_artifact,
    system_from_artifact,
    write_artifact,
)
from .errors import (
    ConfigInvalid,
    DepthExceeded,
    ErrorBudgetExceeded,
    PrecisionCollision,
    SymdenjoyError,
    UnsupportedRender,
)
from .render import render
from .verify import run_verification

EXIT_OK = 0
EXIT_CHECK_FAILED = 2
EXIT_BUDGET = 3
EXIT_INVALID = 4


def _parse_theta(text: str, system) -> CirclePoint:
    """Angle spec: a number ("0.25", "1/3") or "gap:k,n[:left|mid|right]"."""
    if text.startswith("gap:"):
        rest = text[4:].split(":")
        try:
            k_str, n_str = rest[0].split(",")
            idx = (int(k_str), int(n_str))
        except ValueError as exc:
            raise ConfigInvalid("theta", f"bad gap spec {text!r}") from exc
        where = rest[1] if len(rest) > 1 else "left"
        arc = system.cantor.gap(idx)
        if where == "left":
            return arc.start
        if where == "right":
            return arc.end
        if where == "mid":
            return arc.midpoint()
        raise ConfigInvalid("theta", f"bad gap anchor {where!r}")
    try:
        return CirclePoint.from_value(text, system.cantor.bits)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigInvalid("theta", f"not an angle: {exc}") from exc


def cmd_build(args) -> int:
    if args.config is not None:
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, ValueError) as exc:
            raise ConfigInvalid("config", f"unreadable config file: {exc}") from exc
        config = BuildConfig.from_dict(data)
    else:
        config = BuildConfig()
    overrides = {}
    if args.m is not None:
        overrides["m"] = args.m
    if args.tau is not None:
        overrides["tau"] = args.tau
    if args.depth is not None:
        overrides["depth"] = args.depth
    if args.precision_bits is not None:
        overrides["precision_bits"] = args.precision_bits
    if overrides:
        merged = config.to_dict()
        merged.update(overrides)
        config = BuildConfig.from_dict(merged)
    artifact = write_artifact(args.out, config, args.eps)
    print(f"wrote {args.out} (config hash {artifact['config_hash'][:16]})")
    return EXIT_OK


def cmd_verify(args) -> int:
    artifact = load_artifact(args.artifact)
    config, system = system_from_artifact(artifact, args.eps)
    suites = args.suite.split(",") if args.suite else None
    try:
        report = run_verification(
            system,
            config,
            suites=suites,
            eps=args.eps,
            samples=args.samples,
            seed=args.seed,
            timings=args.timings,
        )
    except ValueError as exc:
        raise ConfigInvalid("suite", str(exc)) from exc
    payload = report.to_json()
    if args.out:
        Path(args.out).write_bytes(payload)
    else:
        sys.stdout.write(payload.decode("ascii"))
    for check in report.failed_checks():
        print(
            f"FAIL {check.name}: residual {check.residual!r} > bound {check.bound!r}",
            file=sys.stderr,
        )
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def cmd_orbit(args) -> int:
    artifact = load_artifact(args.artifact)
    _, system = system_from_artifact(artifact, args.eps)
    if args.steps < 1:
        raise ConfigInvalid("steps", "need at least one step")
    theta = _parse_theta(args.theta, system)
    out = Path(args.out)
    # The trace is computed fully before the file is written, so a budget
    # failure never leaves a partial CSV behind.
    trace = system.denjoy.orbit(theta, args.steps, args.eps, args.budget)
    rhos = None
    if args.rho is not None:
        from .planar import PlanarPoint

        start = PlanarPoint.from_values(theta.as_fraction(), args.rho, system.cantor.bits)
        planar = system.planar.planar_orbit(start, args.steps, args.eps, args.budget)
        # The angular components coincide step for step with the circle trace.
        rhos = [Fraction(p.rho_ticks, 1 << p.bits) for p in planar.points]
    slope = max(trace.max_slope, 2.0 if rhos is not None else trace.max_slope)
    rows = []
    for j, p in enumerate(trace.points):
        row = [str(j), fixed_decimal(p.as_fraction(), 40)]
        if rhos is not None:
            row.append(fixed_decimal(rhos[j], 40))
        row.append(trace.lift_values[j].decimal(40))
        row.append(f"{j * args.eps * slope:.6e}")
        rows.append(row)
    header = ["step", "theta"]
    if rhos is not None:
        header.append("rho")
    header.extend(["lift", "error_bound"])
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    out.write_text("\n".join(lines) + "\n", encoding="ascii")
    print(f"wrote {args.out} ({len(rows)} rows)")
    return EXIT_OK


def cmd_rotnum(args) -> int:
    artifact = load_artifact(args.artifact)
    _, system = system_from_artifact(artifact, args.eps)
    if args.iters < 1:
        raise ConfigInvalid("iters", "need at least one iteration")
    theta = _parse_theta(args.theta, system)
    est = system.denjoy.rotation_number(theta, args.iters, args.eps, args.budget)
    doc = {
        "estimate": est.decimal(40),
        "bound": repr(est.bound),
        "iterations": args.iters,
        "theta": theta.decimal(),
    }
    sys.stdout.write(canonical_json(doc).decode("ascii"))
    return EXIT_OK


def cmd_render(args) -> int:
    artifact = load_artifact(args.artifact)
    _, system = system_from_artifact(artifact, args.eps)
    params = {"eps": args.eps}
    if args.what == "stages":
        params["depth"] = args.depth
    elif args.what == "cantor-function":
        params["max_level"] = args.depth
    elif args.what == "planar-orbit":
        params.update(
            theta=_parse_theta(args.theta, system), rho=args.rho, steps=args.steps
        )
    svg = render(system, args.what, **params)
    Path(args.out).write_text(svg, encoding="ascii")
    print(f"wrote {args.out}")
    return EXIT_OK


def _add_eps(p: argparse.ArgumentParser) -> None:
    p.add_argument("--eps", type=float, default=DEFAULT_EPS, help="evaluation tolerance")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symdenjoy",
        description="Symmetric Denjoy circle maps with verified invariants",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="validate a config and write an artifact")
    p.add_argument("--config", help="JSON config file (defaults used if omitted)")
    p.add_argument("--out", default="artifact.json")
    p.add_argument("--m", type=int, help="override symmetry order")
    p.add_argument("--tau", help="override rotation number")
    p.add_argument("--depth", type=int, help="override stage depth")
    p.add_argument("--precision-bits", type=int, dest="precision_bits")
    _add_eps(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="run residual checks against an artifact")
    p.add_argument("artifact")
    p.add_argument("--suite", help="comma-separated subset: cantor,denjoy,planar")
    p.add_argument("--samples", type=int, default=400)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings")
    _add_eps(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("orbit", help="write an orbit trace as CSV")
    p.add_argument("artifact")
    p.add_argument("--theta", required=True, help='angle or "gap:k,n[:left|mid|right]"')
    p.add_argument("--rho", help="starting radius: planar orbit if given")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--budget", type=float, help="error budget cap")
    _add_eps(p)
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("rotnum", help="estimate the rotation number")
    p.add_argument("artifact")
    p.add_argument("--theta", default="0")
    p.add_argument("--iters", type=int, default=10000)
    p.add_argument("--budget", type=float, help="error budget cap")
    _add_eps(p)
    p.set_defaults(func=cmd_rotnum)

    p = sub.add_parser("render", help="draw the construction as SVG")
    p.add_argument("artifact")
    p.add_argument("--what", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--theta", default="gap:0,0:mid")
    p.add_argument("--rho", default="1.5")
    p.add_argument("--steps", type=int, default=60)
    _add_eps(p)
    p.set_defaults(func=cmd_render)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ErrorBudgetExceeded as exc:
        print(f"error budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ConfigInvalid, PrecisionCollision, DepthExceeded, UnsupportedRender) as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except SymdenjoyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
