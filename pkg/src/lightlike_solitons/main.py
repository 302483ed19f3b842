#!/usr/bin/env python
"""
Main entry point for lightlike_solitons.

This file provides the command-line interface. Subcommands:
- eval: evaluate u (or the sweep), H, K, W and the soliton residual on a grid
- verify: run the invariant suites for one family or for "all"
- geodesic: integrate a geodesic of a family's induced metric
- mesh: export the surface over a grid as an OBJ (or vertex CSV) mesh
- table: compute the causal-character / completeness table

Families are JSON descriptors, inline or as @file:
    lightlike_solitons eval --family '{"kind": "type_i", "params": {"lambda": 1}}' --grid "-1:1:3,-1:1:3"

Exit codes: 0 success, 1 failed verification, 2 invalid input.
"""

import argparse
import logging
import sys
from typing import List, Optional, TextIO

from lightlike_solitons import __version__
from lightlike_solitons.completeness import build_table, render_table, sample_z
from lightlike_solitons.descriptors import Family, describe, load_family
from lightlike_solitons.errors import DescriptorError, InvalidParamError, SolitonError
from lightlike_solitons.exporters import write_csv, write_json, write_obj, write_text
from lightlike_solitons.families import GraphSolitonFamily
from lightlike_solitons.geodesics import InducedMetric, integrate_geodesic
from lightlike_solitons.grid import GridSpec, build_mesh, default_grid, evaluate_family_grid, parse_grid
from lightlike_solitons.parabolic import sweep_surface
from lightlike_solitons.settings import Settings, get_settings
from lightlike_solitons.tools.descriptor_reader import read_descriptor_text
from lightlike_solitons.verification import VerificationWorkflow

logger = logging.getLogger("lightlike_solitons")

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INVALID_INPUT = 2

LOG_FORMAT = "[%(levelname)s] %(name)s: %(message)s"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output path (default: standard output)")
    common.add_argument("--seed", type=int, help="seed of random samples (default from settings)")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="log at DEBUG level")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="log errors only")

    family = argparse.ArgumentParser(add_help=False)
    family.add_argument("--family", required=True, help="family descriptor as JSON or @file")

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--grid", help='"pmin:pmax:np,qmin:qmax:nq" (default: family sample box, 5x5)')
    grid.add_argument(
        "--margin", type=float, default=0.0,
        help="boundary exclusion distance; the family's own margin (tolerances.domain_margin) is a floor",
    )

    parser = argparse.ArgumentParser(
        prog="lightlike_solitons",
        description="Translating solitons on a light-like direction of Minkowski 3-space.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common, family, grid], help="evaluate geometry on a grid")
    p.add_argument("--tol", type=float, help="degeneracy tolerance on |EG - F^2| (default: tolerances.degeneracy)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")

    p = sub.add_parser("verify", parents=[common], help="run the verification suite")
    p.add_argument("--tol", type=float, help="override of the PDE and profile ODE residual tolerances")
    p.add_argument("--family", default="all", help='family descriptor, or "all" (default)')
    p.add_argument("--format", choices=["json"], default="json")

    p = sub.add_parser("geodesic", parents=[common, family], help="integrate a geodesic")
    p.add_argument("--tol", type=float, help="integrator rtol and atol (default from settings)")
    p.add_argument("--initial", help='initial state "p,q,dp,dq" (default: y0, a domain point, 0, 1)')
    p.add_argument("--horizon", type=float, help="final parameter (default from settings)")
    p.add_argument("--format", choices=["json"], default="json")

    p = sub.add_parser("mesh", parents=[common, family, grid], help="export a triangle mesh")
    p.add_argument("--format", choices=["obj", "csv"], default="obj")

    p = sub.add_parser("table", parents=[common], help="causal character and completeness table")
    p.add_argument("--format", choices=["text", "json"], default="text")
    return parser


def configure_logging(args: argparse.Namespace, settings: Settings):
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.ERROR
    else:
        level = getattr(logging, settings.log_level.upper(), logging.WARNING)
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def _settings_for(args: argparse.Namespace) -> Settings:
    settings = get_settings()
    if args.seed is None:
        return settings
    return settings.model_copy(update={"probe": settings.probe.model_copy(update={"seed": args.seed})})


def _family(args: argparse.Namespace, settings: Settings) -> Family:
    return load_family(read_descriptor_text(args.family), settings)


def _grid(args: argparse.Namespace, family: Family) -> GridSpec:
    if args.grid:
        return parse_grid(args.grid, margin=args.margin)
    return default_grid(family, margin=args.margin)


def _parse_state(text: str) -> List[float]:
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError as e:
        raise DescriptorError(f"initial state must be four numbers 'p,q,dp,dq', got {text!r}") from e
    if len(values) != 4:
        raise DescriptorError(f"initial state must be four numbers 'p,q,dp,dq', got {text!r}")
    return values


# ===== commands =====


def cmd_eval(args: argparse.Namespace, settings: Settings, stdout: TextIO) -> int:
    family = _family(args, settings)
    tol = settings.tolerances.degeneracy if args.tol is None else args.tol
    if tol < 0:
        raise InvalidParamError(f"--tol must be >= 0, got {tol}")
    frame = evaluate_family_grid(family, _grid(args, family), tol)
    if args.format == "json":
        records = frame.astype(object).where(frame.notna(), None).to_dict(orient="records")
        write_json(records, args.out, stdout)
    else:
        write_csv(frame, args.out, stdout)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, settings: Settings, stdout: TextIO) -> int:
    if args.tol is not None and not args.tol > 0:
        raise InvalidParamError(f"--tol must be > 0, got {args.tol}")
    target = "all" if args.family.strip().lower() == "all" else _family(args, settings)
    report = VerificationWorkflow(settings, residual_tol=args.tol).run(target)
    write_json(report, args.out, stdout)
    if not report.passed:
        for name in report.failed_checks:
            print(f"[!] verification failed: {name}", file=sys.stderr)
        return EXIT_VERIFY_FAILED
    return EXIT_OK


def cmd_geodesic(args: argparse.Namespace, settings: Settings, stdout: TextIO) -> int:
    family = _family(args, settings)
    integrator = settings.integrator
    if args.tol is not None:
        if not args.tol > 0:
            raise InvalidParamError(f"--tol must be > 0, got {args.tol}")
        integrator = integrator.model_copy(update={"rtol": args.tol, "atol": args.tol})

    if isinstance(family, GraphSolitonFamily):
        metric = InducedMetric.from_graph_family(family, settings.tolerances.degeneracy)
        default_start = [settings.probe.y0, sample_z(family), 0.0, 1.0]
    else:
        metric = InducedMetric.from_patch(sweep_surface(family).patch(), tol=settings.tolerances.degeneracy)
        default_start = [0.5 * (family.s_min + family.s_max), 0.0, 0.0, 1.0]
    initial = _parse_state(args.initial) if args.initial else default_start
    horizon = args.horizon if args.horizon is not None else settings.probe.horizon

    traj = integrate_geodesic(metric, initial, horizon, integrator)
    if args.out:
        write_csv(traj.to_frame(), args.out)
    write_json({"family": describe(family).model_dump(mode="json"), **traj.summary()}, None, stdout)
    return EXIT_OK


def cmd_mesh(args: argparse.Namespace, settings: Settings, stdout: TextIO) -> int:
    family = _family(args, settings)
    mesh = build_mesh(family, _grid(args, family))
    if args.format == "csv":
        write_csv(mesh.to_frame(), args.out, stdout)
    else:
        write_obj(mesh, args.out, stdout)
    return EXIT_OK


def cmd_table(args: argparse.Namespace, settings: Settings, stdout: TextIO) -> int:
    rows = build_table(settings)
    if args.format == "json":
        write_json(rows, args.out, stdout)
    else:
        write_text(render_table(rows) + "\n", args.out, stdout)
    return EXIT_OK


COMMANDS = {
    "eval": cmd_eval,
    "verify": cmd_verify,
    "geodesic": cmd_geodesic,
    "mesh": cmd_mesh,
    "table": cmd_table,
}


def run(argv: Optional[List[str]] = None, stdout: Optional[TextIO] = None) -> int:
    """
    Parse ``argv`` and execute one subcommand.

    Returns:
        Exit status (0 success, 1 failed verification, 2 invalid input)
    """
    args = build_parser().parse_args(argv)
    stdout = stdout or sys.stdout
    try:
        settings = _settings_for(args)
        configure_logging(args, settings)
        logger.debug("lightlike_solitons %s: %s", __version__, args.command)
        return COMMANDS[args.command](args, settings, stdout)
    except SolitonError as e:
        print(f"[!] {e}", file=sys.stderr)
        return EXIT_INVALID_INPUT


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
