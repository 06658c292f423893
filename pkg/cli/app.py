"""Command-line driver: analyze, sweep, theta-sweep, ellipsoid, convert, selftest, schema"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from config.settings import settings
from core.errors import SpecParseError, SymSteerError
from core.pipeline import pipeline
from core.report import AnalysisReport
from utils.exporters import exporter

logger = logging.getLogger("symsteer")

EXIT_OK = 0


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON instead of CSV or text")
    common.add_argument("--out", type=Path, default=None, help="write output to PATH")
    common.add_argument("--tolerance", type=float, default=None,
                        help=f"validation tolerance override (default {settings.validation_tol:g})")
    common.add_argument("--verbose", "-v", action="count", default=0, help="more logging on stderr")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="symsteer",
        description="Majorana, entanglement and steering-ellipsoid analysis of symmetric multiqubit states",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    analyze = commands.add_parser("analyze", parents=[common], help="full JSON report for one state")
    analyze.add_argument("spec", help="state spec, e.g. wwbar:3, ghz-gen:4:pi/3, roots:[0,1,inf]")

    sweep = commands.add_parser("sweep", parents=[common], help="volume monogamy over a range of N")
    sweep.add_argument("family", choices=["ghz", "w", "wbar", "wwbar"])
    sweep.add_argument("n_min", type=int)
    sweep.add_argument("n_max", type=int)

    theta = commands.add_parser("theta-sweep", parents=[common], help="generalized family along theta")
    theta.add_argument("family", choices=["ghz-gen", "wwbar-gen"])
    theta.add_argument("n", type=int)
    theta.add_argument("--steps", type=int, default=33)

    ellipsoid = commands.add_parser("ellipsoid", parents=[common], help="surface mesh of the canonical ellipsoid")
    ellipsoid.add_argument("spec")

    convert = commands.add_parser("convert", parents=[common], help="identical local operation between 3-qubit states")
    convert.add_argument("spec_a")
    convert.add_argument("spec_b")

    commands.add_parser("selftest", parents=[common], help="recompute the golden values")
    commands.add_parser("schema", parents=[common], help="JSON schema of the analyze report")
    return parser


def _configure_logging(verbose: int) -> None:
    level = settings.log_level.upper()
    if verbose == 1:
        level = "INFO"
    elif verbose > 1:
        level = "DEBUG"
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def _cmd_analyze(args) -> int:
    exporter.emit(exporter.json_text(pipeline.analyze(args.spec)), args.out)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    rows = pipeline.sweep(args.family, args.n_min, args.n_max)
    if args.json:
        text = exporter.rows_json(rows)
    else:
        text = exporter.csv_text(exporter.frame(rows))
    exporter.emit(text, args.out)
    return EXIT_OK


def _cmd_theta_sweep(args) -> int:
    rows = pipeline.theta_sweep(args.family, args.n, args.steps)
    if args.json:
        text = exporter.rows_json(rows)
    else:
        text = exporter.csv_text(exporter.frame(rows))
    exporter.emit(text, args.out)
    return EXIT_OK


def _cmd_ellipsoid(args) -> int:
    if args.out is None:
        raise SpecParseError("ellipsoid needs --out PATH for the mesh")
    rows, sidecar = pipeline.ellipsoid_mesh(args.spec)
    paths = exporter.write_mesh(rows, sidecar, args.out)
    if args.json:
        print(exporter.json_text(sidecar))
    else:
        print("wrote " + ", ".join(str(p) for p in paths))
    return EXIT_OK


def _cmd_convert(args) -> int:
    exporter.emit(exporter.json_text(pipeline.convert(args.spec_a, args.spec_b)), args.out)
    return EXIT_OK


def _cmd_selftest(args) -> int:
    from utils.golden import golden_suite

    report = golden_suite.run(args.tolerance)
    if args.json:
        text = exporter.json_text(report)
    else:
        lines = [
            f"{'PASS' if c.passed else 'FAIL'}  {c.name:<40} expected {c.expected:.12g}  got {c.computed:.12g}"
            for c in report.checks
        ]
        lines.append(f"{report.passed} passed, {report.failed} failed")
        text = "\n".join(lines)
    exporter.emit(text, args.out)
    return EXIT_OK if report.ok else 3


def _cmd_schema(args) -> int:
    exporter.emit(json.dumps(AnalysisReport.model_json_schema(), indent=2), args.out)
    return EXIT_OK


COMMANDS = {
    "analyze": _cmd_analyze,
    "sweep": _cmd_sweep,
    "theta-sweep": _cmd_theta_sweep,
    "ellipsoid": _cmd_ellipsoid,
    "convert": _cmd_convert,
    "selftest": _cmd_selftest,
    "schema": _cmd_schema,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point; returns the process exit code"""
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    if args.tolerance is not None:
        if args.tolerance <= 0:
            print("error: --tolerance must be positive", file=sys.stderr)
            return SpecParseError.exit_code
        settings.validation_tol = args.tolerance

    try:
        return COMMANDS[args.command](args)
    except SymSteerError as exc:
        logger.debug("command failed", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
