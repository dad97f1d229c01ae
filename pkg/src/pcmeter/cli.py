"""pcmeter command line interface.

Exit codes: 0 success, 1 evaluation or document error, 2 usage error.
"""

import argparse
from collections.abc import Sequence
from importlib.metadata import PackageNotFoundError, version
import logging
import os
from pathlib import Path
import sys

from pcmeter.errors import ComplianceError
from pcmeter.evaluator import ComplianceEvaluator
from pcmeter.io import dump_log, emit_report, load_log, load_spec, read_spec
from pcmeter.payment import generate_log, random_scenarios
from pcmeter.types import MetricValue
from pcmeter.utils.converters import explain_trace
from pcmeter.utils.utils import default_jobs, format_number
from pcmeter.validation import validate_spec

logger = logging.getLogger(__name__)

JOBS_ENV_VAR = "PCMETER_JOBS"


class UsageError(Exception):
    pass


def _positive_int(value: str) -> int:
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got '{value}'")
    if number < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {number}")
    return number


def _package_version() -> str:
    try:
        return version("pcmeter")
    except PackageNotFoundError:  # pragma: no cover
        return "unknown"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pcmeter",
        description="Measure partial compliance of business process execution logs.",
    )
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="increase log verbosity (-v info, -vv debug)",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {_package_version()}")
    commands = parser.add_subparsers(dest="command", required=True)

    validate = commands.add_parser("validate-spec", help="check a compliance spec")
    validate.add_argument("--spec", required=True, type=Path)
    validate.set_defaults(handler=_cmd_validate_spec)

    evaluate = commands.add_parser("evaluate", help="evaluate a process log")
    evaluate.add_argument("--spec", required=True, type=Path)
    evaluate.add_argument("--log", required=True, type=Path)
    evaluate.add_argument("--format", choices=("jsonl", "csv"))
    evaluate.add_argument("--out", required=True, type=Path)
    evaluate.add_argument("--report", choices=("json", "csv"))
    evaluate.add_argument(
        "--jobs",
        type=_positive_int,
        help=f"concurrent trace workers (default: ${JOBS_ENV_VAR} or the CPU count)",
    )
    evaluate.set_defaults(handler=_cmd_evaluate)

    explain = commands.add_parser("explain", help="explain the evaluation of one trace")
    explain.add_argument("--spec", required=True, type=Path)
    explain.add_argument("--log", required=True, type=Path)
    explain.add_argument("--format", choices=("jsonl", "csv"))
    explain.add_argument("--trace", required=True)
    explain.set_defaults(handler=_cmd_explain)

    simulate = commands.add_parser("simulate", help="generate a synthetic payment log")
    simulate.add_argument("--count", required=True, type=_positive_int)
    simulate.add_argument("--seed", type=int, default=0)
    simulate.add_argument("--out", required=True, type=Path)
    simulate.add_argument("--format", choices=("jsonl", "csv"))
    simulate.set_defaults(handler=_cmd_simulate)

    return parser


def _resolve_jobs(jobs: int | None) -> int:
    """Worker count: --jobs flag, then PCMETER_JOBS, then the CPU count."""
    if jobs is not None:
        return jobs
    if (env_value := os.environ.get(JOBS_ENV_VAR)) is None:
        return default_jobs()
    try:
        return _positive_int(env_value)
    except argparse.ArgumentTypeError as exc:
        raise UsageError(f"{JOBS_ENV_VAR}: {exc}") from exc


def _format_metric(value: MetricValue) -> str:
    return "null" if value is None else str(format_number(value))


def _cmd_validate_spec(args: argparse.Namespace) -> int:
    findings = validate_spec(read_spec(args.spec))
    for finding in findings:
        print(f"{finding.severity} {finding.code} {finding.path}: {finding.message}")

    errors = sum(finding.severity == "error" for finding in findings)
    warnings = len(findings) - errors
    print(f"{errors} errors, {warnings} warnings")
    return 1 if errors else 0


def _cmd_evaluate(args: argparse.Namespace) -> int:
    jobs = _resolve_jobs(args.jobs)
    spec = load_spec(args.spec)
    log = load_log(args.log, args.format)

    result = ComplianceEvaluator(spec, jobs=jobs).evaluate(log)
    emit_report(result, args.out, args.report)

    print(
        f"P-Measure: {_format_metric(result.p_measure)} "
        f"over {len(result.trace_results)} traces"
    )
    return 0


def _cmd_explain(args: argparse.Namespace) -> int:
    spec = load_spec(args.spec)
    trace = load_log(args.log, args.format).trace(args.trace)

    result = ComplianceEvaluator(spec, jobs=1).evaluate(trace)
    sys.stdout.write(explain_trace(result))
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    log = generate_log(random_scenarios(args.count, seed=args.seed))
    size = dump_log(log, args.out, args.format)
    print(f"Wrote {len(log.traces)} traces ({size} bytes) to {args.out}")
    return 0


def _configure_logging(verbosity: int) -> None:
    level = (logging.WARNING, logging.INFO, logging.DEBUG)[min(verbosity, 2)]
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2

    _configure_logging(args.verbose)

    try:
        return args.handler(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"pcmeter: error: {exc}", file=sys.stderr)
        return 2
    except ComplianceError as exc:
        print(f"pcmeter: {exc}", file=sys.stderr)
        for note in getattr(exc, "__notes__", ()):
            print(f"  {note}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
