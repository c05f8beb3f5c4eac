import argparse
import json
import sys
import traceback
from typing import Optional

# ------------------------------
# Local modules
# ------------------------------
from app.config import settings
from app.frontend.report import BatchReport, render_batch, render_summary
from app.frontend.runner import run
from app.frontend.scenario import load_scenario
from app.utils.error_handler import FermatError, ScenarioError
from app.utils.logger import get_logger, setup_logging
from app.utils.metrics import get_metrics_data
from app.utils.validation import ParameterValidator, validate_scenario

logger = get_logger("main")

EXIT_OK = 0
EXIT_USAGE = 1


class CliArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with 1 like every other rejected input"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ------------------------------
# Argument parsing
# ------------------------------
def _add_run_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--seed", type=int, default=None, help="seed of the numeric sampling oracle")
    parser.add_argument("--tol", type=float, default=None, help="zero and constraint-check tolerance")
    parser.add_argument("--points", type=int, default=None, help="number of numeric sample points")
    parser.add_argument("--json", action="store_true", help="emit the JSON report instead of the summary")


def build_parser() -> argparse.ArgumentParser:
    parser = CliArgumentParser(
        prog="fermat-trinomial",
        description="Construct and verify entire-solution families of quadratic trinomial functional systems.",
    )
    parser.add_argument("--verbose", action="store_true", help="log run progress and totals to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=CliArgumentParser)

    verify = sub.add_parser("verify", help="verify an explicit (f, g) pair from a scenario file")
    verify.add_argument("scenario", help="path of a verify-mode scenario")
    _add_run_flags(verify)

    construct = sub.add_parser("construct", help="construct a family from its parameters and verify it")
    construct.add_argument("scenario", help="path of a construct-mode scenario")
    _add_run_flags(construct)

    audit = sub.add_parser("audit", help="audit a worked example against its printed closed form")
    audit.add_argument("example", choices=ParameterValidator.VALID_EXAMPLES + list(ParameterValidator.EXAMPLE_IDS) + ["all"],
                       help="example name, its number (3.1 ... 3.5) or all")
    _add_run_flags(audit)

    sample = sub.add_parser("sample", help="sample constraint-consistent specs and verify them")
    sample.add_argument("--case", choices=ParameterValidator.VALID_CASES, default=None)
    sample.add_argument("--subcase", choices=ParameterValidator.VALID_SUBCASES, default=None)
    sample.add_argument("--count", type=int, default=1)
    _add_run_flags(sample)
    return parser


# ------------------------------
# Commands
# ------------------------------
def _scenario_for(args: argparse.Namespace):
    if args.command in ("verify", "construct"):
        scenario = load_scenario(args.scenario)
        if scenario.mode != args.command:
            raise ScenarioError(f"scenario is in {scenario.mode} mode, not {args.command}", mode=scenario.mode)
        return scenario
    if args.command == "sample":
        params = {"case": args.case, "subcase": args.subcase, "count": args.count, "seed": args.seed}
    else:
        params = {"example": args.example}
    try:
        return validate_scenario({"mode": args.command, "params": params})
    except ValueError as e:
        raise ScenarioError(f"invalid {args.command} request: {e}") from e


def _emit(reports, as_json: bool):
    if as_json:
        if len(reports) == 1:
            print(reports[0].model_dump_json(indent=2))
        else:
            print(json.dumps([r.model_dump(mode="json") for r in reports], indent=2))
        return
    for report in reports:
        print(render_batch(report) if isinstance(report, BatchReport) else render_summary(report))


def _run_command(args: argparse.Namespace) -> int:
    if args.command == "audit" and args.example == "all":
        examples = ParameterValidator.VALID_EXAMPLES
        reports = []
        for example in examples:
            scenario = validate_scenario({"mode": "audit", "params": {"example": example}})
            reports.append(run(scenario, seed=args.seed, points=args.points, tol=args.tol))
    else:
        scenario = _scenario_for(args)
        reports = [run(scenario, seed=args.seed, points=args.points, tol=args.tol)]

    _emit(reports, args.json)
    if args.command == "audit":
        return EXIT_OK
    return reports[0].exit_code


def handle_error(error: Exception, verbose: bool) -> int:
    """Report a failure on stderr; every labelled failure maps to exit code 1"""
    if isinstance(error, FermatError):
        logger.error("run_failed", error=error.label, message=error.message)
        print(json.dumps(error.to_dict()), file=sys.stderr)
    else:
        logger.error("unexpected_failure", error=str(error))
        print(json.dumps({"error": "internal_error", "message": str(error)}), file=sys.stderr)
        if verbose:
            print(traceback.format_exc(), file=sys.stderr)
    return EXIT_USAGE


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.verbose:
        setup_logging("INFO")
        if not settings.validate_settings():
            logger.warning("settings_invalid", **settings.get_settings_info())
    try:
        code = _run_command(args)
    except Exception as e:
        return handle_error(e, args.verbose)
    if args.verbose:
        logger.info("run_totals", totals=get_metrics_data().replace("\n", " "))
    return code


if __name__ == "__main__":
    sys.exit(main())
