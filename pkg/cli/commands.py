"""
Logic:
- Command-line front end with subcommands layout, timing, errors, evaluate, sweep, frontier, validate
- Shared flags: --config, --set, --format, --out, --workers, --seed, -v
- Scenario defaults come from the config file (or SDQC_COST_CONFIG); grid flags override them
- Data goes to stdout or --out, diagnostics to stderr
- Exit codes: 0 success, 1 usage or model error, 2 failing gating validation case
"""

import argparse
import logging
import sys

from cli.output import FORMATS, emit, emit_frame, render_document, rows_frame
from cli.validation import cases_frame, validate
from engine.apps import SWEEP_COLUMNS, evaluate, frontier_frame, load_application, result_row, sweep
from engine.config import SUPPORTED_DISTANCES, ArchitectureKind, load_config, resolve_config_path
from engine.errors import budget_frame, logical_error_frame
from engine.exceptions import UsageError
from engine.layout import mapping_frame
from engine.schedule import photonic_cdf_frame, timing_frame
from utils.helpers import parse_grid

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
ALL_KINDS = [ArchitectureKind.SDQC, ArchitectureKind.QCCD, ArchitectureKind.PHOTONIC]


class CommandParser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting, so run_cli owns the exit code."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _kinds(text):
    if text is None:
        return None
    if text.strip().lower() == "all":
        return list(ALL_KINDS)
    return [ArchitectureKind.parse(part) for part in text.split(",") if part.strip()]


def _common_options():
    common = CommandParser(add_help=False)
    group = common.add_argument_group("General options")
    group.add_argument("--config", help="JSON config file (default: $SDQC_COST_CONFIG, else built-in defaults)")
    group.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                       help="dotted config override, e.g. errors.p_tq=3e-5 (repeatable)")
    group.add_argument("--format", choices=FORMATS, default="csv", help="output format")
    group.add_argument("--out", help="write output to this file instead of stdout")
    group.add_argument("--workers", type=int, default=1, help="worker threads for sweeps and Monte Carlo")
    group.add_argument("--seed", type=int, default=42, help="Monte Carlo seed")
    group.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug")
    return common


def _scenario_options(parser, grid=False):
    group = parser.add_argument_group("Scenario options")
    group.add_argument("--arch", help="sdqc, qccd, photonic, a comma list, or all")
    group.add_argument("-d", "--distance", dest="distance",
                       help="code distance" + (" grid, e.g. 3,5,7" if grid else ""))
    group.add_argument("--lambda", dest="lam", help="improvement factor" + (" grid, e.g. log:0.1:1000:25" if grid else ""))
    group.add_argument("--lambda-se", dest="lambda_se", type=float, help="syndrome-extraction improvement factor (default: lambda)")
    group.add_argument("--purify", action="store_true", help="enable entanglement purification (SDQC)")
    return group


def build_parser():
    common = _common_options()
    parser = CommandParser(
        prog="sdqc-cost",
        description="Cost model for shuttling-based distributed trapped-ion architectures vs QCCD and Photonic DQC",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    layout = commands.add_parser("layout", parents=[common], help="qubit mapping on ion chains")
    layout.add_argument("-d", "--distance", dest="distance", help="code distance grid (default: all tabulated)")

    timing = commands.add_parser("timing", parents=[common], help="remote gate and logical clock latency curves")
    _scenario_options(timing)
    timing.add_argument("--n-logical", dest="n_logical", default="log:2:10000:30", help="logical qubit grid")
    timing.add_argument("--curve", choices=("latency", "photonic-cdf"), default="latency")
    timing.add_argument("--t-max", dest="t_max", type=float, default=20000.0, help="photonic-cdf horizon in microseconds")
    timing.add_argument("--points", type=int, default=101, help="photonic-cdf sample count")

    errors = commands.add_parser("errors", parents=[common], help="error budget and logical error curves")
    _scenario_options(errors, grid=True)
    errors.add_argument("--x", dest="x_axis", choices=("p_trans", "n_logical"), default="p_trans")
    errors.add_argument("--p-grid", dest="p_grid", default="log:1e-5:0.3:50", help="transversal error grid")
    errors.add_argument("--n-logical", dest="n_logical", default="log:2:10000:30", help="logical qubit grid")

    evaluate_cmd = commands.add_parser("evaluate", parents=[common], help="evaluate one application scenario")
    _scenario_options(evaluate_cmd)
    evaluate_cmd.add_argument("--app", required=True, help="fermi or ecdlp")
    evaluate_cmd.add_argument("--n-spare", dest="n_spare", type=int, help="fixed SDQC spare pairs (default: sized)")

    sweep_cmd = commands.add_parser("sweep", parents=[common], help="sweep code distance and improvement factor")
    _scenario_options(sweep_cmd, grid=True)
    sweep_cmd.add_argument("--app", required=True, help="fermi or ecdlp")

    frontier = commands.add_parser("frontier", parents=[common], help="smallest lambda reaching a success target")
    _scenario_options(frontier, grid=True)
    frontier.add_argument("--app", required=True, help="fermi or ecdlp")
    frontier.add_argument("--target", type=float, default=0.90, help="success-rate target")

    validate_cmd = commands.add_parser("validate", parents=[common], help="run the acceptance suite")
    validate_cmd.add_argument("--mc-trials", dest="mc_trials", type=int, default=10**7, help="Monte Carlo trials")
    return parser


def configure_logging(verbosity):
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s", force=True)


def _load_scenarios(args):
    overrides = list(args.overrides)
    if getattr(args, "purify", False):
        overrides.append("architecture.purification_enabled=true")
    return load_config(resolve_config_path(args.config), overrides)


def _unique(values):
    return list(dict.fromkeys(values))


def _grid_or(text, fallback, cast=float):
    return parse_grid(text, cast) if text else fallback


def _base_and_grids(args):
    scenarios = _load_scenarios(args)
    base = scenarios[0]
    kinds = _kinds(getattr(args, "arch", None)) or _unique(s.kind for s in scenarios)
    distances = _grid_or(getattr(args, "distance", None), _unique(s.code_distance for s in scenarios), int)
    lambdas = _grid_or(getattr(args, "lam", None), _unique(s.improvements.lam for s in scenarios))
    return base, kinds, distances, lambdas


def cmd_layout(args):
    distances = parse_grid(args.distance, int) if args.distance else list(SUPPORTED_DISTANCES)
    emit_frame(mapping_frame(distances), args.format, args.out)
    return EXIT_OK


def cmd_timing(args):
    if args.curve == "photonic-cdf":
        step = args.t_max / max(args.points - 1, 1)
        emit_frame(photonic_cdf_frame([i * step for i in range(args.points)]), args.format, args.out)
        return EXIT_OK
    base, kinds, distances, _ = _base_and_grids(args)
    base = base.with_updates(code_distance=distances[0])
    n_logical = parse_grid(args.n_logical, int)
    emit_frame(timing_frame(base, kinds, n_logical), args.format, args.out)
    return EXIT_OK


def cmd_errors(args):
    base, kinds, distances, lambdas = _base_and_grids(args)
    if args.x_axis == "p_trans":
        lambda_se = [args.lambda_se] if args.lambda_se else lambdas
        frame = logical_error_frame(kinds, distances, parse_grid(args.p_grid), lambda_se)
    else:
        base = base.with_updates(code_distance=distances[0]).with_lambda(lambdas[0], args.lambda_se)
        frame = budget_frame(base, kinds, parse_grid(args.n_logical, int))
    emit_frame(frame, args.format, args.out)
    return EXIT_OK


def cmd_evaluate(args):
    base, kinds, distances, lambdas = _base_and_grids(args)
    app = load_application(args.app)
    results = []
    for kind in kinds:
        scenario = base.with_architecture(kind, code_distance=distances[0]).with_lambda(lambdas[0], args.lambda_se)
        results.append(evaluate(app, scenario, args.n_spare))
    if args.format == "json":
        documents = [result.model_dump(mode="json", by_alias=True) for result in results]
        emit(render_document(documents[0] if len(documents) == 1 else documents), args.out)
    else:
        rows = [dict(result_row(result), error="") for result in results]
        emit_frame(rows_frame(rows, SWEEP_COLUMNS), args.format, args.out)
    return EXIT_OK


def cmd_sweep(args):
    base, kinds, distances, lambdas = _base_and_grids(args)
    app = load_application(args.app)
    frame = sweep(app, kinds, distances, lambdas, base=base, lambda_se=args.lambda_se, workers=args.workers)
    emit_frame(frame, args.format, args.out)
    return EXIT_OK


def cmd_frontier(args):
    base, kinds, distances, _ = _base_and_grids(args)
    app = load_application(args.app)
    frame = frontier_frame(app, kinds, distances, args.target, base=base, lambda_se=args.lambda_se)
    emit_frame(frame, args.format, args.out)
    return EXIT_OK


def cmd_validate(args):
    cases = validate(seed=args.seed, mc_trials=args.mc_trials, workers=args.workers)
    emit_frame(cases_frame(cases), args.format, args.out)
    failed = [case.id for case in cases if case.gating and not case.passed]
    if failed:
        logger.error(f"Validation failed: {', '.join(failed)}")
        return EXIT_VALIDATION
    return EXIT_OK


COMMANDS = {
    "layout": cmd_layout,
    "timing": cmd_timing,
    "errors": cmd_errors,
    "evaluate": cmd_evaluate,
    "sweep": cmd_sweep,
    "frontier": cmd_frontier,
    "validate": cmd_validate,
}


def run_cli(argv=None):
    """
    Input: argument list (defaults to sys.argv[1:])
    Process: Parses, configures logging, dispatches to the subcommand
    Output: exit code
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"{e}\n")
        return EXIT_USAGE
    except SystemExit as e:
        # --help
        return e.code or EXIT_OK

    configure_logging(args.verbose)
    try:
        return COMMANDS[args.command](args)
    except ValueError as e:
        logger.error(f"Error running {args.command}: {str(e)}")
        return EXIT_USAGE
