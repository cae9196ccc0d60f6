# Command-line entry point for magnitude and maximum diversity computations.
# Reports are printed as JSON on stdout; log messages go to stderr or the file given with -o.

import logging
import sys
from pathlib import Path

from modules.misc.cli import parser
from modules.misc.config import load_config
from modules.misc.errors import MagDivException
from modules.report.commands import (
    Command,
    InputKind,
    cmd_check,
    cmd_converge,
    cmd_diversity,
    cmd_gen,
    cmd_magnitude,
    cmd_oracle,
    cmd_probe,
    cmd_profile,
)
from modules.report.report import RunReport, error_document

STR_TO_LOGGING_MODE: dict[str, int] = {
    "debug": logging.DEBUG,
    "info": logging.INFO,
    "warning": logging.WARNING,
    "error": logging.ERROR,
    "critical": logging.CRITICAL,
}

logger = logging.getLogger(__name__)


def run(args: dict) -> RunReport:
    """Runs the selected subcommand and returns its report without writing anything."""

    config = load_config(args.get("config"))
    command = Command(args["command"])
    kind = InputKind(args.get("kind") or InputKind.TREE)
    check_triangle = not args.get("skip_triangle_check", False)
    logger.info(f"Running '{command}'")

    match command:
        case Command.MAGNITUDE:
            return cmd_magnitude(Path(args["input"]), kind, config, check_triangle)
        case Command.DIVERSITY:
            return cmd_diversity(Path(args["input"]), kind, args["scale"], config, check_triangle)
        case Command.ORACLE:
            return cmd_oracle(Path(args["input"]), kind, config, check_triangle)
        case Command.PROFILE:
            csv_path = Path(args["csv"]) if args.get("csv") else None
            return cmd_profile(
                Path(args["input"]),
                kind,
                args["tmin"],
                args["tmax"],
                args["steps"],
                args["log"],
                csv_path,
                config,
                check_triangle,
            )
        case Command.CONVERGE:
            csv_path = Path(args["csv"]) if args.get("csv") else None
            return cmd_converge(Path(args["input"]), args["k"], csv_path)
        case Command.GEN:
            return cmd_gen(args["n"], args["law"], args["seed"], Path(args["tree_out"]))
        case Command.CHECK:
            return cmd_check(Path(args["input"]), Path(args["measure"]), kind, config, check_triangle)
        case Command.PROBE:
            path = Path(args["counterexamples"]) if args.get("counterexamples") else None
            return cmd_probe(
                args["count"], args["min_points"], args["max_points"], args["seed"], args["box"], path, config
            )


def main(argv: list[str] | None = None) -> int:

    # Get the arguments
    args = vars(parser.parse_args(argv))

    # Set up logging
    logging.basicConfig(
        level=STR_TO_LOGGING_MODE[args.get("l")],
        filename=args.get("o"),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    try:
        report = run(args)
    except (MagDivException, OSError, ValueError, KeyError) as error:
        logger.error(f"'{args.get('command')}' failed: {getattr(error, 'message', error)}")
        print(error_document(args.get("command"), error), end="")
        return 1

    if args.get("timestamp"):
        report.stamp()

    # Files are only written once the whole result exists
    try:
        for path, text in report.outputs.items():
            path.write_text(text)
            logger.info(f"Wrote {path}")
        if args.get("out"):
            Path(args["out"]).write_text(report.to_json())
            logger.info(f"Wrote report to {args['out']}")
        else:
            print(report.to_json(), end="")
    except OSError as error:
        logger.error(f"Could not write output: {error}")
        print(error_document(args.get("command"), error), end="")
        return 1

    return 0


if __name__ == "__main__":
    sys.exit(main())
