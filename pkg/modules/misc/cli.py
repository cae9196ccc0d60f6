# CLI tool commands

# Imports
import argparse
import os

from modules.report.commands import Command, InputKind
from modules.tree.generator import LengthLaw

# Constants
DESC: str = "Magnitude and maximum diversity of weighted trees and finite metric spaces."
LOG_LEVELS: list[str] = ["debug", "info", "warning", "error", "critical"]


# Custom types
def file_path(path: str) -> str:
    """Verifies that the argument is a valid filepath."""

    if os.path.isfile(path) or os.access(os.path.dirname(path) or ".", os.W_OK):
        return path
    else:
        raise argparse.ArgumentTypeError(f"{path} is not a valid filepath.")


def existing_file(path: str) -> str:
    """Verifies that the argument names a readable file."""

    if os.path.isfile(path):
        return path
    raise argparse.ArgumentTypeError(f"{path} does not exist.")


def positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"{text} is not a positive number.")
    return value


def positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"{text} is not a positive integer.")
    return value


def int_list(text: str) -> list[int]:
    """Parses a comma separated list of integers, e.g. '1,2,4,8'."""

    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text} is not a comma separated list of integers.")


def length_law(text: str) -> LengthLaw:
    try:
        return LengthLaw.parse(text)
    except ValueError as error:
        raise argparse.ArgumentTypeError(str(error))


# Arguments
parser = argparse.ArgumentParser(description=DESC)

parser.add_argument(
    "-l",
    help="Selects the logging level for messages in the console.",
    choices=LOG_LEVELS,
    default="info",
)

parser.add_argument(
    "-o",
    help="Output file for logging messages. Logs to console by default.",
    type=file_path,
)

parser.add_argument("--config", help="Configuration JSON file. Built-in defaults apply when omitted.", type=existing_file)
parser.add_argument("--out", help="Write the JSON report to this file instead of stdout.", type=file_path)
parser.add_argument("--timestamp", help="Add a UTC timestamp to the report.", action="store_true")

subparsers = parser.add_subparsers(dest="command", required=True, metavar="command")


def _space_arguments(subparser: argparse.ArgumentParser) -> None:
    subparser.add_argument("input", help="Tree file or distance matrix CSV.", type=existing_file)
    subparser.add_argument(
        "--kind",
        help="Input format (default: tree).",
        choices=[kind.value for kind in InputKind],
        default=InputKind.TREE.value,
    )
    subparser.add_argument(
        "--skip-triangle-check",
        help="Do not validate the triangle inequality of a distance matrix.",
        action="store_true",
    )


magnitude = subparsers.add_parser(Command.MAGNITUDE, help="Magnitude and weighting.")
_space_arguments(magnitude)

diversity = subparsers.add_parser(Command.DIVERSITY, help="Diversity-maximizing measure by peeling.")
_space_arguments(diversity)
diversity.add_argument("--scale", help="Multiply every distance by this factor.", type=positive_float, default=1.0)

oracle = subparsers.add_parser(Command.ORACLE, help="Maximum diversity by subset enumeration.")
_space_arguments(oracle)

profile = subparsers.add_parser(Command.PROFILE, help="Maximum diversity across a grid of scales.")
_space_arguments(profile)
profile.add_argument("--tmin", type=positive_float, default=1e-3)
profile.add_argument("--tmax", type=positive_float, default=1e3)
profile.add_argument("--steps", type=int, default=25)
profile.add_argument("--log", help="Geometric grid spacing (default).", action="store_true", default=True)
profile.add_argument("--linear", help="Even grid spacing.", dest="log", action="store_false")
profile.add_argument("--csv", help="Also write the profile table to this CSV file.", type=file_path)

converge = subparsers.add_parser(Command.CONVERGE, help="Subdivision convergence to the continuum magnitude.")
converge.add_argument("input", help="Tree file.", type=existing_file)
converge.add_argument("--k", help="Comma separated subdivision factors.", type=int_list, default=[1, 2, 4, 8, 16, 32, 64])
converge.add_argument("--csv", help="Also write the convergence table to this CSV file.", type=file_path)

gen = subparsers.add_parser(Command.GEN, help="Write a random weighted tree.")
gen.add_argument("--n", help="Number of vertices.", type=positive_int, required=True)
gen.add_argument("--law", help="'fixed:<c>' or 'uniform:<lo>,<hi>'.", type=length_law, default=LengthLaw())
gen.add_argument("--seed", type=int, default=0)
gen.add_argument("tree_out", metavar="out", help="Tree file to write.", type=file_path)

check = subparsers.add_parser(Command.CHECK, help="Certificate of a measure given as JSON {label: mass}.")
_space_arguments(check)
check.add_argument("measure", help="Measure JSON file.", type=existing_file)

probe = subparsers.add_parser(Command.PROBE, help="Peeling against the oracle on random planar point sets.")
probe.add_argument("--count", type=positive_int, default=100)
probe.add_argument("--min-points", dest="min_points", type=positive_int, default=4)
probe.add_argument("--max-points", dest="max_points", type=positive_int, default=12)
probe.add_argument("--seed", type=int, default=0)
probe.add_argument("--box", help="Side of the square points are drawn in.", type=positive_float, default=5.0)
probe.add_argument("--counterexamples", help="Write counterexamples to this JSON file.", type=file_path)
