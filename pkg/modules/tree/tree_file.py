# Reads and writes weighted trees in the magdiv-tree v1 text format
#
# # magdiv-tree v1
# <u> <v> <length>      one edge per line, whitespace separated
# <u>                   a lone vertex (only for single-vertex trees)

# Imports
import logging
from pathlib import Path

from modules.misc.converter import format_float, parse_float
from modules.misc.errors import MagDivException
from modules.tree.weighted_tree import COMMENT, Edge, InvalidTree, WeightedTree

# Constants
TREE_FORMAT: str = "magdiv-tree v1"
HEADER: str = f"# {TREE_FORMAT}"

# Set up logging
logger = logging.getLogger(__name__)


# Errors
class TreeFileError(MagDivException):
    """Raised when a tree file cannot be parsed."""

    def __init__(self, line_number: int, detail: str):
        self.line_number = line_number
        super().__init__(f"Tree file line {line_number}: {detail}")


def parse_tree(text: str) -> WeightedTree:
    """Returns the weighted tree described by the text. Vertices are ordered by first appearance."""

    lines = text.splitlines()
    if not lines or lines[0].strip() != HEADER:
        raise TreeFileError(1, f"expected header '{HEADER}'")

    vertices: dict[str, None] = {}
    edges: list[Edge] = []
    lone: list[tuple[int, str]] = []

    for number, line in enumerate(lines[1:], start=2):
        fields = line.split()
        if not fields or fields[0].startswith(COMMENT):
            continue
        match fields:
            case [u]:
                lone.append((number, u))
                vertices.setdefault(u)
            case [u, v, length]:
                try:
                    edges.append(Edge(u, v, parse_float(length)))
                except ValueError as error:
                    raise TreeFileError(number, f"invalid length: {error}") from error
                vertices.setdefault(u)
                vertices.setdefault(v)
            case _:
                raise TreeFileError(number, f"expected '<u> <v> <length>' or '<u>', found {len(fields)} fields")

    if not vertices:
        raise TreeFileError(len(lines), "file lists no vertices")
    if lone and edges:
        number, u = lone[0]
        raise TreeFileError(number, f"lone vertex '{u}' is only allowed in a single-vertex tree")

    try:
        tree = WeightedTree(tuple(vertices), tuple(edges))
    except InvalidTree as error:
        raise TreeFileError(len(lines), error.message) from error

    logger.debug(f"Parsed tree with {tree.size} vertices and {len(tree.edges)} edges")
    return tree


def load_tree(filepath: str | Path) -> WeightedTree:
    """Returns the weighted tree stored in a magdiv-tree file."""

    with open(filepath, "r") as file:
        return parse_tree(file.read())


def serialize_tree(t: WeightedTree) -> str:
    """Returns the magdiv-tree text of the tree, lengths written with 17 significant digits."""

    lines = [HEADER]
    if not t.edges:
        lines.append(t.vertices[0])
    lines.extend(f"{u} {v} {format_float(length)}" for u, v, length in t.edges)
    return "\n".join(lines) + "\n"
