# Reads and writes labelled distance matrices as CSV
#
# Header row: label,<label_1>,...,<label_n>
# Row i:      <label_i>,d(i,1),...,d(i,n)

# Imports
import csv
import io
import logging
from pathlib import Path

import numpy as np

from modules.metric.finite_metric import FiniteMetric, InvalidMetric
from modules.misc.config import Tolerances
from modules.misc.converter import format_float, parse_float
from modules.misc.errors import MagDivException

# Constants
HEADER_KEY: str = "label"

# Set up logging
logger = logging.getLogger(__name__)


# Errors
class MetricFileError(MagDivException):
    """Raised when a distance matrix file cannot be parsed."""

    def __init__(self, line_number: int, detail: str):
        self.line_number = line_number
        super().__init__(f"Distance matrix line {line_number}: {detail}")


def parse_metric(text: str, check_triangle: bool = True, tolerances: Tolerances = Tolerances()) -> FiniteMetric:
    """Returns the finite metric space described by the CSV text."""

    rows = [row for row in csv.reader(io.StringIO(text))]
    rows = [(number, row) for number, row in enumerate(rows, start=1) if any(cell.strip() for cell in row)]
    if not rows:
        raise MetricFileError(1, "file is empty")

    header_number, header = rows[0]
    header = [cell.strip() for cell in header]
    if header[0] != HEADER_KEY:
        raise MetricFileError(header_number, f"header must start with '{HEADER_KEY}'")
    labels = header[1:]
    if not labels:
        raise MetricFileError(header_number, "header lists no points")

    body = rows[1:]
    if len(body) != len(labels):
        line = body[-1][0] if body else header_number
        raise MetricFileError(line, f"expected {len(labels)} rows but found {len(body)}")

    dist = np.zeros((len(labels), len(labels)))
    for i, (number, row) in enumerate(body):
        row = [cell.strip() for cell in row]
        if len(row) != len(labels) + 1:
            raise MetricFileError(number, f"expected {len(labels) + 1} fields but found {len(row)}")
        if row[0] != labels[i]:
            raise MetricFileError(number, f"row label '{row[0]}' does not match column label '{labels[i]}'")
        try:
            dist[i] = [parse_float(cell) for cell in row[1:]]
        except ValueError as error:
            raise MetricFileError(number, str(error)) from error

    asymmetry = float(np.max(np.abs(dist - dist.T)))
    if asymmetry > tolerances.symmetry:
        raise InvalidMetric("symmetry", f"matrix differs from its transpose by {asymmetry:.3g}")
    dist = (dist + dist.T) / 2.0

    metric = FiniteMetric(tuple(labels), dist, check_triangle=check_triangle, tolerances=tolerances)
    logger.debug(f"Parsed distance matrix with {metric.size} point(s)")
    return metric


def load_metric(filepath: str | Path, check_triangle: bool = True, tolerances: Tolerances = Tolerances()) -> FiniteMetric:
    """Returns the finite metric space stored in a CSV distance matrix file."""

    with open(filepath, "r", newline="") as file:
        return parse_metric(file.read(), check_triangle=check_triangle, tolerances=tolerances)


def serialize_metric(m: FiniteMetric) -> str:
    """Returns the CSV text of the metric space with 17 significant digits per distance."""

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow([HEADER_KEY, *m.labels])
    for label, row in zip(m.labels, m.dist):
        writer.writerow([label, *(format_float(value) for value in row)])
    return buffer.getvalue()
