# Contains the run report written by every command

# Imports
import csv
import datetime as dt
import hashlib
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Sequence

from modules.tree.tree_file import TREE_FORMAT

# Constants
VERSION: str = "1.0.0"
REPORT_FORMAT: str = "magdiv-report v1"
VERSIONS: dict[str, str] = {"tool": VERSION, "report": REPORT_FORMAT, "tree_format": TREE_FORMAT}


def digest_bytes(data: bytes) -> str:
    """Returns the SHA-256 hex digest of the data."""
    return hashlib.sha256(data).hexdigest()


def digest_file(filepath: str | Path) -> str:
    """Returns the SHA-256 hex digest of the file contents."""

    with open(filepath, "rb") as file:
        return hashlib.file_digest(file, "sha256").hexdigest()


def csv_table(header: Sequence[str], rows: Iterable[dict[str, Any]]) -> str:
    """Returns a CSV table with the given columns; None becomes an empty cell."""

    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(header), lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    for row in rows:
        writer.writerow({key: ("" if value is None else value) for key, value in row.items()})
    return buffer.getvalue()


@dataclass
class RunReport:

    """
    The JSON document produced by a command.

    command: Subcommand name.
    input_digest: SHA-256 of the input file, or of the generated file for gen.
    results: Command-specific payload.
    versions: Tool and format versions.
    timestamp: UTC time of the run; omitted unless requested so reruns are byte-identical.
    outputs: Files to write once the command has succeeded (path -> text); not part of the JSON.
    """

    command: str
    input_digest: str | None
    results: dict[str, Any]
    versions: dict[str, str] = field(default_factory=lambda: dict(VERSIONS))
    timestamp: str | None = None
    outputs: dict[Path, str] = field(default_factory=dict, repr=False)

    def stamp(self) -> None:
        self.timestamp = dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds")

    def to_json(self) -> str:
        return json.dumps(dict(self), indent=2, sort_keys=True, allow_nan=False) + "\n"

    def __iter__(self):
        yield "command", self.command
        yield "input_digest", self.input_digest
        yield "results", self.results
        yield "versions", self.versions
        if self.timestamp is not None:
            yield "timestamp", self.timestamp


def error_document(command: str | None, error: BaseException) -> str:
    """Returns the structured JSON describing a failed command."""

    details = {"type": type(error).__name__, "message": getattr(error, "message", str(error))}
    for attribute in ("invariant", "line_number", "points", "limit", "vertex", "size", "expected", "received"):
        if hasattr(error, attribute):
            details[attribute] = getattr(error, attribute)
    return json.dumps({"command": command, "error": details, "versions": VERSIONS}, indent=2, sort_keys=True) + "\n"
