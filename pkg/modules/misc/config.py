# Contains the logic for unpacking the user configuration file

# Imports
import json
from dataclasses import dataclass, field
from typing import Any, Self

# Constants (note that trailing +1 is for inclusivity in range() object)
TOLERANCE_RANGE: tuple[float, float] = (0.0, 1e-3)
ORACLE_POINTS_RANGE: tuple[int, int] = (1, 20 + 1)
WORKERS_RANGE: tuple[int, int] = (1, 256 + 1)

# Types
JSON = dict[str, Any]


@dataclass(frozen=True)
class Tolerances:

    """
    Numerical tolerances shared by every computation.

    triangle: Slack allowed in the triangle inequality when validating a distance matrix.
    residual: Relative bound on ||Zv - rhs||_inf accepted from the SPD solver.
    positivity: A point stays active while w(x) > positivity * ||w||_inf.
    nonnegativity: Oracle subsets are positively weighted when min w >= -nonnegativity.
    certificate: Largest deviation/slack violation for a measure to be certified optimal.
    tie: Oracle candidates within this distance of the best value are ties.
    exclusion: Slack allowed at the boundary of the branch-point exclusion tests.
    symmetry: Largest |d(i, j) - d(j, i)| accepted from a distance matrix file.
    """

    triangle: float = 1e-9
    residual: float = 1e-9
    positivity: float = 1e-12
    nonnegativity: float = 1e-12
    certificate: float = 1e-8
    tie: float = 1e-12
    exclusion: float = 1e-12
    symmetry: float = 1e-12

    def __post_init__(self):
        low, high = TOLERANCE_RANGE
        for name, value in self:
            if not isinstance(value, (int, float)) or not low <= value <= high:
                raise ValueError(f"Tolerance '{name}' = {value!r} not within allowed range {TOLERANCE_RANGE}")

    @classmethod
    def from_json(cls, data: JSON) -> Self:
        """Builds a new Tolerances object from JSON data found in a config file."""

        defaults = cls()
        return cls(**{name: data.get(name, default) for name, default in defaults})

    def __iter__(self):
        yield "triangle", self.triangle
        yield "residual", self.residual
        yield "positivity", self.positivity
        yield "nonnegativity", self.nonnegativity
        yield "certificate", self.certificate
        yield "tie", self.tie
        yield "exclusion", self.exclusion
        yield "symmetry", self.symmetry


@dataclass(frozen=True)
class OracleSettings:

    """Limits for the exhaustive subset oracle."""

    max_points: int = 20

    def __post_init__(self):
        if self.max_points not in range(*ORACLE_POINTS_RANGE):
            raise ValueError(f"Oracle max_points '{self.max_points}' not within allowed range {ORACLE_POINTS_RANGE}")

    @classmethod
    def from_json(cls, data: JSON) -> Self:
        return cls(max_points=data.get("max_points", 20))

    def __iter__(self):
        yield "max_points", self.max_points


@dataclass(frozen=True)
class ParallelSettings:

    """Worker processes used by the oracle and the profile sweep. One worker evaluates in-process."""

    workers: int = 1

    def __post_init__(self):
        if self.workers not in range(*WORKERS_RANGE):
            raise ValueError(f"Worker count '{self.workers}' not within allowed range {WORKERS_RANGE}")

    @classmethod
    def from_json(cls, data: JSON) -> Self:
        return cls(workers=data.get("workers", 1))

    def __iter__(self):
        yield "workers", self.workers


@dataclass(frozen=True)
class Config:

    """Contains settings for a magdiv run."""

    tolerances: Tolerances = field(default_factory=Tolerances)
    oracle: OracleSettings = field(default_factory=OracleSettings)
    parallel: ParallelSettings = field(default_factory=ParallelSettings)

    @classmethod
    def from_json(cls, data: JSON) -> Self:
        """Creates a new Config object from the JSON data contained in the user config file."""

        return cls(
            tolerances=Tolerances.from_json(data.get("tolerances", dict())),
            oracle=OracleSettings.from_json(data.get("oracle", dict())),
            parallel=ParallelSettings.from_json(data.get("parallel", dict())),
        )

    def __iter__(self):
        yield "tolerances", dict(self.tolerances)
        yield "oracle", dict(self.oracle)
        yield "parallel", dict(self.parallel)


def load_config(filepath: str | None = None) -> Config:
    """Returns a Config object created from a configuration JSON file, or the defaults when no file is given."""

    if filepath is None:
        return Config()

    with open(filepath, "r") as file:
        data = json.load(file)

    return Config.from_json(data)
