# Finite metric spaces and finitely supported measures on them

# Imports
import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Self, Sequence

import numpy as np
from scipy.spatial.distance import cdist

from modules.misc.config import Tolerances
from modules.misc.errors import MagDivException

# Set up logging
logger = logging.getLogger(__name__)


# Errors
class InvalidMetric(MagDivException, ValueError):
    """Raised when a distance matrix violates a metric space invariant."""

    def __init__(self, invariant: str, detail: str):
        self.invariant = invariant
        super().__init__(f"Invalid metric ({invariant}): {detail}")


class DimensionMismatch(MagDivException, ValueError):
    """Raised when a measure, vector or kernel are indexed by point sets of different sizes."""

    def __init__(self, expected: int, received: int):
        self.expected = expected
        self.received = received
        super().__init__(f"Expected {expected} entries but received {received}.")


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class FiniteMetric:

    """
    A finite metric space given by its labelled distance matrix.

    labels: Point identifiers, pairwise distinct.
    dist: Square matrix of finite distances, dist[i, j] = d(x_i, x_j).
    check_triangle: Validate the triangle inequality on construction (O(n^3)).
    """

    labels: tuple[str, ...]
    dist: np.ndarray
    check_triangle: bool = field(default=True, repr=False)
    tolerances: Tolerances = field(default_factory=Tolerances, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(str(label) for label in self.labels))
        object.__setattr__(self, "dist", _frozen(self.dist))
        n = len(self.labels)
        d = self.dist

        if len(set(self.labels)) != n:
            raise InvalidMetric("distinct labels", "labels must be pairwise distinct")
        if d.ndim != 2 or d.shape != (n, n):
            raise InvalidMetric("square matrix", f"matrix shape {d.shape} does not match {n} labels")
        if n == 0:
            raise InvalidMetric("nonempty", "a metric space needs at least one point")
        if not np.all(np.isfinite(d)):
            raise InvalidMetric("finite distances", "infinite or NaN distances are not supported")
        if np.any(np.diag(d) != 0.0):
            raise InvalidMetric("zero diagonal", "d(x, x) must be 0 for every point")
        if np.max(np.abs(d - d.T)) > 0.0:
            raise InvalidMetric("symmetry", "d(x, y) must equal d(y, x)")
        off_diagonal = ~np.eye(n, dtype=bool)
        if np.any(d[off_diagonal] <= 0.0):
            raise InvalidMetric("positive distances", "distinct points must be at positive distance")

        if self.check_triangle:
            tol = self.tolerances.triangle
            for k in range(n):
                violation = d - (d[:, [k]] + d[[k], :])
                if np.max(violation) > tol:
                    i, j = np.unravel_index(np.argmax(violation), violation.shape)
                    raise InvalidMetric(
                        "triangle inequality",
                        f"d({self.labels[i]}, {self.labels[j]}) exceeds the path through {self.labels[k]} "
                        f"by {violation[i, j]:.3g}",
                    )

    @property
    def size(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        """Returns the position of the point with the given label."""
        return self.labels.index(label)

    def restrict(self, indices: Sequence[int]) -> Self:
        """Returns the subspace on the given point positions, in the given order."""

        indices = list(indices)
        return FiniteMetric(
            labels=tuple(self.labels[i] for i in indices),
            dist=self.dist[np.ix_(indices, indices)],
            check_triangle=False,
            tolerances=self.tolerances,
        )

    def scaled(self, t: float) -> Self:
        """Returns the rescaled space (X, t d)."""

        if not t > 0 or not math.isfinite(t):
            raise ValueError(f"Scale factor '{t}' must be a positive finite number")
        return FiniteMetric(self.labels, self.dist * t, check_triangle=False, tolerances=self.tolerances)

    def __iter__(self):
        yield "labels", list(self.labels)
        yield "dist", self.dist.tolist()


def euclidean_metric(points: np.ndarray, labels: Sequence[str] | None = None) -> FiniteMetric:
    """Returns the finite metric space of a point cloud (one point per row) under Euclidean distance."""

    points = np.atleast_2d(np.asarray(points, dtype=float))
    if labels is None:
        labels = [f"p{i}" for i in range(points.shape[0])]
    dist = cdist(points, points, metric="euclidean")
    np.fill_diagonal(dist, 0.0)
    return FiniteMetric(tuple(labels), dist, check_triangle=False)


@dataclass(frozen=True, eq=False)
class Measure:

    """A finitely supported signed measure, one mass per point of a labelled space."""

    labels: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "values", _frozen(self.values))
        if self.values.shape != (len(self.labels),):
            raise DimensionMismatch(len(self.labels), self.values.size)

    @property
    def total(self) -> float:
        return math.fsum(self.values)

    @classmethod
    def dirac(cls, labels: Iterable[str], label: str) -> Self:
        labels = tuple(labels)
        values = np.zeros(len(labels))
        values[labels.index(label)] = 1.0
        return cls(labels, values)

    @classmethod
    def uniform(cls, labels: Iterable[str]) -> Self:
        labels = tuple(labels)
        return cls(labels, np.full(len(labels), 1.0 / len(labels)))

    @classmethod
    def from_mapping(cls, labels: Iterable[str], masses: Mapping[str, float]) -> Self:
        """Builds a measure from a {label: mass} mapping; points absent from the mapping get zero mass."""

        labels = tuple(labels)
        unknown = sorted(set(masses) - set(labels))
        if unknown:
            raise KeyError(f"Measure mentions unknown points: {', '.join(unknown)}")
        values = np.zeros(len(labels))
        for i, label in enumerate(labels):
            try:
                values[i] = float(masses.get(label, 0.0))
            except (TypeError, ValueError) as error:
                raise ValueError(f"Mass of point '{label}' is not a number: {masses[label]!r}") from error
            if not math.isfinite(values[i]):
                raise ValueError(f"Mass of point '{label}' must be finite, got {values[i]}")
        return cls(labels, values)

    def as_mapping(self) -> dict[str, float]:
        return {label: float(value) for label, value in zip(self.labels, self.values)}

    def is_probability(self, tol: float = 1e-12) -> bool:
        return bool(np.all(self.values >= 0.0)) and abs(self.total - 1.0) <= tol

    def support(self, positivity: float = 1e-12) -> tuple[str, ...]:
        """Returns the labels carrying mass above positivity * max mass."""

        if not self.values.size:
            return ()
        threshold = positivity * float(np.max(np.abs(self.values)))
        return tuple(label for label, value in zip(self.labels, self.values) if value > threshold)

    def __iter__(self):
        yield from self.as_mapping().items()
