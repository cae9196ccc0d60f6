# Magnitude and weightings of weighted trees and finite metric spaces
#
# For a weighted tree the weighting (the solution of Z w = 1) has the closed form
#     w(x) = sum_{e at x} 1 / (1 + exp(-l(e))) - (deg x - 1)
# and the magnitude, the total weight, is 1 + sum_e tanh(l(e) / 2).

# Imports
import logging
import math
from dataclasses import dataclass

import numpy as np

from modules.metric.finite_metric import FiniteMetric
from modules.metric.kernel import build_kernel, solve_spd
from modules.misc.config import Tolerances
from modules.tree.weighted_tree import WeightedTree, total_length, vertex_classes

# Set up logging
logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class WeightVector:

    """A weighting: one signed weight per point, with Z w = 1."""

    labels: tuple[str, ...]
    values: np.ndarray

    @property
    def magnitude(self) -> float:
        return math.fsum(self.values)

    def as_mapping(self) -> dict[str, float]:
        return {label: float(value) for label, value in zip(self.labels, self.values)}

    def __iter__(self):
        yield "magnitude", self.magnitude
        yield "weights", self.as_mapping()


@dataclass(frozen=True)
class SimplicialWeight:

    """
    The weighting of the simplicial tree spanned by a weighted tree (edges included as segments).

    atoms: Point mass 1 - deg(x) / 2 at every vertex.
    density: Mass per unit length along every edge.
    total_length: Length carrying the density.
    """

    atoms: dict[str, float]
    density: float
    total_length: float

    @property
    def magnitude(self) -> float:
        return math.fsum([*self.atoms.values(), self.density * self.total_length])

    def __iter__(self):
        yield "atoms", self.atoms
        yield "density", self.density
        yield "total_length", self.total_length
        yield "magnitude", self.magnitude


def _edge_share(length: float) -> float:
    """Returns 1 / (1 + exp(-length)), the weight a two-point space of this diameter gives each point."""
    return 1.0 / (1.0 + math.exp(-length))


def tree_weights(t: WeightedTree) -> WeightVector:
    """Returns the closed-form weighting of the tree."""

    values = np.empty(t.size)
    for i, vertex in enumerate(t.vertices):
        incident = t.incident(vertex)
        values[i] = math.fsum([*(_edge_share(length) for _, length in incident), -(len(incident) - 1)])
    return WeightVector(t.vertices, values)


def tree_magnitude(t: WeightedTree) -> float:
    """Returns 1 + sum_e tanh(l(e) / 2)."""

    return math.fsum([1.0, *(math.tanh(edge.length / 2.0) for edge in t.edges)])


def wedge_magnitude(mx: float, my: float) -> float:
    """Returns the magnitude of a wedge sum of two spaces of negative type, |X| + |Y| - 1."""

    if mx < 1.0 or my < 1.0:
        raise ValueError(f"Magnitudes of wedge summands must be at least 1, got ({mx}, {my})")
    return mx + my - 1.0


def continuum_magnitude(total_length: float) -> float:
    """Returns 1 + L / 2, the magnitude of a simplicial tree or compact R-tree of total length L."""

    if not (total_length >= 0.0 and math.isfinite(total_length)):
        raise ValueError(f"Total length '{total_length}' must be finite and nonnegative")
    return 1.0 + total_length / 2.0


def simplicial_weight(t: WeightedTree) -> SimplicialWeight:
    """Returns the weighting of the simplicial tree obtained by adding the edges of t as segments."""

    atoms = {vertex: 1.0 - cls.degree / 2.0 for vertex, cls in vertex_classes(t).items()}
    return SimplicialWeight(atoms=atoms, density=0.5, total_length=total_length(t))


def magnitude(m: FiniteMetric, tolerances: Tolerances = Tolerances()) -> WeightVector:
    """Returns the weighting of a finite positive definite metric space by solving Z w = 1 densely."""

    w = solve_spd(build_kernel(m), np.ones(m.size), tolerances)
    logger.debug(f"Dense weighting of {m.size} point(s): magnitude {math.fsum(w):.17g}")
    return WeightVector(m.labels, w)
