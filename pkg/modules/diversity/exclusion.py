# Sufficient conditions for a tree vertex to lie outside the support of the diversity-maximizing measure

# Imports
import logging
import math

import networkx as nx
import numpy as np

from modules.metric.finite_metric import Measure
from modules.misc.config import Tolerances
from modules.tree.weighted_tree import WeightedTree

# Set up logging
logger = logging.getLogger(__name__)


def exclusion_inequality(t: WeightedTree, x: str, tolerances: Tolerances = Tolerances()) -> bool:
    """
    Returns whether sum_{e at x} 1 / (1 + exp(-l(e))) <= deg(x) - 1, i.e. whether the weight of x in the
    whole tree is not positive. Such a vertex is dropped in the first peeling round.
    """

    incident = t.incident(x)
    total = math.fsum(1.0 / (1.0 + math.exp(-length)) for _, length in incident)
    return total <= len(incident) - 1 + tolerances.exclusion


def exclusion_certificate(t: WeightedTree, x: str, tolerances: Tolerances = Tolerances()) -> Measure | None:
    """
    Returns a probability measure nu on the neighbours of x with Z nu(y) <= exp(-d(x, y)) for every vertex y,
    which proves that x carries no mass in the diversity-maximizing measure, or None when the neighbour
    construction gives no such measure.

    Neighbour y_j gets mass proportional to 1 / (2 sinh l_j), scaled by exp(l_min) so
    the largest mass is of order one.
    """

    incident = t.incident(x)
    if not incident:
        return None

    shortest = min(length for _, length in incident)
    masses = np.array([math.exp(shortest - length) / -math.expm1(-2.0 * length) for _, length in incident])
    masses /= math.fsum(masses)

    bound = np.exp(-_distances_from(t, x))
    z_nu = np.zeros(t.size)
    for (neighbour, _), mass in zip(incident, masses):
        z_nu += mass * np.exp(-_distances_from(t, neighbour))

    excess = float(np.max(z_nu - bound))
    logger.debug(f"Exclusion certificate at '{x}': largest excess {excess:.3g}")
    if not excess <= tolerances.exclusion:
        return None

    values = np.zeros(t.size)
    for (neighbour, _), mass in zip(incident, masses):
        values[t.positions[neighbour]] = mass
    return Measure(t.vertices, values)


def _distances_from(t: WeightedTree, source: str) -> np.ndarray:
    lengths = nx.single_source_dijkstra_path_length(t.graph, source, weight="length")
    return np.array([lengths[vertex] for vertex in t.vertices])
