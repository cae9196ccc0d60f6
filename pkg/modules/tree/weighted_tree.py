# Weighted trees: vertices joined by edges of positive length
#
# The metric of a weighted tree is the sum of the edge lengths along the unique simple path between two vertices.

# Imports
import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Self

import networkx as nx
import numpy as np

from modules.metric.finite_metric import FiniteMetric
from modules.misc.errors import MagDivException

# Constants
SUBDIVISION_SEPARATOR: str = "|"
COMMENT: str = "#"

# Set up logging
logger = logging.getLogger(__name__)


# Errors
class InvalidTree(MagDivException, ValueError):
    """Raised when vertices and edges do not describe a weighted tree."""

    def __init__(self, invariant: str, detail: str):
        self.invariant = invariant
        super().__init__(f"Invalid tree ({invariant}): {detail}")


class UnknownVertex(MagDivException, LookupError):
    """Raised when a vertex label does not belong to the tree."""

    def __init__(self, vertex: str):
        self.vertex = vertex
        super().__init__(f"The vertex '{vertex}' does not exist.")


class Edge(NamedTuple):
    u: str
    v: str
    length: float


class VertexClass(NamedTuple):
    degree: int

    @property
    def is_leaf(self) -> bool:
        return self.degree <= 1

    @property
    def is_branch(self) -> bool:
        return self.degree >= 3


@dataclass(frozen=True, eq=False)
class WeightedTree:

    """
    A finite tree with a strictly positive length on every edge.

    vertices: Vertex labels in a fixed order; that order indexes every matrix built from the tree.
    edges: (u, v, length) triples.
    """

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(Edge(str(u), str(v), float(length)) for u, v, length in self.edges))

        if not self.vertices:
            raise InvalidTree("nonempty", "a tree needs at least one vertex")
        if len(set(self.vertices)) != len(self.vertices):
            raise InvalidTree("distinct labels", "vertex labels must be pairwise distinct")
        for vertex in self.vertices:
            if not vertex or any(character.isspace() for character in vertex):
                raise InvalidTree("vertex labels", f"label {vertex!r} is empty or contains whitespace")
            if vertex.startswith(COMMENT):
                raise InvalidTree("vertex labels", f"label {vertex!r} starts with '{COMMENT}'")

        known = set(self.vertices)
        seen: set[frozenset[str]] = set()
        for u, v, length in self.edges:
            if u not in known or v not in known:
                raise InvalidTree("edge endpoints", f"edge ({u}, {v}) uses an unknown vertex")
            if u == v:
                raise InvalidTree("no self-loops", f"edge ({u}, {v}) is a loop")
            if frozenset((u, v)) in seen:
                raise InvalidTree("no duplicate edges", f"edge ({u}, {v}) appears twice")
            seen.add(frozenset((u, v)))
            if not (length > 0.0 and math.isfinite(length)):
                raise InvalidTree("positive lengths", f"edge ({u}, {v}) has length {length}")

        if len(self.edges) != len(self.vertices) - 1:
            raise InvalidTree(
                "edge count", f"{len(self.vertices)} vertices need {len(self.vertices) - 1} edges, got {len(self.edges)}"
            )
        if not nx.is_connected(self.graph):
            raise InvalidTree("connected", "the edges do not connect every vertex")

    @cached_property
    def graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(self.vertices)
        graph.add_weighted_edges_from(self.edges, weight="length")
        return graph

    @cached_property
    def positions(self) -> dict[str, int]:
        return {vertex: i for i, vertex in enumerate(self.vertices)}

    @property
    def size(self) -> int:
        return len(self.vertices)

    def check_vertex(self, vertex: str) -> None:
        if vertex not in self.positions:
            raise UnknownVertex(vertex)

    def degree(self, vertex: str) -> int:
        self.check_vertex(vertex)
        return self.graph.degree[vertex]

    def incident(self, vertex: str) -> list[tuple[str, float]]:
        """Returns (neighbour, length) for every edge at the vertex."""

        self.check_vertex(vertex)
        return [(neighbour, data["length"]) for neighbour, data in self.graph[vertex].items()]

    def __iter__(self):
        yield "vertices", list(self.vertices)
        yield "edges", [[u, v, length] for u, v, length in self.edges]


def vertex_classes(t: WeightedTree) -> dict[str, VertexClass]:
    """Returns the degree class of every vertex. A lone vertex has degree 0 and counts as a leaf."""

    return {vertex: VertexClass(t.graph.degree[vertex]) for vertex in t.vertices}


def leaves(t: WeightedTree) -> list[str]:
    return [vertex for vertex, cls in vertex_classes(t).items() if cls.is_leaf]


def branch_points(t: WeightedTree) -> list[str]:
    return [vertex for vertex, cls in vertex_classes(t).items() if cls.is_branch]


def total_length(t: WeightedTree) -> float:
    """Returns the sum of all edge lengths, rounded once."""

    return math.fsum(edge.length for edge in t.edges)


def tree_metric(t: WeightedTree) -> FiniteMetric:
    """Returns the path-length metric on the vertices of the tree."""

    n = t.size
    dist = np.zeros((n, n))
    for source, lengths in nx.all_pairs_dijkstra_path_length(t.graph, weight="length"):
        i = t.positions[source]
        for target, length in lengths.items():
            dist[i, t.positions[target]] = length

    # Both orientations of a path may round differently.
    upper = np.triu(dist, k=1)
    return FiniteMetric(t.vertices, upper + upper.T, check_triangle=False)


def subdivide(t: WeightedTree, k: int) -> WeightedTree:
    """
    Returns the tree with every edge replaced by a path of k equal edges.

    The i-th inserted point from u on the edge (u, v), with u < v lexicographically, is labelled 'u|v|i'.
    """

    if k < 1:
        raise ValueError(f"Subdivision factor '{k}' must be a positive integer")
    if k == 1:
        return t

    vertices = list(t.vertices)
    taken = set(vertices)
    edges: list[Edge] = []
    for u, v, length in t.edges:
        u, v = sorted((u, v))
        inserted = [SUBDIVISION_SEPARATOR.join((u, v, str(i))) for i in range(1, k)]
        clashes = sorted(taken.intersection(inserted))
        if clashes:
            raise InvalidTree("subdivision labels", f"inserted labels {clashes} are already in use")
        taken.update(inserted)
        vertices.extend(inserted)
        path = [u, *inserted, v]
        edges.extend(Edge(a, b, length / k) for a, b in zip(path, path[1:]))

    logger.debug(f"Subdivided {len(t.edges)} edge(s) into {len(edges)} with k = {k}")
    return WeightedTree(tuple(vertices), tuple(edges))


def scale(t: WeightedTree, s: float) -> WeightedTree:
    """Returns the tree with every edge length multiplied by s."""

    if not (s > 0 and math.isfinite(s)):
        raise ValueError(f"Scale factor '{s}' must be a positive finite number")
    return WeightedTree(t.vertices, tuple(Edge(u, v, length * s) for u, v, length in t.edges))


def wedge(first: WeightedTree, second: WeightedTree, point: str) -> WeightedTree:
    """Returns the wedge sum of two trees glued at a vertex label they share (and share nothing else)."""

    first.check_vertex(point)
    second.check_vertex(point)
    shared = set(first.vertices) & set(second.vertices)
    if shared != {point}:
        raise InvalidTree("wedge point", f"trees share {sorted(shared)} instead of only '{point}'")
    vertices = first.vertices + tuple(vertex for vertex in second.vertices if vertex != point)
    return WeightedTree(vertices, first.edges + second.edges)


def split_at(t: WeightedTree, vertex: str, branches: set[str]) -> tuple[WeightedTree, WeightedTree]:
    """
    Splits the tree at a cut vertex into the wedge summands: the first holds the components of t - vertex
    that contain the given neighbours, the second holds the rest. Both keep the cut vertex.
    """

    t.check_vertex(vertex)
    rest = t.graph.copy()
    rest.remove_node(vertex)
    first_side = {vertex}
    for component in nx.connected_components(rest):
        if component & branches:
            first_side |= component
    second_side = (set(t.vertices) - first_side) | {vertex}

    def induced(side: set[str]) -> WeightedTree:
        vertices = tuple(v for v in t.vertices if v in side)
        edges = tuple(edge for edge in t.edges if edge.u in side and edge.v in side)
        return WeightedTree(vertices, edges)

    return induced(first_side), induced(second_side)
