# Random weighted trees for experiments and tests
#
# Topologies are uniform over labelled trees: a uniform Prufer sequence decodes to a uniform tree.

# Imports
import logging
import math
from dataclasses import dataclass
from enum import StrEnum
from typing import Self

import networkx as nx
import numpy as np

from modules.tree.weighted_tree import Edge, WeightedTree

# Set up logging
logger = logging.getLogger(__name__)


class LengthLawKind(StrEnum):
    """Distributions for random edge lengths."""

    FIXED = "fixed"
    UNIFORM = "uniform"


@dataclass(frozen=True)
class LengthLaw:

    """
    Edge length distribution.

    kind: fixed lengths or uniform lengths.
    low: The fixed length, or the lower bound of the uniform law.
    high: The upper bound of the uniform law (equal to low for fixed lengths).
    """

    kind: LengthLawKind = LengthLawKind.UNIFORM
    low: float = 0.05
    high: float = 3.0

    def __post_init__(self):
        if not (self.low > 0 and math.isfinite(self.low) and math.isfinite(self.high)):
            raise ValueError(f"Length law bounds ({self.low}, {self.high}) must be positive and finite")
        if self.kind == LengthLawKind.FIXED and self.high != self.low:
            raise ValueError("A fixed length law takes a single length")
        if self.kind == LengthLawKind.UNIFORM and not self.low < self.high:
            raise ValueError(f"Uniform length law needs low < high, got ({self.low}, {self.high})")

    @classmethod
    def fixed(cls, length: float) -> Self:
        return cls(LengthLawKind.FIXED, length, length)

    @classmethod
    def uniform(cls, low: float, high: float) -> Self:
        return cls(LengthLawKind.UNIFORM, low, high)

    @classmethod
    def parse(cls, text: str) -> Self:
        """Parses 'fixed:<c>' or 'uniform:<lo>,<hi>'."""

        kind, _, arguments = text.partition(":")
        try:
            values = [float(value) for value in arguments.split(",")]
            match LengthLawKind(kind.strip().lower()), values:
                case LengthLawKind.FIXED, [length]:
                    return cls.fixed(length)
                case LengthLawKind.UNIFORM, [low, high]:
                    return cls.uniform(low, high)
        except ValueError as error:
            raise ValueError(f"Invalid length law '{text}': {error}") from error
        raise ValueError(f"Invalid length law '{text}'; expected 'fixed:<c>' or 'uniform:<lo>,<hi>'")

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        match self.kind:
            case LengthLawKind.FIXED:
                return np.full(count, self.low)
            case LengthLawKind.UNIFORM:
                return rng.uniform(self.low, self.high, size=count)

    def __str__(self):
        match self.kind:
            case LengthLawKind.FIXED:
                return f"fixed:{self.low!r}"
            case LengthLawKind.UNIFORM:
                return f"uniform:{self.low!r},{self.high!r}"

    def __iter__(self):
        yield "kind", self.kind.value
        yield "low", self.low
        yield "high", self.high


def vertex_label(i: int) -> str:
    return f"v{i}"


def random_tree(n: int, length_law: LengthLaw = LengthLaw(), seed: int = 0) -> WeightedTree:
    """Returns a uniformly random labelled tree on n vertices with lengths drawn from the law. Deterministic per seed."""

    if n < 1:
        raise ValueError(f"A tree needs at least one vertex, got n = {n}")

    rng = np.random.default_rng(seed)
    match n:
        case 1:
            pairs = []
        case 2:
            pairs = [(0, 1)]
        case _:
            sequence = rng.integers(0, n, size=n - 2).tolist()
            pairs = sorted(tuple(sorted(edge)) for edge in nx.from_prufer_sequence(sequence).edges())

    lengths = length_law.sample(rng, len(pairs))
    vertices = tuple(vertex_label(i) for i in range(n))
    edges = tuple(Edge(vertex_label(a), vertex_label(b), float(length)) for (a, b), length in zip(pairs, lengths))
    logger.debug(f"Generated random tree with {n} vertices (seed {seed}, lengths {length_law})")
    return WeightedTree(vertices, edges)
