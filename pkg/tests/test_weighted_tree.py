# Test cases for weighted trees, their metric and their structural operations

# Imports
import math
from collections import deque

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modules.tree.generator import LengthLaw, random_tree
from modules.tree.weighted_tree import (
    Edge,
    InvalidTree,
    UnknownVertex,
    WeightedTree,
    branch_points,
    leaves,
    scale,
    split_at,
    subdivide,
    total_length,
    tree_metric,
    vertex_classes,
    wedge,
)


# Helper functions
def bfs_distances(t: WeightedTree) -> np.ndarray:
    """Path lengths by breadth-first search from every vertex over an adjacency list."""

    adjacency: dict[str, list[tuple[str, float]]] = {v: [] for v in t.vertices}
    for u, v, length in t.edges:
        adjacency[u].append((v, length))
        adjacency[v].append((u, length))

    dist = np.zeros((t.size, t.size))
    for i, source in enumerate(t.vertices):
        seen = {source: 0.0}
        queue = deque([source])
        while queue:
            x = queue.popleft()
            for y, length in adjacency[x]:
                if y not in seen:
                    seen[y] = seen[x] + length
                    queue.append(y)
        for j, target in enumerate(t.vertices):
            dist[i, j] = seen[target]
    return dist


def star(m: int, length: float) -> WeightedTree:
    leaves_ = [f"l{i}" for i in range(m)]
    return WeightedTree(("c", *leaves_), tuple(Edge("c", leaf, length) for leaf in leaves_))


# Fixtures
@pytest.fixture()
def path3() -> WeightedTree:
    return WeightedTree(("a", "b", "c"), (("a", "b", 0.3), ("b", "c", 0.9)))


# Validation tests
def test_valid_tree(path3: WeightedTree) -> None:
    """Test that a path is a valid tree with the expected degrees."""

    assert path3.size == 3
    assert path3.degree("b") == 2
    assert sorted(path3.incident("b")) == [("a", 0.3), ("c", 0.9)]


def test_single_vertex_tree() -> None:
    """Test that one vertex and no edges is a tree."""

    t = WeightedTree(("a",), ())
    assert tree_metric(t).dist.tolist() == [[0.0]]
    assert vertex_classes(t)["a"].is_leaf


@pytest.mark.parametrize(
    "vertices, edges, invariant",
    [
        ((), (), "nonempty"),
        (("a", "a"), (("a", "a", 1.0),), "distinct labels"),
        (("a b", "c"), (("a b", "c", 1.0),), "vertex labels"),
        (("#a", "b"), (("#a", "b", 1.0),), "vertex labels"),
        (("a", "b"), (("a", "z", 1.0),), "edge endpoints"),
        (("a", "b"), (("a", "a", 1.0),), "no self-loops"),
        (("a", "b", "c"), (("a", "b", 1.0), ("b", "a", 1.0)), "no duplicate edges"),
        (("a", "b"), (("a", "b", 0.0),), "positive lengths"),
        (("a", "b"), (("a", "b", -1.0),), "positive lengths"),
        (("a", "b"), (("a", "b", math.nan),), "positive lengths"),
        (("a", "b", "c"), (("a", "b", 1.0),), "edge count"),
        (("a", "b", "c", "d"), (("a", "b", 1.0), ("b", "c", 1.0), ("c", "a", 1.0)), "connected"),
    ],
)
def test_invalid_tree(vertices, edges, invariant) -> None:
    """Test that every violated invariant raises InvalidTree naming it."""

    with pytest.raises(InvalidTree) as error:
        WeightedTree(vertices, edges)
    assert error.value.invariant == invariant


def test_unknown_vertex(path3: WeightedTree) -> None:
    """Test that lookups of absent vertices raise UnknownVertex."""

    with pytest.raises(UnknownVertex) as error:
        path3.degree("z")
    assert error.value.vertex == "z"


# Metric tests
def test_tree_metric_path(path3: WeightedTree) -> None:
    """Test path lengths on a three-vertex path."""

    d = tree_metric(path3).dist
    assert d[0, 2] == pytest.approx(1.2)
    assert d[2, 0] == d[0, 2]


@given(n=st.integers(min_value=2, max_value=25), seed=st.integers(min_value=0, max_value=2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_tree_metric_matches_bfs(n: int, seed: int) -> None:
    """Test the Dijkstra-based metric against breadth-first path sums."""

    t = random_tree(n, LengthLaw.uniform(0.05, 3.0), seed)
    assert np.allclose(tree_metric(t).dist, bfs_distances(t), rtol=1e-12, atol=1e-12)


@given(n=st.integers(min_value=4, max_value=20), seed=st.integers(min_value=0, max_value=2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_tree_metric_four_point_condition(n: int, seed: int) -> None:
    """Test that among the three pair sums of any four points the two largest are equal."""

    d = tree_metric(random_tree(n, LengthLaw.uniform(0.05, 3.0), seed)).dist
    rng = np.random.default_rng(seed)
    for _ in range(20):
        x, y, z, w = rng.choice(n, size=4, replace=False)
        sums = sorted((d[x, y] + d[z, w], d[x, z] + d[y, w], d[x, w] + d[y, z]))
        assert sums[2] == pytest.approx(sums[1], abs=1e-9)


def test_tree_metric_is_symmetric() -> None:
    """Test that the metric is exactly symmetric so it validates as a FiniteMetric."""

    d = tree_metric(random_tree(60, LengthLaw.uniform(0.05, 3.0), 11)).dist
    assert np.array_equal(d, d.T)


# Structure tests
def test_vertex_classes() -> None:
    """Test leaf and branch point detection on a star."""

    t = star(4, 1.0)
    assert branch_points(t) == ["c"]
    assert leaves(t) == ["l0", "l1", "l2", "l3"]
    assert vertex_classes(t)["c"].degree == 4


def test_total_length(path3: WeightedTree) -> None:
    """Test the compensated sum of edge lengths."""
    assert total_length(path3) == pytest.approx(1.2)


def test_subdivide(path3: WeightedTree) -> None:
    """Test that subdivision keeps distances between original vertices and labels inserted points."""

    fine = subdivide(path3, 4)
    assert fine.size == 3 + 2 * 3
    assert len(fine.edges) == 8
    assert "a|b|1" in fine.positions
    assert total_length(fine) == pytest.approx(total_length(path3))

    d = tree_metric(fine)
    assert d.dist[d.index("a"), d.index("c")] == pytest.approx(1.2)
    assert subdivide(path3, 1) is path3

    with pytest.raises(ValueError):
        subdivide(path3, 0)


def test_subdivide_orders_endpoint_labels() -> None:
    """Test that inserted labels start from the lexicographically smaller endpoint."""

    t = WeightedTree(("b", "a"), (("b", "a", 1.0),))
    assert set(subdivide(t, 2).vertices) == {"b", "a", "a|b|1"}


def test_subdivide_label_clash() -> None:
    """Test that an inserted label equal to an existing vertex is reported instead of merging two points."""

    t = WeightedTree(("a", "b", "a|b|1"), (("a", "b", 1.0), ("b", "a|b|1", 1.0)))
    assert subdivide(t, 1) is t

    with pytest.raises(InvalidTree) as error:
        subdivide(t, 2)
    assert error.value.invariant == "subdivision labels"


def test_scale(path3: WeightedTree) -> None:
    """Test that scaling the tree scales its metric."""

    scaled = scale(path3, 2.5)
    assert np.allclose(tree_metric(scaled).dist, 2.5 * tree_metric(path3).dist)
    with pytest.raises(ValueError):
        scale(path3, -1.0)


def test_wedge_and_split(path3: WeightedTree) -> None:
    """Test that a tree splits at a cut vertex into two summands whose wedge is the tree again."""

    first, second = split_at(path3, "b", {"a"})
    assert set(first.vertices) == {"a", "b"}
    assert set(second.vertices) == {"b", "c"}

    glued = wedge(first, second, "b")
    assert set(glued.vertices) == set(path3.vertices)
    assert sorted(glued.edges) == sorted(path3.edges)


def test_wedge_needs_a_single_shared_vertex(path3: WeightedTree) -> None:
    """Test that the summands of a wedge must share exactly the wedge point."""

    with pytest.raises(InvalidTree):
        wedge(path3, path3, "b")
