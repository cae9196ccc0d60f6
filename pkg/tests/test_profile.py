# Test cases for the diversity profile across scales

# Imports
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modules.diversity.profile import InvalidGrid, check_grid, diversity_profile, scale_grid
from modules.tree.generator import LengthLaw, random_tree
from modules.tree.weighted_tree import WeightedTree, tree_metric


# Tests
def test_scale_grid() -> None:
    """Test geometric and even grids, endpoints included."""

    log_grid = scale_grid(1e-3, 1e3, 7)
    assert log_grid[0] == pytest.approx(1e-3)
    assert log_grid[-1] == pytest.approx(1e3)
    assert log_grid[3] == pytest.approx(1.0)

    assert scale_grid(1.0, 3.0, 3, log_spacing=False) == pytest.approx([1.0, 2.0, 3.0])


@pytest.mark.parametrize("tmin, tmax, steps", [(0.0, 1.0, 5), (2.0, 1.0, 5), (1.0, 1.0, 5), (1.0, math.inf, 5), (1.0, 2.0, 1)])
def test_scale_grid_errors(tmin: float, tmax: float, steps: int) -> None:
    """Test that invalid grids raise InvalidGrid."""

    with pytest.raises(InvalidGrid):
        scale_grid(tmin, tmax, steps)


def test_check_grid() -> None:
    """Test that explicit grids must be nonempty, positive and increasing."""

    check_grid([0.5, 1.0])
    for grid in ([], [1.0, 1.0], [2.0, 1.0], [-1.0, 1.0], [1.0, math.nan]):
        with pytest.raises(InvalidGrid):
            check_grid(grid)


def test_two_point_profile() -> None:
    """Test that the profile of two points is 1 + tanh(tL / 2) with uniform support."""

    m = tree_metric(WeightedTree(("a", "b"), (("a", "b", 2.0),)))
    profile = diversity_profile(m, [0.1, 1.0, 10.0])

    for point in profile:
        assert point.diversity == pytest.approx(1.0 + math.tanh(point.t), abs=1e-12)
        assert point.support_size == 2
        assert point.certified
        assert point.magnitude == pytest.approx(point.diversity, abs=1e-12)

    assert profile[0].log_slope is None
    assert profile[1].log_slope == pytest.approx(
        math.log(profile[1].diversity / profile[0].diversity) / math.log(10.0)
    )


@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
@settings(max_examples=10, deadline=None)
def test_profile_is_monotone(seed: int) -> None:
    """Test that maximum diversity is nondecreasing in the scale and runs from 1 to the number of points."""

    t = random_tree(10, LengthLaw.uniform(0.05, 3.0), seed)
    profile = diversity_profile(tree_metric(t), scale_grid(1e-3, 1e3, 13))
    values = [point.diversity for point in profile]

    assert all(b >= a - 1e-9 for a, b in zip(values, values[1:]))
    assert values[0] == pytest.approx(1.0, abs=0.05)
    assert values[-1] == pytest.approx(10.0, abs=0.5)


def test_workers_give_the_same_profile() -> None:
    """Test that the parallel sweep returns the same samples as the in-process one."""

    m = tree_metric(random_tree(8, LengthLaw.uniform(0.05, 3.0), 3))
    grid = scale_grid(0.01, 100.0, 6)
    assert diversity_profile(m, grid, workers=2) == diversity_profile(m, grid)


def test_profile_json_form() -> None:
    """Test the keys of a serialized profile sample."""

    m = tree_metric(WeightedTree(("a", "b"), (("a", "b", 1.0),)))
    assert set(dict(diversity_profile(m, np.array([1.0, 2.0]))[0])) == {
        "t",
        "diversity",
        "support_size",
        "certified",
        "magnitude",
        "log_slope",
    }
