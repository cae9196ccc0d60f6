# The diversity profile t -> |(X, t d)|_+ across scales

# Imports
import logging
import math
from dataclasses import dataclass
from multiprocessing import Pool
from typing import Sequence

import numpy as np

from modules.diversity.peeling import DiversitySolution, peel
from modules.metric.finite_metric import FiniteMetric
from modules.misc.config import Tolerances
from modules.misc.errors import MagDivException

# Set up logging
logger = logging.getLogger(__name__)


# Errors
class InvalidGrid(MagDivException, ValueError):
    """Raised when a scale grid or subdivision list is malformed."""

    def __init__(self, detail: str):
        super().__init__(f"Invalid grid: {detail}")


@dataclass(frozen=True)
class ProfilePoint:

    """
    One sample of the diversity profile.

    t: Scale factor applied to every distance.
    diversity: Maximum diversity of the rescaled space.
    support_size: Number of points carrying mass.
    certified: Whether the measure passed the optimality certificate.
    magnitude: Magnitude of the rescaled space.
    log_slope: d log(diversity) / d log(t) from the previous sample; None for the first.
    """

    t: float
    diversity: float
    support_size: int
    certified: bool
    magnitude: float | None = None
    log_slope: float | None = None

    def __iter__(self):
        yield "t", self.t
        yield "diversity", self.diversity
        yield "support_size", self.support_size
        yield "certified", self.certified
        yield "magnitude", self.magnitude
        yield "log_slope", self.log_slope


def scale_grid(tmin: float, tmax: float, steps: int, log_spacing: bool = True) -> list[float]:
    """Returns steps scales from tmin to tmax, geometrically or evenly spaced."""

    if not (0 < tmin < tmax and math.isfinite(tmax)):
        raise InvalidGrid(f"need 0 < tmin < tmax, got tmin = {tmin}, tmax = {tmax}")
    if steps < 2:
        raise InvalidGrid(f"need at least 2 steps, got {steps}")
    grid = np.geomspace(tmin, tmax, steps) if log_spacing else np.linspace(tmin, tmax, steps)
    return [float(t) for t in grid]


def check_grid(t_grid: Sequence[float]) -> None:
    if not t_grid:
        raise InvalidGrid("the grid is empty")
    if any(not (t > 0 and math.isfinite(t)) for t in t_grid):
        raise InvalidGrid("every scale must be positive and finite")
    if any(b <= a for a, b in zip(t_grid, t_grid[1:])):
        raise InvalidGrid("scales must be strictly increasing")


def _sample(arguments: tuple[FiniteMetric, float, Tolerances]) -> DiversitySolution:
    m, t, tolerances = arguments
    return peel(m.scaled(t), tolerances)


def diversity_profile(
    m: FiniteMetric,
    t_grid: Sequence[float],
    tolerances: Tolerances = Tolerances(),
    workers: int = 1,
) -> list[ProfilePoint]:
    """Returns the maximum diversity (and magnitude) of (X, t d) for every t in the grid."""

    t_grid = [float(t) for t in t_grid]
    check_grid(t_grid)

    jobs = [(m, t, tolerances) for t in t_grid]
    if workers > 1:
        with Pool(workers) as pool:
            solutions = pool.map(_sample, jobs)
    else:
        solutions = [_sample(job) for job in jobs]

    profile = []
    for i, (t, solution) in enumerate(zip(t_grid, solutions)):
        slope = None
        if i > 0:
            slope = math.log(solution.diversity / solutions[i - 1].diversity) / math.log(t / t_grid[i - 1])
        profile.append(
            ProfilePoint(t, solution.diversity, len(solution.support), solution.certified, solution.magnitude, slope)
        )

    uncertified = sum(not point.certified for point in profile)
    if uncertified:
        logger.warning(f"{uncertified} of {len(profile)} profile sample(s) are not certified optimal")
    return profile
