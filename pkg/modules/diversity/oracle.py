# Exhaustive maximum diversity: the best magnitude over positively weighted subsets
#
# Every nonempty subset Y is solved (Z_Y w = 1). Subsets with nonnegative weights whose normalized weighting passes
# the optimality certificate on the whole space are candidates; the largest total weight wins.

# Imports
import logging
import math
from multiprocessing import Pool
from typing import NamedTuple

import numpy as np

from modules.diversity.certificate import certificate_from_kernel
from modules.diversity.peeling import DiversitySolution, NoConvergence, point_solution
from modules.metric.finite_metric import FiniteMetric, Measure
from modules.metric.kernel import SimilarityKernel, build_kernel, solve_spd
from modules.misc.config import OracleSettings, Tolerances
from modules.misc.errors import MagDivException

# Constants
CHUNKS_PER_WORKER: int = 4

# Set up logging
logger = logging.getLogger(__name__)


# Errors
class TooLarge(MagDivException):
    """Raised when the exhaustive oracle is asked to enumerate too many points."""

    def __init__(self, points: int, limit: int):
        self.points = points
        self.limit = limit
        super().__init__(f"The oracle enumerates 2^n subsets; {points} points exceed the limit of {limit}.")


class Candidate(NamedTuple):
    value: float
    labels: tuple[str, ...]
    mask: int


def _indices(mask: int, n: int) -> list[int]:
    return [i for i in range(n) if mask >> i & 1]


def _evaluate_masks(k: SimilarityKernel, start: int, stop: int, tolerances: Tolerances) -> list[Candidate]:
    """Returns the certified, positively weighted subsets among the bitmasks in [start, stop)."""

    n = k.size
    candidates = []
    for mask in range(start, stop):
        indices = _indices(mask, n)
        w = solve_spd(k.restrict(indices), np.ones(len(indices)), tolerances)
        if np.min(w) < -tolerances.nonnegativity:
            continue

        w = np.maximum(w, 0.0)
        value = math.fsum(w)
        values = np.zeros(n)
        values[indices] = w / value
        if certificate_from_kernel(k, Measure(k.labels, values), tolerances).passed:
            candidates.append(Candidate(value, tuple(sorted(k.labels[i] for i in indices)), mask))
    return candidates


def _evaluate_chunk(arguments: tuple[SimilarityKernel, int, int, Tolerances]) -> list[Candidate]:
    return _evaluate_masks(*arguments)


def select(candidates: list[Candidate], tolerances: Tolerances = Tolerances()) -> Candidate:
    """
    Returns the winning candidate: the largest value; among values within the tie tolerance of it, the
    lexicographically smallest label set. Independent of the order candidates arrive in.
    """

    best = max(candidate.value for candidate in candidates)
    ties = [candidate for candidate in candidates if candidate.value >= best - tolerances.tie * max(1.0, best)]
    return min(ties, key=lambda candidate: candidate.labels)


def _chunks(total: int, parts: int) -> list[tuple[int, int]]:
    bounds = np.linspace(1, total + 1, num=parts + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(bounds, bounds[1:]) if b > a]


def brute_force(
    m: FiniteMetric,
    tolerances: Tolerances = Tolerances(),
    settings: OracleSettings = OracleSettings(),
    workers: int = 1,
) -> DiversitySolution:
    """Returns the maximum diversity of m by enumerating every subset. Exponential in the number of points."""

    if m.size > settings.max_points:
        raise TooLarge(m.size, settings.max_points)
    if m.size == 1:
        return point_solution(m)

    k = build_kernel(m)
    subsets = 2**m.size - 1
    chunks = _chunks(subsets, max(1, workers * CHUNKS_PER_WORKER) if workers > 1 else 1)
    jobs = [(k, start, stop, tolerances) for start, stop in chunks]

    if workers > 1:
        with Pool(workers) as pool:
            results = pool.map(_evaluate_chunk, jobs)
    else:
        results = [_evaluate_chunk(job) for job in jobs]

    candidates = [candidate for result in results for candidate in result]
    logger.debug(f"Oracle: {len(candidates)} certified subset(s) among {subsets}")
    if not candidates:
        raise NoConvergence(f"no positively weighted subset of the {m.size} points passed the certificate")

    winner = select(candidates, tolerances)
    indices = _indices(winner.mask, m.size)
    w = np.maximum(solve_spd(k.restrict(indices), np.ones(len(indices)), tolerances), 0.0)
    values = np.zeros(m.size)
    values[indices] = w / winner.value
    measure = Measure(m.labels, values)

    full = solve_spd(k, np.ones(m.size), tolerances)
    return DiversitySolution(
        measure=measure,
        support=measure.support(tolerances.positivity),
        diversity=winner.value,
        iterations=subsets,
        certificate=certificate_from_kernel(k, measure, tolerances),
        active_set=tuple(m.labels[i] for i in indices),
        magnitude=math.fsum(full),
    )
