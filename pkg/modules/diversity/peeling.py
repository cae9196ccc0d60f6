# Diversity-maximizing measures by peeling
#
# Starting from the whole space, repeatedly solve Z_A w = 1 on the active set A and drop the points whose weight is
# not positive, until the weights are nonnegative. The normalized weights are the diversity-maximizing measure.

# Imports
import logging
import math
from dataclasses import dataclass

import numpy as np

from modules.diversity.certificate import CertificateReport, certificate_from_kernel
from modules.metric.finite_metric import FiniteMetric, Measure
from modules.metric.kernel import build_kernel, solve_spd
from modules.misc.config import Tolerances
from modules.misc.errors import MagDivException

# Set up logging
logger = logging.getLogger(__name__)


# Errors
class NoConvergence(MagDivException):
    """Raised when the active set empties or the loop outlives the number of points."""

    def __init__(self, detail: str):
        super().__init__(f"Diversity maximization did not converge: {detail}")


@dataclass(frozen=True, eq=False)
class DiversitySolution:

    """
    A probability measure proposed as diversity-maximizing, with its certificate.

    measure: The probability measure.
    support: Points carrying mass above the positivity tolerance.
    diversity: |X|_+ = 1 / <mu, mu>_W.
    iterations: Peeling rounds, or subsets enumerated by the oracle.
    certificate: The optimality condition evaluated on the whole space.
    active_set: The last active set (peeling) or the winning subset (oracle).
    magnitude: Total weight of the whole space, when it was computed.
    """

    measure: Measure
    support: tuple[str, ...]
    diversity: float
    iterations: int
    certificate: CertificateReport
    active_set: tuple[str, ...]
    magnitude: float | None = None

    @property
    def certified(self) -> bool:
        return self.certificate.passed

    def __iter__(self):
        yield "diversity", self.diversity
        yield "measure", self.measure.as_mapping()
        yield "support", list(self.support)
        yield "iterations", self.iterations
        yield "active_set", list(self.active_set)
        yield "magnitude", self.magnitude
        yield "certificate", dict(self.certificate)
        yield "certified", self.certified


def point_solution(m: FiniteMetric) -> DiversitySolution:
    """Returns the Dirac measure of a one-point space."""

    label = m.labels[0]
    certificate = CertificateReport(c_value=1.0, max_on_support_deviation=0.0, min_off_support_slack=math.inf, passed=True)
    return DiversitySolution(Measure.dirac(m.labels, label), (label,), 1.0, 0, certificate, (label,), magnitude=1.0)


def peel(m: FiniteMetric, tolerances: Tolerances = Tolerances()) -> DiversitySolution:
    """Returns the diversity-maximizing measure found by peeling, certified against the whole space."""

    if m.size == 1:
        return point_solution(m)

    k = build_kernel(m)
    active = np.ones(m.size, dtype=bool)
    magnitude = None

    for iteration in range(1, m.size + 1):
        indices = np.flatnonzero(active)
        if indices.size == 0:
            raise NoConvergence("the active set became empty")

        w = np.zeros(m.size)
        w[indices] = solve_spd(k.restrict(indices), np.ones(indices.size), tolerances)
        if magnitude is None:
            magnitude = math.fsum(w)

        threshold = tolerances.positivity * float(np.max(np.abs(w)))
        positive = w > threshold
        logger.debug(f"Peeling round {iteration}: {indices.size} active, {int(positive.sum())} positive")

        if np.all(w >= -threshold):
            w[~positive] = 0.0
            break
        active = positive
    else:
        raise NoConvergence(f"no nonnegative weighting after {m.size} rounds")

    diversity = math.fsum(w)
    measure = Measure(m.labels, w / diversity)
    certificate = certificate_from_kernel(k, measure, tolerances)
    support = measure.support(tolerances.positivity)
    if not certificate.passed:
        logger.warning(
            f"Peeling result on {m.size} points is not certified optimal "
            f"(deviation {certificate.max_on_support_deviation:.3g}, slack {certificate.min_off_support_slack:.3g})"
        )

    active_set = tuple(label for label, keep in zip(m.labels, positive) if keep)
    return DiversitySolution(measure, support, diversity, iteration, certificate, active_set, magnitude)
