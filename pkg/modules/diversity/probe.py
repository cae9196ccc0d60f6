# Peeling on planar point sets, checked against the exhaustive oracle
#
# Peeling is proved correct on weighted trees only. On Euclidean point sets the result is certified or reported,
# never assumed; every disagreement with the oracle is kept as a counterexample.

# Imports
import logging
from dataclasses import dataclass, field

import numpy as np

from modules.diversity.oracle import brute_force
from modules.diversity.peeling import peel
from modules.metric.finite_metric import euclidean_metric
from modules.misc.config import OracleSettings, Tolerances
from modules.misc.errors import MagDivException

# Constants
DIVERSITY_AGREEMENT: float = 1e-9

# Set up logging
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Counterexample:

    """A point set on which peeling was uncertified, failed, or disagreed with the oracle."""

    instance: int
    points: list[list[float]]
    reason: str
    peel_diversity: float | None = None
    oracle_diversity: float | None = None
    peel_support: list[str] = field(default_factory=list)
    oracle_support: list[str] = field(default_factory=list)

    def __iter__(self):
        yield "instance", self.instance
        yield "reason", self.reason
        yield "points", self.points
        yield "peel_diversity", self.peel_diversity
        yield "oracle_diversity", self.oracle_diversity
        yield "peel_support", self.peel_support
        yield "oracle_support", self.oracle_support


@dataclass
class ProbeReport:

    """Outcome of a planar probe run."""

    instances: int = 0
    certified: int = 0
    agreed: int = 0
    counterexamples: list[Counterexample] = field(default_factory=list)

    def __iter__(self):
        yield "instances", self.instances
        yield "certified", self.certified
        yield "agreed", self.agreed
        yield "counterexamples", [dict(counterexample) for counterexample in self.counterexamples]


def probe_euclidean(
    count: int = 100,
    min_points: int = 4,
    max_points: int = 12,
    seed: int = 0,
    box: float = 5.0,
    tolerances: Tolerances = Tolerances(),
    settings: OracleSettings = OracleSettings(),
) -> ProbeReport:
    """Runs peeling and the oracle on count random point sets drawn uniformly in the square [0, box]^2."""

    if not 1 <= min_points <= max_points:
        raise ValueError(f"Need 1 <= min_points <= max_points, got ({min_points}, {max_points})")
    if not box > 0:
        raise ValueError(f"Box side '{box}' must be positive")

    rng = np.random.default_rng(seed)
    report = ProbeReport()
    for instance in range(count):
        n = int(rng.integers(min_points, max_points + 1))
        points = rng.uniform(0.0, box, size=(n, 2))
        m = euclidean_metric(points)
        report.instances += 1

        try:
            peeled = peel(m, tolerances)
            exact = brute_force(m, tolerances, settings)
        except MagDivException as error:
            _record(report, Counterexample(instance, points.tolist(), f"{type(error).__name__}: {error.message}"))
            continue

        report.certified += peeled.certified
        agrees = set(peeled.support) == set(exact.support) and abs(peeled.diversity - exact.diversity) <= DIVERSITY_AGREEMENT
        report.agreed += agrees
        if not (agrees and peeled.certified):
            reason = "uncertified" if not peeled.certified else "disagrees with oracle"
            _record(
                report,
                Counterexample(
                    instance,
                    points.tolist(),
                    reason,
                    peeled.diversity,
                    exact.diversity,
                    list(peeled.support),
                    list(exact.support),
                ),
            )

    logger.info(
        f"Planar probe: {report.certified}/{report.instances} certified, {report.agreed}/{report.instances} "
        f"agree with the oracle, {len(report.counterexamples)} counterexample(s)"
    )
    return report


def _record(report: ProbeReport, counterexample: Counterexample) -> None:
    logger.warning(f"Planar probe counterexample #{counterexample.instance}: {counterexample.reason}")
    report.counterexamples.append(counterexample)
