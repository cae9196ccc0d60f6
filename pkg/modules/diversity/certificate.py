# Optimality certificate for diversity-maximizing measures
#
# A probability measure mu maximizes 1 / <mu, mu>_W exactly when Z mu = C on its support and Z mu >= C everywhere,
# with C = <mu, mu>_W.

# Imports
import logging
import math
from dataclasses import dataclass

import numpy as np

from modules.metric.finite_metric import DimensionMismatch, FiniteMetric, Measure
from modules.metric.kernel import SimilarityKernel, build_kernel
from modules.misc.config import Tolerances
from modules.misc.converter import json_number

# Set up logging
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CertificateReport:

    """
    Evaluation of the optimality condition for a probability measure.

    c_value: C = <mu, mu>_W, the reciprocal of the diversity of mu.
    max_on_support_deviation: max |Z mu - C| over the support.
    min_off_support_slack: min (Z mu - C) off the support; +inf when the support is everything.
    passed: Both conditions hold within the certificate tolerance.
    """

    c_value: float
    max_on_support_deviation: float
    min_off_support_slack: float
    passed: bool

    def __iter__(self):
        yield "c_value", json_number(self.c_value)
        yield "max_on_support_deviation", json_number(self.max_on_support_deviation)
        yield "min_off_support_slack", json_number(self.min_off_support_slack)
        yield "passed", self.passed


def certificate_from_kernel(k: SimilarityKernel, mu: Measure, tolerances: Tolerances = Tolerances()) -> CertificateReport:
    """Evaluates the optimality condition of mu against a prebuilt kernel."""

    if mu.values.size != k.size:
        raise DimensionMismatch(k.size, mu.values.size)
    if mu.labels != k.labels:
        raise ValueError("Measure and kernel must list the same points in the same order")

    z_mu = k.z @ mu.values
    c_value = float(mu.values @ z_mu)
    support = set(mu.support(tolerances.positivity))
    on_support = np.array([label in support for label in mu.labels])

    deviation = float(np.max(np.abs(z_mu[on_support] - c_value))) if on_support.any() else math.inf
    slack = float(np.min(z_mu[~on_support] - c_value)) if (~on_support).any() else math.inf
    passed = deviation <= tolerances.certificate and slack >= -tolerances.certificate
    return CertificateReport(c_value, deviation, slack, passed)


def verify_certificate(m: FiniteMetric, mu: Measure, tolerances: Tolerances = Tolerances()) -> CertificateReport:
    """Returns how closely mu satisfies Z mu = C on its support and Z mu >= C on the whole space."""

    if not mu.is_probability(tol=1e-9):
        logger.warning(f"Certificate requested for a measure that is not a probability measure (total {mu.total})")
    report = certificate_from_kernel(build_kernel(m), mu, tolerances)
    logger.debug(f"Certificate: {dict(report)}")
    return report
