# The similarity kernel Z(x, y) = exp(-d(x, y)), its bilinear form and positive definite solves

# Imports
import logging
from dataclasses import dataclass
from typing import Self, Sequence

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from modules.metric.finite_metric import DimensionMismatch, FiniteMetric, Measure
from modules.misc.config import Tolerances
from modules.misc.errors import MagDivException

# Set up logging
logger = logging.getLogger(__name__)


# Errors
class NotPositiveDefinite(MagDivException):
    """Raised when a kernel cannot be solved as a symmetric positive definite system."""

    def __init__(self, size: int, detail: str):
        self.size = size
        super().__init__(
            f"Similarity kernel of {size} point(s) is not positive definite at this scale: {detail}. "
            "The metric may not be of negative type."
        )


@dataclass(frozen=True, eq=False)
class SimilarityKernel:

    """The similarity matrix z[i, j] = exp(-dist[i, j]) of a labelled finite metric space."""

    labels: tuple[str, ...]
    z: np.ndarray

    @property
    def size(self) -> int:
        return len(self.labels)

    def restrict(self, indices: Sequence[int]) -> Self:
        """Returns the principal submatrix on the given point positions."""

        indices = list(indices)
        z = self.z[np.ix_(indices, indices)]
        z.setflags(write=False)
        return SimilarityKernel(tuple(self.labels[i] for i in indices), z)

    def apply(self, values: np.ndarray) -> np.ndarray:
        """Returns Z v, the function x -> sum_y Z(x, y) v(y)."""

        values = np.asarray(values, dtype=float)
        if values.shape != (self.size,):
            raise DimensionMismatch(self.size, values.size)
        return self.z @ values


def build_kernel(m: FiniteMetric) -> SimilarityKernel:
    """Returns the similarity kernel of the metric space."""

    z = np.exp(-m.dist)
    np.fill_diagonal(z, 1.0)
    z.setflags(write=False)
    return SimilarityKernel(m.labels, z)


def bilinear_form(k: SimilarityKernel, a: Measure, b: Measure) -> float:
    """Returns <a, b>_W = a^T Z b, the average similarity between independent samples of a and b."""

    if a.values.size != k.size:
        raise DimensionMismatch(k.size, a.values.size)
    if b.values.size != k.size:
        raise DimensionMismatch(k.size, b.values.size)
    return float(a.values @ (k.z @ b.values))


def is_positive_definite(k: SimilarityKernel) -> bool:
    """Returns whether every eigenvalue of the kernel is strictly positive."""

    return bool(np.linalg.eigvalsh(k.z)[0] > 0.0)


def solve_spd(k: SimilarityKernel, rhs: np.ndarray, tolerances: Tolerances = Tolerances()) -> np.ndarray:
    """
    Returns v with Z v = rhs by an unpivoted Cholesky factorization.

    The answer is only returned when ||Z v - rhs||_inf <= residual * (1 + ||rhs||_inf); a failed factorization
    or a larger residual raises NotPositiveDefinite.
    """

    rhs = np.asarray(rhs, dtype=float)
    if rhs.shape != (k.size,):
        raise DimensionMismatch(k.size, rhs.size)

    try:
        factor = cho_factor(k.z, lower=True, check_finite=False)
    except LinAlgError as error:
        raise NotPositiveDefinite(k.size, "nonpositive pivot in the Cholesky factorization") from error

    v = cho_solve(factor, rhs, check_finite=False)
    residual = float(np.max(np.abs(k.z @ v - rhs))) if k.size else 0.0
    bound = tolerances.residual * (1.0 + float(np.max(np.abs(rhs), initial=0.0)))
    logger.debug(f"SPD solve of size {k.size}: residual {residual:.3g} (bound {bound:.3g})")

    if not np.all(np.isfinite(v)) or residual > bound:
        raise NotPositiveDefinite(k.size, f"solve residual {residual:.3g} exceeds {bound:.3g}")
    return v
