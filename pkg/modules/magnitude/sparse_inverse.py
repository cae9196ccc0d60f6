# The inverse similarity kernel of a weighted tree
#
# Z^-1 is supported on the diagonal and on the edges:
#     Z^-1(x, x) = 1 + sum_{e at x} exp(-2 l(e)) / (1 - exp(-2 l(e)))
#     Z^-1(x, y) = -exp(-l(e)) / (1 - exp(-2 l(e)))      for an edge e = {x, y}
# and vanishes for non-adjacent pairs.

# Imports
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from modules.tree.weighted_tree import WeightedTree


@dataclass(frozen=True, eq=False)
class SparseInverse:

    """
    Diagonal and per-edge entries of the inverse kernel of a weighted tree.

    labels: Vertex labels indexing the matrix.
    diag: One diagonal entry per vertex.
    edges: Vertex positions (i, j) of every edge.
    offdiag: One entry per edge, shared by (i, j) and (j, i).
    """

    labels: tuple[str, ...]
    diag: np.ndarray
    edges: tuple[tuple[int, int], ...]
    offdiag: np.ndarray

    @property
    def nnz(self) -> int:
        """Number of stored values: |V| diagonal entries and |V| - 1 edge entries."""
        return self.diag.size + self.offdiag.size

    def to_sparse(self) -> sp.csr_matrix:
        n = len(self.labels)
        rows = np.array([i for i, _ in self.edges], dtype=int)
        cols = np.array([j for _, j in self.edges], dtype=int)
        matrix = sp.coo_matrix(
            (
                np.concatenate([self.diag, self.offdiag, self.offdiag]),
                (np.concatenate([np.arange(n), rows, cols]), np.concatenate([np.arange(n), cols, rows])),
            ),
            shape=(n, n),
        )
        return matrix.tocsr()

    def to_dense(self) -> np.ndarray:
        return self.to_sparse().toarray()


def sparse_inverse(t: WeightedTree) -> SparseInverse:
    """Returns the inverse kernel of the tree in diagonal-plus-edges form."""

    diag = np.ones(t.size)
    edges = []
    offdiag = np.empty(len(t.edges))
    for k, (u, v, length) in enumerate(t.edges):
        i, j = t.positions[u], t.positions[v]
        # 1 - exp(-2l) through expm1 stays accurate for short edges.
        denominator = -math.expm1(-2.0 * length)
        ratio = math.exp(-2.0 * length) / denominator
        diag[i] += ratio
        diag[j] += ratio
        edges.append((i, j))
        offdiag[k] = -math.exp(-length) / denominator
    return SparseInverse(t.vertices, diag, tuple(edges), offdiag)
