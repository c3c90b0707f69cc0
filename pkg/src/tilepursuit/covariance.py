"""Analytic covariance of tile-constrained permutation distributions.

For a tiling, the covariance of two columns decomposes into the rows that
the tiling permutes together (which keep their exact products) and the
remaining rows, where each value's conditional expectation is the mean of
its tile's rows in that column.  Everything here uses the population
normaliser ``1/n``; external comparisons against ``1/(n-1)`` estimators
must account for that.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidShapeError


@dataclass
class CenteredData:
    """Column-centered values plus the means that were removed."""

    values: np.ndarray
    means: np.ndarray


@dataclass
class CovariancePair:
    """Covariances of the two distributions induced by a hypothesis pair.

    ``sigma1`` belongs to the side that keeps the hypothesis block intact,
    ``sigma2`` to the side that breaks it into partition groups.
    """

    sigma1: np.ndarray
    sigma2: np.ndarray

    @property
    def n_cols(self):
        return self.sigma1.shape[0]


def center(data):
    """Remove column means. Accepts a DataMatrix or a plain 2-D array."""
    values = data.values if hasattr(data, "values") else np.asarray(data, dtype=np.float64)
    if values.ndim != 2 or values.shape[0] < 1:
        raise InvalidShapeError("need a non-empty 2-D matrix")
    means = values.mean(axis=0)
    return CenteredData(values - means, means)


def _tile_means(y, tmap):
    """Matrix of conditional means: entry (i, l) is the mean of column l over
    the rows of the tile containing cell (i, l)."""
    grid = tmap.grid
    n, m = y.shape
    a = np.empty_like(y)
    for l in range(m):
        ids = grid[:, l]
        uniq, inv = np.unique(ids, return_inverse=True)
        sums = np.bincount(inv, weights=y[:, l])
        counts = np.bincount(inv)
        a[:, l] = (sums / counts)[inv]
    return a


def tiling_covariance(y, tmap):
    """Exact covariance matrix of a tiling's permutation distribution.

    Decomposition: with ``a`` the tile-mean matrix, the outer product
    ``a.T a`` covers independently permuted cells; for every tile, rows it
    permutes together contribute their exact cross products in place of
    the mean products.  Cost is O(n*m) for the means plus
    O(sum_t |rows_t| * |cols_t|^2) for the corrections.

    Diagonal entries reduce to the population variance of each column:
    every row is permuted together with itself.
    """
    values = y.values if isinstance(y, CenteredData) else np.asarray(y, dtype=np.float64)
    if values.shape != tmap.shape:
        raise InvalidShapeError(f"data shape {values.shape} != map shape {tmap.shape}")
    n, m = values.shape
    a = _tile_means(values, tmap)
    cov = a.T @ a
    for _, (rows, cols) in tmap.tile_extents().items():
        block = values[np.ix_(rows, cols)]
        mu = a[rows[0], cols]
        correction = block.T @ block - rows.size * np.outer(mu, mu)
        cov[np.ix_(cols, cols)] += correction
    cov /= n
    return 0.5 * (cov + cov.T)


def hypothesis_covariances(y, user_map, h):
    """Covariance pair for user knowledge combined with a hypothesis.

    Each hypothesis side's tiles are merged into a copy of the user's
    map; ``user_map`` itself is never modified.
    """
    map1 = user_map.merge_all(h.side1_tiles())
    map2 = user_map.merge_all(h.side2_tiles())
    sigma1 = tiling_covariance(y, map1)
    sigma2 = tiling_covariance(y, map2)
    return CovariancePair(sigma1, sigma2)
