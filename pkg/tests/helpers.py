"""Shared test utilities: brute-force oracles and random-instance generators.

The covariance oracle here is deliberately independent of the analytic
implementation: it materialises every allowed permutation of the data and
averages the plain cross products, accumulating in extended precision.
"""

import numpy as np

from tilepursuit.tiling import Tile, TileMap, allowed_mask


def random_tiles(rng, n, m, max_tiles=3, min_tiles=0):
    tiles = []
    for _ in range(int(rng.integers(min_tiles, max_tiles + 1))):
        rows = rng.choice(n, size=rng.integers(1, n + 1), replace=False)
        cols = rng.choice(m, size=rng.integers(1, m + 1), replace=False)
        tiles.append(Tile(rows, cols))
    return tiles


def random_map(rng, n, m, max_tiles=3, min_tiles=0):
    tiles = random_tiles(rng, n, m, max_tiles=max_tiles, min_tiles=min_tiles)
    return TileMap.baseline(n, m).merge_all(tiles), tiles


def brute_covariance(y, tiles, n, m, cap=2_000_000):
    """Exact covariance under the uniform distribution over allowed vectors.

    Enumerates the full permutation space, filters by the tile condition,
    materialises each permuted dataset and averages its cross-product
    matrix in extended precision.
    """
    tensor, mask = allowed_mask(tiles, n, m, cap=cap)
    vectors = tensor[mask]
    count = vectors.shape[0]
    cols = np.arange(m)
    total = np.zeros((m, m), dtype=np.longdouble)
    for start in range(0, count, 200_000):
        chunk = vectors[start:start + 200_000]
        permuted = y[chunk, cols]  # (k, n, m)
        total += np.einsum("kij,kil->kjl", permuted, permuted).sum(axis=0, dtype=np.longdouble)
    return np.asarray(total / (count * n), dtype=np.float64)


def random_psd(rng, m, cond=100.0):
    """Random symmetric PSD matrix with bounded condition number."""
    q, _ = np.linalg.qr(rng.standard_normal((m, m)))
    lam = np.geomspace(1.0 / cond, 1.0, m)
    return (q * lam) @ q.T
