"""Uniform sampling of tile-constrained permutation vectors.

Because a :class:`~tilepursuit.tiling.TileMap` partitions the grid into
rectangles, a uniform draw factorises: one independent uniform shuffle of
each tile's row set, written into every column the tile spans.  Each tile
reads from its own PCG64 stream keyed by ``(seed, draw, tile_id)``, so a
draw is reproducible no matter in which order tiles are visited.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidShapeError


@dataclass(frozen=True)
class SampleConfig:
    """How many surrogate datasets to draw, and from which seed."""

    seed: int = 0
    count: int = 1

    def __post_init__(self):
        if self.count < 1:
            raise InvalidShapeError("sample count must be >= 1")


def _tile_stream(seed, draw, tile_id):
    # draw may be an int or a tuple of ints (e.g. (epoch, side, index));
    # the key is flattened so the stream identity is explicit
    draw_key = tuple(draw) if isinstance(draw, (tuple, list)) else (draw,)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, *draw_key, tile_id))))


def sample_permutation(tmap, seed, draw=0):
    """One uniform draw from the permutation vectors allowed by ``tmap``.

    Returns an ``(n, m)`` image array: output row ``i`` of column ``j``
    takes input row ``perm[i, j]``.  Every cell belongs to exactly one
    tile, so writing each tile's shuffle into its rectangle yields a
    complete, valid vector.
    """
    n, m = tmap.shape
    perm = np.empty((n, m), dtype=np.intp)
    for tile_id, (rows, cols) in tmap.tile_extents().items():
        rng = _tile_stream(seed, draw, tile_id)
        shuffled = rows[rng.permutation(rows.size)]
        perm[np.ix_(rows, cols)] = shuffled[:, None]
    return perm


def sample_dataset(data, tmap, seed, draw=0):
    """Materialise one surrogate dataset: permute each column by one draw.

    Column marginals are preserved exactly; relations inside every tile
    are preserved because the tile's columns share a permutation.
    """
    if data.values.shape != tmap.shape:
        raise InvalidShapeError(
            f"data shape {data.values.shape} != tile map shape {tmap.shape}"
        )
    perm = sample_permutation(tmap, seed, draw=draw)
    values = np.take_along_axis(data.values, perm, axis=0)
    return data.with_values(values)


def sample_datasets(data, tmap, config):
    """Draw ``config.count`` surrogate datasets from independent streams."""
    return [sample_dataset(data, tmap, config.seed, draw=d) for d in range(config.count)]
