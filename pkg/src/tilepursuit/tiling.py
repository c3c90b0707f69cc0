"""Combinatorial tiles and the non-overlapping tile map.

A tile marks a block of rows x columns whose joint relations are treated
as known: all columns of the tile must receive the same row permutation,
restricted to the tile's rows.  A :class:`TileMap` stores a complete
non-overlapping tiling of an ``n x m`` grid as an integer ID per cell and
supports merging new (possibly overlapping) tiles while keeping every
tile a combinatorial rectangle.

Indices are 0-based everywhere in this module; presentation layers are
responsible for any 1-based display.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import EnumerationTooLargeError, InvalidPartitionError, InvalidShapeError, InvalidTileError

DEFAULT_ENUMERATION_CAP = 1_000_000


@dataclass(frozen=True)
class Tile:
    """A combinatorial rectangle: a set of rows and a set of columns.

    Rows and columns need not be contiguous.  Stored sorted and
    duplicate-free.
    """

    rows: tuple
    cols: tuple

    def __init__(self, rows, cols):
        object.__setattr__(self, "rows", tuple(sorted(set(int(r) for r in rows))))
        object.__setattr__(self, "cols", tuple(sorted(set(int(c) for c in cols))))
        if not self.rows or not self.cols:
            raise InvalidTileError("tile must have at least one row and one column")
        if self.rows[0] < 0 or self.cols[0] < 0:
            raise InvalidTileError("tile indices must be non-negative")

    def check_shape(self, n, m):
        if self.rows[-1] >= n or self.cols[-1] >= m:
            raise InvalidTileError(
                f"tile extends to ({self.rows[-1]}, {self.cols[-1]}), outside a {n}x{m} grid"
            )

    def to_json(self):
        return {"rows": list(self.rows), "cols": list(self.cols)}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["rows"], obj["cols"])


class TileMap:
    """Non-overlapping tiling of an ``n x m`` grid, one tile ID per cell.

    The baseline state assigns each column its own full-height tile, so
    every cell always belongs to exactly one tile and an unconstrained
    column is simply a single-column tile.  Merging keeps this total:
    every tile ID present occupies a full rows x cols rectangle.

    Instances are value-like: :meth:`merge` returns a new map and never
    mutates its receiver, so maps can be shared freely across threads
    and kept in session histories.
    """

    def __init__(self, grid, next_id=None):
        grid = np.asarray(grid, dtype=np.int64)
        if grid.ndim != 2 or grid.shape[0] < 1 or grid.shape[1] < 1:
            raise InvalidShapeError(f"grid must be 2-D and non-empty, got shape {grid.shape}")
        self.grid = grid
        self.grid.setflags(write=False)
        self.next_id = int(next_id) if next_id is not None else int(grid.max()) + 1
        self._extents = None

    @classmethod
    def baseline(cls, n, m):
        """Per-column tiling: column ``j`` is one full-height tile with ID ``j``."""
        if n < 1 or m < 1:
            raise InvalidShapeError(f"need n >= 1 and m >= 1, got ({n}, {m})")
        grid = np.tile(np.arange(m, dtype=np.int64), (n, 1))
        return cls(grid, next_id=m)

    @property
    def shape(self):
        return self.grid.shape

    @property
    def n_rows(self):
        return self.grid.shape[0]

    @property
    def n_cols(self):
        return self.grid.shape[1]

    def tile_extents(self):
        """Mapping tile ID -> (row indices, column indices), both sorted arrays.

        Computed lazily from the grid in one pass and cached; the grid is
        immutable so the cache never goes stale.
        """
        if self._extents is None:
            n, m = self.grid.shape
            flat = self.grid.ravel()
            order = np.argsort(flat, kind="stable")
            sorted_ids = flat[order]
            boundaries = np.flatnonzero(np.diff(sorted_ids)) + 1
            starts = np.concatenate(([0], boundaries))
            ends = np.concatenate((boundaries, [flat.size]))
            extents = {}
            for s, e in zip(starts, ends):
                cells = order[s:e]
                rows = np.unique(cells // m)
                cols = np.unique(cells % m)
                extents[int(sorted_ids[s])] = (rows, cols)
            self._extents = extents
        return self._extents

    def tiles(self):
        """The current tiling as a list of :class:`Tile`, sorted by ID."""
        return [Tile(rows, cols) for _, (rows, cols) in sorted(self.tile_extents().items())]

    def merge(self, tile):
        """Merge ``tile`` into this tiling and return the resulting map.

        Rows of the new tile are grouped by the exact tuple of tile IDs
        they currently hold across the tile's columns; each group absorbs
        the full column span of the tiles it touches plus the new tile's
        columns, and receives a fresh ID.  Tiles that lose rows this way
        shrink but stay rectangular.  The allowed-permutation set of the
        result is the intersection of this map's allowed set with the set
        allowed by ``tile``.

        Runs in O(n*m) array work plus a lexicographic sort of the
        affected rows.
        """
        n, m = self.grid.shape
        tile.check_shape(n, m)
        rows = np.asarray(tile.rows, dtype=np.intp)
        cols = np.asarray(tile.cols, dtype=np.intp)

        grid = self.grid.copy()
        sub = grid[np.ix_(rows, cols)]
        _, group_ids = np.unique(sub, axis=0, return_inverse=True)

        next_id = self.next_id
        for g in range(group_ids.max() + 1):
            g_rows = rows[group_ids == g]
            absorbed = np.unique(grid[g_rows[0], cols])
            col_mask = np.isin(grid[g_rows, :], absorbed).all(axis=0)
            grid[np.ix_(g_rows, np.flatnonzero(col_mask))] = next_id
            next_id += 1
        return TileMap(grid, next_id=next_id)

    def merge_all(self, tiles):
        out = self
        for t in tiles:
            out = out.merge(t)
        return out

    def rows_permuted_together(self, j, j2):
        """Rows whose values in columns ``j`` and ``j2`` always travel together.

        These are exactly the rows where some tile covers both columns.
        ``j == j2`` returns all rows: a value is trivially permuted
        together with itself.
        """
        n, m = self.grid.shape
        if not (0 <= j < m and 0 <= j2 < m):
            raise InvalidTileError(f"column out of range for {m} columns")
        if j == j2:
            return np.arange(n, dtype=np.intp)
        return np.flatnonzero(self.grid[:, j] == self.grid[:, j2])

    def __eq__(self, other):
        if not isinstance(other, TileMap):
            return NotImplemented
        return self.grid.shape == other.grid.shape and bool(np.array_equal(self.grid, other.grid))

    def __repr__(self):
        n, m = self.grid.shape
        return f"TileMap({n}x{m}, {len(self.tile_extents())} tiles)"

    def to_json(self):
        return {"grid": self.grid.tolist(), "next_id": self.next_id}

    @classmethod
    def from_json(cls, obj):
        return cls(np.asarray(obj["grid"]), next_id=obj["next_id"])


def new_tilemap(n, m):
    """Baseline map for an ``n x m`` dataset: each column one tile."""
    return TileMap.baseline(n, m)


def merge_tile(tmap, tile):
    """Pure merge: returns a new map, ``tmap`` is untouched."""
    return tmap.merge(tile)


@dataclass(frozen=True)
class HypothesisTilings:
    """A focus area plus a column partition describing relations of interest.

    ``rows`` and ``cols`` delimit the block under investigation; the
    partition splits ``cols`` into groups whose *mutual* relations the
    user wants to probe.  Side 1 keeps the whole block together, side 2
    only each partition group, so any difference between the two induced
    distributions is due to cross-group relations.
    """

    rows: tuple
    cols: tuple
    partition: tuple = field(default=None)

    def __init__(self, rows, cols, partition=None):
        rows = tuple(sorted(set(int(r) for r in rows)))
        cols = tuple(sorted(set(int(c) for c in cols)))
        if partition is None:
            blocks = tuple((c,) for c in cols)
        else:
            blocks = tuple(tuple(sorted(set(int(c) for c in blk))) for blk in partition)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "partition", blocks)
        if not rows or not cols:
            raise InvalidTileError("hypothesis needs at least one row and one column")
        seen = [c for blk in blocks for c in blk]
        if len(seen) != len(set(seen)):
            raise InvalidPartitionError("partition blocks overlap")
        if not blocks or set(seen) != set(cols):
            raise InvalidPartitionError("partition must cover the hypothesis columns exactly")

    @classmethod
    def unguided(cls, n, m):
        """Full-grid hypothesis with singleton groups: all relations are of interest."""
        return cls(range(n), range(m))

    def check_shape(self, n, m):
        if self.rows[-1] >= n or self.cols[-1] >= m:
            raise InvalidTileError(f"hypothesis extends outside a {n}x{m} grid")

    def side1_tiles(self):
        return [Tile(self.rows, self.cols)]

    def side2_tiles(self):
        return [Tile(self.rows, blk) for blk in self.partition]

    def to_json(self):
        return {
            "rows": list(self.rows),
            "cols": list(self.cols),
            "partition": [list(b) for b in self.partition],
        }

    @classmethod
    def from_json(cls, obj):
        return cls(obj["rows"], obj["cols"], obj["partition"])


def hypothesis_tilings(h):
    """The two tile lists induced by a hypothesis: (kept-together, split-by-group)."""
    return h.side1_tiles(), h.side2_tiles()


def is_allowed(perm_vector, tiles, shape=None):
    """Whether a vector of column permutations satisfies every tile constraint.

    ``perm_vector`` is an ``(n, m)`` integer array whose column ``j`` is the
    image vector of that column's permutation: output row ``i`` of column
    ``j`` takes input row ``perm_vector[i, j]``.  A tile ``(R, C)`` demands
    that for rows in ``R`` all columns of ``C`` agree and map into ``R``.
    """
    p = np.asarray(perm_vector)
    if p.ndim != 2:
        raise InvalidShapeError("permutation vector must be an (n, m) array")
    n, m = p.shape
    if shape is not None and (n, m) != tuple(shape):
        raise InvalidShapeError(f"permutation vector shape {(n, m)} != expected {tuple(shape)}")
    for j in range(m):
        col = np.sort(p[:, j])
        if not np.array_equal(col, np.arange(n)):
            raise InvalidShapeError(f"column {j} is not a permutation of 0..{n - 1}")
    for t in tiles:
        t.check_shape(n, m)
        sub = p[np.ix_(t.rows, t.cols)]
        if not (sub == sub[:, :1]).all():
            return False
        if not np.isin(sub[:, 0], t.rows).all():
            return False
    return True


def _permutation_tensor(n, m):
    """All (n!)^m permutation vectors as an (n!^m, n, m) tensor, in a fixed order.

    The order is the lexicographic product of ``itertools.permutations``
    per column, so masks produced against this tensor are comparable
    across calls.
    """
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int16)
    k = len(perms)
    total = k**m
    idx = np.indices([k] * m).reshape(m, total).T  # row -> per-column permutation index
    return perms[idx].transpose(0, 2, 1).copy()  # (total, n, m)


def allowed_mask(tiles, n, m, cap=DEFAULT_ENUMERATION_CAP):
    """Boolean mask over the canonical enumeration of all permutation vectors.

    Brute-force test oracle: applies the tile condition to every vector.
    Masks from different tile sets at the same (n, m) can be compared or
    intersected directly.
    """
    total = math.factorial(n) ** m
    if total > cap:
        raise EnumerationTooLargeError(f"(n!)^m = {total} exceeds cap {cap}")
    tensor = _permutation_tensor(n, m)
    mask = np.ones(tensor.shape[0], dtype=bool)
    for t in tiles:
        t.check_shape(n, m)
        rows = np.asarray(t.rows, dtype=np.intp)
        cols = np.asarray(t.cols, dtype=np.intp)
        sub = tensor[:, rows][:, :, cols]
        mask &= (sub == sub[:, :, :1]).all(axis=(1, 2))
        in_rows = np.isin(sub[:, :, 0], rows).all(axis=1)
        mask &= in_rows
    return tensor, mask


def enumerate_allowed(tiles, n, m, cap=DEFAULT_ENUMERATION_CAP):
    """Exact set of allowed permutation vectors, by exhaustive filtering.

    Each vector is returned as a tuple of ``m`` column permutations (each
    itself a tuple of images), hashable for set algebra in tests.
    """
    tensor, mask = allowed_mask(tiles, n, m, cap=cap)
    allowed = tensor[mask]
    return {tuple(tuple(int(v) for v in vec[:, j]) for j in range(m)) for vec in allowed}


def vector_from_columns(columns):
    """Build an (n, m) permutation-vector array from per-column image tuples."""
    return np.array(columns, dtype=np.intp).T


def tilemap_to_json(tmap):
    return json.dumps(tmap.to_json())


def tilemap_from_json(text):
    return TileMap.from_json(json.loads(text))
