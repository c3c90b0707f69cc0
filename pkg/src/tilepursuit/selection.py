"""Turning a brushed set of points into a tile.

The rows of the tile are the user's selection; the columns are chosen by
comparing each attribute's spread inside the selection with its spread
over all rows.  A small ratio means the selected points agree on that
attribute more than the data at large does, which is what makes the
attribute part of the observed pattern.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyTileError, InvalidTileError, SelectionTooSmallError
from .tiling import Tile

DEFAULT_TAU = 0.5


@dataclass(frozen=True)
class PointSelection:
    """A brushed set of row indices with a free-text provenance label."""

    row_indices: tuple
    source: str = ""

    def __init__(self, row_indices, source=""):
        rows = tuple(sorted(set(int(r) for r in row_indices)))
        object.__setattr__(self, "row_indices", rows)
        object.__setattr__(self, "source", source)
        if len(rows) < 2:
            raise SelectionTooSmallError("selection needs at least 2 points for spread statistics")
        if rows[0] < 0:
            raise InvalidTileError("row indices must be non-negative")

    def check_shape(self, n):
        if self.row_indices[-1] >= n:
            raise InvalidTileError(f"selection row {self.row_indices[-1]} outside {n} rows")


@dataclass
class ColumnRatio:
    name: str
    selection_std: float
    global_std: float
    ratio: float
    chosen: bool


@dataclass
class AttributeReport:
    """Per-column spread ratios for a selection, at a given threshold."""

    tau: float
    columns: list

    @property
    def chosen_columns(self):
        return [c.name for c in self.columns if c.chosen]

    @property
    def chosen_indices(self):
        return [i for i, c in enumerate(self.columns) if c.chosen]

    def to_json(self):
        return {
            "tau": self.tau,
            "columns": [
                {
                    "name": c.name,
                    "selection_std": c.selection_std,
                    "global_std": c.global_std,
                    "ratio": None if np.isinf(c.ratio) else c.ratio,
                    "chosen": c.chosen,
                }
                for c in self.columns
            ],
        }


def attribute_ratios(data, sel, tau=DEFAULT_TAU):
    """Spread ratio (selection std / global std) for every numeric column.

    Population standard deviations on both sides, so the ratio is
    invariant under affine rescaling of a column.  A globally constant
    column gets ratio +inf and is never chosen: it carries no relation.
    """
    sel.check_shape(data.n_rows)
    rows = np.asarray(sel.row_indices, dtype=np.intp)
    sel_std = data.values[rows].std(axis=0)
    glob_std = data.values.std(axis=0)
    scale = np.maximum(1.0, np.abs(data.values).mean(axis=0))
    columns = []
    for j, name in enumerate(data.col_names):
        if glob_std[j] > 1e-12 * scale[j]:
            ratio = float(sel_std[j] / glob_std[j])
            chosen = ratio < tau
        else:
            ratio = float("inf")
            chosen = False
        columns.append(ColumnRatio(name, float(sel_std[j]), float(glob_std[j]), ratio, chosen))
    return AttributeReport(tau=tau, columns=columns)


def selection_to_tile(data, sel, tau=DEFAULT_TAU):
    """Tile for a brushed pattern: selected rows x columns passing the ratio test."""
    report = attribute_ratios(data, sel, tau=tau)
    cols = report.chosen_indices
    if not cols:
        raise EmptyTileError(
            f"no column has a spread ratio below tau={tau}", report=report
        )
    return Tile(sel.row_indices, cols)


def crosstab(data, column, sel):
    """Category counts of a side column within the selection.

    Every category present in the full column is reported, including
    zero-count ones, so tables for different selections line up.
    """
    if column not in data.side_cols:
        raise KeyError(f"no categorical side column named {column!r}")
    sel.check_shape(data.n_rows)
    side = np.asarray(data.side_cols[column])
    categories = sorted(set(str(v) for v in side))
    rows = np.asarray(sel.row_indices, dtype=np.intp)
    selected = side[rows]
    counts = {cat: 0 for cat in categories}
    for v in selected:
        counts[str(v)] += 1
    return counts
