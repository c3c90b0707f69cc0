"""The exploration loop's state: data, accumulated knowledge, current view.

A session owns the data matrix, the user's tile map (which only ever
grows), and the hypothesis under investigation.  Every mutation is
appended to a versioned event log; replaying the log against the same
data and seed reproduces the session bit-exactly, which is also how undo
and persistence work.

Views are pure functions of (data, seed, history): the directions come
from analytic covariances and do not depend on sampling; the surrogate
overlays are drawn from streams keyed by the seed and the history length,
so recomputing a view never changes it.
"""

from __future__ import annotations

import json
import uuid
from dataclasses import dataclass, field

import numpy as np

from .covariance import center, hypothesis_covariances
from .errors import InvalidShapeError, InvalidTileError, ReplayError
from .ingestion import DataMatrix
from .projection import ProjectionResult, gain, most_informative_directions, project
from .sampler import sample_dataset
from .selection import PointSelection, attribute_ratios, selection_to_tile
from .tiling import HypothesisTilings, Tile, TileMap

EVENT_SCHEMA_VERSION = 1


@dataclass
class ViewState:
    """Everything a scatter view needs: coordinates, overlays, gain, focus."""

    projection: ProjectionResult
    coords_data: np.ndarray
    samples_h1: list
    samples_h2: list
    focus_rows: np.ndarray
    gain: float

    @property
    def coords_sample_h1(self):
        return self.samples_h1[0] if self.samples_h1 else None

    @property
    def coords_sample_h2(self):
        return self.samples_h2[0] if self.samples_h2 else None

    def axis_labels(self, col_names, top=5):
        """Largest-magnitude loadings per direction, for axis annotation."""
        labels = []
        for k in range(self.projection.num_dirs):
            u = self.projection.directions[:, k]
            order = np.argsort(np.abs(u))[::-1][:top]
            labels.append([{"name": col_names[j], "value": float(u[j])} for j in order])
        return labels

    def to_json(self, col_names=None):
        out = {
            "projection": self.projection.to_json(),
            "gain": self.gain,
            "coords_data": self.coords_data.tolist(),
            "samples_h1": [s.tolist() for s in self.samples_h1],
            "samples_h2": [s.tolist() for s in self.samples_h2],
            "focus_rows": self.focus_rows.tolist(),
        }
        if col_names is not None:
            out["axis_labels"] = self.axis_labels(col_names)
        return out


class Session:
    """Single-writer exploration state machine over one dataset."""

    def __init__(self, data, seed=0, session_id=None):
        if not isinstance(data, DataMatrix):
            raise InvalidShapeError("session needs a DataMatrix")
        self.id = session_id or uuid.uuid4().hex
        self.data = data
        self.seed = int(seed)
        self.user_map = TileMap.baseline(data.n_rows, data.n_cols)
        self.hypothesis = None
        self.history = []
        self._view_cache = {}

    # -- mutations ---------------------------------------------------------

    def set_hypothesis(self, h):
        h.check_shape(*self.data.shape)
        self.hypothesis = h
        self._append({"op": "set_hypothesis", **h.to_json()})
        return self

    def add_tile(self, tile, selection_rows=None, tau=None):
        """Merge a ready-made tile into the background knowledge."""
        tile.check_shape(*self.data.shape)
        self.user_map = self.user_map.merge(tile)
        event = {"op": "add_tile", **tile.to_json()}
        if selection_rows is not None:
            event["selection_rows"] = [int(r) for r in selection_rows]
        if tau is not None:
            event["tau"] = tau
        self._append(event)
        return self

    def add_tile_from_selection(self, sel, tau=0.5):
        """Convert a brushed selection into a tile and merge it."""
        tile = selection_to_tile(self.data, sel, tau=tau)
        return self.add_tile(tile, selection_rows=sel.row_indices, tau=tau)

    def _append(self, event):
        self.history.append(event)
        self._view_cache.clear()

    # -- reads -------------------------------------------------------------

    def selection_report(self, sel, tau=0.5):
        return attribute_ratios(self.data, sel, tau=tau)

    def hypothesis_pair_covariances(self):
        if self.hypothesis is None:
            raise InvalidTileError("no hypothesis set")
        y = center(self.data)
        return hypothesis_covariances(y, self.user_map, self.hypothesis)

    def compute_view(self, num_samples=1, num_dirs=2, floor=None):
        """The most informative view for the current hypothesis.

        Directions and gain are analytic; each surrogate overlay is drawn
        from a stream keyed by (seed, history length, side, index), so a
        view depends only on the session's seed and history.
        """
        if self.hypothesis is None:
            raise InvalidTileError("no hypothesis set")
        key = (len(self.history), num_samples, num_dirs, floor)
        if key in self._view_cache:
            return self._view_cache[key]
        kwargs = {} if floor is None else {"floor": floor}
        cov = self.hypothesis_pair_covariances()
        result = most_informative_directions(cov, num_dirs=num_dirs, **kwargs)
        coords = project(self.data, result)
        map1 = self.user_map.merge_all(self.hypothesis.side1_tiles())
        map2 = self.user_map.merge_all(self.hypothesis.side2_tiles())
        epoch = len(self.history)
        samples_h1 = [
            project(sample_dataset(self.data, map1, self.seed, draw=(epoch, 1, s)), result)
            for s in range(num_samples)
        ]
        samples_h2 = [
            project(sample_dataset(self.data, map2, self.seed, draw=(epoch, 2, s)), result)
            for s in range(num_samples)
        ]
        view = ViewState(
            projection=result,
            coords_data=coords,
            samples_h1=samples_h1,
            samples_h2=samples_h2,
            focus_rows=np.asarray(self.hypothesis.rows, dtype=np.intp),
            gain=float(result.gains[0]),
        )
        self._view_cache[key] = view
        return view

    def gain_matrix(self, pairs, external_dirs=None, floor=None):
        return gain_matrix(self.data, pairs, external_dirs=external_dirs, floor=floor)

    # -- persistence and replay ---------------------------------------------

    def to_json(self, data_ref=None):
        return {
            "version": EVENT_SCHEMA_VERSION,
            "id": self.id,
            "seed": self.seed,
            "data_ref": data_ref,
            "history": self.history,
        }

    def save(self, path, data_ref=None):
        with open(path, "w") as fh:
            json.dump(self.to_json(data_ref=data_ref), fh, indent=2)

    @classmethod
    def replay(cls, data, history, seed=0, session_id=None):
        """Rebuild a session from its event log.

        Events are applied in order; the view cache keying by history
        length makes replayed views identical to the originals.
        """
        session = cls(data, seed=seed, session_id=session_id)
        for offset, event in enumerate(history):
            if not isinstance(event, dict) or "op" not in event:
                raise ReplayError(f"event {offset} lacks an 'op' field", offset=offset)
            op = event["op"]
            try:
                if op == "set_hypothesis":
                    session.set_hypothesis(
                        HypothesisTilings(event["rows"], event["cols"], event["partition"])
                    )
                elif op == "add_tile":
                    session.add_tile(
                        Tile(event["rows"], event["cols"]),
                        selection_rows=event.get("selection_rows"),
                        tau=event.get("tau"),
                    )
                else:
                    raise ReplayError(f"event {offset} has unknown op {op!r}", offset=offset)
            except ReplayError:
                raise
            except Exception as exc:
                raise ReplayError(f"event {offset} failed to apply: {exc}", offset=offset) from exc
        return session


def create_session(data, seed=0):
    return Session(data, seed=seed)


@dataclass
class GainMatrixSpec:
    """One hypothesis pair of a gain table, with its own background tiles."""

    label: str
    hypothesis: HypothesisTilings
    user_tiles: list = field(default_factory=list)


@dataclass
class GainTable:
    """Gains of every direction under every hypothesis pair.

    ``matrix[r][c]`` is the gain of direction ``r`` under pair ``c``;
    the first ``len(pair_labels)`` rows are each pair's own optimal
    direction.  Degenerate evaluations are ``nan`` and listed in
    ``degenerate_cells``.
    """

    pair_labels: list
    direction_labels: list
    directions: np.ndarray  # (m, n_directions)
    matrix: np.ndarray  # (n_directions, n_pairs)
    degenerate_cells: list

    def diagonal_is_columnwise_max(self, tol=1e-9):
        """Each pair's own direction achieves the best gain for that pair
        among all optimal-direction rows."""
        k = len(self.pair_labels)
        block = self.matrix[:k, :k]
        return all(block[c, c] >= np.nanmax(block[:, c]) - tol for c in range(k))

    def to_frame(self):
        import pandas as pd

        return pd.DataFrame(self.matrix, index=self.direction_labels, columns=self.pair_labels)


def gain_matrix(data, pairs, external_dirs=None, floor=None):
    """Cross-evaluate optimal directions of several hypothesis pairs.

    For every pair, its covariances are built from its own background
    tiles merged over the baseline map; the optimal direction of each
    pair plus any externally supplied directions are then evaluated under
    every pair's covariances.
    """
    if not pairs:
        raise InvalidShapeError("need at least one hypothesis pair")
    kwargs = {} if floor is None else {"floor": floor}
    y = center(data)
    baseline = TileMap.baseline(*data.shape)
    covs = []
    optimal = []
    for spec in pairs:
        user = baseline.merge_all(spec.user_tiles)
        cov = hypothesis_covariances(y, user, spec.hypothesis)
        covs.append(cov)
        result = most_informative_directions(cov, num_dirs=1, **kwargs)
        optimal.append(result.directions[:, 0])

    labels = [f"u[{spec.label}]" for spec in pairs]
    directions = list(optimal)
    for name, vec in (external_dirs or {}).items():
        vec = np.asarray(vec, dtype=np.float64).ravel()
        if vec.shape[0] != data.n_cols:
            raise InvalidShapeError(f"external direction {name!r} has wrong length")
        labels.append(name)
        directions.append(vec / np.linalg.norm(vec))

    matrix = np.empty((len(directions), len(pairs)))
    degenerate = []
    for r, u in enumerate(directions):
        for c, cov in enumerate(covs):
            try:
                matrix[r, c] = gain(u, cov, **kwargs)
            except Exception:
                matrix[r, c] = np.nan
                degenerate.append((labels[r], pairs[c].label))
    return GainTable(
        pair_labels=[spec.label for spec in pairs],
        direction_labels=labels,
        directions=np.column_stack(directions),
        matrix=matrix,
        degenerate_cells=degenerate,
    )
