"""Loading, scaling and generating numeric data matrices.

Numeric columns are z-scored with the population standard deviation so a
column's variance is exactly 1 afterwards; categorical columns ride along
as side columns for interpreting selections.  Rows with unparsable or
missing numeric cells are dropped (and counted) rather than imputed.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from .errors import IngestionError, InvalidShapeError


@dataclass
class ColumnScaling:
    """Per-column affine transform that was applied: x -> (x - mean) / std."""

    mean: np.ndarray
    std: np.ndarray
    constant: np.ndarray  # columns whose std divisor was replaced by 1

    @classmethod
    def identity(cls, m):
        return cls(np.zeros(m), np.ones(m), np.zeros(m, dtype=bool))


@dataclass
class DataMatrix:
    """An ``n x m`` real matrix with named columns and categorical side columns."""

    values: np.ndarray
    col_names: list
    scaling: ColumnScaling
    side_cols: dict = field(default_factory=dict)
    dropped_rows: int = 0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2 or self.values.shape[0] < 1 or self.values.shape[1] < 1:
            raise InvalidShapeError(f"values must be a non-empty 2-D matrix, got {self.values.shape}")
        if len(self.col_names) != self.values.shape[1]:
            raise InvalidShapeError("col_names length must match the number of columns")
        for name, col in self.side_cols.items():
            if len(col) != self.values.shape[0]:
                raise InvalidShapeError(f"side column {name!r} is not row-aligned")

    @property
    def shape(self):
        return self.values.shape

    @property
    def n_rows(self):
        return self.values.shape[0]

    @property
    def n_cols(self):
        return self.values.shape[1]

    def column_index(self, name):
        try:
            return self.col_names.index(name)
        except ValueError:
            raise KeyError(f"no numeric column named {name!r}") from None

    def with_values(self, values):
        """Same metadata, new value matrix (used for surrogate datasets)."""
        values = np.asarray(values, dtype=np.float64)
        if values.shape != self.values.shape:
            raise InvalidShapeError("replacement values must keep the shape")
        return DataMatrix(values, list(self.col_names), self.scaling, dict(self.side_cols))

    def subset_rows(self, rows):
        rows = np.asarray(rows, dtype=np.intp)
        side = {name: np.asarray(col)[rows] for name, col in self.side_cols.items()}
        return DataMatrix(
            self.values[rows],
            list(self.col_names),
            self.scaling,
            side,
            dropped_rows=self.dropped_rows,
        )

    def unscale(self):
        """Values mapped back to original units."""
        return self.values * self.scaling.std + self.scaling.mean

    def to_frame(self, unscaled=False):
        vals = self.unscale() if unscaled else self.values
        frame = pd.DataFrame(vals, columns=self.col_names)
        for name, col in self.side_cols.items():
            frame[name] = np.asarray(col)
        return frame

    def write_csv(self, path, unscaled=False):
        self.to_frame(unscaled=unscaled).to_csv(path, index=False)


def scale_columns(values):
    """Z-score with population std; constant columns get divisor 1 and a flag."""
    values = np.asarray(values, dtype=np.float64)
    mean = values.mean(axis=0)
    std = values.std(axis=0)
    constant = std <= 1e-12 * np.maximum(1.0, np.abs(mean))
    divisor = np.where(constant, 1.0, std)
    scaled = (values - mean) / divisor
    return scaled, ColumnScaling(mean, divisor, constant)


def from_values(values, col_names=None, side_cols=None, scale=True):
    """Wrap a raw matrix, optionally z-scoring it first."""
    values = np.asarray(values, dtype=np.float64)
    if col_names is None:
        col_names = [f"x{j}" for j in range(values.shape[1])]
    if scale:
        scaled, scaling = scale_columns(values)
    else:
        scaled, scaling = values, ColumnScaling.identity(values.shape[1])
    return DataMatrix(scaled, list(col_names), scaling, dict(side_cols or {}))


def load_manifest(path):
    """Column manifest: which columns are numeric (kept) and which categorical."""
    with open(path) as fh:
        manifest = json.load(fh)
    if "numeric" not in manifest:
        raise IngestionError(f"manifest {path} lacks a 'numeric' column list")
    manifest.setdefault("categorical", [])
    return manifest


def load_csv(
    path,
    delimiter=",",
    categorical_cols=(),
    drop_cols=(),
    numeric_cols=None,
    manifest=None,
    subsample_n=None,
    seed=0,
):
    """Load a CSV with a header row into a scaled :class:`DataMatrix`.

    ``manifest`` (a path or dict) overrides the explicit column options.
    Rows containing an unparsable or missing numeric value are dropped
    with a warning; if nothing is left that is an error.  Subsampling is
    a uniform row draw without replacement, deterministic in ``seed``.
    """
    if manifest is not None:
        if not isinstance(manifest, dict):
            manifest = load_manifest(manifest)
        numeric_cols = manifest["numeric"]
        categorical_cols = manifest.get("categorical", [])

    try:
        frame = pd.read_csv(path, delimiter=delimiter)
    except Exception as exc:
        raise IngestionError(f"could not read {path}: {exc}") from exc
    if frame.shape[0] == 0:
        raise IngestionError(f"{path} contains no data rows")
    return frame_to_matrix(
        frame,
        numeric_cols=numeric_cols,
        categorical_cols=categorical_cols,
        drop_cols=drop_cols,
        subsample_n=subsample_n,
        seed=seed,
    )


def frame_to_matrix(frame, numeric_cols=None, categorical_cols=(), drop_cols=(), subsample_n=None, seed=0):
    """Scaled DataMatrix from an in-memory table; shared core of :func:`load_csv`."""
    frame = frame.drop(columns=[c for c in drop_cols if c in frame.columns])

    categorical_cols = [c for c in categorical_cols]
    missing = [c for c in categorical_cols if c not in frame.columns]
    if missing:
        raise IngestionError(f"categorical columns not in file: {missing}")

    if numeric_cols is None:
        numeric_cols = [c for c in frame.columns if c not in categorical_cols]
    else:
        missing = [c for c in numeric_cols if c not in frame.columns]
        if missing:
            raise IngestionError(f"numeric columns not in file: {missing}")

    numeric = frame[numeric_cols].apply(pd.to_numeric, errors="coerce")
    good = ~numeric.isna().any(axis=1)
    dropped = int((~good).sum())
    if dropped:
        warnings.warn(f"dropped {dropped} rows with missing or unparsable numeric cells")
    if not good.any():
        raise IngestionError("all rows dropped while parsing numeric columns")
    numeric = numeric[good]
    frame = frame[good]

    if subsample_n is not None and subsample_n < numeric.shape[0]:
        rng = np.random.default_rng(seed)
        keep = np.sort(rng.choice(numeric.shape[0], size=subsample_n, replace=False))
        numeric = numeric.iloc[keep]
        frame = frame.iloc[keep]

    side = {c: frame[c].to_numpy() for c in categorical_cols}
    scaled, scaling = scale_columns(numeric.to_numpy(dtype=np.float64))
    return DataMatrix(scaled, list(numeric_cols), scaling, side, dropped_rows=dropped)


def make_toy(n=400, rho=0.99, noise_c=0.5, noise_d=0.5, seed=0):
    """Four-column toy dataset: A and B strongly correlated, C and D noisy copies.

    A is standard normal, B correlates with A at ``rho``; C adds noise to
    A and D adds noise to B, so C and D are related only through the A-B
    link.  Columns are z-scored afterwards.
    """
    if n < 10:
        raise InvalidShapeError("toy data needs n >= 10")
    rng = np.random.default_rng(seed)
    a = rng.standard_normal(n)
    b = rho * a + np.sqrt(max(0.0, 1.0 - rho**2)) * rng.standard_normal(n)
    c = a + noise_c * rng.standard_normal(n)
    d = b + noise_d * rng.standard_normal(n)
    return from_values(np.column_stack([a, b, c, d]), ["A", "B", "C", "D"])


def perturb(data, sigma, delta_n, seed=0):
    """Noisy, row-thinned copy: drop ``delta_n`` random rows, add N(0, sigma^2), rescale.

    With ``sigma == 0`` and ``delta_n == 0`` the data is returned
    unchanged (bit-identical), so downstream comparisons against the
    unperturbed pipeline are exact.
    """
    n = data.n_rows
    if delta_n >= n:
        raise InvalidShapeError(f"cannot remove {delta_n} of {n} rows")
    if sigma == 0 and delta_n == 0:
        return data
    rng = np.random.default_rng(seed)
    keep = np.sort(rng.choice(n, size=n - delta_n, replace=False))
    out = data.subset_rows(keep)
    values = out.values
    if sigma > 0:
        values = values + sigma * rng.standard_normal(values.shape)
    scaled, scaling = scale_columns(values)
    return DataMatrix(scaled, list(out.col_names), scaling, out.side_cols, dropped_rows=out.dropped_rows)
