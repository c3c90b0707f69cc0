"""The German socio-economic district dataset: manifest, groups, stand-in.

The original dataset (412 districts, 46 attributes of which 32 numeric
ones are analysed) is not redistributable with this package.  This module
provides three things:

* the checked-in column manifest and the column groups used by the
  focused hypotheses, valid for the original CSV when the user has it;
* a deterministic synthetic stand-in with the same shape, factor columns
  and cluster structure (East/West split, urban/rural split), calibrated
  so the leading correlation eigenvalue of the 32 scaled attributes
  matches the published analysis of the original data (about 8.8);
* frozen cluster selections (row-index lists) standing in for the manual
  brushing steps of the exploration walkthrough.

Set the ``TILEPURSUIT_GERMAN_CSV`` environment variable (or pass a path)
to run everything against the real file instead.
"""

from __future__ import annotations

import importlib.resources
import json
import os

import numpy as np
import pandas as pd

from .ingestion import frame_to_matrix
from .tiling import HypothesisTilings, Tile

GERMAN_ENV_VAR = "TILEPURSUIT_GERMAN_CSV"

#: calibration constant of the stand-in's latent-factor loadings
SIGNAL_SCALE = 0.96

#: districts per (region, district type); totals match the original data
REGION_TYPE_COUNTS = {
    ("East", "Rural"): 65,
    ("North", "Rural"): 48,
    ("South", "Rural"): 106,
    ("West", "Rural"): 79,
    ("East", "Urban"): 22,
    ("North", "Urban"): 12,
    ("South", "Urban"): 30,
    ("West", "Urban"): 50,
}

STATES_BY_REGION = {
    "East": ["Berlin", "Brandenburg", "Mecklenburg-Vorpommern", "Saxony", "Saxony-Anhalt", "Thuringia"],
    "North": ["Bremen", "Hamburg", "Lower Saxony", "Schleswig-Holstein"],
    "South": ["Bavaria", "Baden-Wuerttemberg"],
    "West": ["Hesse", "North Rhine-Westphalia", "Rhineland-Palatinate", "Saarland"],
}

#: column groups of the focused hypotheses: politics, demographics,
#: workforce, education/employment/income
def _load_packaged_json(name):
    ref = importlib.resources.files("tilepursuit").joinpath("data", name)
    with ref.open() as fh:
        return json.load(fh)


#: checked-in manifest: the 32 analysed numeric columns, the three factor
#: columns, and the column groups used by the focused hypotheses
MANIFEST = _load_packaged_json("german_manifest.json")
NUMERIC_COLUMNS = MANIFEST["numeric"]
CATEGORICAL_COLUMNS = MANIFEST["categorical"]
COLUMN_GROUPS = MANIFEST["groups"]

# attribute -> (east, urban, south, north, noise_std, unit_scale, unit_offset)
_ATTRIBUTE_RECIPE = {
    "LEFT.2009": (2.4, -0.1, 0.0, 0.0, 0.55, 6.0, 12.0),
    "CDU.2009": (-1.6, -0.7, 0.9, 0.0, 0.75, 7.0, 36.0),
    "SPD.2009": (-0.9, 0.5, -0.7, 0.5, 0.85, 6.0, 24.0),
    "FDP.2009": (-1.1, 0.4, 0.4, 0.0, 0.85, 3.0, 14.0),
    "GREEN.2009": (-1.3, 1.1, 0.0, 0.0, 0.7, 4.0, 9.0),
    "Turnout.2009": (-1.5, 0.3, 0.0, 0.0, 0.8, 4.0, 71.0),
    "Elderly.pop.": (1.5, -0.5, 0.0, 0.0, 0.8, 2.0, 12.0),
    "Old.Pop.": (1.9, -0.3, 0.0, 0.0, 0.7, 3.0, 20.0),
    "Mid.aged.Pop.": (0.6, 0.7, 0.0, 0.0, 0.95, 2.5, 30.0),
    "Young.Pop.": (-1.4, 0.9, 0.0, 0.0, 0.8, 2.5, 22.0),
    "Children.Pop.": (-1.9, -0.4, 0.0, 0.0, 0.7, 2.0, 14.0),
    "Agricult..workf.": (0.5, -1.9, 0.0, 0.0, 0.7, 3.0, 4.5),
    "Prod..workf.": (0.3, -0.9, 0.5, 0.0, 0.9, 5.0, 28.0),
    "Manufac..Workf.": (-0.7, -0.8, 0.7, 0.0, 0.85, 5.0, 22.0),
    "Constr..workf.": (1.4, -0.9, 0.0, 0.0, 0.8, 2.0, 7.5),
    "Service.workf.": (-0.2, 1.9, 0.0, 0.0, 0.7, 6.0, 24.0),
    "Trade.workf.": (0.0, 1.2, 0.0, 0.0, 0.9, 3.0, 15.0),
    "Finance.workf.": (-0.8, 1.5, 0.0, 0.0, 0.8, 3.5, 11.0),
    "Pub..serv..workf.": (0.9, 0.8, 0.0, 0.0, 0.9, 2.5, 13.0),
    "Highschool.degree": (-0.5, 1.5, 0.0, 0.0, 0.8, 5.0, 25.0),
    "No.school.degree": (1.1, 0.3, 0.0, 0.0, 0.9, 2.0, 8.0),
    "Unemploy.": (2.2, 0.5, 0.0, 0.0, 0.6, 3.5, 8.5),
    "Unempl..Youth": (2.0, 0.3, 0.0, 0.0, 0.65, 3.0, 9.0),
    "Income": (-1.7, 0.9, 0.5, 0.0, 0.7, 2400.0, 16500.0),
    "Pop.density": (-0.3, 2.1, 0.0, 0.0, 0.65, 450.0, 530.0),
    "Population": (0.0, 1.8, 0.0, 0.0, 0.8, 90000.0, 195000.0),
    "Area": (0.6, -1.2, 0.0, 0.0, 0.9, 380.0, 860.0),
    "GDP.growth": (-0.4, 1.1, 0.0, 0.0, 0.95, 2.2, 1.1),
    "GDP.per.capita": (-1.5, 1.1, 0.0, 0.0, 0.7, 7500.0, 28500.0),
    "Debt.per.capita": (-0.6, 0.8, -0.4, 0.0, 0.95, 600.0, 1400.0),
    "Commuter.balance": (0.0, 1.4, 0.3, 0.0, 0.9, 90.0, -25.0),
    "Life.expectancy": (-1.2, 0.4, 0.6, 0.0, 0.85, 1.1, 79.5),
}


def make_standin_frame(seed=0):
    """Deterministic synthetic district table in raw (unscaled) units.

    Includes the 32 analysed attributes, the three factor columns, and the
    columns the manifest is supposed to exclude (district label,
    coordinates, previous-election results), so ingestion is exercised
    the same way as with the original file.
    """
    rng = np.random.default_rng(np.random.SeedSequence((0xD15C0, seed)))
    region, dtype, state = [], [], []
    for (reg, typ), count in REGION_TYPE_COUNTS.items():
        region += [reg] * count
        dtype += [typ] * count
        state += list(rng.choice(STATES_BY_REGION[reg], size=count))
    region = np.array(region)
    dtype = np.array(dtype)
    state = np.array(state)
    n = len(region)

    east = (region == "East").astype(float)
    south = (region == "South").astype(float)
    north = (region == "North").astype(float)
    urban = (dtype == "Urban").astype(float)
    g = SIGNAL_SCALE

    frame = pd.DataFrame({"District": [f"District.{i + 1:03d}" for i in range(n)]})
    for name, (e, u, s, no, noise, unit, offset) in _ATTRIBUTE_RECIPE.items():
        z = g * (e * east + u * urban + s * south + no * north) + noise * rng.standard_normal(n)
        frame[name] = offset + unit * z
    # previous-election columns: correlated with 2009 plus drift; excluded by the manifest
    for party in ["LEFT", "CDU", "SPD", "FDP", "GREEN"]:
        frame[f"{party}.2005"] = frame[f"{party}.2009"] * (0.9 + 0.05 * rng.standard_normal(n)) + rng.standard_normal(n)
    frame["Latitude"] = 47.5 + 7.5 * rng.random(n)
    frame["Longitude"] = 6.0 + 9.0 * rng.random(n)
    frame["Region"] = region
    frame["Type"] = dtype
    frame["State"] = state
    return frame


def load_german(path=None, seed=0, subsample_n=None, subsample_seed=0):
    """The German data as a scaled DataMatrix: real CSV if available, else stand-in.

    Resolution order: explicit ``path`` argument, then the
    ``TILEPURSUIT_GERMAN_CSV`` environment variable, then the synthetic
    stand-in generated from ``seed``.
    """
    path = path or os.environ.get(GERMAN_ENV_VAR) or None
    if path:
        frame = pd.read_csv(path)
    else:
        frame = make_standin_frame(seed=seed)
    return frame_to_matrix(
        frame,
        numeric_cols=NUMERIC_COLUMNS,
        categorical_cols=CATEGORICAL_COLUMNS,
        subsample_n=subsample_n,
        seed=subsample_seed,
    )


def write_manifest(path):
    with open(path, "w") as fh:
        json.dump(MANIFEST, fh, indent=2)


def frozen_selections():
    """Frozen cluster row-index lists standing in for manual brushing.

    Derived once by running the unguided and focused views on the
    stand-in and selecting the visible clusters; kept under version
    control so walkthroughs and tests replay identically.
    """
    return {name: list(rows) for name, rows in _load_packaged_json("german_selections.json").items()}


def group_column_indices(data):
    """Column indices of the four focus groups, resolved against ``data``."""
    return [
        [data.column_index(c) for c in COLUMN_GROUPS[g]]
        for g in ["politics", "demographics", "workforce", "education_income"]
    ]


def unguided_hypothesis(data):
    return HypothesisTilings.unguided(data.n_rows, data.n_cols)


def focus_hypothesis(data):
    """Rural rows, politics/demographics/workforce/education groups."""
    rural = np.flatnonzero(np.asarray(data.side_cols["Type"]) == "Rural")
    groups = group_column_indices(data)
    cols = [c for blk in groups for c in blk]
    return HypothesisTilings(rural, cols, groups)


def cluster_tile(data, cluster="cluster1", tau=2.0 / 3.0):
    """Background-knowledge tile for a frozen cluster via the spread-ratio rule."""
    from .selection import PointSelection, selection_to_tile

    rows = frozen_selections()[cluster]
    return selection_to_tile(data, PointSelection(rows, source=cluster), tau=tau)
