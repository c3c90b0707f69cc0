"""Reproducible experiment harness: stability, runtime scaling, gain tables,
and the scripted exploration walkthrough.

Every experiment is deterministic under its seed except wall-clock
columns, and writes plain CSV/JSON (plus SVG plots where applicable) into
an output directory.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from . import german
from .covariance import center, hypothesis_covariances
from .errors import IngestionError
from .ingestion import from_values, perturb
from .projection import gain, most_informative_directions
from .selection import PointSelection, crosstab
from .session import GainMatrixSpec, Session, gain_matrix
from .tiling import HypothesisTilings, Tile, TileMap

DEFAULT_SIGMAS = (0.0, 1.0, 10.0)
DEFAULT_DELTA_NS = (0, 200)
DEFAULT_SCALING_SIZES = ((1000, 10), (10000, 10), (1000, 100), (10000, 100), (1000, 200), (10000, 200))


@dataclass
class ExperimentSpec:
    """Parameters shared by the experiment commands."""

    name: str
    out_dir: str
    seed: int = 0
    repeats: int = 20
    sigmas: tuple = DEFAULT_SIGMAS
    delta_ns: tuple = DEFAULT_DELTA_NS
    sizes: tuple = DEFAULT_SCALING_SIZES
    german_csv: str = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.repeats < 1:
            raise ValueError("repeats must be >= 1")
        if not self.sigmas or not self.delta_ns or not self.sizes:
            raise ValueError("parameter grids must be non-empty")

    def out_path(self, name):
        path = Path(self.out_dir)
        path.mkdir(parents=True, exist_ok=True)
        return path / name


def _draw_factor_tile(data, rng, col_range=(2, 32)):
    """Random tile defined by a factor level (rows) and a random column set."""
    factors = list(data.side_cols)
    if not factors:
        raise IngestionError("stability protocol needs at least one categorical factor")
    for _ in range(100):
        factor = factors[rng.integers(len(factors))]
        side = np.asarray(data.side_cols[factor])
        levels = sorted(set(side))
        level = levels[rng.integers(len(levels))]
        rows = np.flatnonzero(side == level)
        if rows.size >= 2:
            lo, hi = col_range
            k = int(rng.integers(lo, min(hi, data.n_cols) + 1))
            cols = np.sort(rng.choice(data.n_cols, size=k, replace=False))
            return factor, level, cols
    raise IngestionError("could not draw a non-trivial factor tile")


def _materialize(data, factor, level, cols):
    rows = np.flatnonzero(np.asarray(data.side_cols[factor]) == level)
    if rows.size == 0:
        return None
    return Tile(rows, cols)


def _optimal_direction(data, background_tiles, hypothesis, num_dirs=1):
    y = center(data)
    user = TileMap.baseline(*data.shape).merge_all(background_tiles)
    cov = hypothesis_covariances(y, user, hypothesis)
    return most_informative_directions(cov, num_dirs=num_dirs), cov


def run_stability(spec, data=None):
    """Sensitivity of the optimal gain to noise and row removal.

    Per repeat: three random factor tiles form the background, a fourth
    one the hypothesis (its block kept together vs. split per column).
    The optimum on perturbed data is scored on the unperturbed
    covariances; the error is how much gain it gives up against the
    unperturbed optimum.  Averages over repeats per grid point.
    """
    if data is None:
        data = german.load_german(path=spec.german_csv)
    records = []
    for rep in range(spec.repeats):
        rng = np.random.default_rng(np.random.SeedSequence((spec.seed, rep)))
        background = [_draw_factor_tile(data, rng) for _ in range(3)]
        hypo_factor, hypo_level, hypo_cols = _draw_factor_tile(data, rng)

        bg_tiles = [_materialize(data, f, lv, cc) for f, lv, cc in background]
        hypo_rows = np.flatnonzero(np.asarray(data.side_cols[hypo_factor]) == hypo_level)
        hypothesis = HypothesisTilings(hypo_rows, hypo_cols)
        result, cov = _optimal_direction(data, bg_tiles, hypothesis)
        # score the optimum through the same evaluation path as the perturbed
        # direction, so identical directions give error 0 exactly
        best = gain(result.directions[:, 0], cov)

        for sigma in spec.sigmas:
            for delta_n in spec.delta_ns:
                pert = perturb(data, sigma, delta_n, seed=np.random.SeedSequence((spec.seed, rep, int(sigma * 1000), delta_n)))
                pert_bg = [t for t in (_materialize(pert, f, lv, cc) for f, lv, cc in background) if t is not None]
                pert_rows = np.flatnonzero(np.asarray(pert.side_cols[hypo_factor]) == hypo_level)
                pert_h = HypothesisTilings(pert_rows, hypo_cols)
                pert_result, _ = _optimal_direction(pert, pert_bg, pert_h)
                u_star = pert_result.directions[:, 0]
                records.append(
                    {
                        "sigma": sigma,
                        "delta_n": delta_n,
                        "repeat": rep,
                        "error": best - gain(u_star, cov),
                    }
                )
    detail = pd.DataFrame.from_records(records)
    table = (
        detail.groupby(["sigma", "delta_n"], as_index=False)["error"]
        .mean()
        .rename(columns={"error": "mean_error"})
    )
    detail.to_csv(spec.out_path("stability_repeats.csv"), index=False)
    table.to_csv(spec.out_path("stability.csv"), index=False)
    return table


def _random_scaling_tile(rng, n, m, col_range=(2, 32)):
    size = int(rng.integers(max(2, n // 10), max(3, n // 2 + 1)))
    rows = np.sort(rng.choice(n, size=size, replace=False))
    k = int(rng.integers(col_range[0], min(col_range[1], m) + 1))
    cols = np.sort(rng.choice(m, size=k, replace=False))
    return Tile(rows, cols)


def run_scaling(spec):
    """Median wall-clock time of model updates and view optimisation.

    ``t_model`` covers merging three random background tiles plus the
    hypothesis tiles into the baseline map; ``t_view`` covers building
    the covariance pair and solving for the optimal directions.
    Gaussian random data, fresh per repeat.
    """
    records = []
    for n, m in spec.sizes:
        t_models, t_views = [], []
        for rep in range(spec.repeats):
            rng = np.random.default_rng(np.random.SeedSequence((spec.seed, n, m, rep)))
            data = from_values(rng.standard_normal((n, m)))
            tiles = [_random_scaling_tile(rng, n, m) for _ in range(3)]
            hypo = _random_scaling_tile(rng, n, m)
            hypothesis = HypothesisTilings(hypo.rows, hypo.cols)

            t0 = time.perf_counter()
            user = TileMap.baseline(n, m).merge_all(tiles)
            map1 = user.merge_all(hypothesis.side1_tiles())
            map2 = user.merge_all(hypothesis.side2_tiles())
            t1 = time.perf_counter()
            y = center(data)
            from .covariance import CovariancePair, tiling_covariance

            cov = CovariancePair(tiling_covariance(y, map1), tiling_covariance(y, map2))
            most_informative_directions(cov, num_dirs=2)
            t2 = time.perf_counter()
            t_models.append(t1 - t0)
            t_views.append(t2 - t1)
        records.append(
            {
                "n": n,
                "m": m,
                "t_model": float(np.median(t_models)),
                "t_view": float(np.median(t_views)),
            }
        )
    table = pd.DataFrame.from_records(records)
    table.to_csv(spec.out_path("scaling.csv"), index=False)
    return table


def german_pairs(data, tau=2.0 / 3.0):
    """The four benchmark hypothesis pairs on the German data."""
    t = german.cluster_tile(data, "cluster1", tau=tau)
    unguided = german.unguided_hypothesis(data)
    focus = german.focus_hypothesis(data)
    return [
        GainMatrixSpec("E,none", unguided),
        GainMatrixSpec("E,t", unguided, [t]),
        GainMatrixSpec("F,none", focus),
        GainMatrixSpec("F,t", focus, [t]),
    ]


def pca_direction(data):
    corr = np.corrcoef(data.values, rowvar=False)
    _, vecs = np.linalg.eigh(corr)
    u = vecs[:, -1]
    lead = np.argmax(np.abs(u))
    return u if u[lead] >= 0 else -u


def run_gain_matrix(spec, data=None, external_file=None):
    """Cross-evaluation of optimal directions against all hypothesis pairs.

    Adds the plain correlation-PCA direction as a reference row, plus any
    externally supplied named directions (JSON mapping name -> vector);
    a missing external file skips that row rather than failing.
    """
    if data is None:
        data = german.load_german(path=spec.german_csv)
    external = {"u_pca": pca_direction(data)}
    if external_file:
        try:
            with open(external_file) as fh:
                for name, vec in json.load(fh).items():
                    external[name] = np.asarray(vec, dtype=np.float64)
        except FileNotFoundError:
            pass
    table = gain_matrix(data, german_pairs(data), external_dirs=external)
    frame = table.to_frame()
    frame.to_csv(spec.out_path("gain_matrix.csv"))
    with open(spec.out_path("gain_matrix.json"), "w") as fh:
        json.dump(
            {
                "pairs": table.pair_labels,
                "directions": table.direction_labels,
                "matrix": table.matrix.tolist(),
                "diagonal_is_columnwise_max": table.diagonal_is_columnwise_max(),
            },
            fh,
            indent=2,
        )
    return table


def _scatter_svg(path, view, data, selection=None, title=""):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    coords = view.coords_data
    n = coords.shape[0]
    focus = np.zeros(n, dtype=bool)
    focus[view.focus_rows] = True
    fig, ax = plt.subplots(figsize=(7, 6))
    y = coords[:, 1] if coords.shape[1] > 1 else np.zeros(n)
    for sample, marker, color, label in [
        (view.coords_sample_h1, "s", "tab:green", "sample (kept together)"),
        (view.coords_sample_h2, "^", "tab:blue", "sample (split)"),
    ]:
        if sample is not None:
            sy = sample[:, 1] if sample.shape[1] > 1 else np.zeros(n)
            ax.scatter(sample[:, 0], sy, marker=marker, s=14, alpha=0.35, color=color, label=label)
    ax.scatter(coords[focus, 0], y[focus], marker="o", s=16, facecolors="none", edgecolors="black", label="data")
    if (~focus).any():
        ax.scatter(coords[~focus, 0], y[~focus], marker="+", s=16, color="black", label="outside focus")
    if selection is not None:
        sel = np.asarray(selection, dtype=np.intp)
        ax.scatter(coords[sel, 0], y[sel], marker="o", s=24, color="tab:orange", label="selection")
    labels = view.axis_labels(data.col_names)
    ax.set_xlabel(", ".join(f"{l['name']} {l['value']:+.2f}" for l in labels[0]), fontsize=7)
    if len(labels) > 1:
        ax.set_ylabel(", ".join(f"{l['name']} {l['value']:+.2f}" for l in labels[1]), fontsize=7)
    ax.set_title(f"{title} (gain {view.gain:.3f})")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def _pcp_svg(path, data, selection, report, title=""):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    values = data.values
    sel = np.zeros(data.n_rows, dtype=bool)
    sel[np.asarray(selection, dtype=np.intp)] = True
    fig, ax = plt.subplots(figsize=(max(8, data.n_cols * 0.45), 5))
    xs = np.arange(data.n_cols)
    for i in np.flatnonzero(~sel):
        ax.plot(xs, values[i], color="black", alpha=0.05, lw=0.5)
    for i in np.flatnonzero(sel):
        ax.plot(xs, values[i], color="tab:red", alpha=0.4, lw=0.7)
    names = [f"{c.name} ({c.ratio:.2f})" for c in report.columns]
    ax.set_xticks(xs)
    ax.set_xticklabels(names, rotation=90, fontsize=6)
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def run_walkthrough(spec, data=None, tau=2.0 / 3.0):
    """Scripted replay of the two-part exploration of the German data.

    Steps 1-2 explore with the generic hypothesis, marking the first
    cluster and adding it as background knowledge; cases 1-2 investigate
    the focused hypothesis on rural districts without and with that
    knowledge.  Emits view JSON, scatter and parallel-coordinates SVGs,
    and the Region/Type crosstabs of the frozen cluster selections.
    """
    if data is None:
        data = german.load_german(path=spec.german_csv)
    selections = german.frozen_selections()
    out = {}
    crosstabs = []

    def record(step, session, selection_name):
        view = session.compute_view()
        rows = selections[selection_name]
        report = session.selection_report(PointSelection(rows), tau=tau)
        with open(spec.out_path(f"{step}_view.json"), "w") as fh:
            json.dump(view.to_json(col_names=data.col_names), fh)
        _scatter_svg(spec.out_path(f"{step}_scatter.svg"), view, data, selection=rows, title=step)
        _pcp_svg(spec.out_path(f"{step}_pcp.svg"), data, rows, report, title=f"{step}: {selection_name}")
        for col in ["Region", "Type"]:
            for cat, count in crosstab(data, col, PointSelection(rows)).items():
                crosstabs.append(
                    {"step": step, "selection": selection_name, "column": col, "category": cat, "count": count}
                )
        out[step] = view
        return view

    session = Session(data, seed=spec.seed)
    session.set_hypothesis(german.unguided_hypothesis(data))
    record("step1", session, "cluster1")
    session.add_tile_from_selection(PointSelection(selections["cluster1"]), tau=tau)
    record("step2", session, "cluster2")

    case1 = Session(data, seed=spec.seed)
    case1.set_hypothesis(german.focus_hypothesis(data))
    record("case1_cluster3", case1, "cluster3")
    record("case1_cluster4", case1, "cluster4")

    case2 = Session(data, seed=spec.seed)
    case2.add_tile_from_selection(PointSelection(selections["cluster1"]), tau=tau)
    case2.set_hypothesis(german.focus_hypothesis(data))
    record("case2", case2, "cluster4")

    pd.DataFrame.from_records(crosstabs).to_csv(spec.out_path("crosstabs.csv"), index=False)
    return out
