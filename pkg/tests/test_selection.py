import numpy as np
import pytest

from tilepursuit.errors import EmptyTileError, InvalidTileError, SelectionTooSmallError
from tilepursuit.ingestion import DataMatrix, from_values
from tilepursuit.selection import PointSelection, attribute_ratios, crosstab, selection_to_tile


def _data(values, side=None):
    return from_values(np.asarray(values, dtype=float), side_cols=side, scale=False)


def test_selection_validation():
    with pytest.raises(SelectionTooSmallError):
        PointSelection([3])
    with pytest.raises(InvalidTileError):
        PointSelection([-1, 2])
    sel = PointSelection([5, 2, 2])
    assert sel.row_indices == (2, 5)
    with pytest.raises(InvalidTileError):
        sel.check_shape(4)


def test_full_selection_has_ratio_one():
    rng = np.random.default_rng(0)
    data = _data(rng.standard_normal((30, 4)))
    report = attribute_ratios(data, PointSelection(range(30)), tau=0.9)
    for col in report.columns:
        assert col.ratio == pytest.approx(1.0)
        assert not col.chosen


def test_constant_selection_column_ratio_zero():
    rng = np.random.default_rng(1)
    values = rng.standard_normal((20, 3))
    values[5:9, 1] = 7.0
    data = _data(values)
    report = attribute_ratios(data, PointSelection([5, 6, 7, 8]))
    assert report.columns[1].ratio == 0.0
    assert report.columns[1].chosen


def test_planted_cluster_columns_detected():
    rng = np.random.default_rng(2)
    values = rng.standard_normal((200, 10))
    cluster = np.arange(40)
    tight = [2, 5, 7]
    center = rng.standard_normal(10) * 2
    for j in tight:
        values[cluster, j] = center[j] + 0.2 * rng.standard_normal(40)
    data = _data(values)
    report = attribute_ratios(data, PointSelection(cluster), tau=0.5)
    assert report.chosen_indices == tight


def test_globally_constant_column_never_chosen():
    values = np.random.default_rng(3).standard_normal((20, 2))
    values[:, 1] = 4.2
    data = _data(values)
    report = attribute_ratios(data, PointSelection([0, 1, 2]), tau=10.0)
    assert np.isinf(report.columns[1].ratio)
    assert not report.columns[1].chosen
    assert report.columns[0].chosen


def test_ratio_affine_invariance():
    rng = np.random.default_rng(4)
    values = rng.standard_normal((50, 5))
    sel = PointSelection(rng.choice(50, size=12, replace=False))
    base = attribute_ratios(_data(values), sel)
    scale = rng.uniform(0.1, 10.0, size=5)
    shift = rng.uniform(-5, 5, size=5)
    scaled = attribute_ratios(_data(values * scale + shift), sel)
    for a, b in zip(base.columns, scaled.columns):
        assert a.ratio == pytest.approx(b.ratio)


def test_selection_to_tile_threshold_behaviour():
    rng = np.random.default_rng(5)
    data = _data(rng.standard_normal((40, 4)))
    # the full selection has every ratio exactly 1, so any tau above 1
    # selects every varying column
    full = PointSelection(range(40))
    tile = selection_to_tile(data, full, tau=1.1)
    assert tile.cols == (0, 1, 2, 3)
    assert tile.rows == full.row_indices
    sel = PointSelection(rng.choice(40, size=10, replace=False))
    with pytest.raises(EmptyTileError) as err:
        selection_to_tile(data, sel, tau=0.0)
    assert err.value.report is not None
    assert len(err.value.report.columns) == 4


def test_tau_monotonicity():
    rng = np.random.default_rng(6)
    data = _data(rng.standard_normal((60, 6)))
    sel = PointSelection(rng.choice(60, size=15, replace=False))
    taus = [0.3, 0.5, 0.8, 1.0, 1.2]
    chosen = []
    for tau in taus:
        report = attribute_ratios(data, sel, tau=tau)
        chosen.append(set(report.chosen_indices))
    for small, large in zip(chosen, chosen[1:]):
        assert small <= large


def test_crosstab_counts():
    side = {"Region": np.array(["East"] * 3 + ["West"] * 5 + ["North"] * 2)}
    data = _data(np.zeros((10, 2)), side=side)
    counts = crosstab(data, "Region", PointSelection([0, 1, 3]))
    assert counts == {"East": 2, "North": 0, "West": 1}
    assert sum(counts.values()) == 3


def test_crosstab_unknown_column():
    data = _data(np.zeros((5, 2)), side={"Type": np.array(["a"] * 5)})
    with pytest.raises(KeyError):
        crosstab(data, "Region", PointSelection([0, 1]))


def test_report_json_shape():
    data = _data(np.random.default_rng(7).standard_normal((10, 2)))
    report = attribute_ratios(data, PointSelection([0, 1, 2]))
    doc = report.to_json()
    assert doc["tau"] == 0.5
    assert {c["name"] for c in doc["columns"]} == {"x0", "x1"}
