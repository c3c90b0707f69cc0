import numpy as np
import pytest

from helpers import brute_covariance, random_map, random_tiles
from tilepursuit.covariance import CovariancePair, center, hypothesis_covariances, tiling_covariance
from tilepursuit.errors import InvalidShapeError
from tilepursuit.sampler import sample_dataset
from tilepursuit.tiling import HypothesisTilings, Tile, new_tilemap


def test_center_basic():
    c = center(np.array([[1.0], [3.0]]))
    assert c.values.tolist() == [[-1.0], [1.0]]
    assert c.means.tolist() == [2.0]


def test_center_already_centered():
    x = np.array([[1.0, -2.0], [-1.0, 2.0]])
    c = center(x)
    assert np.array_equal(c.values, x)
    assert np.array_equal(c.means, [0.0, 0.0])


def test_center_column_sums_small():
    rng = np.random.default_rng(0)
    c = center(rng.standard_normal((50, 5)) * 100)
    assert np.abs(c.values.sum(axis=0)).max() < 1e-9 * 50


def test_fully_constrained_covariance_is_sample_covariance():
    rng = np.random.default_rng(1)
    y = center(rng.standard_normal((20, 4))).values
    tmap = new_tilemap(20, 4).merge(Tile(range(20), range(4)))
    assert np.allclose(tiling_covariance(y, tmap), y.T @ y / 20, atol=1e-12)


def test_baseline_covariance_is_diagonal():
    rng = np.random.default_rng(2)
    y = center(rng.standard_normal((15, 3))).values
    cov = tiling_covariance(y, new_tilemap(15, 3))
    assert np.allclose(np.diag(cov), (y**2).mean(axis=0))
    off = cov - np.diag(np.diag(cov))
    # zero in exact arithmetic; in floats the products of ~1e-17 residual
    # column means stay far below any data scale
    assert np.abs(off).max() < 1e-30


def test_single_tile_matches_enumeration():
    rng = np.random.default_rng(3)
    y = center(rng.standard_normal((5, 3))).values
    tmap = new_tilemap(5, 3).merge(Tile([0, 1, 2], [0, 1]))
    analytic = tiling_covariance(y, tmap)
    exact = brute_covariance(y, tmap.tiles(), 5, 3)
    assert np.abs(analytic - exact).max() < 1e-10


def test_six_row_tile_entry_matches_pair_enumeration():
    # at 6 rows the full 3-column space is too big to enumerate, but the
    # (j, j') covariance only depends on those two columns' permutations
    rng = np.random.default_rng(13)
    y = center(rng.standard_normal((6, 3))).values
    tile = Tile([0, 1, 2], [0, 1])
    analytic = tiling_covariance(y, new_tilemap(6, 3).merge(tile))
    exact_pair = brute_covariance(y[:, :2], [tile], 6, 2)
    assert abs(analytic[0, 1] - exact_pair[0, 1]) < 1e-10


def test_random_instances_match_enumeration():
    rng = np.random.default_rng(4)
    for _ in range(25):
        n, m = int(rng.integers(2, 6)), int(rng.integers(1, 4))
        tmap, _ = random_map(rng, n, m)
        y = center(rng.standard_normal((n, m))).values
        analytic = tiling_covariance(y, tmap)
        exact = brute_covariance(y, tmap.tiles(), n, m)
        assert np.abs(analytic - exact).max() < 1e-10


def test_shape_mismatch():
    with pytest.raises(InvalidShapeError):
        tiling_covariance(np.zeros((3, 2)), new_tilemap(4, 2))


def test_monte_carlo_agreement_small():
    rng = np.random.default_rng(5)
    from tilepursuit.ingestion import from_values

    data = from_values(rng.standard_normal((60, 5)))
    y = center(data.values)
    tmap, _ = random_map(rng, 60, 5, max_tiles=3, min_tiles=1)
    analytic = tiling_covariance(y.values, tmap)
    draws = 800
    acc = np.zeros((5, 5))
    acc2 = np.zeros((5, 5))
    for d in range(draws):
        sampled = sample_dataset(data, tmap, seed=17, draw=d)
        ys = sampled.values - sampled.values.mean(axis=0)
        mat = ys.T @ ys / 60
        acc += mat
        acc2 += mat**2
    mean = acc / draws
    se = np.sqrt(np.maximum(acc2 / draws - mean**2, 0) / draws)
    bad = np.abs(analytic - mean) > 3 * se + 1e-12
    assert bad.mean() <= 0.02


def test_symmetry_and_psd_random_instances():
    rng = np.random.default_rng(6)
    for _ in range(1000):
        n, m = int(rng.integers(2, 30)), int(rng.integers(1, 8))
        tmap, _ = random_map(rng, n, m)
        y = center(rng.standard_normal((n, m))).values
        cov = tiling_covariance(y, tmap)
        assert np.abs(cov - cov.T).max() < 1e-10
        eigvals = np.linalg.eigvalsh(cov)
        assert eigvals.min() >= -1e-8 * max(np.trace(cov), 1e-30)


def test_merge_order_irrelevance():
    rng = np.random.default_rng(7)
    for _ in range(20):
        n, m = int(rng.integers(3, 10)), int(rng.integers(2, 5))
        tiles = random_tiles(rng, n, m, max_tiles=3, min_tiles=2)
        y = center(rng.standard_normal((n, m))).values
        order = list(range(len(tiles)))
        rng.shuffle(order)
        cov_a = tiling_covariance(y, new_tilemap(n, m).merge_all(tiles))
        cov_b = tiling_covariance(y, new_tilemap(n, m).merge_all([tiles[i] for i in order]))
        assert np.abs(cov_a - cov_b).max() < 1e-12


def test_hypothesis_covariances_unguided():
    rng = np.random.default_rng(8)
    y = center(rng.standard_normal((30, 4)))
    user = new_tilemap(30, 4)
    pair = hypothesis_covariances(y, user, HypothesisTilings.unguided(30, 4))
    sample_cov = y.values.T @ y.values / 30
    assert np.allclose(pair.sigma1, sample_cov, atol=1e-12)
    assert np.allclose(pair.sigma2, np.diag(np.diag(sample_cov)), atol=1e-12)


def test_hypothesis_covariances_k1_identical():
    rng = np.random.default_rng(9)
    y = center(rng.standard_normal((12, 3)))
    h = HypothesisTilings(range(12), range(3), [list(range(3))])
    pair = hypothesis_covariances(y, new_tilemap(12, 3), h)
    assert np.array_equal(pair.sigma1, pair.sigma2)


def test_hypothesis_adds_nothing_when_user_tile_covers_it():
    # a hypothesis over a block the user already knows: both sides collapse
    # to the same distribution
    rng = np.random.default_rng(10)
    y = center(rng.standard_normal((4, 3)))
    user = new_tilemap(4, 3).merge(Tile([0, 1, 2], [0, 1]))
    h = HypothesisTilings([0, 1, 2], [0, 1], [[0], [1]])
    pair = hypothesis_covariances(y, user, h)
    assert np.abs(pair.sigma1 - pair.sigma2).max() < 1e-12
    # and the merged maps are equivalent by enumeration
    from tilepursuit.tiling import allowed_mask

    map1 = user.merge_all(h.side1_tiles())
    map2 = user.merge_all(h.side2_tiles())
    _, m1 = allowed_mask(map1.tiles(), 4, 3)
    _, m2 = allowed_mask(map2.tiles(), 4, 3)
    assert np.array_equal(m1, m2)


def test_hypothesis_covariances_do_not_mutate_user_map():
    y = center(np.random.default_rng(11).standard_normal((10, 3)))
    user = new_tilemap(10, 3)
    before = user.grid.copy()
    hypothesis_covariances(y, user, HypothesisTilings.unguided(10, 3))
    assert np.array_equal(user.grid, before)


def test_covariance_pair_fields():
    pair = CovariancePair(np.eye(3), 2 * np.eye(3))
    assert pair.n_cols == 3
