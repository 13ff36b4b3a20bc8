import numpy as np
import pytest

from concave_embed import (
    FiniteMetricSpace,
    frechet_sigma,
    frechet_translated,
    make_discrete,
    make_equilateral,
    make_random_strongly_concave,
)
from oracles import fuzzed_metric, sup_norm


def pairwise_sup(points):
    n = len(points)
    return [[sup_norm(points[i] - points[j]) for j in range(n)] for i in range(n)]


def test_sigma_discrete():
    emb = frechet_sigma(make_discrete(3))
    np.testing.assert_array_equal(emb.points, [[0, 1, 1], [1, 0, 1], [1, 1, 0]])
    assert pairwise_sup(emb.points) == [[0, 1, 1], [1, 0, 1], [1, 1, 0]]
    assert emb.max_residual == 0.0


def test_sigma_single_point():
    emb = frechet_sigma(make_discrete(1))
    np.testing.assert_array_equal(emb.points, [[0.0]])
    assert emb.max_residual == 0.0


def test_sigma_equilateral():
    emb = frechet_sigma(make_equilateral(4, 2.5))
    d = np.array(pairwise_sup(emb.points))
    assert np.all(d[~np.eye(4, dtype=bool)] == 2.5)


def test_translated_discrete():
    emb = frechet_translated(make_discrete(3))
    np.testing.assert_array_equal(emb.points, [[0, 0, 0], [1, -1, 0], [1, 0, -1]])


@pytest.mark.parametrize("seed", range(5))
def test_translated_origin_and_same_distances(seed):
    space = make_random_strongly_concave(12, 0.4, seed=seed)
    a, b = frechet_sigma(space), frechet_translated(space)
    assert np.all(b.points[0] == 0)
    np.testing.assert_allclose(np.array(pairwise_sup(a.points)), np.array(pairwise_sup(b.points)),
                               rtol=0, atol=4 * np.spacing(space.diameter))


def test_translated_distances_exact_on_integer_metric():
    rng = np.random.default_rng(5)
    pts = rng.integers(-50, 50, size=(15, 3))
    d = np.abs(pts[:, None, :] - pts[None, :, :]).sum(axis=-1).astype(float)
    space = FiniteMetricSpace.from_matrix(d)
    assert pairwise_sup(frechet_sigma(space).points) == pairwise_sup(frechet_translated(space).points)


@pytest.mark.parametrize("seed", range(30))
def test_isometry_and_coordinate_domination(seed):
    rng = np.random.default_rng(seed)
    d = fuzzed_metric(rng, int(rng.integers(2, 25)))
    space = FiniteMetricSpace.from_matrix(d)
    emb = frechet_sigma(space)
    assert emb.max_residual <= 4 * np.spacing(space.diameter)
    # |d(i,k) - d(j,k)| <= d(i,j) with equality at k in {i, j}
    gaps = np.abs(d[:, None, :] - d[None, :, :])
    assert np.all(gaps <= d[:, :, None] + 4 * np.spacing(space.diameter))
    n = len(d)
    for i in range(n):
        for j in range(n):
            assert gaps[i, j, j] == d[i, j] and gaps[i, j, i] == d[i, j]


def test_to_dict_schema():
    out = frechet_sigma(make_discrete(2)).to_dict()
    assert set(out) >= {"points", "norm", "max_residual"}
    assert out["norm"] == {"kind": "sup", "dimension": 2}
