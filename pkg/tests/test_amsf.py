import numpy as np
import pytest

from connectit.amsf import AMSF_VARIANTS, amsf, bucket_indices, kruskal_oracle
from connectit.graph import EdgeList, erdos_renyi
from connectit.verify import forest_problems

from .conftest import graph_from_pairs


def _weighted(pairs, weights, n):
    el = EdgeList.from_pairs(pairs, n=n)
    return EdgeList(el.src, el.dst, weights=np.asarray(weights, dtype=np.float64), n=n)


def _er_weighted(n, deg, seed):
    g = erdos_renyi(n, avg_deg=deg, seed=seed)
    src, dst = g.undirected_edges()
    w = np.random.default_rng(seed).exponential(1.0, size=src.shape[0])
    return g, EdgeList(src, dst, weights=w, n=n)


def test_kruskal_examples():
    assert kruskal_oracle(_weighted([(0, 1), (1, 2), (0, 2)], [1, 1, 10], 3)) == 2
    assert kruskal_oracle(EdgeList(np.empty(0, np.int64), np.empty(0, np.int64), weights=np.empty(0), n=4)) == 0
    assert kruskal_oracle(_weighted([(0, 1), (1, 2), (2, 3), (3, 0)], [1, 2, 3, 4], 4)) == 6


@pytest.mark.parametrize("variant", AMSF_VARIANTS)
def test_triangle(variant):
    res = amsf(_weighted([(0, 1), (1, 2), (0, 2)], [1, 1, 10], 3), epsilon=0.25, variant=variant)
    assert res.weight == 2 and res.forest.shape == (2, 2)


@pytest.mark.parametrize("variant", AMSF_VARIANTS)
def test_equal_weights_exact(variant):
    g, el = _er_weighted(300, 4, 1)
    el = EdgeList(el.src, el.dst, weights=np.full(len(el), 3.0), n=el.n)
    res = amsf(el, variant=variant)
    assert res.weight == pytest.approx(kruskal_oracle(el))
    assert forest_problems(g, res.forest) == []


def test_bucket_boundaries():
    eps = 0.25
    w = np.array([1.0, 1.25, 1.2499999, 1.5625, 1.5624999, 2.0])
    assert bucket_indices(w, eps).tolist() == [0, 1, 0, 2, 1, 3]
    rng = np.random.default_rng(0)
    w = rng.exponential(1.0, 5000) + 1e-9
    idx = bucket_indices(w, eps)
    lo = w.min() * (1 + eps) ** idx
    assert np.all(lo <= w * (1 + 1e-12)) and np.all(w < lo * (1 + eps) * (1 + 1e-12))
    assert idx.max() <= np.ceil(np.log(w.max() / w.min()) / np.log(1 + eps)) + 1


@pytest.mark.parametrize("variant", AMSF_VARIANTS)
def test_ratio_and_validity(variant):
    for seed in range(5):
        g, el = _er_weighted(400, 6, seed)
        res = amsf(el, epsilon=0.25, variant=variant, seed=seed)
        opt = kruskal_oracle(el)
        assert 1 - 1e-9 <= res.weight / opt <= 1.25
        assert forest_problems(g, res.forest) == []
        out = res.to_json(opt)
        assert out["forest_edges"] == res.forest.shape[0] and out["variant"] == variant


def test_variants_agree_per_bucket():
    g, el = _er_weighted(600, 5, 3)
    profiles = [amsf(el, variant=v, seed=3).bucket_profile for v in AMSF_VARIANTS]
    assert profiles[0] == profiles[1] == profiles[2]


def test_workers_keep_forest_valid():
    g, el = _er_weighted(800, 5, 7)
    res = amsf(el, variant="nf_s", workers=4)
    assert forest_problems(g, res.forest) == []


def test_amsf_errors():
    el = EdgeList.from_pairs([(0, 1)], n=2)
    with pytest.raises(ValueError, match="weighted"):
        amsf(el)
    w = _weighted([(0, 1)], [1.0], 2)
    with pytest.raises(ValueError):
        amsf(w, epsilon=0)
    with pytest.raises(ValueError):
        amsf(w, variant="fast")
    with pytest.raises(ValueError, match="positive"):
        amsf(_weighted([(0, 1)], [0.0], 2))


def test_self_loops_ignored():
    res = amsf(_weighted([(0, 0), (0, 1)], [0.5, 2.0], 2), variant="nf")
    assert res.forest.tolist() == [[0, 1]]
    assert graph_from_pairs([(0, 1)], 2).m == 2
