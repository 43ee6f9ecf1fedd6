import numpy as np
import pytest

from connectit.atomics import ForestEdges
from connectit.driver import bfs_oracle
from connectit.graph import EdgeList, erdos_renyi
from connectit.labels import canonicalize
from connectit.minbased import (
    LT_VARIANTS,
    LiuTarjanSpec,
    RoundInfo,
    label_propagation_cc,
    liu_tarjan_cc,
    run_min_based,
    shiloach_vishkin_cc,
    stergiou_cc,
)
from connectit.sampling import SamplingSpec, sample
from connectit.verify import COUNTER_EXAMPLE_EDGES, seeded_er_graphs

from .conftest import graph_from_pairs

FINISHES = [f"lt_{v.lower()}" for v in LT_VARIANTS] + ["stergiou", "sv", "label_prop"]


def test_sixteen_variants():
    assert len(LT_VARIANTS) == 16
    assert sorted(v.name for v in LT_VARIANTS.values()) == sorted(LT_VARIANTS)
    root_based = sorted(n for n, v in LT_VARIANTS.items() if v.root_based)
    assert root_based == ["CRFA", "CRSA", "PRF", "PRFA", "PRS", "PRSA"]


def test_variant_invariants():
    with pytest.raises(ValueError, match="Alter"):
        LiuTarjanSpec("connect", False, "shortcut", False)
    with pytest.raises(ValueError, match="RootUp"):
        LiuTarjanSpec("extended_connect", True, "shortcut", True)
    with pytest.raises(ValueError):
        LiuTarjanSpec.from_name("XYZ")
    assert LiuTarjanSpec.from_name("prf") == LT_VARIANTS["PRF"]


def test_lt_path_pus():
    g = graph_from_pairs([(0, 1), (1, 2)], 3)
    assert liu_tarjan_cc(g, "PUS").tolist() == [0, 0, 0]


@pytest.mark.parametrize("name", list(LT_VARIANTS))
def test_lt_empty_edges_one_round(name):
    info = RoundInfo()
    out = liu_tarjan_cc(graph_from_pairs([], 4), name, info=info)
    assert out.tolist() == [0, 1, 2, 3] and info.rounds == 1


@pytest.mark.parametrize("name", FINISHES)
def test_counter_example_single_component(name):
    g = graph_from_pairs(COUNTER_EXAMPLE_EDGES, 6)
    assert run_min_based(name, g).tolist() == [0] * 6


def test_stergiou_examples():
    assert stergiou_cc(graph_from_pairs([(0, 1), (1, 2)], 3)).tolist() == [0, 0, 0]
    star = graph_from_pairs([(4, i) for i in range(4)], 5)
    assert stergiou_cc(star).tolist() == [0] * 5
    assert stergiou_cc(graph_from_pairs([(0, 1), (2, 3)], 4)).tolist() == [0, 0, 2, 2]


def test_stergiou_accepts_edge_list():
    el = EdgeList.from_pairs([(1, 0), (2, 3), (3, 2)], n=4)
    assert stergiou_cc(el).tolist() == [0, 0, 2, 2]


def test_sv_examples():
    info = RoundInfo()
    assert shiloach_vishkin_cc(graph_from_pairs([(0, 1), (1, 2), (2, 3), (3, 0)], 4), info=info).tolist() == [0] * 4
    assert info.rounds <= 3
    info = RoundInfo()
    assert shiloach_vishkin_cc(graph_from_pairs([], 5), info=info).tolist() == list(range(5))
    assert info.rounds == 1


def test_label_prop_examples():
    info = RoundInfo()
    path = graph_from_pairs([(0, 1), (1, 2), (2, 3)], 4)
    assert label_propagation_cc(path, info=info).tolist() == [0, 0, 0, 0]
    # three rounds spread the label, a fourth sees no change
    assert info.rounds == 4
    assert label_propagation_cc(graph_from_pairs([], 1)).tolist() == [0]
    assert label_propagation_cc(graph_from_pairs([(0, 1), (2, 3)], 4)).tolist() == [0, 0, 2, 2]


@pytest.mark.parametrize("name", FINISHES)
def test_identity_start_gives_min_ids(name):
    for g in seeded_er_graphs(count=50, base_seed=500).values():
        assert np.array_equal(run_min_based(name, g), bfs_oracle(g))


@pytest.mark.parametrize("name", FINISHES)
def test_sampled_start_partition(name):
    for i, g in enumerate(seeded_er_graphs(count=50, base_seed=900).values()):
        scheme = ("kout", "bfs", "ldd")[i % 3]
        res = sample(g, SamplingSpec(scheme, seed=i))
        out = run_min_based(name, g, res.labels.copy())
        assert np.array_equal(canonicalize(out), bfs_oracle(g))


@pytest.mark.parametrize("name", FINISHES)
def test_monotone_rounds(name):
    g = erdos_renyi(300, avg_deg=2, seed=5)
    seen = []

    def watch(r, labels):
        if seen:
            assert np.all(labels <= seen[-1])
        seen.append(labels.copy())

    run_min_based(name, g, observer=watch)
    assert len(seen) >= 1


@pytest.mark.parametrize("name", FINISHES)
def test_reserved_label_skip_soundness(name):
    g = erdos_renyi(400, avg_deg=1.5, seed=8)
    oracle = bfs_oracle(g)
    comps, sizes = np.unique(oracle, return_counts=True)
    for c in comps[np.argsort(-sizes)][:3]:
        # pre-collapse one true component onto its minimum and skip it
        labels = np.arange(g.n)
        labels[oracle == c] = c
        info = RoundInfo()
        out = run_min_based(name, g, labels, l_max=int(c), info=info)
        assert np.array_equal(canonicalize(out), oracle)


@pytest.mark.parametrize("name", ["sv"] + [f"lt_{n.lower()}" for n, v in LT_VARIANTS.items() if v.root_based])
def test_root_based_forest(name):
    g = erdos_renyi(300, avg_deg=2, seed=3)
    forest = ForestEdges(g.n)
    out = run_min_based(name, g, forest=forest)
    comps = len(np.unique(out))
    assert forest.count() == g.n - comps
    assert forest.double_writes == 0
    sub = graph_from_pairs([tuple(e) for e in forest.edges().tolist()], g.n)
    assert np.array_equal(bfs_oracle(sub), bfs_oracle(g))


def test_non_root_based_forest_rejected():
    with pytest.raises(ValueError, match="root-based"):
        liu_tarjan_cc(graph_from_pairs([(0, 1)], 2), "PUS", forest=ForestEdges(2))


def test_workers_do_not_change_labels():
    g = erdos_renyi(6000, avg_deg=3, seed=2)
    for name in ("lt_cusa", "lt_euf", "label_prop"):
        assert np.array_equal(run_min_based(name, g, workers=1), run_min_based(name, g, workers=4))


def test_unknown_finish():
    with pytest.raises(ValueError):
        run_min_based("bogus", graph_from_pairs([], 2))
