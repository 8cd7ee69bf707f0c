import numpy as np
import pytest

from pktruss.graph_core import build_truss_graph, from_pairs, reorder
from pktruss.triangle import (
    OracleTooLarge, support_am4, support_ros, triangle_count, triangle_oracle,
)

from .graphs import complete, complete_bipartite, er_graph, path, small_suite
from .oracles import dense_triple_count, triple_triangles

WORKERS = (1, 2, 4, 8)


@pytest.mark.parametrize("kernel", [support_am4, support_ros])
@pytest.mark.parametrize(
    "g, expect",
    [(complete(3), [1, 1, 1]), (complete(4), [2] * 6), (path(3), [0, 0])],
    ids=["triangle", "K4", "path"],
)
def test_support_small(kernel, g, expect):
    tg = build_truss_graph(g)
    assert kernel(tg, 2, debug=True).tolist() == expect


def test_k4_total_is_three_times_triangles():
    tg = build_truss_graph(complete(4))
    assert support_am4(tg).sum() == 3 * 4


def test_er_support_matches_triple_enumeration(er100):
    g, tg = er100
    count, support = triple_triangles(g.n, [tuple(e) for e in g.edges().tolist()])
    expect = [support[tuple(e)] for e in g.edges().tolist()]
    for w in WORKERS:
        assert support_am4(tg, w).tolist() == expect
        assert support_ros(tg, w).tolist() == expect
    assert triangle_count(tg, 3) == count
    oc, os_ = triangle_oracle(g)
    assert oc == count and os_.tolist() == expect


def test_triangle_count_closed_forms():
    assert triangle_count(build_truss_graph(complete(5)), 2) == 10
    assert triangle_count(build_truss_graph(complete_bipartite(3, 3)), 2) == 0


def test_triangle_count_er200():
    g = er_graph(200, 0.1, 5)
    expect = dense_triple_count(g.n, g.edges().tolist())
    for w in WORKERS:
        assert triangle_count(build_truss_graph(g), w) == expect


def test_kernels_agree_on_suite_and_orderings():
    rng = np.random.default_rng(0)
    for g in small_suite(30, seed=11):
        tg = build_truss_graph(g)
        count, ref = triangle_oracle(g)
        for w in WORKERS:
            am4 = support_am4(tg, w)
            assert np.array_equal(am4, ref)
            assert np.array_equal(support_ros(tg, w), ref)
            assert am4.sum() == 3 * count
        # support bounds
        deg = g.degrees()
        el = g.edges()
        assert np.all(ref <= np.minimum(deg[el[:, 0]], deg[el[:, 1]]) - 1)
        perm = rng.permutation(g.n)
        assert triangle_count(build_truss_graph(reorder(g, perm)), 2) == count


def test_scratch_hygiene_on_tiny_graphs():
    for g in small_suite(10, seed=3, max_n=30):
        tg = build_truss_graph(g)
        support_am4(tg, 2, debug=True)
        support_ros(tg, 2, debug=True)


def test_oracle_closed_forms_and_guard():
    assert triangle_oracle(from_pairs(0, []))[0] == 0
    assert triangle_oracle(from_pairs(0, []))[1].tolist() == []
    c, s = triangle_oracle(complete(3))
    assert (c, s.tolist()) == (1, [1, 1, 1])
    c, s = triangle_oracle(complete(6))
    assert c == 20 and s.tolist() == [4] * 15
    with pytest.raises(OracleTooLarge):
        triangle_oracle(from_pairs(600, [(0, 1)]))
