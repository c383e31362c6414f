import math

import pytest
from hypothesis import given, settings, strategies as st

from incpar.graphcore import INF, Graph, gen_random_graph, oracle_sssp
from incpar.lelists import (LeEntry, combine_group, le_lists_oracle, le_lists_par, le_lists_seq,
                            pruned_sssp)
from incpar.order import Permutation, seeded_permutation


def test_path_example():
    g = Graph.from_edges(3, [(0, 1), (1, 0), (1, 2), (2, 1)])
    res = le_lists_seq(g, Permutation.identity(3))
    assert res.lists[2] == [LeEntry(0, 2.0), LeEntry(1, 1.0), LeEntry(2, 0.0)]
    assert le_lists_par(g, Permutation.identity(3)).lists == res.lists


def test_first_vertex_and_isolated_vertex():
    g = Graph.from_edges(4, [(0, 1), (1, 2)])
    perm = Permutation.from_order([0, 3, 1, 2])
    res = le_lists_seq(g, perm)
    assert [lst[0].source for lst in res.lists if lst] == [0, 0, 0, 3]
    assert res.lists[3] == [LeEntry(3, 0.0)]


def test_pruned_sssp_examples():
    g = gen_random_graph(60, 240, 4, weighted=True)
    full = oracle_sssp(g, 0)
    got = dict(pruned_sssp(g, 0, [INF] * 60))
    assert got == {u: d for u, d in enumerate(full) if d < INF}
    assert pruned_sssp(g, 0, [0.0] * 60) == []


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32), st.sets(st.integers(1, 59), max_size=8), st.booleans())
def test_pruned_sssp_is_filtered_full_sssp(seed, earlier, weighted):
    # delta as left behind by searches from an arbitrary set of earlier sources
    g = gen_random_graph(60, 200, seed, weighted)
    delta = [INF] * 60
    for s in earlier:
        delta = [min(a, b) for a, b in zip(delta, oracle_sssp(g, s))]
    full = oracle_sssp(g, 0)
    got = dict(pruned_sssp(g, 0, delta))
    assert got == {u: d for u, d in enumerate(full) if d < delta[u]}


def test_combine_group_example():
    kept, delta = combine_group([(2, 4.0), (5, 7.0), (8, 3.0)], 10.0)
    assert kept == [(2, 4.0), (8, 3.0)] and delta == 3.0
    assert combine_group([(1, 5.0)], 5.0) == ([], 5.0)


def test_tiny_graphs():
    for n in (1, 2):
        g = gen_random_graph(n, 2 * n, 1)
        perm = seeded_permutation(n, 1)
        assert le_lists_par(g, perm).lists == le_lists_seq(g, perm).lists


@pytest.mark.parametrize("weighted", [False, True])
def test_par_equals_seq_on_random_graphs(weighted):
    for seed in range(10):
        g = gen_random_graph(500, 2000, seed, weighted)
        perm = seeded_permutation(500, seed)
        s, p = le_lists_seq(g, perm), le_lists_par(g, perm)
        assert s.lists == p.lists
        assert p.metrics["rounds"] <= math.ceil(math.log2(500)) + 1


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 120), st.integers(0, 5), st.booleans())
def test_matches_definition(seed, n, density, weighted):
    g = gen_random_graph(n, density * n, seed, weighted)
    perm = seeded_permutation(n, seed)
    s = le_lists_seq(g, perm)
    assert s.lists == le_lists_oracle(g, perm) == le_lists_par(g, perm).lists
    for u, lst in enumerate(s.lists):
        assert lst[-1] == LeEntry(u, 0.0)
        assert all(a.dist > b.dist for a, b in zip(lst, lst[1:]))
        ranks = [perm.rank_of(e.source) for e in lst]
        assert ranks == sorted(ranks)
