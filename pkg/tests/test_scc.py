import math

import pytest
from hypothesis import given, settings, strategies as st

from incpar.graphcore import Graph, canonical_labels, gen_random_graph, oracle_scc
from incpar.order import Permutation, seeded_permutation
from incpar.scc import BWD, DEAD, FWD, restricted_reach, scc_par, scc_seq


def test_hand_simulated_example():
    g = Graph.from_edges(3, [(0, 1), (1, 0), (1, 2)])
    res = scc_seq(g, Permutation.identity(3))
    assert res.labels == [0, 0, 1]
    assert res.metrics["visits"] == (3 + 2) + (1 + 1)


def test_dag_and_complete_graph():
    dag = Graph.from_edges(5, [(i, j) for i in range(5) for j in range(i + 1, 5)])
    assert scc_seq(dag, seeded_permutation(5, 2)).count == 5
    full = Graph.from_edges(6, [(i, j) for i in range(6) for j in range(6) if i != j])
    res = scc_seq(full, seeded_permutation(6, 2))
    assert res.count == 1 and res.metrics["visits"] == 12


def test_restricted_reach_examples():
    g = Graph.from_edges(3, [(0, 1), (1, 2)])
    assert restricted_reach(g, [0, 0, 0], 0, FWD) == {0, 1, 2}
    assert restricted_reach(g, [0, 0, 0], 0, BWD) == {0}
    assert restricted_reach(g, [0, 0, 1], 0, FWD) == {0, 1}
    with pytest.raises(ValueError):
        restricted_reach(g, [DEAD, 0, 0], 0, FWD)


def test_disjoint_pivots_in_one_round():
    g = Graph.from_edges(4, [(0, 1), (1, 0), (2, 3), (3, 2)])
    perm = Permutation.from_order([0, 1, 2, 3])
    assert scc_par(g, perm).labels == scc_seq(g, perm).labels == [0, 0, 1, 1]


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 150), st.integers(0, 4))
def test_par_and_seq_match_tarjan(seed, n, density):
    g = gen_random_graph(n, density * n, seed)
    perm = seeded_permutation(n, seed)
    s, p = scc_seq(g, perm), scc_par(g, perm)
    ref = canonical_labels(oracle_scc(g))
    assert canonical_labels(s.labels) == ref == canonical_labels(p.labels)
    # components are numbered by their first pivot in both modes
    assert s.labels == p.labels


def test_round_and_visit_bounds():
    for seed in range(5):
        g = gen_random_graph(1000, 4000, seed)
        perm = seeded_permutation(1000, seed)
        s, p = scc_seq(g, perm), scc_par(g, perm)
        assert p.metrics["rounds"] <= math.ceil(math.log2(1000)) + 1
        assert p.metrics["visits"] <= 3 * s.metrics["visits"]


def test_thread_count_does_not_change_output():
    from incpar.drivers import ForkJoin
    g = gen_random_graph(400, 1200, 5)
    perm = seeded_permutation(400, 5)
    base = scc_par(g, perm, pool=ForkJoin(1))
    for threads in (2, 4):
        other = scc_par(g, perm, pool=ForkJoin(threads, grain=4))
        assert other.labels == base.labels and other.metrics == base.metrics
