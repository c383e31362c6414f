import math

import pytest
from hypothesis import given, strategies as st

from incpar.dagmeter import DepthStats, IterationDag, aggregate, harmonic, longest_path


def dag_with(n, arcs):
    d = IterationDag()
    for _ in range(n):
        d.add_node()
    for a, b in arcs:
        d.record_arc(a, b)
    return d


def test_record_arc_examples():
    d = dag_with(2, [(0, 1)])
    assert d.arcs == {(0, 1)}
    d.record_arc(0, 1)
    assert d.arcs == {(0, 1)} and d.arc_count() == 1
    with pytest.raises(ValueError):
        d.record_arc(1, 0)
    with pytest.raises(IndexError):
        d.record_arc(0, 5)


def test_longest_path_examples():
    assert longest_path(dag_with(5, [])).depth == 0
    assert longest_path(dag_with(4, [(0, 1), (1, 2), (2, 3)])).depth == 3
    assert longest_path(dag_with(4, [(0, 1), (0, 2), (1, 3), (2, 3)])).depth == 2


def test_aggregate_examples():
    s = aggregate([DepthStats.of(3, 10)])
    assert (s.mean, s.max) == (3, 3)
    s = aggregate([DepthStats.of(2, 10), DepthStats.of(4, 10)])
    assert (s.mean, s.max) == (3, 4)
    assert s.max_ratio_to_ln_n == pytest.approx(4 / math.log(10))
    with pytest.raises(ValueError):
        aggregate([])
    with pytest.raises(ValueError):
        aggregate([DepthStats.of(1, 5), DepthStats.of(1, 6)])


def test_harmonic():
    assert harmonic(1) == 1.0
    direct = sum(1.0 / i for i in range(1, 10001))
    assert abs(harmonic(10000) - direct) <= 1e-12 * direct
    assert DepthStats.of(0, 1).ratio_to_ln_n is None


@given(st.integers(1, 40), st.lists(st.tuples(st.integers(0, 39), st.integers(0, 39)), max_size=120))
def test_depth_bounds_and_reduction(n, pairs):
    arcs = {(min(a, b), max(a, b)) for a, b in pairs if a != b and max(a, b) < n}
    d = dag_with(n, arcs)
    depth = longest_path(d).depth
    assert 0 <= depth <= n - 1
    red = d.transitive_reduction()
    assert red <= d.arcs
    # the reduction keeps the depth and the reachability relation
    assert longest_path(dag_with(n, red)).depth == depth
    assert _closure(n, red) == _closure(n, arcs)


def _closure(n, arcs):
    reach = [set() for _ in range(n)]
    for v in range(n):
        for a, b in arcs:
            if b == v:
                reach[v] |= {a} | reach[a]
    return reach
