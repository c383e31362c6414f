import numpy as np
import pytest
from hypothesis import given, strategies as st

from incpar.order import (Permutation, Stream, mix64, rank_of, seeded_permutation,
                          substream_seed, uniform_array)

# frozen from a standalone Fisher-Yates over a plain SplitMix64 generator
GOLDEN_8_42 = (3, 1, 6, 2, 4, 0, 7, 5)
GOLDEN_10_1 = (4, 2, 8, 1, 9, 3, 0, 6, 7, 5)
GOLDEN_5_0 = (2, 3, 1, 4, 0)


def reference_shuffle(n, seed):
    mask = (1 << 64) - 1
    state = seed & mask

    def draw():
        nonlocal state
        state = (state + 0x9E3779B97F4A7C15) & mask
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & mask
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & mask
        return z ^ (z >> 31)

    a = list(range(n))
    for i in range(n - 1, 0, -1):
        limit = (1 << 64) - ((1 << 64) % (i + 1))
        while True:
            x = draw()
            if x < limit:
                break
        j = x % (i + 1)
        a[i], a[j] = a[j], a[i]
    return tuple(a)


def test_small_cases():
    assert seeded_permutation(0, 5).order == ()
    assert seeded_permutation(1, 5).order == (0,)


def test_golden_values():
    assert seeded_permutation(8, 42).order == GOLDEN_8_42
    assert seeded_permutation(10, 1).order == GOLDEN_10_1
    assert seeded_permutation(5, 0).order == GOLDEN_5_0


@given(st.integers(0, 300), st.integers(0, 2**64 - 1))
def test_matches_reference_and_is_bijective(n, seed):
    p = seeded_permutation(n, seed)
    assert p.order == reference_shuffle(n, seed)
    assert sorted(p.order) == list(range(n))
    assert seeded_permutation(n, seed) == p


def test_rank_of_examples():
    p = Permutation.from_order([2, 0, 1])
    assert rank_of(p, 2) == 0
    assert rank_of(p, 1) == 2
    with pytest.raises(IndexError):
        rank_of(p, 3)


@given(st.integers(0, 200), st.integers(0, 2**32))
def test_rank_inverse(n, seed):
    p = seeded_permutation(n, seed)
    for e in range(n):
        assert p.order[p.rank_of(e)] == e
    for i, e in enumerate(p.order):
        assert p.ranks[e] == i


def test_from_order_rejects_non_permutation():
    with pytest.raises(ValueError):
        Permutation.from_order([0, 0, 1])
    with pytest.raises(ValueError):
        seeded_permutation(-1, 0)


def test_dump_round_trip():
    p = seeded_permutation(12, 3)
    assert Permutation.from_order(map(int, p.dump().split())).order == p.order


def test_bounded_is_in_range_and_roughly_uniform():
    rng = Stream(7)
    counts = np.bincount([rng.bounded(6) for _ in range(60000)], minlength=6)
    assert counts.min() > 9000 and counts.max() < 11000
    with pytest.raises(ValueError):
        rng.bounded(0)


def test_uniform_array_matches_stream():
    seed = substream_seed(11, "points")
    rng = Stream(seed)
    expect = [rng.uniform() for _ in range(1000)]
    assert uniform_array(seed, 1000).tolist() == expect


def test_substreams_differ():
    assert substream_seed(1, "points") != substream_seed(1, "graph")
    assert mix64(0) == 0
