"""Seeded random insertion orders.

All randomness in the package comes from a counter-based SplitMix64 stream:
draw ``k`` of stream ``seed`` is ``mix64(seed + (k + 1) * GAMMA)``.  The
mapping is a pure function of ``(seed, k)`` so results are reproducible on any
platform.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    """SplitMix64 finalizer."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class Stream:
    """Sequential reader over the counter-based stream for one seed."""

    __slots__ = ("seed", "counter")

    def __init__(self, seed: int, counter: int = 0):
        self.seed = seed & MASK64
        self.counter = counter

    def next_u64(self) -> int:
        self.counter += 1
        return mix64(self.seed + self.counter * GAMMA)

    def bounded(self, bound: int) -> int:
        """Unbiased integer in ``[0, bound)`` by rejection sampling."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % bound

    def uniform(self) -> float:
        """Float in ``[0, 1)`` from the top 53 bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))


def substream_seed(seed: int, key: str) -> int:
    """Derive an independent seed for a named purpose (``"points"``, ``"order"``...)."""
    h = seed & MASK64
    for ch in key.encode():
        h = mix64(h ^ ch)
    return h


def uniform_array(seed: int, count: int) -> np.ndarray:
    """``count`` floats in ``[0, 1)``, vectorized form of ``Stream.uniform``."""
    k = np.arange(1, count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed & MASK64) + k * np.uint64(GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))


@dataclass(frozen=True)
class Permutation:
    n: int
    order: tuple[int, ...]
    seed: int
    _rank: tuple[int, ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        if len(self.order) != self.n:
            raise ValueError("order length does not match n")
        if not self._rank:
            rank = [0] * self.n
            for i, e in enumerate(self.order):
                rank[e] = i
            object.__setattr__(self, "_rank", tuple(rank))

    def rank_of(self, element: int) -> int:
        if not 0 <= element < self.n:
            raise IndexError(f"element {element} outside [0, {self.n})")
        return self._rank[element]

    @property
    def ranks(self) -> tuple[int, ...]:
        return self._rank

    def dump(self) -> str:
        return " ".join(map(str, self.order))

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(n, tuple(range(n)), 0)

    @classmethod
    def from_order(cls, order, seed: int = 0) -> "Permutation":
        order = tuple(int(e) for e in order)
        if sorted(order) != list(range(len(order))):
            raise ValueError("not a permutation of 0..n-1")
        return cls(len(order), order, seed)


def seeded_permutation(n: int, seed: int) -> Permutation:
    """Fisher-Yates shuffle of ``0..n-1`` driven by the stream for ``seed``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    order = list(range(n))
    rng = Stream(seed)
    for i in range(n - 1, 0, -1):
        j = rng.bounded(i + 1)
        order[i], order[j] = order[j], order[i]
    return Permutation(n, tuple(order), seed & MASK64)


def rank_of(perm: Permutation, element: int) -> int:
    return perm.rank_of(element)
