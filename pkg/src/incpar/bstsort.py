"""Comparison sorting by unbalanced BST insertion.

The tree is stored as arrays indexed by insertion step: ``left[i]`` and
``right[i]`` hold the step of the child node or -1.  The parallel version
advances every pending key one level per round; contested empty slots go to
the minimum step (priority write), which yields the same tree as sequential
insertion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dagmeter import IterationDag

EMPTY = -1


class DuplicateKeyError(ValueError):
    def __init__(self, i: int, j: int, key):
        super().__init__(f"duplicate key {key!r} at positions {i} and {j}")
        self.pair = (i, j)


@dataclass
class BST:
    keys: list
    root: int
    left: list[int]
    right: list[int]
    rounds: int = 0

    @property
    def n(self) -> int:
        return len(self.keys)

    def height(self) -> int:
        return height(self)

    def inorder(self) -> list[int]:
        out, stack, node = [], [], self.root
        while stack or node != EMPTY:
            while node != EMPTY:
                stack.append(node)
                node = self.left[node]
            node = stack.pop()
            out.append(node)
            node = self.right[node]
        return out

    def sorted_keys(self) -> list:
        return [self.keys[i] for i in self.inorder()]

    def shape(self) -> tuple:
        return (self.root, tuple(self.left), tuple(self.right))

    def parent_edges(self) -> set[tuple[int, int]]:
        edges = set()
        for i in range(self.n):
            for c in (self.left[i], self.right[i]):
                if c != EMPTY:
                    edges.add((i, c))
        return edges


def _check_distinct(keys) -> None:
    seen: dict = {}
    for i, k in enumerate(keys):
        j = seen.setdefault(k, i)
        if j != i:
            raise DuplicateKeyError(j, i, k)


def sort_seq(keys, dag: IterationDag | None = None) -> BST:
    """Insert ``keys`` in the given order.

    With ``dag`` supplied, node ``i`` of the DAG is step ``i`` and every node
    on the search path of key ``i`` gets an arc to it.
    """
    keys = list(keys)
    _check_distinct(keys)
    n = len(keys)
    left = [EMPTY] * n
    right = [EMPTY] * n
    root = EMPTY
    if dag is not None:
        for i in range(n):
            dag.add_node(i)
    for i, key in enumerate(keys):
        if root == EMPTY:
            root = i
            continue
        node = root
        while True:
            if dag is not None:
                dag.record_arc(node, i)
            if key < keys[node]:
                if left[node] == EMPTY:
                    left[node] = i
                    break
                node = left[node]
            else:
                if right[node] == EMPTY:
                    right[node] = i
                    break
                node = right[node]
    return BST(keys, root, left, right, rounds=n)


def sort_par(keys) -> BST:
    """Round-synchronous insertion with minimum-step priority writes.

    Slots are numbered ``0`` for the root and ``1 + 2*node + side`` for the
    children of ``node``.  Each round every pending key looks at its slot;
    keys whose slot is empty race for it and the minimum step wins; all keys
    that did not win compare against the slot's occupant and descend.
    """
    keys = list(keys)
    _check_distinct(keys)
    n = len(keys)
    if n == 0:
        return BST(keys, EMPTY, [], [], rounds=0)
    # ranks within the sorted order replace keys so comparisons vectorize
    order = sorted(range(n), key=keys.__getitem__)
    rank = np.empty(n, dtype=np.int64)
    rank[order] = np.arange(n)
    occupant = np.full(1 + 2 * n, EMPTY, dtype=np.int64)
    pending = np.arange(n, dtype=np.int64)
    slot = np.zeros(n, dtype=np.int64)
    rounds = 0
    while pending.size:
        rounds += 1
        empty = occupant[slot] == EMPTY
        if empty.any():
            # priority write: np.minimum.at resolves contested slots to the least step
            cand = np.full(occupant.shape, n, dtype=np.int64)
            np.minimum.at(cand, slot[empty], pending[empty])
            won = cand[slot[empty]]
            occupant[slot[empty]] = won
        done = occupant[slot] == pending
        pending, slot = pending[~done], slot[~done]
        occ = occupant[slot]
        side = (rank[pending] > rank[occ]).astype(np.int64)
        slot = 1 + 2 * occ + side
    left = occupant[1::2].tolist()
    right = occupant[2::2].tolist()
    return BST(keys, int(occupant[0]), left, right, rounds=rounds)


def height(bst: BST) -> int:
    """Nodes on the longest root-to-leaf path (0 for an empty tree)."""
    if bst.root == EMPTY:
        return 0
    best = 0
    stack = [(bst.root, 1)]
    while stack:
        node, d = stack.pop()
        best = max(best, d)
        for c in (bst.left[node], bst.right[node]):
            if c != EMPTY:
                stack.append((c, d + 1))
    return best
