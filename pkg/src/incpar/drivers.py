"""Round-synchronous drivers for Type 2 and Type 3 incremental algorithms.

Both drivers process steps in blocks of doubling size.  Within a block the
per-step callbacks may run concurrently on disjoint steps through a
:class:`ForkJoin` pool; everything that mutates shared algorithm state runs
between barriers.  With ``threads=1`` the same chunking code runs inline.
"""

from __future__ import annotations

import os
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("INCPAR_THREADS", "1")))
    except ValueError:
        return 1


class Halt(Exception):
    """Raised by a callback to stop the driver after the current step."""


class StepError(RuntimeError):
    def __init__(self, step: int, cause: BaseException):
        super().__init__(f"step {step} failed: {cause!r}")
        self.step = step
        self.cause = cause


class ForkJoin:
    """Fork-join over index ranges.

    Ranges are split into at most ``threads`` contiguous chunks.  Chunk
    results are always combined in index order, so reductions do not depend
    on which worker finishes first.
    """

    _pools: dict[int, ThreadPoolExecutor] = {}
    _lock = threading.Lock()

    def __init__(self, threads: int | None = None, grain: int = 64):
        self.threads = max(1, threads if threads is not None else default_threads())
        self.grain = grain

    def _pool(self) -> ThreadPoolExecutor:
        with self._lock:
            pool = self._pools.get(self.threads)
            if pool is None:
                pool = ThreadPoolExecutor(self.threads, thread_name_prefix="incpar")
                self._pools[self.threads] = pool
            return pool

    def chunks(self, lo: int, hi: int) -> list[tuple[int, int]]:
        size = hi - lo
        if size <= 0:
            return []
        parts = min(self.threads, max(1, size // self.grain))
        step = -(-size // parts)
        return [(s, min(s + step, hi)) for s in range(lo, hi, step)]

    def _run(self, tasks: list[Callable[[], object]]) -> list:
        if len(tasks) <= 1 or self.threads == 1:
            return [t() for t in tasks]
        futures = [self._pool().submit(t) for t in tasks]
        return [f.result() for f in futures]

    def for_range(self, lo: int, hi: int, body: Callable[[int], None]) -> None:
        def chunk(a, b):
            def run():
                for k in range(a, b):
                    try:
                        body(k)
                    except Halt:
                        raise
                    except Exception as exc:
                        raise StepError(k, exc) from exc
            return run
        self._run([chunk(a, b) for a, b in self.chunks(lo, hi)])

    def map(self, fn: Callable, items: Sequence) -> list:
        """Ordered ``[fn(x) for x in items]``."""
        def chunk(a, b):
            return lambda: [fn(items[k]) for k in range(a, b)]
        out: list = []
        for part in self._run([chunk(a, b) for a, b in self.chunks(0, len(items))]):
            out.extend(part)
        return out

    def first_true(self, lo: int, hi: int, pred: Callable[[int], bool]) -> int:
        """Minimum ``k`` in ``[lo, hi)`` with ``pred(k)``, or ``hi``.

        Every chunk scans its own range to the end or to its first hit; the
        answer is the minimum over chunks.
        """
        def chunk(a, b):
            def run():
                for k in range(a, b):
                    try:
                        if pred(k):
                            return k
                    except Exception as exc:
                        raise StepError(k, exc) from exc
                return hi
            return run
        return min(self._run([chunk(a, b) for a, b in self.chunks(lo, hi)]), default=hi)


@dataclass
class RoundTrace:
    rounds: int = 0
    sub_rounds: int = 0
    per_round_sizes: list[int] = field(default_factory=list)
    special_steps: list[int] = field(default_factory=list)
    halted_at: int | None = None

    def as_dict(self) -> dict:
        return {
            "rounds": self.rounds,
            "sub_rounds": self.sub_rounds,
            "per_round_sizes": list(self.per_round_sizes),
        }


def doubling_blocks(n: int) -> list[tuple[int, int]]:
    """``[0,1), [1,2), [2,4), [4,8), ...`` truncated at ``n``."""
    blocks = []
    if n <= 0:
        return blocks
    blocks.append((0, 1))
    lo = 1
    while lo < n:
        hi = min(2 * lo, n)
        blocks.append((lo, hi))
        lo = hi
    return blocks


def run_type2(
    n: int,
    check_special: Callable[[int], bool],
    run_regular: Callable[[int], None],
    run_special: Callable[[int], None],
    *,
    prepare: Callable[[int, int], None] | None = None,
    pool: ForkJoin | None = None,
) -> RoundTrace:
    """Prefix-doubling driver.

    Step 0 always runs as special.  For each later block ``[lo, hi)`` the
    driver repeatedly finds the earliest special step ``l`` among the
    unfinished steps, runs the regular steps before it concurrently, then runs
    ``l`` alone.  ``prepare(j, hi)`` is called at the start of each sub-round,
    before any ``check_special`` call for that range.
    """
    pool = pool or ForkJoin()
    trace = RoundTrace()
    if n <= 0:
        return trace

    def special(k):
        try:
            run_special(k)
        except Halt:
            trace.special_steps.append(k)
            raise
        except Exception as exc:
            raise StepError(k, exc) from exc
        trace.special_steps.append(k)

    try:
        for lo, hi in doubling_blocks(n):
            trace.rounds += 1
            trace.per_round_sizes.append(hi - lo)
            if lo == 0:
                special(0)
                continue
            j = lo
            while j < hi:
                trace.sub_rounds += 1
                if prepare is not None:
                    prepare(j, hi)
                l = pool.first_true(j, hi, check_special)
                pool.for_range(j, l, run_regular)
                if l < hi:
                    special(l)
                    j = l + 1
                else:
                    j = l
    except Halt:
        trace.halted_at = trace.special_steps[-1] if trace.special_steps else 0
    return trace


def run_type3(
    n: int,
    run_step: Callable[[int], object],
    combine: Callable[[int, list], None],
    *,
    pool: ForkJoin | None = None,
) -> RoundTrace:
    """Doubling rounds with a combine barrier.

    Every step of round ``[lo, hi)`` runs against the state left by the
    previous round; ``combine(lo, results)`` then receives the results
    ordered by step index and must leave the state equal to running the
    steps sequentially.
    """
    pool = pool or ForkJoin()
    trace = RoundTrace()
    for lo, hi in doubling_blocks(n):
        trace.rounds += 1
        trace.sub_rounds += 1
        trace.per_round_sizes.append(hi - lo)
        results = [None] * (hi - lo)

        def body(k, lo=lo, results=results):
            results[k - lo] = run_step(k)

        pool.for_range(lo, hi, body)
        combine(lo, results)
    return trace
