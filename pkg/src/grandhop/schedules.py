"""Lazy error-pattern schedules shared by the guessing decoders.

Hard schedule: Hamming weight classes in increasing order.  Within one
weight class, patterns ascend by their integer value with bit i worth 2**i,
which is colex order on the flipped-index sets; the single flip at index 0
is therefore the first weight-1 pattern tested.

Soft schedule: ascending logistic weight (sum of the 1-based reliability
ranks of the flipped bits).  Within one logistic weight, the partitions
into distinct parts are enumerated in ascending lexicographic order of the
ascending part tuple, e.g. weight 6 -> (1,2,3), (1,5), (2,4), (6).

Both schedules exclude the zero pattern; callers test that first.  Rows are
materialized on demand into shared append-only pools so that the syndrome
search can scan them with vectorized XOR reductions.
"""

from __future__ import annotations

import math
from itertools import islice
from typing import Iterator

import numpy as np

__all__ = [
    "combinations_colex",
    "distinct_partitions",
    "hard_rows",
    "soft_rows",
    "hard_schedule_rows",
    "soft_schedule_rows",
    "PatternPool",
    "hard_pool",
    "soft_pool",
    "first_match",
]

_CHUNK_START = 1024
_CHUNK_MAX = 1 << 18


def combinations_colex(n: int, weight: int) -> Iterator[tuple[int, ...]]:
    """Index sets of the given size from range(n), ascending integer value."""
    if weight == 0:
        yield ()
        return
    if weight > n:
        return
    c = list(range(weight))
    while True:
        yield tuple(c)
        i = 0
        while i < weight:
            cap = c[i + 1] if i + 1 < weight else n
            if c[i] + 1 < cap:
                break
            i += 1
        if i == weight:
            return
        c[i] += 1
        for j in range(i):
            c[j] = j


def distinct_partitions(total: int, max_part: int) -> Iterator[tuple[int, ...]]:
    """Partitions of total into strictly increasing parts <= max_part.

    Emitted in ascending lexicographic order of the ascending part tuple.
    """
    if total <= 0:
        return

    def rec(remaining: int, min_part: int, prefix: tuple[int, ...]):
        top = min(remaining, max_part)
        for p in range(min_part, top + 1):
            rest = remaining - p
            if rest == 0:
                yield prefix + (p,)
            elif rest > p:
                yield from rec(rest, p + 1, prefix + (p,))

    yield from rec(total, 1, ())


def hard_rows(n: int, max_weight: int) -> Iterator[tuple[int, ...]]:
    """Nonzero hard-schedule rows as flipped-index tuples."""
    for w in range(1, max_weight + 1):
        yield from combinations_colex(n, w)


def soft_rows(n: int) -> Iterator[tuple[int, ...]]:
    """Nonzero soft-schedule rows as 0-based rank tuples."""
    for w in range(1, n * (n + 1) // 2 + 1):
        for parts in distinct_partitions(w, n):
            yield tuple(p - 1 for p in parts)


def hard_schedule_rows(n: int, max_weight: int) -> int:
    """Number of nonzero patterns with weight <= max_weight."""
    return sum(math.comb(n, w) for w in range(1, max_weight + 1))


def soft_schedule_rows(n: int) -> int:
    """Number of nonzero soft-schedule patterns (all subsets)."""
    return (1 << n) - 1


class PatternPool:
    """Append-only flat storage for schedule rows, grown on demand."""

    def __init__(self, rows: Iterator[tuple[int, ...]]):
        self._rows_iter = rows
        self._flat = np.empty(4096, dtype=np.int32)
        self._offsets = np.empty(4097, dtype=np.int64)
        self._offsets[0] = 0
        self._count = 0
        self._flat_used = 0
        self._exhausted = False

    @property
    def count(self) -> int:
        return self._count

    def ensure(self, rows: int) -> int:
        """Materialize schedule rows up to the requested count.

        Returns the number actually available, which is smaller only when
        the schedule is exhausted.
        """
        while self._count < rows and not self._exhausted:
            want = max(rows - self._count, 4096)
            batch = list(islice(self._rows_iter, want))
            if len(batch) < want:
                self._exhausted = True
            if not batch:
                break
            counts = np.fromiter((len(t) for t in batch), dtype=np.int64, count=len(batch))
            total = int(counts.sum())
            flat = np.fromiter((i for t in batch for i in t), dtype=np.int32, count=total)
            self._append(flat, counts)
        return self._count

    def _append(self, flat: np.ndarray, counts: np.ndarray) -> None:
        need_flat = self._flat_used + flat.size
        if need_flat > self._flat.size:
            new = np.empty(max(need_flat, 2 * self._flat.size), dtype=np.int32)
            new[: self._flat_used] = self._flat[: self._flat_used]
            self._flat = new
        need_rows = self._count + counts.size + 1
        if need_rows > self._offsets.size:
            new = np.empty(max(need_rows, 2 * self._offsets.size), dtype=np.int64)
            new[: self._count + 1] = self._offsets[: self._count + 1]
            self._offsets = new
        self._flat[self._flat_used : self._flat_used + flat.size] = flat
        ends = self._flat_used + np.cumsum(counts)
        self._offsets[self._count + 1 : self._count + 1 + counts.size] = ends
        self._flat_used = need_flat
        self._count += counts.size

    def segment(self, start: int, stop: int) -> tuple[np.ndarray, np.ndarray]:
        """Flat parts and local row offsets for rows [start, stop)."""
        if stop > self._count or start < 0 or start >= stop:
            raise IndexError("segment out of materialized range")
        o = self._offsets[start : stop + 1]
        return self._flat[o[0] : o[-1]], o[:-1] - o[0]

    def row(self, index: int) -> tuple[int, ...]:
        flat, _ = self.segment(index, index + 1)
        return tuple(int(i) for i in flat)


_POOLS: dict[tuple, PatternPool] = {}


def hard_pool(n: int, max_weight: int) -> PatternPool:
    key = ("hard", n, max_weight)
    pool = _POOLS.get(key)
    if pool is None:
        pool = _POOLS[key] = PatternPool(hard_rows(n, max_weight))
    return pool


def soft_pool(n: int) -> PatternPool:
    key = ("soft", n)
    pool = _POOLS.get(key)
    if pool is None:
        pool = _POOLS[key] = PatternPool(soft_rows(n))
    return pool


def first_match(
    target: int,
    unit_ints: np.ndarray,
    pool: PatternPool,
    max_rows: int,
) -> tuple[int | None, int]:
    """First schedule row whose flipped-unit XOR equals the target syndrome.

    Scans rows in schedule order, in growing vectorized chunks.  Returns
    (row, rows_scanned); row is None when the scan stops at the budget or
    at schedule exhaustion, with rows_scanned reporting how many rows were
    actually examined.
    """
    target = np.uint32(target)
    start = 0
    size = _CHUNK_START
    while start < max_rows:
        stop = min(start + size, max_rows)
        avail = pool.ensure(stop)
        lim = min(stop, avail)
        if lim > start:
            flat, offsets = pool.segment(start, lim)
            acc = np.bitwise_xor.reduceat(unit_ints[flat], offsets)
            hits = np.flatnonzero(acc == target)
            if hits.size:
                row = start + int(hits[0])
                return row, row + 1
        if avail < stop:
            return None, avail
        start = stop
        size = min(size * 4, _CHUNK_MAX)
    return None, max_rows
