"""Hard-detection guessing decoder.

Error patterns are tested against the received hard decisions in ascending
Hamming weight, the most likely order for a binary symmetric channel below
half; the first pattern whose removal lands in the codebook wins.  Failing
to find one within the query budget or the weight cap is a normal outcome
(ABANDONED) and is reported, not raised.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from . import crc as crc_mod
from . import schedules
from .bitblock import BitBlock, ErrorPattern

__all__ = [
    "DEFAULT_MAX_QUERIES",
    "DEFAULT_MAX_WEIGHT",
    "PatternSchedule",
    "DecodeResult",
    "iter_patterns",
    "decode",
    "match_syndrome",
]

DEFAULT_MAX_QUERIES = 1_000_000
DEFAULT_MAX_WEIGHT = 4


@dataclass(frozen=True)
class PatternSchedule:
    """Enumeration plan: weights 0..max_weight, at most max_queries patterns."""

    block_length: int
    max_weight: int = DEFAULT_MAX_WEIGHT
    max_queries: int = DEFAULT_MAX_QUERIES

    def __post_init__(self) -> None:
        if self.block_length < 1:
            raise ValueError("block_length must be positive")
        if not (0 <= self.max_weight <= self.block_length):
            raise ValueError("max_weight must be in 0..block_length")
        if self.max_queries < 1:
            raise ValueError("max_queries must be positive")

    def total_patterns(self) -> int:
        """Patterns the schedule can emit: budget-capped weight-class total."""
        full = sum(math.comb(self.block_length, w) for w in range(self.max_weight + 1))
        return min(full, self.max_queries)


def iter_patterns(schedule: PatternSchedule):
    """Yield the schedule's patterns lazily, zero pattern first."""
    n = schedule.block_length
    yield ErrorPattern(BitBlock.zeros(n))
    pool = schedules.hard_pool(n, schedule.max_weight)
    for row in range(schedule.max_queries - 1):
        if pool.ensure(row + 1) <= row:
            return
        yield ErrorPattern.from_indices(n, pool.row(row))


@dataclass(frozen=True)
class DecodeResult:
    """Outcome of one guessing decode.

    codeword/noise_estimate are None exactly when the decoder abandoned;
    queries_used counts codebook membership tests, the zero pattern
    included.
    """

    codeword: BitBlock | None
    noise_estimate: ErrorPattern | None
    queries_used: int

    @property
    def abandoned(self) -> bool:
        return self.codeword is None


def match_syndrome(
    code: crc_mod.CrcCode,
    synd: int,
    max_weight: int = DEFAULT_MAX_WEIGHT,
    max_queries: int = DEFAULT_MAX_QUERIES,
) -> tuple[tuple[int, ...] | None, int]:
    """First schedule pattern whose syndrome equals synd.

    Returns (flip_indices, queries_used); flip_indices is None on
    abandonment.  Exact shortcut for testing patterns one by one: for a
    linear code, check(received ^ pattern) holds iff the syndromes match.
    """
    if synd == 0:
        return (), 1
    pool = schedules.hard_pool(code.n, max_weight)
    unit = crc_mod.tables(code).unit_ints
    row, scanned = schedules.first_match(synd, unit, pool, max_queries - 1)
    if row is None:
        return None, 1 + scanned
    return pool.row(row), row + 2


def decode(code: crc_mod.CrcCode, received: BitBlock, schedule: PatternSchedule | None = None) -> DecodeResult:
    """Guess the channel noise behind hard-decision bits of one block."""
    if len(received) != code.n:
        raise ValueError(f"received word must have {code.n} bits, got {len(received)}")
    if schedule is None:
        schedule = PatternSchedule(code.n)
    elif schedule.block_length != code.n:
        raise ValueError("schedule block length does not match the code")
    synd = int(crc_mod.syndrome_ints(code, received.bits))
    flips, queries = match_syndrome(code, synd, schedule.max_weight, schedule.max_queries)
    if flips is None:
        return DecodeResult(codeword=None, noise_estimate=None, queries_used=queries)
    noise = ErrorPattern.from_indices(code.n, flips)
    bits = received.bits.copy()
    if flips:
        bits[list(flips)] ^= 1
    return DecodeResult(codeword=BitBlock(bits), noise_estimate=noise, queries_used=queries)
