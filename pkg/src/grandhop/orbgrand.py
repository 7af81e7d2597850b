"""Soft-detection guessing decoder ordered by logistic weight.

Bits are ranked by ascending |LLR| (rank 1 = least reliable, ties broken by
bit index).  A candidate pattern flipping the bits at ranks {r_1, ..., r_m}
has logistic weight r_1 + ... + r_m; patterns are tested in ascending
logistic weight, so likelier noise under the soft information comes first.
Rank sets of one logistic weight are exactly the partitions of that weight
into distinct parts <= n.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import crc as crc_mod
from . import schedules
from .bitblock import BitBlock, ErrorPattern
from .grand import DEFAULT_MAX_QUERIES, DecodeResult

__all__ = [
    "ReliabilityRanking",
    "rank_bits",
    "iter_patterns_soft",
    "decode_soft",
    "match_syndrome_soft",
]


@dataclass(frozen=True)
class ReliabilityRanking:
    """Bit order by ascending |LLR|; permutation[t] is the bit of rank t+1."""

    permutation: np.ndarray
    reliabilities: np.ndarray

    def __post_init__(self) -> None:
        self.permutation.setflags(write=False)
        self.reliabilities.setflags(write=False)

    def __len__(self) -> int:
        return int(self.permutation.size)


def rank_bits(llrs) -> ReliabilityRanking:
    """Sort bit positions by ascending reliability magnitude.

    Ties go to the lower bit index.  Non-finite LLRs are a usage error.
    """
    arr = np.asarray(llrs, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("expected a non-empty 1-D LLR vector")
    if not np.all(np.isfinite(arr)):
        raise ValueError("LLRs must be finite")
    mags = np.abs(arr)
    perm = np.argsort(mags, kind="stable").astype(np.int32)
    return ReliabilityRanking(permutation=perm, reliabilities=mags[perm])


def iter_patterns_soft(ranking: ReliabilityRanking, max_queries: int = DEFAULT_MAX_QUERIES):
    """Yield bit-space patterns in ascending logistic weight, zero first."""
    n = len(ranking)
    yield ErrorPattern(BitBlock.zeros(n))
    pool = schedules.soft_pool(n)
    perm = ranking.permutation
    for row in range(max_queries - 1):
        if pool.ensure(row + 1) <= row:
            return
        yield ErrorPattern.from_indices(n, perm[list(pool.row(row))])


def match_syndrome_soft(
    code: crc_mod.CrcCode,
    synd: int,
    permutation: np.ndarray,
    max_queries: int = DEFAULT_MAX_QUERIES,
) -> tuple[tuple[int, ...] | None, int]:
    """First soft-schedule pattern whose syndrome equals synd.

    permutation maps rank position (0-based) to bit index.  Returns
    (flip_indices in bit space, queries_used); None flips on abandonment.
    """
    if synd == 0:
        return (), 1
    pool = schedules.soft_pool(code.n)
    unit = crc_mod.tables(code).unit_ints[permutation]
    row, scanned = schedules.first_match(synd, unit, pool, max_queries - 1)
    if row is None:
        return None, 1 + scanned
    return tuple(int(permutation[t]) for t in pool.row(row)), row + 2


def decode_soft(
    code: crc_mod.CrcCode,
    received_hard: BitBlock,
    llrs,
    max_queries: int = DEFAULT_MAX_QUERIES,
) -> DecodeResult:
    """Guess the noise using per-bit reliabilities.

    received_hard must be the sign-based hard decision of llrs (positive
    LLR and zero ties mean bit 0).
    """
    if len(received_hard) != code.n:
        raise ValueError(f"received word must have {code.n} bits, got {len(received_hard)}")
    arr = np.asarray(llrs, dtype=np.float64)
    if arr.shape != (code.n,):
        raise ValueError(f"expected {code.n} LLRs, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("LLRs must be finite")
    if not np.array_equal(received_hard.bits, (arr < 0).astype(np.uint8)):
        raise ValueError("received_hard does not match the LLR signs")
    if max_queries < 1:
        raise ValueError("max_queries must be positive")
    ranking = rank_bits(arr)
    synd = int(crc_mod.syndrome_ints(code, received_hard.bits))
    flips, queries = match_syndrome_soft(code, synd, ranking.permutation, max_queries)
    if flips is None:
        return DecodeResult(codeword=None, noise_estimate=None, queries_used=queries)
    noise = ErrorPattern.from_indices(code.n, flips)
    bits = received_hard.bits.copy()
    if flips:
        bits[list(flips)] ^= 1
    return DecodeResult(codeword=BitBlock(bits), noise_estimate=noise, queries_used=queries)
