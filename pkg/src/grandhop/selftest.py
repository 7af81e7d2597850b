"""Built-in oracle checks, runnable from the command line.

Each check re-derives an expected answer with an independent method
(list-based polynomial long division, exhaustive pattern enumeration,
subset-sum counting) and compares the package's fast paths against it.
Everything runs on small codes in a few seconds on one core.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import crc as crc_mod
from . import grand, orbgrand, schedules
from .bitblock import BitBlock
from .crc import CRC12_K8F3, TOY_CRC4, CrcCode

__all__ = ["CheckResult", "run_selftest"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _division_remainder_bits(bits: list[int], generator_bits: list[int]) -> list[int]:
    """Schoolbook polynomial long division over GF(2), list of 0/1 coefficients."""
    work = list(bits) + [0] * (len(generator_bits) - 1)
    for i in range(len(bits)):
        if work[i]:
            for j, g in enumerate(generator_bits):
                work[i + j] ^= g
    return work[len(bits) :]


def _generator_bits(code: CrcCode) -> list[int]:
    return [(code.generator >> (code.r - i)) & 1 for i in range(code.r + 1)]


def _check_crc_division() -> CheckResult:
    """Fast encoder vs schoolbook long division, plus notation anchors."""
    # Koopman-to-explicit conversion anchors (widely published pairs) and
    # the classic 16-bit check value over the ASCII digits 1..9.
    if crc_mod.koopman_to_explicit(0x8810) != 0x11021:
        return CheckResult("crc-long-division", False, "koopman conversion (16-bit pair)")
    if crc_mod.koopman_to_explicit(0x82608EDB) != 0x104C11DB7:
        return CheckResult("crc-long-division", False, "koopman conversion (32-bit pair)")
    data = b"123456789"
    reg = 0
    for byte in data:
        reg ^= byte << 8
        for _ in range(8):
            reg = ((reg << 1) ^ 0x1021) & 0xFFFF if reg & 0x8000 else (reg << 1) & 0xFFFF
    if reg != 0x31C3:
        return CheckResult("crc-long-division", False, "16-bit check value mismatch")

    rng = np.random.Generator(np.random.Philox(12345))
    for code, trials in ((TOY_CRC4, 16), (CRC12_K8F3, 40)):
        gbits = _generator_bits(code)
        if trials == 16:
            msgs = [[(m >> (code.k - 1 - i)) & 1 for i in range(code.k)] for m in range(16)]
        else:
            msgs = rng.integers(0, 2, size=(trials, code.k)).tolist()
        for msg in msgs:
            expect = _division_remainder_bits(list(msg), gbits)
            got = crc_mod.encode(code, BitBlock(np.array(msg, dtype=np.uint8)))
            if got.bits[code.k :].tolist() != expect:
                return CheckResult(
                    "crc-long-division", False, f"parity mismatch for n={code.n}"
                )
            if not crc_mod.check(code, got):
                return CheckResult("crc-long-division", False, "codeword fails own check")
    return CheckResult("crc-long-division", True, "encoder matches schoolbook division")


def _toy_codewords() -> set[int]:
    words = set()
    for m in range(16):
        msg = BitBlock(np.array([(m >> (3 - i)) & 1 for i in range(4)], dtype=np.uint8))
        cw = crc_mod.encode(TOY_CRC4, msg)
        words.add(int("".join(str(b) for b in cw.bits.tolist()), 2))
    return words


def _check_grand_ml() -> CheckResult:
    """GRAND output equals brute-force minimum-distance with identical tie order."""
    code = TOY_CRC4
    codewords = _toy_codewords()
    schedule = grand.PatternSchedule(code.n, max_weight=code.n, max_queries=1 << code.n)
    for word in range(256):
        bits = np.array([(word >> (7 - i)) & 1 for i in range(8)], dtype=np.uint8)
        best = None
        for flips_int in range(256):
            flip_idx = [i for i in range(8) if flips_int >> i & 1]
            cand = word
            for i in flip_idx:
                cand ^= 1 << (7 - i)
            if cand in codewords:
                key = (len(flip_idx), flips_int)
                if best is None or key < best[0]:
                    best = (key, cand)
        result = grand.decode(code, BitBlock(bits), schedule)
        got = int("".join(str(b) for b in result.codeword.bits.tolist()), 2)
        if got != best[1]:
            return CheckResult(
                "grand-ml-equivalence", False, f"word {word:#04x}: {got:#04x} != {best[1]:#04x}"
            )
    return CheckResult("grand-ml-equivalence", True, "all 256 words match brute-force ML")


def _check_orbgrand_oracle() -> CheckResult:
    """Soft decoding equals brute-force logistic-weight minimization."""
    code = TOY_CRC4
    codewords = _toy_codewords()
    rng = np.random.Generator(np.random.Philox(99))
    for _ in range(1000):
        llrs = rng.normal(0.0, 2.0, size=8)
        hard = (llrs < 0).astype(np.uint8)
        ranks = np.empty(8, dtype=np.int64)
        order = np.argsort(np.abs(llrs), kind="stable")
        ranks[order] = np.arange(1, 9)
        word = int("".join(str(b) for b in hard.tolist()), 2)
        best = None
        for flips_int in range(256):
            flip_idx = [i for i in range(8) if flips_int >> i & 1]
            cand = word
            for i in flip_idx:
                cand ^= 1 << (7 - i)
            if cand in codewords:
                parts = tuple(sorted(int(ranks[i]) for i in flip_idx))
                key = (sum(parts), parts)
                if best is None or key < best[0]:
                    best = (key, cand)
        result = orbgrand.decode_soft(code, BitBlock(hard), llrs, max_queries=1 << 10)
        got = int("".join(str(b) for b in result.codeword.bits.tolist()), 2)
        if got != best[1]:
            return CheckResult("orbgrand-oracle", False, f"mismatch {got:#04x} != {best[1]:#04x}")
    return CheckResult("orbgrand-oracle", True, "1000 random LLR draws match brute force")


def _check_partition_counts() -> CheckResult:
    """Rank-sum pattern schedule is a bijection onto nonempty subsets."""
    for total, max_part in ((6, 8), (10, 8), (15, 16), (21, 6)):
        got = len(list(schedules.distinct_partitions(total, max_part)))
        want = 0
        for r in range(1, max_part + 1):
            for combo in combinations(range(1, max_part + 1), r):
                if sum(combo) == total:
                    want += 1
        if got != want:
            return CheckResult(
                "partition-counts", False, f"partitions({total},{max_part}): {got} != {want}"
            )
    rows = list(schedules.soft_rows(8))
    seen = {frozenset(row) for row in rows}
    if len(rows) != 255 or len(seen) != 255:
        return CheckResult(
            "partition-counts", False, f"schedule covers {len(seen)}/255 subsets in {len(rows)} rows"
        )
    return CheckResult("partition-counts", True, "partition counts and subset coverage agree")


def _check_query_accounting() -> CheckResult:
    """A single flip at bit index i costs exactly 2 + i queries."""
    code = TOY_CRC4
    msg = BitBlock(np.array([1, 0, 1, 1], dtype=np.uint8))
    cw = crc_mod.encode(code, msg)
    clean = grand.decode(code, cw)
    if clean.queries_used != 1:
        return CheckResult("query-accounting", False, "clean word should cost one query")
    for i in range(code.n):
        bits = cw.bits.copy()
        bits[i] ^= 1
        result = grand.decode(code, BitBlock(bits))
        if result.queries_used != 2 + i:
            return CheckResult(
                "query-accounting", False, f"flip at {i}: {result.queries_used} != {2 + i}"
            )
        if result.codeword != cw:
            return CheckResult("query-accounting", False, f"flip at {i} not corrected")
    return CheckResult("query-accounting", True, "query counts follow the schedule position")


def run_selftest() -> list[CheckResult]:
    """Run every built-in check; order is fixed."""
    return [
        _check_crc_division(),
        _check_grand_ml(),
        _check_orbgrand_oracle(),
        _check_partition_counts(),
        _check_query_accounting(),
    ]
