"""Independent reference implementations used to check the package.

Everything here is deliberately slow and literal: schoolbook long
division over GF(2), exhaustive decoders, closed-form error rates.  The
tests freeze values produced by these oracles and compare the package's
fast paths against them.
"""

from __future__ import annotations

import math

import numpy as np


def div_remainder(bits: list[int], gen_bits: list[int]) -> list[int]:
    """Polynomial remainder of bits * x^deg mod generator, schoolbook style."""
    work = list(bits) + [0] * (len(gen_bits) - 1)
    for i in range(len(bits)):
        if work[i]:
            for j, g in enumerate(gen_bits):
                work[i + j] ^= g
    return work[len(bits) :]


def generator_bits(generator: int, degree: int) -> list[int]:
    return [(generator >> (degree - i)) & 1 for i in range(degree + 1)]


def encode_oracle(generator: int, degree: int, msg_bits: list[int]) -> list[int]:
    return list(msg_bits) + div_remainder(list(msg_bits), generator_bits(generator, degree))


def q_function(x: float) -> float:
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def awgn_bpsk_ber(eb_n0_db: float, code_rate: float) -> float:
    snr = 10.0 ** (eb_n0_db / 10.0) * code_rate
    return q_function(math.sqrt(2.0 * snr))


def rayleigh_bpsk_ber(eb_n0_db: float, code_rate: float) -> float:
    snr = 10.0 ** (eb_n0_db / 10.0) * code_rate
    return 0.5 * (1.0 - math.sqrt(snr / (1.0 + snr)))


def bits_from_int(value: int, width: int) -> list[int]:
    return [(value >> (width - 1 - i)) & 1 for i in range(width)]


def int_from_bits(bits) -> int:
    out = 0
    for b in bits:
        out = (out << 1) | int(b)
    return out


def toy_codewords(generator: int = 0x13, degree: int = 4, k: int = 4) -> set[int]:
    """All codewords of the small 8-bit code, as integers."""
    words = set()
    for m in range(1 << k):
        words.add(int_from_bits(encode_oracle(generator, degree, bits_from_int(m, k))))
    return words


def flip_int(word: int, index: int, n: int) -> int:
    return word ^ (1 << (n - 1 - index))


def ml_decode_oracle(word: int, codewords: set[int], n: int = 8) -> int:
    """Minimum-distance decoding with the guessing tie order.

    Candidate error patterns are compared by (Hamming weight, flip-set
    integer with bit index i worth 2^i), the exact order the guessing
    decoder walks them in.
    """
    best = None
    for flips in range(1 << n):
        cand = word
        for i in range(n):
            if flips >> i & 1:
                cand = flip_int(cand, i, n)
        if cand in codewords:
            key = (bin(flips).count("1"), flips)
            if best is None or key < best[0]:
                best = (key, cand)
    return best[1]


def logistic_decode_oracle(hard: np.ndarray, llrs: np.ndarray, codewords: set[int]) -> int:
    """Exhaustive rank-sum minimization over all candidate flip sets.

    Ranks are 1-based positions in the ascending |LLR| order, ties broken
    by bit index; candidates compare by (rank sum, ascending rank tuple).
    """
    n = len(hard)
    ranks = np.empty(n, dtype=np.int64)
    ranks[np.argsort(np.abs(llrs), kind="stable")] = np.arange(1, n + 1)
    word = int_from_bits(hard)
    best = None
    for flips in range(1 << n):
        cand = word
        idx = [i for i in range(n) if flips >> i & 1]
        for i in idx:
            cand = flip_int(cand, i, n)
        if cand in codewords:
            parts = tuple(sorted(int(ranks[i]) for i in idx))
            key = (sum(parts), parts)
            if best is None or key < best[0]:
                best = (key, cand)
    return best[1]


def three_sigma_band(p: float, n_bits: int) -> float:
    """3-sigma absolute tolerance for a proportion estimated from n_bits bits."""
    return 3.0 * math.sqrt(max(p * (1.0 - p), 1e-300) / n_bits)
