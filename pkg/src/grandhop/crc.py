"""Systematic CRC codes over GF(2): encoding, membership checks, syndromes.

Conventions (fixed and cross-checked against published check values):

* A word b_0 .. b_{n-1} maps to the polynomial sum(b_t * x**(n-1-t)); the
  first transmitted bit carries the highest power.
* The generator is stored in explicit form with bit i holding the
  coefficient of x**i.  Koopman form drops the implicit +1 term and lists
  x**r .. x**1, so explicit = (koopman << 1) | 1.
* Encoding is systematic: the codeword is the k message bits followed by
  the r parity bits, where parity is the remainder of message(x) * x**r,
  most significant coefficient first.  Shift register starts at zero, no
  reflection, no final xor.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from types import SimpleNamespace

import numpy as np

from .bitblock import MAX_LENGTH, BitBlock

__all__ = [
    "CrcCode",
    "CRC12_K8F3",
    "TOY_CRC4",
    "koopman_to_explicit",
    "poly_remainder",
    "encode",
    "check",
    "syndrome",
    "encode_array",
    "check_array",
    "syndrome_ints",
    "tables",
]


def koopman_to_explicit(koopman_id: int) -> int:
    """Convert Koopman polynomial notation to the explicit form.

    Koopman form lists the coefficients of x**r down to x**1 and leaves the
    +1 term implicit, e.g. 0x8810 -> 0x11021 (the CCITT-16 polynomial).
    """
    if koopman_id <= 0:
        raise ValueError("koopman id must be positive")
    return (koopman_id << 1) | 1


def poly_remainder(value: int, generator: int) -> int:
    """Remainder of value(x) divided by generator(x) over GF(2).

    Both arguments use bit i = coefficient of x**i.
    """
    gbits = generator.bit_length()
    while value.bit_length() >= gbits:
        value ^= generator << (value.bit_length() - gbits)
    return value


@dataclass(frozen=True)
class CrcCode:
    """Systematic CRC code: k message bits plus r = deg(generator) parity bits."""

    generator: int
    k: int

    def __post_init__(self) -> None:
        if self.generator < 2 or not (self.generator & 1):
            raise ValueError("generator needs degree >= 1 and a nonzero constant term")
        if self.k < 1:
            raise ValueError("k must be positive")
        if self.n > MAX_LENGTH:
            raise ValueError(f"codeword length {self.n} exceeds {MAX_LENGTH}")

    @property
    def r(self) -> int:
        return self.generator.bit_length() - 1

    @property
    def n(self) -> int:
        return self.k + self.r

    @property
    def rate(self) -> float:
        return self.k / self.n

    @property
    def koopman_id(self) -> int:
        return self.generator >> 1

    @classmethod
    def from_koopman(cls, koopman_id: int, k: int) -> "CrcCode":
        return cls(generator=koopman_to_explicit(koopman_id), k=k)


# 12-bit CRC, Koopman id 0x8F3, explicit 0x11E7:
#   x^12 + x^8 + x^7 + x^6 + x^5 + x^2 + x + 1
# The conversion rule was validated against published Koopman/explicit pairs
# (0x82608EDB <-> 0x104C11DB7 and 0x8810 <-> 0x11021) and the division
# conventions against the published XMODEM check value; see the crc tests.
CRC12_K8F3 = CrcCode.from_koopman(0x8F3, k=116)

# Small code for exhaustive oracles: x^4 + x + 1, 4 message bits, n = 8.
TOY_CRC4 = CrcCode(generator=0x13, k=4)


@lru_cache(maxsize=32)
def _tables(generator: int, k: int) -> SimpleNamespace:
    r = generator.bit_length() - 1
    n = k + r
    if r > 32:
        raise ValueError("parity lengths above 32 bits are not supported")
    unit = np.array(
        [poly_remainder(1 << (n - 1 - i), generator) for i in range(n)],
        dtype=np.uint32,
    )
    # remainder bits most significant coefficient first
    shifts = np.arange(r - 1, -1, -1, dtype=np.uint32)
    unit_bits = ((unit[:, None] >> shifts) & 1).astype(np.uint8)
    pow2 = (np.uint64(1) << shifts.astype(np.uint64)).astype(np.int64)
    return SimpleNamespace(
        unit_ints=unit,          # (n,) syndrome of a flip at each position
        unit_bits=unit_bits,     # (n, r) the same, as bit rows
        parity_rows=unit_bits[:k],
        pow2=pow2,
    )


def tables(code: CrcCode) -> SimpleNamespace:
    """Cached linear-algebra tables for a code (unit syndromes and friends)."""
    return _tables(code.generator, code.k)


def encode_array(code: CrcCode, messages: np.ndarray) -> np.ndarray:
    """Encode message bits (..., k) into codewords (..., n)."""
    msgs = np.asarray(messages, dtype=np.uint8)
    if msgs.shape[-1] != code.k:
        raise ValueError(f"expected {code.k} message bits, got {msgs.shape[-1]}")
    parity = (msgs.astype(np.int32) @ tables(code).parity_rows.astype(np.int32)) % 2
    return np.concatenate([msgs, parity.astype(np.uint8)], axis=-1)


def syndrome_ints(code: CrcCode, words: np.ndarray) -> np.ndarray:
    """Syndromes of words (..., n) packed as integers (remainder polynomial)."""
    w = np.asarray(words, dtype=np.uint8)
    if w.shape[-1] != code.n:
        raise ValueError(f"expected {code.n} bits, got {w.shape[-1]}")
    t = tables(code)
    bits = (w.astype(np.int32) @ t.unit_bits.astype(np.int32)) % 2
    return (bits @ t.pow2).astype(np.uint32)


def check_array(code: CrcCode, words: np.ndarray) -> np.ndarray:
    return syndrome_ints(code, words) == 0


def encode(code: CrcCode, message: BitBlock) -> BitBlock:
    """Append parity bits to a k-bit message."""
    if len(message) != code.k:
        raise ValueError(f"message must have {code.k} bits, got {len(message)}")
    return BitBlock(encode_array(code, message.bits))


def check(code: CrcCode, word: BitBlock) -> bool:
    """True when the n-bit word belongs to the codebook."""
    if len(word) != code.n:
        raise ValueError(f"word must have {code.n} bits, got {len(word)}")
    return bool(syndrome_ints(code, word.bits) == 0)


def syndrome(code: CrcCode, word: BitBlock) -> BitBlock:
    """Division remainder of the word, most significant coefficient first.

    Zero exactly for codebook members, and linear: syndrome(a ^ b) equals
    syndrome(a) ^ syndrome(b).
    """
    if len(word) != code.n:
        raise ValueError(f"word must have {code.n} bits, got {len(word)}")
    value = int(syndrome_ints(code, word.bits))
    bits = [(value >> (code.r - 1 - j)) & 1 for j in range(code.r)]
    return BitBlock(bits)
