"""Fixed-length binary vectors over GF(2)."""

from __future__ import annotations

import numpy as np

__all__ = ["MAX_LENGTH", "BitBlock", "ErrorPattern", "xor", "hamming_weight"]

MAX_LENGTH = 4096


class BitBlock:
    """Immutable sequence of bits.

    Bit 0 is the first transmitted bit.  When packed into bytes (hex form)
    bit 0 occupies the most significant bit of the first byte and any pad
    bits in the last byte are zero.
    """

    __slots__ = ("_bits",)

    def __init__(self, bits) -> None:
        arr = np.array(bits, dtype=np.uint8, copy=True).ravel()
        if arr.size == 0 or arr.size > MAX_LENGTH:
            raise ValueError(f"block length must be 1..{MAX_LENGTH}, got {arr.size}")
        if arr.max(initial=0) > 1:
            raise ValueError("bits must be 0 or 1")
        arr.setflags(write=False)
        self._bits = arr

    @property
    def bits(self) -> np.ndarray:
        """Read-only uint8 array of the bits."""
        return self._bits

    def __len__(self) -> int:
        return int(self._bits.size)

    def __getitem__(self, index: int) -> int:
        return int(self._bits[index])

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BitBlock) and np.array_equal(self._bits, other._bits)

    def __hash__(self) -> int:
        return hash((self._bits.size, self._bits.tobytes()))

    def __xor__(self, other: "BitBlock") -> "BitBlock":
        return xor(self, other)

    def __repr__(self) -> str:
        if len(self) <= 32:
            return f"BitBlock('{''.join(str(int(b)) for b in self._bits)}')"
        return f"BitBlock(length={len(self)}, hex='{self.to_hex()}')"

    @classmethod
    def zeros(cls, length: int) -> "BitBlock":
        return cls(np.zeros(length, dtype=np.uint8))

    @classmethod
    def from_string(cls, text: str) -> "BitBlock":
        """Parse a string of '0'/'1' characters; character 0 is bit 0."""
        if not text or set(text) - {"0", "1"}:
            raise ValueError("expected a non-empty string of 0s and 1s")
        return cls(np.frombuffer(text.encode("ascii"), dtype=np.uint8) - ord("0"))

    def to_hex(self) -> str:
        return np.packbits(self._bits).tobytes().hex()

    @classmethod
    def from_hex(cls, text: str, length: int) -> "BitBlock":
        raw = bytes.fromhex(text)
        if len(raw) != (length + 7) // 8:
            raise ValueError(f"hex length {len(raw)} bytes does not match {length} bits")
        bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8))
        if bits[length:].any():
            raise ValueError("pad bits past the block length must be zero")
        return cls(bits[:length])


class ErrorPattern:
    """A BitBlock with its Hamming weight cached."""

    __slots__ = ("_block", "_weight")

    def __init__(self, block) -> None:
        if not isinstance(block, BitBlock):
            block = BitBlock(block)
        self._block = block
        self._weight = int(np.count_nonzero(block.bits))

    @classmethod
    def from_indices(cls, length: int, indices) -> "ErrorPattern":
        bits = np.zeros(length, dtype=np.uint8)
        idx = np.asarray(indices, dtype=np.int64)
        if idx.size:
            if idx.min() < 0 or idx.max() >= length:
                raise ValueError("flip index out of range")
            bits[idx] = 1
        return cls(BitBlock(bits))

    @property
    def block(self) -> BitBlock:
        return self._block

    @property
    def weight(self) -> int:
        return self._weight

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(self._block.bits))

    def __len__(self) -> int:
        return len(self._block)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ErrorPattern) and self._block == other._block

    def __hash__(self) -> int:
        return hash(("ErrorPattern", self._block))

    def __repr__(self) -> str:
        return f"ErrorPattern(length={len(self)}, indices={self.indices})"


def xor(a: BitBlock, b: BitBlock) -> BitBlock:
    """Bitwise GF(2) sum of two equal-length blocks."""
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    return BitBlock(a.bits ^ b.bits)


def hamming_weight(a: BitBlock) -> int:
    return int(np.count_nonzero(a.bits))
