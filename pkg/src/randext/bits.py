"""Length-tagged packed bit strings.

Bit order is LSB-first everywhere: bit i of a BitString backed by integer v is
(v >> i) & 1, and bit i of a byte stream is (data[i // 8] >> (i % 8)) & 1.
Concatenation x + y places x's bits at the low positions.  This is the one
bit-order rule used by every module and by the CLI's file formats.
"""

from __future__ import annotations

from typing import Iterable, Iterator

import numpy as np


class BitString:
    """Immutable bit string packed into a Python int (LSB-first)."""

    __slots__ = ("_v", "_n")

    def __init__(self, value: int, length: int):
        if length < 0:
            raise ValueError("negative length")
        if value < 0 or value >> length:
            raise ValueError(f"value does not fit in {length} bits")
        self._v = value
        self._n = length

    # -- constructors ----------------------------------------------------

    @classmethod
    def zeros(cls, n: int) -> "BitString":
        return cls(0, n)

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BitString":
        v = 0
        n = 0
        for b in bits:
            if b:
                v |= 1 << n
            n += 1
        return cls(v, n)

    @classmethod
    def from_bytes(cls, data: bytes, n: int | None = None) -> "BitString":
        """Decode a byte stream, LSB-first within each byte."""
        if n is None:
            n = 8 * len(data)
        if 8 * len(data) < n:
            raise ValueError("byte stream too short")
        v = int.from_bytes(data, "little") & ((1 << n) - 1)
        return cls(v, n)

    @classmethod
    def from_hex_seed(cls, text: str, n: int) -> "BitString":
        """Decode a hex seed: hex digits to bytes big-endian, then LSB-first bits."""
        text = text.strip()
        if len(text) % 2:
            text = "0" + text
        return cls.from_bytes(bytes.fromhex(text), n)

    @classmethod
    def from_numpy(cls, arr: np.ndarray) -> "BitString":
        """Pack a 0/1 uint8 array (index 0 = bit 0)."""
        packed = np.packbits(arr.astype(np.uint8), bitorder="little")
        return cls.from_bytes(packed.tobytes(), len(arr))

    # -- accessors -------------------------------------------------------

    @property
    def value(self) -> int:
        return self._v

    def __len__(self) -> int:
        return self._n

    def __getitem__(self, key):
        if isinstance(key, slice):
            start, stop, step = key.indices(self._n)
            if step != 1:
                raise ValueError("only contiguous slices are supported")
            width = max(0, stop - start)
            return BitString((self._v >> start) & ((1 << width) - 1), width)
        i = key
        if i < 0:
            i += self._n
        if not 0 <= i < self._n:
            raise IndexError("bit index out of range")
        return (self._v >> i) & 1

    def uint(self, start: int, width: int) -> int:
        """Integer value of bits [start, start+width), LSB-first."""
        if start < 0 or width < 0 or start + width > self._n:
            raise ValueError("chunk out of range")
        return (self._v >> start) & ((1 << width) - 1)

    def iter_uints(self, width: int) -> Iterator[int]:
        """Split into width-bit chunks, low bits first; the final chunk is
        zero-padded."""
        v = self._v
        mask = (1 << width) - 1
        for _ in range((self._n + width - 1) // width):
            yield v & mask
            v >>= width

    def popcount(self) -> int:
        return self._v.bit_count()

    def to_bytes(self) -> bytes:
        return self._v.to_bytes((self._n + 7) // 8, "little")

    def to_numpy(self) -> np.ndarray:
        """0/1 uint8 array, index 0 = bit 0."""
        raw = np.frombuffer(self.to_bytes(), dtype=np.uint8)
        return np.unpackbits(raw, bitorder="little")[: self._n]

    # -- operators ---------------------------------------------------------

    def __add__(self, other: "BitString") -> "BitString":
        """Concatenation; self occupies the low bit positions."""
        return BitString(self._v | (other._v << self._n), self._n + other._n)

    def __xor__(self, other: "BitString") -> "BitString":
        if self._n != other._n:
            raise ValueError("xor of unequal lengths")
        return BitString(self._v ^ other._v, self._n)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitString)
            and self._n == other._n
            and self._v == other._v
        )

    def __hash__(self) -> int:
        return hash((self._v, self._n))

    def __repr__(self) -> str:
        if self._n <= 64:
            body = format(self._v, f"0{self._n}b")[::-1] if self._n else ""
            return f"BitString<{self._n}:{body}>"
        return f"BitString<{self._n} bits>"


def concat_all(parts: Iterable[BitString]) -> BitString:
    v = 0
    n = 0
    for p in parts:
        v |= p.value << n
        n += len(p)
    return BitString(v, n)
