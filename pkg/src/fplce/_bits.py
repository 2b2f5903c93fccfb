"""Word-level bit kernels shared by the text codec and the indexes.

Two layouts live here:

* bit streams (the binary text), stored MSB-first: bit ``k`` is bit
  ``63 - k % 64`` of word ``k // 64``, so a field read left to right is an
  ordinary big-endian integer;
* packed integer arrays (``PackedInts``), stored LSB-first: element ``i``
  occupies bits ``[i*width, (i+1)*width)`` counted from the least
  significant bit of word 0.

All kernels work on ``uint64`` words.  Mixed ``uint64``/``int64`` arithmetic
promotes to float in numba, so constants are spelled out as ``np.uint64``.
"""
from __future__ import annotations

import numpy as np
from numba import njit

ONE = np.uint64(1)
ZERO = np.uint64(0)
ALL_ONES = np.uint64(0xFFFFFFFFFFFFFFFF)


@njit(cache=True, inline="always")
def low_mask(width):
    if width >= 64:
        return ALL_ONES
    return (ONE << np.uint64(width)) - ONE


@njit(cache=True, inline="always")
def read_bits(words, pos, width):
    """Return bits ``pos .. pos+width-1`` of an MSB-first stream (1 <= width <= 64)."""
    # branch-free: always touch the next word (every stream carries a spare
    # trailing word); a straddle test mispredicts on random positions
    w = pos >> 6
    off = np.uint64(pos & 63)
    hi = (words[w] << off) | ((words[w + 1] >> ONE) >> (np.uint64(63) - off))
    return hi >> np.uint64(64 - width)


@njit(cache=True, inline="always")
def write_bits(words, pos, width, value):
    """OR ``value`` (``width`` bits) into an MSB-first stream at ``pos``.

    The target range must be zero beforehand.  Like ``read_bits`` this
    always touches the next word, so the stream needs its spare word.
    """
    w = pos >> 6
    off = np.uint64(pos & 63)
    v = value << np.uint64(64 - width)
    words[w] |= v >> off
    words[w + 1] |= (v << ONE) << (np.uint64(63) - off)


@njit(cache=True, inline="always")
def append_bits(out, k, acc, nacc, value, width):
    """Append ``width`` bits (1..64) to a sequential MSB-first writer.

    ``acc`` holds ``nacc < 64`` pending bits left-aligned; finished words
    are stored to ``out[k]`` with plain stores, so consecutive appends do
    not chain through memory the way ``write_bits`` does.  Returns the new
    ``(k, acc, nacc)``; ``flush_bits`` stores the tail.
    """
    # branch-free: the store is repeated until the word is full, and the
    # full/not-full pattern of tau-bit fields is too irregular to predict
    total = nacc + width
    v = value << np.uint64(64 - width)
    merged = acc | (v >> np.uint64(nacc))
    out[k] = merged
    full = total >= 64
    carry = (v << ONE) << np.uint64(63 - nacc)
    return k + full, carry if full else merged, total - 64 * full


@njit(cache=True, inline="always")
def flush_bits(out, k, acc, nacc):
    if nacc:
        out[k] = acc


@njit(cache=True, inline="always")
def packed_get(words, width, i):
    bit = i * width
    w = bit >> 6
    off = np.uint64(bit & 63)
    v = (words[w] >> off) | ((words[w + 1] << ONE) << (np.uint64(63) - off))
    return v & low_mask(width)


@njit(cache=True, inline="always")
def packed_or(words, width, i, value):
    bit = i * width
    w = bit >> 6
    off = bit & 63
    words[w] |= value << np.uint64(off)
    if off + width > 64:
        words[w + 1] |= value >> np.uint64(64 - off)


@njit(cache=True)
def _pack(values, width, out):
    for i in range(values.shape[0]):
        packed_or(out, width, i, values[i])


@njit(cache=True)
def _unpack(words, width, n, out):
    for i in range(n):
        out[i] = packed_get(words, width, i)


def words_for(n_bits: int) -> int:
    """Number of 64-bit words covering ``n_bits`` bits."""
    return (n_bits + 63) // 64


class PackedInts:
    """Fixed-width unsigned integer array packed into 64-bit words.

    ``words`` carries one trailing zero word so kernels may read ``w + 1``
    without a bounds check; it is not counted by :meth:`payload_bits`.
    """

    __slots__ = ("width", "length", "words")

    def __init__(self, width: int, length: int, words: np.ndarray | None = None):
        if not 1 <= width <= 64:
            raise ValueError(f"width must be in [1, 64], got {width}")
        self.width = width
        self.length = length
        if words is None:
            words = np.zeros(words_for(width * length) + 1, dtype=np.uint64)
        self.words = words

    @classmethod
    def from_values(cls, values, width: int) -> "PackedInts":
        arr = np.ascontiguousarray(values, dtype=np.uint64)
        if arr.size and width < 64 and int(arr.max()) >> width:
            raise ValueError(f"value does not fit in {width} bits")
        out = cls(width, arr.size)
        _pack(arr, width, out.words)
        return out

    def to_numpy(self) -> np.ndarray:
        out = np.empty(self.length, dtype=np.uint64)
        _unpack(self.words, self.width, self.length, out)
        return out

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, i: int) -> int:
        if not -self.length <= i < self.length:
            raise IndexError(i)
        if i < 0:
            i += self.length
        return int(packed_get(self.words, self.width, i))

    def payload_bits(self) -> int:
        return self.width * self.length

    def __repr__(self) -> str:
        return f"PackedInts(width={self.width}, length={self.length})"
