"""Alphabet reduction: integer texts to a padded, bit-packed binary text.

A text over ``{0, ..., sigma-1}`` becomes the concatenation of its symbols
written in ``b = ceil(log2 sigma)`` bits each, MSB first, so lexicographic
order of symbols and of their codes coincide.  Zero bits are prepended
until the length is a multiple of the block size ``tau`` and the first
block is not all ones.  Symbol ``i`` therefore starts at bit
``pad_bits + i*b`` and pad bits are never addressed by a query.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from ._bits import read_bits, words_for, write_bits

MAX_SIGMA = 1 << 30


def bits_per_symbol(sigma: int, force_non_power_alphabet: bool = False) -> int:
    """``ceil(log2 sigma)``, plus one when a power-of-two alphabet must be avoided."""
    if sigma < 2:
        raise ValueError(f"sigma must be >= 2, got {sigma}")
    b = (sigma - 1).bit_length()
    if force_non_power_alphabet and sigma == 1 << b:
        b += 1
    return b


def symbol_dtype(sigma: int) -> np.dtype:
    if sigma <= 1 << 8:
        return np.dtype(np.uint8)
    if sigma <= 1 << 16:
        return np.dtype(np.uint16)
    return np.dtype(np.uint32)


def padding_for(n_symbols: int, b: int, tau: int, first_block_all_ones: bool = False) -> int:
    pad = -(n_symbols * b) % tau
    if pad == 0 and first_block_all_ones:
        pad = tau
    return pad


@njit(cache=True)
def _encode(symbols, b, pad, words):
    pos = pad
    for i in range(symbols.shape[0]):
        write_bits(words, pos, b, np.uint64(symbols[i]))
        pos += b


@njit(cache=True)
def _decode(words, b, start, n, out):
    pos = start
    for i in range(n):
        out[i] = read_bits(words, pos, b)
        pos += b


@njit(cache=True)
def _blocks(words, tau, out):
    for i in range(out.shape[0]):
        out[i] = read_bits(words, i * tau, tau)


@dataclass(frozen=True, eq=False)
class PackedText:
    """Binary expansion of a symbol text, left-padded to whole blocks."""

    words: np.ndarray
    n_symbols: int
    sigma: int
    b: int
    pad_bits: int
    tau: int

    @property
    def n_bits(self) -> int:
        return self.pad_bits + self.n_symbols * self.b

    @property
    def n_blocks(self) -> int:
        return self.n_bits // self.tau

    @classmethod
    def from_bits(cls, bits: str, tau: int) -> "PackedText":
        """Binary text from a ``"0"/"1"`` string (whitespace ignored)."""
        symbols = [int(c) for c in bits if not c.isspace()]
        return encode_text(symbols, 2, tau)

    def bit(self, k: int) -> int:
        if not 0 <= k < self.n_bits:
            raise IndexError(k)
        return int(read_bits(self.words, k, 1))

    def bit_string(self) -> str:
        return "".join(str(self.bit(k)) for k in range(self.n_bits))

    def block(self, i: int) -> int:
        """Block ``i`` read straight from the bits (reference for the indexes)."""
        if not 0 <= i < self.n_blocks:
            raise IndexError(i)
        return int(read_bits(self.words, i * self.tau, self.tau))

    def blocks(self) -> np.ndarray:
        out = np.empty(self.n_blocks, dtype=np.uint64)
        _blocks(self.words, self.tau, out)
        return out

    def decode(self) -> np.ndarray:
        out = np.empty(self.n_symbols, dtype=symbol_dtype(self.sigma))
        _decode(self.words, self.b, self.pad_bits, self.n_symbols, out)
        return out


def encode_text(symbols, sigma: int, tau: int, force_non_power_alphabet: bool = False) -> PackedText:
    """Pack ``symbols`` into a binary text with blocks of ``tau`` bits."""
    if sigma < 2 or sigma > MAX_SIGMA:
        raise ValueError(f"sigma must be in [2, 2^30], got {sigma}")
    if not 2 <= tau <= 63:
        raise ValueError(f"tau must be in [2, 63], got {tau}")
    arr = np.asarray(symbols)
    if arr.ndim != 1:
        raise ValueError("symbols must be a one-dimensional sequence")
    if arr.size == 0:
        arr = np.zeros(0, dtype=np.int64)
    elif not np.issubdtype(arr.dtype, np.integer):
        raise ValueError(f"symbols must be integers, got dtype {arr.dtype}")
    elif int(arr.min()) < 0 or int(arr.max()) >= sigma:
        bad = arr[(arr < 0) | (arr >= sigma)][0]
        raise ValueError(f"symbol {int(bad)} out of range for sigma={sigma}")
    b = bits_per_symbol(sigma, force_non_power_alphabet)
    n = int(arr.size)

    pad = padding_for(n, b, tau)
    words = np.zeros(words_for(pad + n * b) + 1, dtype=np.uint64)
    _encode(np.ascontiguousarray(arr), b, pad, words)
    if pad == 0 and n and int(read_bits(words, 0, tau)) == (1 << tau) - 1:
        pad = tau
        words = np.zeros(words_for(pad + n * b) + 1, dtype=np.uint64)
        _encode(np.ascontiguousarray(arr), b, pad, words)
    return PackedText(words, n, sigma, b, pad, tau)


def decode_text(pt: PackedText) -> np.ndarray:
    return pt.decode()


def symbol_bit_index(pt: PackedText, i: int) -> int:
    """Bit offset of symbol ``i`` in the padded binary text (``i == n`` allowed)."""
    if not 0 <= i <= pt.n_symbols:
        raise IndexError(f"symbol index {i} out of range [0, {pt.n_symbols}]")
    return pt.pad_bits + i * pt.b


def project_lce(bit_lce: int, b: int) -> int:
    """Symbol-level LCE from the LCE of the corresponding bit suffixes."""
    return bit_lce // b
