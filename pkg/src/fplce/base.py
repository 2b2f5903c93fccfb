"""Query surface shared by both index variants.

Subclasses provide the compiled kernels through ``_kargs`` (the argument
block their kernels take) and the four ``_k_*`` hooks; everything here is
argument checking and symbol/bit translation.
"""
from __future__ import annotations

import numpy as np
from numba import njit

from ._bits import read_bits, words_for
from .codec import project_lce, symbol_dtype

# sigma, b, tau, n_symbols, pad_bits, q, seed: one word each
HEADER_BITS = 7 * 64


@njit(cache=True)
def symbols_from_bits(words, b, m, out):
    pos = 0
    for k in range(m):
        out[k] = read_bits(words, pos, b)
        pos += b


class LceIndexBase:
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

    def _check_symbols(self, idx) -> np.ndarray:
        idx = np.ascontiguousarray(idx, dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= self.n_symbols):
            raise IndexError("symbol index out of range")
        return idx

    def _check_symbol(self, i: int) -> None:
        if not 0 <= i < self.n_symbols:
            raise IndexError(f"symbol {i} out of range [0, {self.n_symbols})")

    # -- extraction -------------------------------------------------------------

    def extract_bits(self, start: int, nbits: int) -> np.ndarray:
        """Padded bits ``start .. start+nbits-1`` as MSB-first words."""
        if start < 0 or nbits < 0 or start + nbits > self.n_bits:
            raise IndexError(f"bit range [{start}, {start + nbits}) out of range")
        out = np.zeros(words_for(nbits) + 1, dtype=np.uint64)
        self._k_extract_bits(start, nbits, out)
        return out

    def extract(self, i: int, m: int) -> np.ndarray:
        """Symbols ``i .. i+m-1``."""
        if i < 0 or m < 0 or i + m > self.n_symbols:
            raise IndexError(f"extract({i}, {m}) out of range for n={self.n_symbols}")
        words = self.extract_bits(self.pad_bits + i * self.b, m * self.b)
        out = np.empty(m, dtype=symbol_dtype(self.sigma))
        symbols_from_bits(words, self.b, m, out)
        return out

    def access(self, i: int) -> int:
        self._check_symbol(i)
        out = np.empty(1, dtype=np.uint64)
        self._k_access_many(np.array([i], dtype=np.int64), out)
        return int(out[0])

    def access_many(self, idx) -> np.ndarray:
        idx = self._check_symbols(idx)
        out = np.empty(idx.size, dtype=np.uint64)
        self._k_access_many(idx, out)
        return out

    # -- LCE ----------------------------------------------------------------------

    def lce(self, i: int, j: int, verify: bool = False) -> int:
        """Longest common extension of the suffixes starting at symbols ``i`` and ``j``.

        Correct with high probability.  ``verify=True`` re-checks the
        reported boundary against decoded text and falls back to a direct
        comparison if a fingerprint collision is caught.
        """
        self._check_symbol(i)
        self._check_symbol(j)
        if i == j:
            return self.n_symbols - i
        bits = self._k_bit_lce(self.pad_bits + i * self.b, self.pad_bits + j * self.b)
        ell = project_lce(bits, self.b)
        if verify and not self._boundary_ok(i, j, ell):
            ell = self._scan_lce(i, j)
        return ell

    def lce_many(self, I, J) -> tuple[np.ndarray, np.ndarray]:
        """Batch LCE; returns (answers, fingerprint comparisons per query)."""
        I = self._check_symbols(I)
        J = self._check_symbols(J)
        if I.shape != J.shape:
            raise ValueError("I and J must have the same length")
        out = np.empty(I.size, dtype=np.int64)
        counts = np.empty(I.size, dtype=np.int64)
        self._k_lce_many(I, J, out, counts)
        return out, counts

    def _boundary_ok(self, i: int, j: int, ell: int) -> bool:
        back = min(ell, max(1, self.tau // self.b))
        if back and not np.array_equal(self.extract(i + ell - back, back),
                                       self.extract(j + ell - back, back)):
            return False
        if max(i, j) + ell < self.n_symbols:
            return self.access(i + ell) != self.access(j + ell)
        return True

    def _scan_lce(self, i: int, j: int, chunk: int = 4096) -> int:
        ell = 0
        limit = self.n_symbols - max(i, j)
        while ell < limit:
            m = min(chunk, limit - ell)
            diff = np.flatnonzero(self.extract(i + ell, m) != self.extract(j + ell, m))
            if diff.size:
                return ell + int(diff[0])
            ell += m
        return ell
