"""Sparse bitvector ``Q`` kept as the sorted list of its 1 positions.

Only binary searches are used, so the structure costs exactly
``n_q * ceil(log2 universe)`` bits.  A maximal run of ones in ``Q`` shows up
in the list as consecutive integers; the 0-predecessor of a position inside
such a run is found by binary searching for the left end of that run.
"""
from __future__ import annotations

import numpy as np
from numba import njit

from ._bits import PackedInts, packed_get


def position_width(universe: int) -> int:
    return max(1, (universe - 1).bit_length())


@njit(cache=True)
def count_le(words, width, nq, i):
    """Number of stored positions ``<= i``."""
    lo = 0
    hi = nq
    ii = np.uint64(i)
    while lo < hi:
        mid = (lo + hi) >> 1
        if packed_get(words, width, mid) <= ii:
            lo = mid + 1
        else:
            hi = mid
    return lo


@njit(cache=True)
def rank1(words, width, nq, i):
    """Number of stored positions ``< i``."""
    if i <= 0:
        return 0
    return count_le(words, width, nq, i - 1)


@njit(cache=True)
def locate0(words, width, nq, i):
    """Return ``(t, r)`` with ``t = pred0(i)`` and ``r = rank0(t)``."""
    k = count_le(words, width, nq, i)
    if k == 0 or packed_get(words, width, k - 1) != np.uint64(i):
        return i, i - k
    # i sits in a run ending at list index r; find where the run starts
    r = k - 1
    top = np.int64(packed_get(words, width, r))
    lo = 0
    hi = r
    while lo < hi:
        mid = (lo + hi) >> 1
        if top - np.int64(packed_get(words, width, mid)) == r - mid:
            hi = mid
        else:
            lo = mid + 1
    t = np.int64(packed_get(words, width, lo)) - 1
    return t, t - lo


@njit(cache=True)
def _access_many(words, width, nq, idx, out):
    for k in range(idx.shape[0]):
        c = count_le(words, width, nq, idx[k])
        out[k] = 1 if c > 0 and packed_get(words, width, c - 1) == np.uint64(idx[k]) else 0


@njit(cache=True)
def _rank1_many(words, width, nq, idx, out):
    for k in range(idx.shape[0]):
        out[k] = rank1(words, width, nq, idx[k])


@njit(cache=True)
def _pred0_many(words, width, nq, idx, out):
    for k in range(idx.shape[0]):
        t, _ = locate0(words, width, nq, idx[k])
        out[k] = t


class SparseOnePositions:
    """Strictly increasing 1 positions of a bitvector of length ``universe``."""

    def __init__(self, positions, universe: int):
        arr = np.asarray(positions, dtype=np.int64).ravel()
        if universe < 0:
            raise ValueError("universe must be non-negative")
        if arr.size:
            if np.any(np.diff(arr) <= 0):
                raise ValueError("positions must be strictly increasing")
            if arr[0] <= 0:
                raise ValueError("position 0 must not be set (Q[0] = 0 is required)")
            if arr[-1] >= universe:
                raise ValueError("position outside the universe")
        self.universe = universe
        self.packed = PackedInts.from_values(arr.astype(np.uint64), position_width(universe))

    @classmethod
    def from_dense(cls, bits) -> "SparseOnePositions":
        bits = np.asarray(bits)
        return cls(np.flatnonzero(bits), bits.size)

    @classmethod
    def from_packed(cls, packed: PackedInts, universe: int) -> "SparseOnePositions":
        obj = cls.__new__(cls)
        obj.universe = universe
        obj.packed = packed
        return obj

    @property
    def n_ones(self) -> int:
        return self.packed.length

    @property
    def positions(self) -> np.ndarray:
        return self.packed.to_numpy().astype(np.int64)

    def __len__(self) -> int:
        return self.packed.length

    def _args(self):
        return self.packed.words, self.packed.width, self.packed.length

    def _check(self, i: int, upper: int) -> None:
        if not 0 <= i < upper:
            raise IndexError(f"block index {i} out of range [0, {upper})")

    def access(self, i: int) -> int:
        self._check(i, self.universe)
        words, width, nq = self._args()
        c = count_le(words, width, nq, i)
        return int(c > 0 and packed_get(words, width, c - 1) == i)

    def rank(self, i: int, bit: int = 1) -> int:
        """Number of positions ``j < i`` with ``Q[j] == bit``."""
        self._check(i, self.universe + 1)
        ones = int(rank1(*self._args(), i))
        return ones if bit else i - ones

    def pred0(self, i: int) -> int:
        """Largest ``j <= i`` with ``Q[j] == 0``."""
        self._check(i, self.universe)
        return int(locate0(*self._args(), i)[0])

    def _batch(self, kernel, idx, upper):
        idx = np.ascontiguousarray(idx, dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= upper):
            raise IndexError("block index out of range")
        out = np.empty(idx.size, dtype=np.int64)
        kernel(*self._args(), idx, out)
        return out

    def access_many(self, idx) -> np.ndarray:
        return self._batch(_access_many, idx, self.universe)

    def rank_many(self, idx, bit: int = 1) -> np.ndarray:
        ones = self._batch(_rank1_many, idx, self.universe + 1)
        return ones if bit else np.asarray(idx, dtype=np.int64) - ones

    def pred0_many(self, idx) -> np.ndarray:
        return self._batch(_pred0_many, idx, self.universe)

    def payload_bits(self) -> int:
        return self.packed.payload_bits()

    def __repr__(self) -> str:
        return f"SparseOnePositions(n_ones={self.n_ones}, universe={self.universe})"
