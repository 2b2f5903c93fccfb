"""In-place Monte Carlo LCE index over a Mersenne-prime fingerprint.

The padded binary text is cut into blocks of ``tau = p`` bits and only the
fingerprints of the prefixes ending at block boundaries are kept.  With
``q = 2^p - 1`` every block value except ``q`` itself is a residue, so block
``i`` is recovered as ``P'[i] - 2^tau * P'[i-1] mod q``, and ``2^tau = 1``
makes that a plain difference.  Blocks equal to ``q`` are dropped from the
fingerprint array and their positions are kept in a
:class:`~fplce.sparse.SparseOnePositions`; a missing ``P'[i]`` equals
``P'[t] * 2^(tau*(i-t)) = P'[t]`` for ``t`` the 0-predecessor of ``i``.  The
payload is ``|P|*tau + n_q*ceil(log2(n/tau))`` bits, never more than the
text itself.
"""
from __future__ import annotations

import numpy as np
from numba import njit

from ._bits import (
    ZERO, PackedInts, append_bits, flush_bits, low_mask, packed_get, packed_or, read_bits, words_for,
)
from .base import LceIndexBase
from .codec import PackedText
from .mersenne import DEFAULT_PRIME, MersennePrime, madd, msub, rotl
from .sparse import SparseOnePositions, locate0, rank1


# -- kernels -----------------------------------------------------------------
# Shared argument block: Pw (packed P), tau, p, q (uint64), sqw, sqwidth, nq.
# sqw is None when no block equals q; numba then compiles a specialisation
# without the S_Q searches, which keeps them out of the hot loops entirely.


@njit(cache=True, inline="always")
def _pprime(Pw, tau, p, q, sqw, sqwidth, nq, i):
    """P'[i] for -1 <= i < n_blocks."""
    if i < 0:
        return np.uint64(0)
    if sqw is None:
        return packed_get(Pw, tau, i)
    t, r = locate0(sqw, sqwidth, nq, i)
    # appending blocks equal to q changes nothing: q = 0 and 2^tau = 1 (mod q)
    return packed_get(Pw, tau, r)


@njit(cache=True, inline="always")
def _block_with_prev(Pw, tau, p, q, sqw, sqwidth, nq, j, prev):
    """B[j] given prev = P'[j-1].  Since 2^tau = 1 (mod q), B[j] = P'[j] - P'[j-1]."""
    if sqw is None:
        return msub(packed_get(Pw, tau, j), prev, q)
    t, r = locate0(sqw, sqwidth, nq, j)
    if t != j:
        return q
    return msub(packed_get(Pw, tau, r), prev, q)


@njit(cache=True)
def _block(Pw, tau, p, q, sqw, sqwidth, nq, j):
    prev = _pprime(Pw, tau, p, q, sqw, sqwidth, nq, j - 1)
    return _block_with_prev(Pw, tau, p, q, sqw, sqwidth, nq, j, prev)


@njit(cache=True, inline="always")
def _prefix(Pw, tau, p, q, sqw, sqwidth, nq, length):
    """Fingerprint of the first ``length`` bits of the padded text."""
    j = length // tau
    r = length - j * tau
    prev = _pprime(Pw, tau, p, q, sqw, sqwidth, nq, j - 1)
    if r == 0:
        return prev
    bj = _block_with_prev(Pw, tau, p, q, sqw, sqwidth, nq, j, prev)
    return madd(rotl(prev, r, p, q), bj >> np.uint64(tau - r), p, q)


@njit(cache=True)
def _substring(Pw, tau, p, q, sqw, sqwidth, nq, start, length):
    """Fingerprint of bits ``start .. start+length-1``."""
    hi = _prefix(Pw, tau, p, q, sqw, sqwidth, nq, start + length)
    lo = _prefix(Pw, tau, p, q, sqw, sqwidth, nq, start)
    return msub(hi, rotl(lo, length, p, q), q)


@njit(cache=True)
def _bit_lce(Pw, tau, p, q, sqw, sqwidth, nq, n_bits, a, c):
    """Bit-level LCE of the suffixes at ``a != c``; returns (length, comparisons)."""
    limit = n_bits - max(a, c)
    fa = _prefix(Pw, tau, p, q, sqw, sqwidth, nq, a)
    fc = _prefix(Pw, tau, p, q, sqw, sqwidth, nq, c)
    count = 0
    lo = 0
    hi = 0
    k = 1
    # galloping phase: lengths 1, 2, 4, ... clamped at the end of the text
    while True:
        if k >= limit:
            k = limit
        ha = _prefix(Pw, tau, p, q, sqw, sqwidth, nq, a + k)
        hc = _prefix(Pw, tau, p, q, sqw, sqwidth, nq, c + k)
        count += 1
        if msub(ha, rotl(fa, k, p, q), q) == msub(hc, rotl(fc, k, p, q), q):
            if k == limit:
                return limit, count
            lo = k
            k <<= 1
        else:
            hi = k
            break
    # equal at lo, different at hi
    while hi - lo > 1:
        mid = (lo + hi) >> 1
        ha = _prefix(Pw, tau, p, q, sqw, sqwidth, nq, a + mid)
        hc = _prefix(Pw, tau, p, q, sqw, sqwidth, nq, c + mid)
        count += 1
        if msub(ha, rotl(fa, mid, p, q), q) == msub(hc, rotl(fc, mid, p, q), q):
            lo = mid
        else:
            hi = mid
    return lo, count


@njit(cache=True)
def _lce_many(Pw, tau, p, q, sqw, sqwidth, nq, n_bits, pad, b, n_symbols, I, J, out, counts):
    for k in range(I.shape[0]):
        i = I[k]
        j = J[k]
        if i == j:
            out[k] = n_symbols - i
            counts[k] = 0
            continue
        bits, cnt = _bit_lce(Pw, tau, p, q, sqw, sqwidth, nq, n_bits, pad + i * b, pad + j * b)
        out[k] = bits // b
        counts[k] = cnt


@njit(cache=True)
def _extract_bits(Pw, tau, p, q, sqw, sqwidth, nq, n_blocks, start, nbits, out):
    """Write bits ``start .. start+nbits-1`` MSB-first into ``out``."""
    if nbits <= 0:
        return
    end = start + nbits
    j0 = start // tau
    j1 = (end - 1) // tau
    prev = _pprime(Pw, tau, p, q, sqw, sqwidth, nq, j0 - 1)
    k = 0
    nxt = n_blocks
    if sqw is not None:
        k = rank1(sqw, sqwidth, nq, j0)
        if k < nq:
            nxt = np.int64(packed_get(sqw, sqwidth, k))
    w = 0
    acc = ZERO
    nacc = 0
    for j in range(j0, j1 + 1):
        if j == nxt:
            blk = q
            cur = prev
            k += 1
            nxt = n_blocks
            if sqw is not None and k < nq:
                nxt = np.int64(packed_get(sqw, sqwidth, k))
        else:
            cur = packed_get(Pw, tau, j - k)
            blk = msub(cur, prev, q)
        lo = max(start, j * tau)
        hi = min(end, (j + 1) * tau)
        width = hi - lo
        val = (blk >> np.uint64((j + 1) * tau - hi)) & low_mask(width)
        w, acc, nacc = append_bits(out, w, acc, nacc, val, width)
        prev = cur
    flush_bits(out, w, acc, nacc)


@njit(cache=True)
def _access_many(Pw, tau, p, q, sqw, sqwidth, nq, pad, b, idx, out):
    for k in range(idx.shape[0]):
        start = pad + idx[k] * b
        end = start + b
        j = start // tau
        prev = _pprime(Pw, tau, p, q, sqw, sqwidth, nq, j - 1)
        val = ZERO
        while True:
            blk = _block_with_prev(Pw, tau, p, q, sqw, sqwidth, nq, j, prev)
            lo = max(start, j * tau)
            hi = min(end, (j + 1) * tau)
            width = hi - lo
            val = (val << np.uint64(width)) | ((blk >> np.uint64((j + 1) * tau - hi)) & low_mask(width))
            if hi == end:
                break
            prev = _pprime(Pw, tau, p, q, sqw, sqwidth, nq, j)
            j += 1
        out[k] = val


@njit(cache=True)
def _build(words, n_blocks, tau, p, q, Pw, sq_pos):
    """One pass over the blocks; returns (|P|, n_q)."""
    acc = np.uint64(0)
    n_p = 0
    n_q = 0
    for i in range(n_blocks):
        blk = read_bits(words, i * tau, tau)
        acc = madd(acc, blk, p, q)  # 2^tau = 1 (mod q)
        if blk == q:
            sq_pos[n_q] = i
            n_q += 1
        else:
            packed_or(Pw, tau, n_p, acc)
            n_p += 1
    return n_p, n_q


# -- public structure ----------------------------------------------------------


class MersenneLceIndex(LceIndexBase):
    """Fingerprint-sampled text replacement answering LCE and extract queries."""

    variant = 1

    def __init__(self, mp: MersennePrime, n_symbols: int, sigma: int, b: int,
                 pad_bits: int, P: PackedInts, sq: SparseOnePositions):
        self.mp = mp
        self.n_symbols = n_symbols
        self.sigma = sigma
        self.b = b
        self.pad_bits = pad_bits
        self.P = P
        self.sq = sq
        self.tau = mp.p
        self._kargs = (P.words, mp.p, np.uint64(mp.p), np.uint64(mp.q),
                       sq.packed.words if sq.n_ones else None, sq.packed.width, sq.packed.length)

    @classmethod
    def build(cls, pt: PackedText, mp: MersennePrime = DEFAULT_PRIME) -> "MersenneLceIndex":
        tau = mp.p
        if pt.tau != tau:
            raise ValueError(f"text padded for tau={pt.tau}, prime needs tau={tau}")
        n_bits = pt.n_bits
        if n_bits % tau:
            raise ValueError("text is not padded to a whole number of blocks")
        if n_bits > 1 << tau:
            raise ValueError(f"tau < log2 n: {n_bits} bits need tau >= "
                             f"{(n_bits - 1).bit_length()}, got tau={tau}")
        n_blocks = n_bits // tau
        if n_blocks and pt.block(0) == mp.q:
            raise ValueError("first block is all ones; pad the text")
        Pw = np.zeros(words_for(n_blocks * tau) + 1, dtype=np.uint64)
        sq_pos = np.empty(n_blocks, dtype=np.int64)
        n_p, n_q = _build(pt.words, n_blocks, tau, np.uint64(mp.p), np.uint64(mp.q), Pw, sq_pos)
        if n_q:
            Pw = Pw[: words_for(n_p * tau) + 1].copy()
        sq = SparseOnePositions(sq_pos[:n_q], n_blocks)
        return cls(mp, pt.n_symbols, pt.sigma, pt.b, pt.pad_bits, PackedInts(tau, n_p, Pw), sq)

    @property
    def q(self) -> int:
        return self.mp.q

    @property
    def n_q(self) -> int:
        return self.sq.n_ones

    def block(self, i: int) -> int:
        if not 0 <= i < self.n_blocks:
            raise IndexError(f"block {i} out of range [0, {self.n_blocks})")
        return int(_block(*self._kargs, i))

    def prefix_fingerprint(self, i: int) -> int:
        """Fingerprint of padded bits ``0 .. i``."""
        if not 0 <= i < self.n_bits:
            raise IndexError(f"bit {i} out of range [0, {self.n_bits})")
        return int(_prefix(*self._kargs, i + 1))

    def substring_fingerprint(self, i: int, j: int) -> int:
        """Fingerprint of padded bits ``i .. j``; ``i == j + 1`` is the empty string."""
        if not (0 <= i <= j + 1 <= self.n_bits):
            raise IndexError(f"bad bit range [{i}, {j}]")
        return int(_substring(*self._kargs, i, j - i + 1))

    def space_report(self) -> int:
        """Payload bits: ``|P|*tau + n_q*ceil(log2 n_blocks)``."""
        bits = self.P.payload_bits() + self.sq.payload_bits()
        assert bits <= self.n_bits, "payload exceeds the size of the text"
        return bits

    # kernel hooks

    def _k_extract_bits(self, start, nbits, out):
        _extract_bits(*self._kargs, self.n_blocks, start, nbits, out)

    def _k_access_many(self, idx, out):
        _access_many(*self._kargs, self.pad_bits, self.b, idx, out)

    def _k_bit_lce(self, a, c):
        return int(_bit_lce(*self._kargs, self.n_bits, a, c)[0])

    def _k_lce_many(self, I, J, out, counts):
        _lce_many(*self._kargs, self.n_bits, self.pad_bits, self.b, self.n_symbols, I, J, out, counts)

    def __repr__(self) -> str:
        return (f"MersenneLceIndex(n={self.n_symbols}, sigma={self.sigma}, "
                f"tau={self.tau}, n_q={self.n_q})")
