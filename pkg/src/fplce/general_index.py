"""Monte Carlo LCE index over an arbitrary prime fingerprint modulus.

With ``tau = ceil(log2 q)`` a block may exceed ``q``, but never by ``q`` or
more, so the full prefix-fingerprint array ``P'`` plus one bit per block
(``D[i] = [B[i] >= q]``) decodes every block in constant time.  A table of
``2^(2^t) mod q`` lets the LCE search keep its running power of two
(``off = 2^e mod q``) up to date with one product per step, provided every
step advances by a power of two.
"""
from __future__ import annotations

import numpy as np
from numba import njit

from ._bits import (
    PackedInts, append_bits, flush_bits, low_mask, packed_get, packed_or, read_bits, words_for,
)
from .base import LceIndexBase
from .codec import PackedText
from .modarith import ONE, ZERO, addmod, montgomery_constants, montmul, mulmod, submod, to_montgomery
from .primes import generate_prime, is_prime

# Kernel argument block: Pw (packed P'), tau, q, qinv, r2, two_tau, Dw, z.
# two_tau is 2^tau in Montgomery form (2^(tau+64) mod q), for montmul.


@njit(cache=True, inline="always")
def _dbit(Dw, j):
    return (Dw[j >> 6] >> np.uint64(j & 63)) & ONE


@njit(cache=True)
def _pfull(Pw, tau, i):
    if i < 0:
        return ZERO
    return packed_get(Pw, tau, i)


@njit(cache=True)
def _block_with_prev(Pw, tau, q, qinv, r2, two_tau, Dw, j, prev):
    v = submod(packed_get(Pw, tau, j), montmul(prev, two_tau, q, qinv), q)
    if _dbit(Dw, j):
        v += q
    return v


@njit(cache=True)
def _block(Pw, tau, q, qinv, r2, two_tau, Dw, z, j):
    return _block_with_prev(Pw, tau, q, qinv, r2, two_tau, Dw, j, _pfull(Pw, tau, j - 1))


@njit(cache=True)
def _prefix(Pw, tau, q, qinv, r2, two_tau, Dw, z, length):
    """Fingerprint of the first ``length`` bits."""
    j = length // tau
    r = length - j * tau
    prev = _pfull(Pw, tau, j - 1)
    if r == 0:
        return prev
    bj = _block_with_prev(Pw, tau, q, qinv, r2, two_tau, Dw, j, prev)
    # 2^r < 2^(tau-1) < q is already reduced
    head = mulmod(prev, ONE << np.uint64(r), q, qinv, r2)
    return addmod(head, bj >> np.uint64(tau - r), q)


@njit(cache=True)
def _fingerprint_with_exp(Pw, tau, q, qinv, r2, two_tau, Dw, z, start, length, fstart, ex):
    """``phi(T[0..start+length-1]) - phi(T[0..start-1]) * ex``; ``fstart`` is the latter prefix."""
    hi = _prefix(Pw, tau, q, qinv, r2, two_tau, Dw, z, start + length)
    # callers may hand in Python ints; keep the arithmetic in uint64
    return submod(hi, mulmod(np.uint64(fstart), np.uint64(ex), q, qinv, r2), q)


@njit(cache=True)
def _pow2(z, length, q, qinv, r2):
    """``2^length mod q`` from the squaring table."""
    out = ONE
    t = 0
    while length:
        if length & 1:
            out = mulmod(out, z[t], q, qinv, r2)
        length >>= 1
        t += 1
    return out


@njit(cache=True, inline="always")
def _floor_log2(x):
    r = 0
    for s in (32, 16, 8, 4, 2, 1):
        if x >> s:
            x >>= s
            r += s
    return r


@njit(cache=True)
def _bit_lce(Pw, tau, q, qinv, r2, two_tau, Dw, z, n_bits, a, c, trace, trace_on):
    """Bit-level LCE of suffixes ``a != c``; returns (length, comparisons, trace rows).

    Trace rows are ``(phase, e, off, l, l')`` with phase 0 for the galloping
    steps and 1 for the split steps.
    """
    limit = n_bits - max(a, c)
    fa = _prefix(Pw, tau, q, qinv, r2, two_tau, Dw, z, a)
    fc = _prefix(Pw, tau, q, qinv, r2, two_tau, Dw, z, c)
    count = 0
    rows = 0
    e = 0
    off = ONE
    t = 0
    k = 0
    while True:
        length = 1 << t
        if length >= limit:
            ex = _pow2(z, limit, q, qinv, r2)
            count += 1
            if (_fingerprint_with_exp(Pw, tau, q, qinv, r2, two_tau, Dw, z, a, limit, fa, ex)
                    == _fingerprint_with_exp(Pw, tau, q, qinv, r2, two_tau, Dw, z, c, limit, fc, ex)):
                return limit, count, rows
            # every length >= limit is now known to differ
            k = length
            break
        ex = z[t]
        count += 1
        if trace_on:
            trace[rows, 0] = 0
            trace[rows, 1] = e
            trace[rows, 2] = off
            trace[rows, 3] = length
            trace[rows, 4] = length
            rows += 1
        if (_fingerprint_with_exp(Pw, tau, q, qinv, r2, two_tau, Dw, z, a, length, fa, ex)
                == _fingerprint_with_exp(Pw, tau, q, qinv, r2, two_tau, Dw, z, c, length, fc, ex)):
            e = length
            off = ex
            t += 1
        else:
            k = length
            break
    # state <e, k>: equal up to e, different at k, off = 2^e mod q
    while k - e > 1:
        span = k - e
        s = _floor_log2(span) - 1
        step = 1 << s
        if trace_on:
            trace[rows, 0] = 1
            trace[rows, 1] = e
            trace[rows, 2] = off
            trace[rows, 3] = span
            trace[rows, 4] = step
            rows += 1
        if e + step >= limit:
            k = e + step
            continue
        ex = mulmod(off, z[s], q, qinv, r2)
        count += 1
        if (_fingerprint_with_exp(Pw, tau, q, qinv, r2, two_tau, Dw, z, a, e + step, fa, ex)
                == _fingerprint_with_exp(Pw, tau, q, qinv, r2, two_tau, Dw, z, c, e + step, fc, ex)):
            off = ex
            e += step
        else:
            k = e + step
    return e, count, rows


@njit(cache=True)
def _lce_many(Pw, tau, q, qinv, r2, two_tau, Dw, z, n_bits, pad, b, n_symbols, I, J, out, counts):
    trace = np.empty((0, 5), dtype=np.uint64)
    for k in range(I.shape[0]):
        i = min(I[k], J[k])
        j = max(I[k], J[k])
        if i == j:
            out[k] = n_symbols - i
            counts[k] = 0
            continue
        bits, cnt, _ = _bit_lce(Pw, tau, q, qinv, r2, two_tau, Dw, z, n_bits,
                                pad + i * b, pad + j * b, trace, False)
        out[k] = bits // b
        counts[k] = cnt


@njit(cache=True)
def _extract_bits(Pw, tau, q, qinv, r2, two_tau, Dw, z, start, nbits, out):
    if nbits <= 0:
        return
    end = start + nbits
    j0 = start // tau
    j1 = (end - 1) // tau
    prev = _pfull(Pw, tau, j0 - 1)
    w = 0
    acc = ZERO
    nacc = 0
    for j in range(j0, j1 + 1):
        cur = packed_get(Pw, tau, j)
        blk = submod(cur, montmul(prev, two_tau, q, qinv), q)
        if _dbit(Dw, j):
            blk += q
        lo = max(start, j * tau)
        hi = min(end, (j + 1) * tau)
        width = hi - lo
        val = (blk >> np.uint64((j + 1) * tau - hi)) & low_mask(width)
        w, acc, nacc = append_bits(out, w, acc, nacc, val, width)
        prev = cur
    flush_bits(out, w, acc, nacc)


@njit(cache=True)
def _access_many(Pw, tau, q, qinv, r2, two_tau, Dw, z, pad, b, idx, out):
    for k in range(idx.shape[0]):
        start = pad + idx[k] * b
        end = start + b
        j = start // tau
        prev = _pfull(Pw, tau, j - 1)
        val = ZERO
        while True:
            blk = _block_with_prev(Pw, tau, q, qinv, r2, two_tau, Dw, j, prev)
            lo = max(start, j * tau)
            hi = min(end, (j + 1) * tau)
            width = hi - lo
            val = (val << np.uint64(width)) | ((blk >> np.uint64((j + 1) * tau - hi)) & low_mask(width))
            if hi == end:
                break
            prev = packed_get(Pw, tau, j)
            j += 1
        out[k] = val


@njit(cache=True)
def _build(words, n_blocks, tau, q, qinv, r2, two_tau, Pw, Dw):
    acc = ZERO
    for i in range(n_blocks):
        blk = read_bits(words, i * tau, tau)
        if blk >= q:
            blk -= q
            Dw[i >> 6] |= ONE << np.uint64(i & 63)
        acc = addmod(montmul(acc, two_tau, q, qinv), blk, q)
        packed_or(Pw, tau, i, acc)


def z_table(q: int, n_bits: int) -> np.ndarray:
    """``2^(2^t) mod q`` for ``t = 0 .. floor(log2 n_bits)``."""
    z = np.empty(max(n_bits, 0).bit_length(), dtype=np.uint64)
    v = 2 % q
    for t in range(z.size):
        z[t] = v
        v = v * v % q
    return z


class GeneralLceIndex(LceIndexBase):
    """LCE index for any prime ``q``: worst-case logarithmic queries, ``n/tau`` extra bits."""

    variant = 2

    def __init__(self, q: int, n_symbols: int, sigma: int, b: int, pad_bits: int,
                 Pfull: PackedInts, D: np.ndarray, z: np.ndarray, seed: int | None = None):
        self.q = q
        self.tau = q.bit_length()
        self.n_symbols = n_symbols
        self.sigma = sigma
        self.b = b
        self.pad_bits = pad_bits
        self.Pfull = Pfull
        self.D = D
        self.z = z
        self.seed = seed
        qinv, r2 = montgomery_constants(q)
        two_tau = to_montgomery(1 << self.tau, q)
        self._kargs = (Pfull.words, self.tau, np.uint64(q), np.uint64(qinv), np.uint64(r2),
                       np.uint64(two_tau), D, z)

    @classmethod
    def build(cls, pt: PackedText, q: int | None = None, seed: int | None = None) -> "GeneralLceIndex":
        """Index ``pt``; draws a random prime of ``pt.tau`` bits when ``q`` is omitted."""
        if q is None:
            q = generate_prime(pt.tau, seed)
        check_prime_modulus(q)
        tau = q.bit_length()
        if pt.tau != tau:
            raise ValueError(f"text padded for tau={pt.tau}, prime needs tau={tau}")
        n_bits = pt.n_bits
        if n_bits % tau:
            raise ValueError("text is not padded to a whole number of blocks")
        n_blocks = n_bits // tau
        qinv, r2 = montgomery_constants(q)
        Pw = np.zeros(words_for(n_blocks * tau) + 1, dtype=np.uint64)
        D = np.zeros(words_for(n_blocks) + 1, dtype=np.uint64)
        _build(pt.words, n_blocks, tau, np.uint64(q), np.uint64(qinv), np.uint64(r2),
               np.uint64(to_montgomery(1 << tau, q)), Pw, D)
        return cls(q, pt.n_symbols, pt.sigma, pt.b, pt.pad_bits,
                   PackedInts(tau, n_blocks, Pw), D, z_table(q, n_bits), seed)

    def d_bit(self, i: int) -> int:
        return int((int(self.D[i >> 6]) >> (i & 63)) & 1)

    def block(self, i: int) -> int:
        if not 0 <= i < self.n_blocks:
            raise IndexError(f"block {i} out of range [0, {self.n_blocks})")
        return int(_block(*self._kargs, i))

    def prefix_fingerprint(self, i: int) -> int:
        """Fingerprint of padded bits ``0 .. i``."""
        if not 0 <= i < self.n_bits:
            raise IndexError(f"bit {i} out of range [0, {self.n_bits})")
        return int(_prefix(*self._kargs, i + 1))

    def fingerprint_with_exp(self, i: int, j: int, exp: int) -> int:
        """``phi(T[0..j]) - phi(T[0..i-1]) * exp mod q`` over padded bit indices."""
        if not (0 <= i <= j + 1 <= self.n_bits):
            raise IndexError(f"bad bit range [{i}, {j}]")
        if not 0 <= exp < self.q:
            raise ValueError("exp must be a residue mod q")
        fstart = _prefix(*self._kargs, i)
        return int(_fingerprint_with_exp(*self._kargs, i, j - i + 1, fstart, np.uint64(exp)))

    def substring_fingerprint(self, i: int, j: int) -> int:
        if not (0 <= i <= j + 1 <= self.n_bits):
            raise IndexError(f"bad bit range [{i}, {j}]")
        return self.fingerprint_with_exp(i, j, pow(2, j - i + 1, self.q))

    def lce_trace(self, i: int, j: int) -> tuple[int, int, np.ndarray]:
        """LCE at symbols ``i != j`` with the search trace.

        Returns ``(bit_lce, comparisons, rows)``; each row is
        ``(phase, e, off, l, l')`` recorded before a step.
        """
        self._check_symbol(i)
        self._check_symbol(j)
        if i == j:
            raise ValueError("trace needs i != j")
        i, j = min(i, j), max(i, j)
        trace = np.zeros((256, 5), dtype=np.uint64)
        bits, cnt, rows = _bit_lce(*self._kargs, self.n_bits, self.pad_bits + i * self.b,
                                   self.pad_bits + j * self.b, trace, True)
        return int(bits), int(cnt), trace[:rows].astype(object)

    def space_report(self) -> int:
        """Payload bits: ``P'`` at ``tau`` bits each, one ``D`` bit per block, the z table."""
        n_blocks = self.n_blocks
        bits = n_blocks * self.tau + n_blocks + self.z.size * self.tau
        assert bits <= self.n_bits + n_blocks + self.tau * self.n_bits.bit_length()
        return bits

    # kernel hooks

    def _k_extract_bits(self, start, nbits, out):
        _extract_bits(*self._kargs, start, nbits, out)

    def _k_access_many(self, idx, out):
        _access_many(*self._kargs, self.pad_bits, self.b, idx, out)

    def _k_bit_lce(self, a, c):
        a, c = min(a, c), max(a, c)
        trace = np.empty((0, 5), dtype=np.uint64)
        return int(_bit_lce(*self._kargs, self.n_bits, a, c, trace, False)[0])

    def _k_lce_many(self, I, J, out, counts):
        _lce_many(*self._kargs, self.n_bits, self.pad_bits, self.b, self.n_symbols, I, J, out, counts)

    def __repr__(self) -> str:
        return f"GeneralLceIndex(n={self.n_symbols}, sigma={self.sigma}, q={self.q})"


def check_prime_modulus(q: int) -> None:
    if not 2 < q < 1 << 63 or not is_prime(q):
        raise ValueError(f"q={q} must be an odd prime below 2^63")
