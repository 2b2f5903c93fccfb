"""Brute-force references used by the tests and by ``fplce verify``.

Nothing here imports the index code: LCE is a symbol-by-symbol scan of the
plain text, fingerprints are Horner evaluations bit by bit, and powers of
two are computed by square-and-multiply.  The batched power uses the
generic 128-bit Montgomery products, which share nothing with the
rotation arithmetic of Mersenne moduli and are checked against Python
integers on their own.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .modarith import montgomery_constants, mulmod


@dataclass(frozen=True, eq=False)
class PlainText:
    symbols: np.ndarray
    sigma: int

    def __post_init__(self):
        if self.symbols.size and int(self.symbols.max()) >= self.sigma:
            raise ValueError("symbol out of range")

    def __len__(self) -> int:
        return int(self.symbols.size)


def naive_lce(pt: PlainText, i: int, j: int) -> int:
    n = len(pt)
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"({i}, {j}) out of range for n={n}")
    s = pt.symbols
    ell = 0
    while i + ell < n and j + ell < n and s[i + ell] == s[j + ell]:
        ell += 1
    return ell


@njit(cache=True)
def _naive_lce_many(s, I, J, out):
    n = s.shape[0]
    for k in range(I.shape[0]):
        i = I[k]
        j = J[k]
        ell = 0
        while i + ell < n and j + ell < n and s[i + ell] == s[j + ell]:
            ell += 1
        out[k] = ell


def naive_lce_many(pt: PlainText, I, J) -> np.ndarray:
    I = np.ascontiguousarray(I, dtype=np.int64)
    J = np.ascontiguousarray(J, dtype=np.int64)
    n = len(pt)
    for arr in (I, J):
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise IndexError("query index out of range")
    out = np.empty(I.size, dtype=np.int64)
    _naive_lce_many(pt.symbols, I, J, out)
    return out


def naive_fingerprint(bits, i: int, j: int, q: int) -> int:
    """Horner evaluation of bits ``i .. j`` (inclusive) as a base-2 number mod ``q``."""
    if isinstance(bits, str):
        bits = [int(c) for c in bits]
    if not (0 <= i <= j + 1 <= len(bits)):
        raise IndexError(f"bad range [{i}, {j}]")
    h = 0
    for k in range(i, j + 1):
        h = (h * 2 + int(bits[k])) % q
    return h


@njit(cache=True)
def _horner_many(bits, I, L, q, out):
    # h*2 + bit < 2q + 1 stays below 2^64 for q < 2^63
    two = np.uint64(2)
    for k in range(I.shape[0]):
        h = np.uint64(0)
        for t in range(I[k], I[k] + L[k]):
            h = h * two + np.uint64(bits[t])
            if h >= q:
                h -= q
        out[k] = h


def naive_fingerprint_many(bits: np.ndarray, starts, lengths, q: int) -> np.ndarray:
    """Batch Horner fingerprints of ``bits[s : s+len]`` (``bits`` a 0/1 array)."""
    if not 2 <= q < 1 << 63:
        raise ValueError("q must be in [2, 2^63)")
    starts = np.ascontiguousarray(starts, dtype=np.int64)
    lengths = np.ascontiguousarray(lengths, dtype=np.int64)
    bits = np.ascontiguousarray(bits, dtype=np.uint8)
    if starts.size and (starts.min() < 0 or (starts + lengths).max() > bits.size or lengths.min() < 0):
        raise IndexError("range out of bounds")
    out = np.empty(starts.size, dtype=np.uint64)
    _horner_many(bits, starts, lengths, np.uint64(q), out)
    return out


def slow_pow2_mod(e: int, q: int) -> int:
    """``2^e mod q`` by right-to-left square-and-multiply."""
    if e < 0:
        raise ValueError("exponent must be non-negative")
    result = 1 % q
    base = 2 % q
    while e:
        if e & 1:
            result = result * base % q
        base = base * base % q
        e >>= 1
    return result


@njit(cache=True)
def _pow2_many(es, q, qinv, r2, out):
    for k in range(es.shape[0]):
        e = es[k]
        result = np.uint64(1)
        base = np.uint64(2)
        while e:
            if e & np.uint64(1):
                result = mulmod(result, base, q, qinv, r2)
            base = mulmod(base, base, q, qinv, r2)
            e >>= np.uint64(1)
        out[k] = result


def pow2_mod_many(es, q: int) -> np.ndarray:
    """``2^e mod q`` for each ``e`` by square-and-multiply; ``q`` odd, ``3 <= q < 2^63``."""
    qinv, r2 = montgomery_constants(q)
    es = np.ascontiguousarray(es, dtype=np.uint64)
    out = np.empty(es.size, dtype=np.uint64)
    _pow2_many(es, np.uint64(q), np.uint64(qinv), np.uint64(r2), out)
    return out


def unpack_bits(words: np.ndarray, n_bits: int) -> np.ndarray:
    """MSB-first packed words to a 0/1 ``uint8`` array of length ``n_bits``."""
    raw = np.ascontiguousarray(words, dtype=">u8").view(np.uint8)
    return np.unpackbits(raw)[:n_bits]
