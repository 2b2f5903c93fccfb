"""Arithmetic modulo Mersenne primes ``q = 2^p - 1``.

Because ``2^p = 1 (mod q)``, multiplying a residue by ``2^e`` is a left
rotation of its ``p``-bit representation by ``e mod p`` places, and a
double-width product is reduced by folding the high ``p`` bits onto the
low ones.  The value ``q`` itself (all ones) is never returned.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

MERSENNE_EXPONENTS = (2, 3, 5, 7, 13, 17, 19, 31, 61)


@dataclass(frozen=True)
class MersennePrime:
    p: int = 61

    def __post_init__(self):
        if self.p not in MERSENNE_EXPONENTS:
            raise ValueError(
                f"2^{self.p}-1 is not a Mersenne prime below 2^64; "
                f"choose p from {MERSENNE_EXPONENTS}"
            )

    @property
    def q(self) -> int:
        return (1 << self.p) - 1


DEFAULT_PRIME = MersennePrime(61)


def _check(x: int, mp: MersennePrime) -> None:
    if not 0 <= x < mp.q:
        raise ValueError(f"residue {x} not in [0, {mp.q})")


def mul_pow2_mod(x: int, e: int, mp: MersennePrime) -> int:
    """``x * 2^e mod q`` by rotating ``x`` left ``e mod p`` bits."""
    _check(x, mp)
    if e < 0:
        raise ValueError("exponent must be non-negative")
    p, q = mp.p, mp.q
    s = e % p
    return ((x << s) | (x >> (p - s))) & q


def _fold(z: int, mp: MersennePrime) -> int:
    p, q = mp.p, mp.q
    z = (z & q) + (z >> p)
    z = (z & q) + (z >> p)
    return z - q if z >= q else z


def mod_add(x: int, y: int, mp: MersennePrime) -> int:
    _check(x, mp)
    _check(y, mp)
    return _fold(x + y, mp)


def mod_sub(x: int, y: int, mp: MersennePrime) -> int:
    _check(x, mp)
    _check(y, mp)
    return x - y if x >= y else x + mp.q - y


def mod_mul(x: int, y: int, mp: MersennePrime) -> int:
    _check(x, mp)
    _check(y, mp)
    return _fold(x * y, mp)


# -- compiled kernels; p and q are passed as uint64 ---------------------------


@njit(cache=True, inline="always")
def rotl(x, e, p, q):
    s = np.uint64(e)
    if s >= p:
        s %= p
    return ((x << s) | (x >> (p - s))) & q


@njit(cache=True, inline="always")
def madd(x, y, p, q):
    # y may equal q (an all-ones block), which folds to zero
    s = x + y
    s = (s & q) + (s >> p)
    if s >= q:
        s -= q
    return s


@njit(cache=True, inline="always")
def msub(x, y, q):
    if x >= y:
        return x - y
    return x + q - y


@njit(cache=True)
def _mul_pow2_many(xs, es, p, q, out):
    for k in range(xs.shape[0]):
        out[k] = rotl(xs[k], es[k], p, q)


def mul_pow2_mod_many(xs: np.ndarray, es: np.ndarray, mp: MersennePrime) -> np.ndarray:
    """Vectorised :func:`mul_pow2_mod` over arrays of residues and exponents."""
    xs = np.ascontiguousarray(xs, dtype=np.uint64)
    es = np.ascontiguousarray(es, dtype=np.uint64)
    if xs.shape != es.shape:
        raise ValueError("xs and es must have the same shape")
    if xs.size and int(xs.max()) >= mp.q:
        raise ValueError("residue out of range")
    out = np.empty_like(xs)
    _mul_pow2_many(xs, es, np.uint64(mp.p), np.uint64(mp.q), out)
    return out
