"""Modular arithmetic for a general prime ``q < 2^63`` on 64-bit words.

Products are formed exactly as 128-bit (hi, lo) pairs with LLVM's i128
multiply and reduced with Montgomery's REDC.  ``mulmod`` applies REDC
twice (the second time against ``R^2 mod q``) so callers only ever see
plain residues; ``montmul`` takes one operand pre-scaled by ``2^64`` and
needs a single REDC.
"""
from __future__ import annotations

import numpy as np
from llvmlite import ir
from numba import njit, types
from numba.extending import intrinsic

ONE = np.uint64(1)
ZERO = np.uint64(0)


def montgomery_constants(q: int) -> tuple[int, int]:
    """``(-q^-1 mod 2^64, 2^128 mod q)`` for odd ``q``."""
    if q % 2 == 0 or not 2 < q < 1 << 63:
        raise ValueError("q must be odd and in (2, 2^63)")
    qinv = (-pow(q, -1, 1 << 64)) % (1 << 64)
    return qinv, (1 << 128) % q


@intrinsic
def _mul128(typingctx, a, b):
    # LLVM's i128 multiply lowers to a single 64x64->128 instruction
    if not (a == types.uint64 and b == types.uint64):
        return None
    sig = types.UniTuple(types.uint64, 2)(types.uint64, types.uint64)

    def codegen(context, builder, signature, args):
        i64, i128 = ir.IntType(64), ir.IntType(128)
        prod = builder.mul(builder.zext(args[0], i128), builder.zext(args[1], i128))
        hi = builder.trunc(builder.lshr(prod, ir.Constant(i128, 64)), i64)
        lo = builder.trunc(prod, i64)
        return context.make_tuple(builder, signature.return_type, (hi, lo))

    return sig, codegen


@njit(cache=True, inline="always")
def mul128(a, b):
    """Exact ``a * b`` as ``(hi, lo)`` 64-bit halves."""
    return _mul128(np.uint64(a), np.uint64(b))


@njit(cache=True, inline="always")
def redc(hi, lo, q, qinv):
    """``(hi*2^64 + lo) * 2^-64 mod q``; requires the input below ``q * 2^64``."""
    m = lo * qinv
    mh, _ = mul128(m, q)
    t = hi + mh + (ONE if lo != ZERO else ZERO)
    if t >= q:
        t -= q
    return t


@njit(cache=True, inline="always")
def mulmod(a, b, q, qinv, r2):
    hi, lo = mul128(a, b)
    x = redc(hi, lo, q, qinv)
    hi, lo = mul128(x, r2)
    return redc(hi, lo, q, qinv)


@njit(cache=True, inline="always")
def montmul(a, bm, q, qinv):
    """``a * b mod q`` given ``bm = b * 2^64 mod q``: one REDC instead of two."""
    hi, lo = mul128(a, bm)
    return redc(hi, lo, q, qinv)


def to_montgomery(b: int, q: int) -> int:
    return (b << 64) % q


@njit(cache=True, inline="always")
def addmod(a, b, q):
    s = a + b
    if s >= q:
        s -= q
    return s


@njit(cache=True, inline="always")
def submod(a, b, q):
    if a >= b:
        return a - b
    return a + q - b


@njit(cache=True)
def _mulmod_many(a, b, q, qinv, r2, out):
    for k in range(a.shape[0]):
        out[k] = mulmod(a[k], b[k], q, qinv, r2)


def mulmod_many(a: np.ndarray, b: np.ndarray, q: int) -> np.ndarray:
    qinv, r2 = montgomery_constants(q)
    a = np.ascontiguousarray(a, dtype=np.uint64)
    b = np.ascontiguousarray(b, dtype=np.uint64)
    out = np.empty_like(a)
    _mulmod_many(a, b, np.uint64(q), np.uint64(qinv), np.uint64(r2), out)
    return out
