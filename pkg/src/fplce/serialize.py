"""Binary index files.

Layout (all multi-byte integers little-endian)::

    "RKLC" | version:u8 | variant:u8 (1 Mersenne, 2 general)
    sigma, b, tau, n_symbols, pad_bits, q, seed        7 x u64
    variant 1:  n_p:u64, P words | n_q:u64, S_Q bytes
    variant 2:  n_blocks:u64, P' words | D words | n_z:u64, z words

``P``, ``P'`` and ``z`` are ``tau``-bit integers packed LSB-first into u64
words; ``D`` is one bit per block, LSB-first.  ``S_Q`` holds the positions
as ``ceil(log2 n_blocks)``-bit big-endian fields, zero-padded to a multiple
of 8 bytes.  Unused trailing bits are zero.  ``seed`` is 0 for variant 1
and ``2^64 - 1`` when a general prime was not drawn from a recorded seed.

Loading re-checks every structural invariant so that a damaged file fails
loudly instead of answering queries about a different text.
"""
from __future__ import annotations

import io
import struct
from pathlib import Path

import numpy as np

from ._bits import PackedInts, words_for
from .codec import MAX_SIGMA, bits_per_symbol
from .general_index import GeneralLceIndex, check_prime_modulus, z_table
from .mersenne import MERSENNE_EXPONENTS, MersennePrime
from .mersenne_index import MersenneLceIndex
from .primes import generate_prime
from .sparse import SparseOnePositions, position_width

MAGIC = b"RKLC"
VERSION = 1
SEED_UNKNOWN = (1 << 64) - 1
_HEADER = struct.Struct("<4sBB7Q")


class IndexFormatError(ValueError):
    """The file is not a well-formed index."""


# -- writing -------------------------------------------------------------------


def _words_bytes(words: np.ndarray, n_bits: int) -> bytes:
    return np.ascontiguousarray(words[: words_for(n_bits)], dtype="<u8").tobytes()


def _positions_be(positions: np.ndarray, width: int) -> bytes:
    if positions.size == 0:
        return b""
    shifts = np.arange(width - 1, -1, -1, dtype=np.int64)
    bits = ((positions[:, None].astype(np.int64) >> shifts) & 1).astype(np.uint8)
    raw = np.packbits(bits.ravel()).tobytes()
    return raw + b"\0" * (-len(raw) % 8)


def to_bytes(ix) -> bytes:
    buf = io.BytesIO()
    if isinstance(ix, MersenneLceIndex):
        seed = 0
    elif ix.seed is None:
        seed = SEED_UNKNOWN
    else:
        seed = ix.seed
    buf.write(_HEADER.pack(MAGIC, VERSION, ix.variant, ix.sigma, ix.b, ix.tau,
                           ix.n_symbols, ix.pad_bits, ix.q, seed))
    if isinstance(ix, MersenneLceIndex):
        P = ix.P
        buf.write(struct.pack("<Q", P.length))
        buf.write(_words_bytes(P.words, P.payload_bits()))
        buf.write(struct.pack("<Q", ix.n_q))
        buf.write(_positions_be(ix.sq.positions, position_width(ix.n_blocks)))
    else:
        n_blocks = ix.n_blocks
        buf.write(struct.pack("<Q", n_blocks))
        buf.write(_words_bytes(ix.Pfull.words, n_blocks * ix.tau))
        buf.write(_words_bytes(ix.D, n_blocks))
        zp = PackedInts.from_values(ix.z, ix.tau)
        buf.write(struct.pack("<Q", zp.length))
        buf.write(_words_bytes(zp.words, zp.payload_bits()))
    return buf.getvalue()


def save_index(ix, path) -> int:
    data = to_bytes(ix)
    Path(path).write_bytes(data)
    return len(data)


# -- reading -------------------------------------------------------------------


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if n < 0 or self.pos + n > len(self.data):
            raise IndexFormatError("file is truncated")
        out = self.data[self.pos : self.pos + n]
        self.pos += n
        return out

    def u64(self) -> int:
        return struct.unpack("<Q", self.take(8))[0]

    def words(self, n_bits: int) -> np.ndarray:
        nw = words_for(n_bits)
        arr = np.frombuffer(self.take(8 * nw), dtype="<u8").astype(np.uint64)
        if n_bits % 64 and nw and int(arr[-1]) >> (n_bits % 64):
            raise IndexFormatError("non-zero padding bits")
        return np.concatenate([arr, np.zeros(1, dtype=np.uint64)])


def _read_positions(r: _Reader, n_q: int, width: int) -> np.ndarray:
    nbytes = (n_q * width + 7) // 8
    nbytes += -nbytes % 8
    raw = np.frombuffer(r.take(nbytes), dtype=np.uint8)
    bits = np.unpackbits(raw)
    if bits[n_q * width :].any():
        raise IndexFormatError("non-zero padding bits in S_Q")
    if n_q == 0:
        return np.zeros(0, dtype=np.int64)
    fields = bits[: n_q * width].reshape(n_q, width).astype(np.int64)
    weights = np.int64(1) << np.arange(width - 1, -1, -1, dtype=np.int64)
    return fields @ weights


def from_bytes(data: bytes):
    r = _Reader(data)
    magic, version, variant, sigma, b, tau, n, pad, q, seed = _HEADER.unpack(r.take(_HEADER.size))
    if magic != MAGIC:
        raise IndexFormatError("not an index file (bad magic)")
    if version != VERSION:
        raise IndexFormatError(f"unsupported version {version}")
    if not 2 <= sigma <= MAX_SIGMA:
        raise IndexFormatError(f"bad sigma {sigma}")
    if b not in {bits_per_symbol(sigma), bits_per_symbol(sigma, True)}:
        raise IndexFormatError(f"b={b} inconsistent with sigma={sigma}")
    if not 2 <= tau <= 63:
        raise IndexFormatError(f"bad tau {tau}")
    base_pad = -(n * b) % tau
    if pad != base_pad and not (base_pad == 0 and pad == tau and n):
        raise IndexFormatError(f"pad_bits={pad} inconsistent with n, b, tau")
    n_bits = pad + n * b
    n_blocks = n_bits // tau

    if variant == 1:
        ix = _read_mersenne(r, sigma, b, tau, n, pad, q, seed, n_bits, n_blocks)
    elif variant == 2:
        ix = _read_general(r, sigma, b, tau, n, pad, q, seed, n_bits, n_blocks)
    else:
        raise IndexFormatError(f"unknown variant {variant}")
    if r.pos != len(data):
        raise IndexFormatError("trailing bytes after payload")
    _check_padding(ix)
    return ix


def _read_mersenne(r, sigma, b, tau, n, pad, q, seed, n_bits, n_blocks):
    if tau not in MERSENNE_EXPONENTS or q != (1 << tau) - 1:
        raise IndexFormatError(f"q={q}, tau={tau} is not a Mersenne configuration")
    if seed != 0:
        raise IndexFormatError("Mersenne index must record seed 0")
    if n_bits > 1 << tau:
        raise IndexFormatError("tau < log2 n")
    n_p = r.u64()
    if n_p > n_blocks:
        raise IndexFormatError("P longer than the block count")
    P = PackedInts(tau, n_p, r.words(n_p * tau))
    if n_p and int(P.to_numpy().max()) >= q:
        raise IndexFormatError("P entry >= q")
    n_q = r.u64()
    if n_p + n_q != n_blocks:
        raise IndexFormatError("|P| + n_q does not match the block count")
    width = position_width(n_blocks)
    try:
        sq = SparseOnePositions(_read_positions(r, n_q, width), n_blocks)
    except ValueError as exc:
        raise IndexFormatError(f"bad S_Q: {exc}") from None
    return MersenneLceIndex(MersennePrime(tau), n, sigma, b, pad, P, sq)


def _read_general(r, sigma, b, tau, n, pad, q, seed, n_bits, n_blocks):
    try:
        check_prime_modulus(q)
    except ValueError as exc:
        raise IndexFormatError(str(exc)) from None
    if q.bit_length() != tau:
        raise IndexFormatError(f"q={q} does not have tau={tau} bits")
    if seed != SEED_UNKNOWN and generate_prime(tau, seed) != q:
        raise IndexFormatError(f"recorded seed {seed} does not reproduce q")
    if r.u64() != n_blocks:
        raise IndexFormatError("block count does not match the header")
    Pfull = PackedInts(tau, n_blocks, r.words(n_blocks * tau))
    if n_blocks and int(Pfull.to_numpy().max()) >= q:
        raise IndexFormatError("P' entry >= q")
    D = r.words(n_blocks)
    n_z = r.u64()
    if n_z != n_bits.bit_length():
        raise IndexFormatError("z table has the wrong length")
    z = PackedInts(tau, n_z, r.words(n_z * tau)).to_numpy()
    if not np.array_equal(z, z_table(q, n_bits)):
        raise IndexFormatError("z table is not the squaring sequence of 2 mod q")
    return GeneralLceIndex(q, n, sigma, b, pad, Pfull, D, z,
                           None if seed == SEED_UNKNOWN else seed)


def _check_padding(ix) -> None:
    pad = ix.pad_bits
    if pad and ix.extract_bits(0, pad)[: words_for(pad)].any():
        raise IndexFormatError("pad bits decode to non-zero")
    tau = ix.tau
    all_ones = (1 << tau) - 1
    if pad == tau and ix.n_blocks > 1 and ix.block(1) != all_ones:
        raise IndexFormatError("extra pad block present without an all-ones first block")
    if pad == 0 and ix.n_blocks and ix.block(0) == all_ones:
        raise IndexFormatError("first block is all ones")


def load_index(path):
    return from_bytes(Path(path).read_bytes())
