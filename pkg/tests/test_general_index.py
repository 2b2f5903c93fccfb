import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fplce.codec import PackedText, encode_text
from fplce.general_index import GeneralLceIndex, z_table
from fplce.oracle import PlainText, naive_fingerprint, naive_lce_many, slow_pow2_mod
from fplce.textgen import make_text


def test_build_examples():
    ix = GeneralLceIndex.build(PackedText.from_bits("1101 0011", 4), q=11)
    assert ix.Pfull.to_numpy().tolist() == [2, 2]
    assert [ix.d_bit(0), ix.d_bit(1)] == [1, 0]
    assert [ix.block(0), ix.block(1)] == [13, 3]
    zero = GeneralLceIndex.build(PackedText.from_bits("0" * 12, 4), q=13)
    assert zero.Pfull.to_numpy().tolist() == [0, 0, 0]
    assert [zero.d_bit(k) for k in range(3)] == [0, 0, 0]
    assert [zero.block(k) for k in range(3)] == [0, 0, 0]
    assert z_table(13, 16).tolist() == [2, 4, 3, 9, 3]


def test_fingerprint_examples():
    ix = GeneralLceIndex.build(PackedText.from_bits("1011", 3), q=7)
    pad = ix.pad_bits
    assert ix.fingerprint_with_exp(pad + 2, pad + 3, 4) == 3
    assert ix.fingerprint_with_exp(pad + 2, pad + 1, 1) == 0
    for j in range(ix.n_bits):
        for exp in range(7):
            assert ix.fingerprint_with_exp(0, j, exp) == ix.prefix_fingerprint(j)


def test_queries_examples():
    s = np.frombuffer(b"abracadabra", dtype=np.uint8)
    ix = GeneralLceIndex.build(encode_text(s, 256, 63), seed=5)
    assert bytes(ix.extract(3, 4)) == b"acad"
    assert ix.extract(2, 0).size == 0
    assert ix.lce(0, 7) == 4 and ix.lce(7, 0) == 4 and ix.lce(1, 8) == 3
    assert all(ix.lce(i, i) == 11 - i for i in range(11))


def test_space_accounting():
    # 2^20 bits in blocks of 63: the D bitvector adds one bit per block and
    # the z table at most 21 entries
    pt = encode_text(np.zeros(2**20 - 2**20 % 63, dtype=np.uint8), 2, 63)
    ix = GeneralLceIndex.build(pt, seed=1)
    assert ix.z.size == pt.n_bits.bit_length() <= 21
    assert ix.space_report() == ix.n_blocks * 63 + ix.n_blocks + ix.z.size * 63


def test_extract_across_d_blocks():
    # q just above 2^(tau-1) makes most blocks >= q
    q = 11
    rng = np.random.default_rng(0)
    s = rng.integers(0, 2, 500)
    ix = GeneralLceIndex.build(encode_text(s, 2, 4), q=q)
    assert sum(ix.d_bit(k) for k in range(ix.n_blocks)) > 50
    for i in range(0, 500, 7):
        for m in range(0, min(40, 500 - i)):
            assert ix.extract(i, m).tolist() == s[i : i + m].tolist()


def test_rejects_bad_modulus():
    pt = PackedText.from_bits("1011", 3)
    with pytest.raises(ValueError):
        GeneralLceIndex.build(pt, q=9)
    with pytest.raises(ValueError):
        GeneralLceIndex.build(pt, q=13)  # 4 bits, text cut for 3


@given(st.integers(3, 63), st.sampled_from([2, 3, 4, 5, 26, 256]),
       st.sampled_from(["random", "periodic", "all-equal"]), st.integers(1, 400), st.integers(0, 2**32))
def test_against_oracles(tau, sigma, kind, n, seed):
    rng = np.random.default_rng(seed)
    s = make_text(kind, n, sigma, rng)
    pt = encode_text(s, sigma, tau)
    ix = GeneralLceIndex.build(pt, seed=seed)
    assert [ix.block(k) for k in range(ix.n_blocks)] == pt.blocks().tolist()
    assert ix.extract(0, n).tolist() == s.tolist()
    assert ix.access_many(np.arange(n)).tolist() == s.tolist()
    I = rng.integers(0, n, 300)
    J = rng.integers(0, n, 300)
    got, _ = ix.lce_many(I, J)
    want = naive_lce_many(PlainText(s, sigma), I, J)
    if ix.q > 2**40:
        assert got.tolist() == want.tolist()
    else:
        # small primes collide; the answer may only overshoot
        assert (got >= want).all()
    bits = pt.bit_string()
    for _ in range(20):
        i = int(rng.integers(0, pt.n_bits))
        j = int(rng.integers(i - 1, pt.n_bits))
        exp = slow_pow2_mod(j - i + 1, ix.q)
        assert ix.fingerprint_with_exp(i, j, exp) == naive_fingerprint(bits, i, j, ix.q)


def test_trace_invariants():
    rng = np.random.default_rng(7)
    s = make_text("periodic", 5000, 4, rng)
    ix = GeneralLceIndex.build(encode_text(s, 4, 63), seed=3)
    for _ in range(200):
        i, j = (int(v) for v in rng.choice(5000, 2, replace=False))
        bits, count, rows = ix.lce_trace(i, j)
        assert bits // ix.b == ix.lce(i, j)
        assert count <= 2 * np.log2(bits + 2) + 6
        for phase, e, off, l, lp in rows:
            assert off == pow(2, int(e), ix.q)
            if phase == 1 and l > 1:
                assert lp & (lp - 1) == 0 and l / 4 < lp <= l / 2
