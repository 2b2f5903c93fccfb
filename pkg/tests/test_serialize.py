import struct

import numpy as np
import pytest

from fplce.codec import encode_text
from fplce.general_index import GeneralLceIndex
from fplce.mersenne import MersennePrime
from fplce.mersenne_index import MersenneLceIndex
from fplce.serialize import IndexFormatError, from_bytes, load_index, save_index, to_bytes


def _texts():
    rng = np.random.default_rng(4)
    s = rng.integers(0, 256, 500).astype(np.uint8)
    s[100:300] = 255  # long all-ones run: n_q > 0
    return s


def _indexes():
    s = _texts()
    yield s, MersenneLceIndex.build(encode_text(s, 256, 61))
    yield s, MersenneLceIndex.build(encode_text(s, 256, 13), MersennePrime(13))
    yield s, GeneralLceIndex.build(encode_text(s, 256, 63), seed=9)
    yield s, GeneralLceIndex.build(encode_text(s, 256, 41), q=1099511627791)


def _same_answers(a, b, rng):
    n = a.n_symbols
    I = rng.integers(0, n, 2000)
    J = rng.integers(0, n, 2000)
    assert a.lce_many(I, J)[0].tolist() == b.lce_many(I, J)[0].tolist()
    assert a.extract(0, n).tolist() == b.extract(0, n).tolist()
    assert a.space_report() == b.space_report()


def test_roundtrip(tmp_path, rng):
    for s, ix in _indexes():
        assert ix.n_q > 0 if isinstance(ix, MersenneLceIndex) else True
        path = tmp_path / "ix.rklc"
        save_index(ix, path)
        back = load_index(path)
        assert type(back) is type(ix)
        assert (back.sigma, back.b, back.tau, back.q, back.pad_bits) == (ix.sigma, ix.b, ix.tau, ix.q, ix.pad_bits)
        assert back.extract(0, s.size).tolist() == s.tolist()
        _same_answers(ix, back, rng)
        assert to_bytes(back) == to_bytes(ix)


def test_header_layout():
    s = np.frombuffer(b"abracadabra", dtype=np.uint8)
    data = to_bytes(MersenneLceIndex.build(encode_text(s, 256, 61)))
    magic, version, variant = struct.unpack_from("<4sBB", data)
    assert (magic, version, variant) == (b"RKLC", 1, 1)
    sigma, b, tau, n, pad, q, seed = struct.unpack_from("<7Q", data, 6)
    assert (sigma, b, tau, n, pad, q, seed) == (256, 8, 61, 11, 34, 2**61 - 1, 0)
    g = to_bytes(GeneralLceIndex.build(encode_text(s, 256, 63), seed=42))
    assert g[5] == 2 and struct.unpack_from("<Q", g, 6 + 6 * 8)[0] == 42


def test_seeded_builds_are_identical():
    s = _texts()
    a = to_bytes(GeneralLceIndex.build(encode_text(s, 256, 63), seed=42))
    b = to_bytes(GeneralLceIndex.build(encode_text(s, 256, 63), seed=42))
    assert a == b


def test_rejects_damage():
    s = _texts()
    data = to_bytes(MersenneLceIndex.build(encode_text(s, 256, 61)))
    with pytest.raises(IndexFormatError, match="magic"):
        from_bytes(b"XXXX" + data[4:])
    with pytest.raises(IndexFormatError, match="version"):
        from_bytes(data[:4] + b"\x02" + data[5:])
    with pytest.raises(IndexFormatError, match="variant"):
        from_bytes(data[:5] + b"\x03" + data[6:])
    with pytest.raises(IndexFormatError):
        from_bytes(data[:5] + b"\x02" + data[6:])  # Mersenne payload read as general
    with pytest.raises(IndexFormatError, match="truncated"):
        from_bytes(data[:-1])
    with pytest.raises(IndexFormatError, match="trailing"):
        from_bytes(data + b"\0")
    with pytest.raises(IndexFormatError):
        from_bytes(b"")


def test_empty_text_roundtrip():
    for ix in (MersenneLceIndex.build(encode_text([], 4, 61)),
               GeneralLceIndex.build(encode_text([], 4, 63), seed=1)):
        back = from_bytes(to_bytes(ix))
        assert back.n_symbols == 0 and back.extract(0, 0).size == 0
