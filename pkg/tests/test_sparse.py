import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fplce.sparse import SparseOnePositions, position_width

EXAMPLE = [1, 2, 4, 5, 6]  # Q = 01101110


def _dense(positions, universe):
    q = np.zeros(universe, dtype=np.int64)
    q[list(positions)] = 1
    return q


def test_examples():
    s = SparseOnePositions(EXAMPLE, 8)
    assert s.access(4) == 1 and s.access(3) == 0
    assert s.rank(5) == 3 and s.rank(5, bit=0) == 2
    assert s.rank(0) == 0 and s.rank(0, bit=0) == 0
    assert (s.pred0(6), s.pred0(3), s.pred0(2)) == (3, 3, 0)
    empty = SparseOnePositions([], 10)
    assert all(empty.access(i) == 0 for i in range(10))
    assert empty.pred0_many(np.arange(10)).tolist() == list(range(10))


def test_validation():
    with pytest.raises(ValueError):
        SparseOnePositions([0, 3], 5)
    with pytest.raises(ValueError):
        SparseOnePositions([2, 2], 5)
    with pytest.raises(ValueError):
        SparseOnePositions([3, 2], 5)
    with pytest.raises(ValueError):
        SparseOnePositions([5], 5)
    with pytest.raises(IndexError):
        SparseOnePositions(EXAMPLE, 8).access(8)


def test_space():
    s = SparseOnePositions(EXAMPLE, 8)
    assert s.payload_bits() == 5 * position_width(8) == 15
    assert position_width(1) == 1 and position_width(2) == 1 and position_width(1025) == 11


@given(st.lists(st.booleans(), min_size=1, max_size=300))
def test_against_scan(bits):
    bits[0] = False
    q = np.array(bits, dtype=np.int64)
    s = SparseOnePositions.from_dense(q)
    u = q.size
    idx = np.arange(u)
    assert s.access_many(idx).tolist() == q.tolist()
    ranks = np.concatenate([[0], np.cumsum(q)])
    assert s.rank_many(np.arange(u + 1)).tolist() == ranks.tolist()
    assert s.rank_many(np.arange(u + 1), bit=0).tolist() == (np.arange(u + 1) - ranks).tolist()
    zeros = np.where(q == 0, idx, -1)
    assert s.pred0_many(idx).tolist() == np.maximum.accumulate(zeros).tolist()
    assert [s.pred0(i) for i in range(u)] == np.maximum.accumulate(zeros).tolist()
