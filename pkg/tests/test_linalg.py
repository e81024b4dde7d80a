import random

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from tautring.linalg import (
    DEPENDENT,
    Absorbed,
    ColumnOverflow,
    Disagreement,
    EliminationState,
    cross_check,
    exact_rank,
    matmul_mod,
    rank_of,
)

P1, P2 = 2147483647, 2147483629


def test_absorb_examples():
    st_ = EliminationState(3, P1)
    assert isinstance(st_.absorb_row([(0, 1), (2, 3)]), Absorbed)
    assert st_.rank == 1
    assert st_.absorb_row([(0, 2), (2, 6)]) is DEPENDENT
    assert st_.rank == 1


def test_absorb_mod_101():
    st_ = EliminationState(2, 101)
    ranks = []
    for row in ([(0, 1)], [(0, 100)], [(1, 1)]):
        st_.absorb_row(row)
        ranks.append(st_.rank)
    assert ranks == [1, 1, 2]


def test_column_overflow():
    st_ = EliminationState(3, P1)
    with pytest.raises(ColumnOverflow):
        st_.absorb_row([(3, 1)])
    with pytest.raises(ColumnOverflow):
        st_.absorb_block(np.ones((2, 4), dtype=np.int64))


def test_rank_of_examples():
    assert rank_of(np.eye(3, dtype=np.int64), P1) == 3
    assert rank_of(np.zeros((4, 3), dtype=np.int64), P1) == 0
    assert rank_of([[(0, 1)], [(1, 2)], [(0, 3), (1, 6)]], P1) == 2


def test_cross_check():
    m = np.array([[1, 2], [2, 4], [0, 5]])
    assert cross_check(m, [P1, P2]) == 2
    bad = np.array([[P1, 0], [0, 1]])
    got = cross_check(bad, [P1, P2])
    assert isinstance(got, Disagreement)
    assert got.ranks == {P1: 1, P2: 2}
    with pytest.raises(ValueError):
        cross_check(m, [P1])


def test_matmul_mod_large_values():
    rng = np.random.default_rng(0)
    a = rng.integers(0, P1, (7, 3000))
    b = rng.integers(0, P1, (3000, 5))
    ref = np.array(a.tolist(), dtype=object).dot(np.array(b.tolist(), dtype=object)) % P1
    assert (matmul_mod(a, b, P1) == ref.astype(np.int64)).all()


def _random_low_rank(rng, k, n, r, lo=-5, hi=5):
    return np.array(rng.integers(lo, hi + 1, (k, r)) @ rng.integers(lo, hi + 1, (r, n)))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 10), st.integers(1, 14), st.integers(1, 10), st.integers(0, 10**6))
def test_exact_rank_matches_sympy(n, k, r, seed):
    m = _random_low_rank(np.random.default_rng(seed), k, n, min(r, n))
    want = sympy.Matrix(m.tolist()).rank()
    assert exact_rank(m) == want
    assert rank_of(m, 0) == want
    assert rank_of(m, P1) <= want


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 12), st.integers(1, 30), st.integers(1, 12), st.integers(0, 10**6))
def test_batch_equals_sequential(n, k, r, seed):
    rng = np.random.default_rng(seed)
    m = _random_low_rank(rng, k, n, min(r, n)) % P1
    a = EliminationState(n, P1)
    a.absorb_block(m)
    b = EliminationState(n, P1)
    for row in m:
        b.absorb_row(row)
    assert a.pivots == b.pivots
    assert (a.rows == b.rows).all()
    assert a.rank <= min(k, n)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 10), st.integers(1, 20), st.integers(0, 10**6))
def test_rank_invariant_under_permutation(n, k, seed):
    rng = np.random.default_rng(seed)
    m = _random_low_rank(rng, k, n, max(1, n // 2))
    perm = rng.permutation(k)
    assert rank_of(m, P1) == rank_of(m[perm], P1)
    assert rank_of(m, P2) == rank_of(m[perm], P2)


def test_echelon_invariants():
    rng = np.random.default_rng(5)
    m = _random_low_rank(rng, 40, 12, 7)
    st_ = EliminationState(12, P1)
    st_.absorb_block(m % P1)
    rows = st_.rows
    for k, c in enumerate(st_.pivots):
        assert rows[k, c] == 1
        assert not rows[np.arange(len(rows)) != k, c].any()
        assert not rows[k, :c].any()


def test_monotone_absorption():
    rng = np.random.default_rng(9)
    m = _random_low_rank(rng, 50, 10, 8) % P1
    st_ = EliminationState(10, P1)
    last = 0
    for row in m:
        st_.absorb_row(row)
        assert st_.rank >= last
        last = st_.rank
    assert st_.rank == 8


def test_target_stops_early():
    st_ = EliminationState(5, P1)
    st_.absorb_block(np.eye(5, dtype=np.int64)[[0, 1, 2, 3, 4] * 30], target=2)
    assert st_.rank >= 2
    assert st_.seen < 150


def test_contains():
    st_ = EliminationState(3, 0)
    st_.absorb_row([(0, 1), (1, 1)])
    assert st_.contains([2, 2, 0])
    assert not st_.contains([1, 0, 0])


def test_exact_state_with_fractions():
    rng = random.Random(3)
    rows = [[rng.randint(-3, 3) for _ in range(6)] for _ in range(9)]
    assert rank_of(np.array(rows, dtype=object), 0) == sympy.Matrix(rows).rank()
