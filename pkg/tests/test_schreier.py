import random
from fractions import Fraction as F
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from oracles import in_schreier, schreier_norm_bruteforce
from smallideals.schreier import (
    block_norm,
    decompose_maximal,
    is_maximal_interval,
    is_maximal_schreier,
    is_schreier,
    is_schreier_intervals,
    maximal_end,
    next_maximal_set,
    schreier_norm,
)
from smallideals.vectors import IntervalSet, SparseVector, spread


@pytest.mark.parametrize("A, N, expected", [
    ({3, 5, 9}, 1, True),
    ({1, 2}, 1, False),
    ({2, 3, 10, 11, 12}, 2, True),
    ((), 0, True),
    ({4}, 0, True),
])
def test_is_schreier_examples(A, N, expected):
    assert is_schreier(A, N) is expected


def test_is_maximal_examples():
    assert is_maximal_schreier({3, 4, 5}, 1)
    assert not is_maximal_schreier({3, 4}, 1)
    assert is_maximal_schreier(range(2, 8), 2)
    with pytest.raises(ValueError):
        is_maximal_schreier((), 1)


def test_next_maximal_and_decomposition_examples():
    assert list(next_maximal_set(3, 1)) == [3, 4, 5]
    assert list(next_maximal_set(2, 2)) == [2, 3, 4, 5, 6, 7]
    assert list(next_maximal_set(1, 0)) == [1]
    assert [list(b) for b in decompose_maximal([3, 4, 5], 1)] == [[3, 4, 5]]
    assert [list(b) for b in decompose_maximal(range(2, 8), 2)] == [[2, 3], [4, 5, 6, 7]]
    with pytest.raises(ValueError, match="not maximal"):
        decompose_maximal([1, 2], 1)


def test_schreier_norm_examples():
    assert schreier_norm(SparseVector({1: 1, 2: 1, 3: 1}), 1) == 2
    assert schreier_norm(SparseVector({2: 1, 3: 1, 4: 1}), 2) == 3
    for N in range(4):
        assert schreier_norm(SparseVector({7: -5}), N) == 5
    assert schreier_norm(SparseVector(), 1) == 0


def test_greedy_membership_matches_definition_up_to_10():
    for N in (1, 2):
        for r in range(1, 11):
            for A in combinations(range(1, 11), r):
                assert is_schreier(A, N) == in_schreier(A, N), (A, N)


def test_maximal_end_closed_forms():
    for N in range(4):
        for s in range(1, 6):
            if N == 3 and s > 2:
                continue
            assert maximal_end(s, N) == max(next_maximal_set(s, N))
    assert maximal_end(5, 1) == 9
    assert maximal_end(3, 2) == 23
    assert maximal_end(2, 3) == 2047
    with pytest.raises(ValueError, match="scale exceeded"):
        maximal_end(1 << 30, 2)


def test_interval_membership_matches_explicit():
    rng = random.Random(1)
    for _ in range(500):
        A = sorted(rng.sample(range(1, 60), rng.randint(1, 12)))
        for N in (1, 2, 3):
            assert is_schreier_intervals(IntervalSet.from_indices(A), N) == is_schreier(A, N)
    assert is_maximal_interval(3, 23, 2) and not is_maximal_interval(3, 22, 2)


def test_block_norm_matches_pointwise_norm():
    rng = random.Random(2)
    for _ in range(300):
        pieces, x, start = [], {}, rng.randint(1, 6)
        for _ in range(rng.randint(1, 4)):
            lo = start + rng.randint(0, 3)
            hi = lo + rng.randint(0, 6)
            w = F(rng.randint(1, 6), rng.randint(1, 4))
            pieces.append((lo, hi, w))
            x.update({i: w for i in range(lo, hi + 1)})
            start = hi + 1
        for N in (0, 1, 2):
            assert block_norm(pieces, N) == schreier_norm(SparseVector(x), N)


small_vectors = st.dictionaries(st.integers(1, 9), st.integers(-3, 3), max_size=6).map(SparseVector)


@settings(max_examples=60, deadline=None)
@given(small_vectors, st.integers(0, 2))
def test_norm_matches_bruteforce(x, N):
    assert schreier_norm(x, N) == schreier_norm_bruteforce(dict(x.items()), N)


@settings(max_examples=80, deadline=None)
@given(small_vectors, st.integers(0, 2))
def test_norm_between_sup_and_l1_and_monotone_in_N(x, N):
    value = schreier_norm(x, N)
    assert x.linf() <= value <= x.l1()
    assert value <= schreier_norm(x, N + 1)
    assert schreier_norm(x.with_signs([-1 if i % 2 else 1 for i in range(len(x))]), N) == value


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(1, 20), min_size=1, max_size=6, unique=True), st.integers(1, 2),
       st.lists(st.integers(0, 4), min_size=6, max_size=6))
def test_spreading(A, N, gaps):
    A = sorted(A)
    if not is_schreier(A, N):
        return
    B, prev = [], 0
    for a, g in zip(A, gaps):
        prev = max(prev + 1, a + g)
        B.append(prev)
    assert is_schreier(B, N)
    x = SparseVector({a: i + 1 for i, a in enumerate(A)})
    assert schreier_norm(spread(x, B), N) >= schreier_norm(x, N)
