import itertools

import pytest
from hypothesis import given, strategies as st

from gmas.multiindex import (
    IndexUniverse,
    compare_lex,
    count_repetitions,
    enumerate_sk,
    extend,
    multi_index,
    sigma,
)
from oracles import brute_sk


def test_enumerate_small_cases():
    assert enumerate_sk(2, 2) == [(1, 1), (1, 2), (2, 2)]
    assert enumerate_sk(1, 3) == [(1, 1, 1)]


def test_enumerate_three_two_matches_brute_force():
    out = enumerate_sk(3, 2)
    assert out == brute_sk(3, 2)
    assert len(out) == 6 and out[0] == (1, 1) and out[-1] == (3, 3)


@pytest.mark.parametrize("n,k", [(0, 1), (1, 0), (0, 0)])
def test_enumerate_rejects_zero(n, k):
    with pytest.raises(ValueError):
        enumerate_sk(n, k)


def test_enumerate_respects_limit():
    with pytest.raises(ValueError):
        enumerate_sk(7, 1)
    assert len(enumerate_sk(7, 1, limit=8)) == 7


@pytest.mark.parametrize("n,k", list(itertools.product(range(1, 5), range(1, 5))))
def test_size_and_order(n, k):
    out = enumerate_sk(n, k)
    assert len(out) == count_repetitions(n, k)
    assert out == brute_sk(n, k)
    assert all(compare_lex(a, b) == -1 for a, b in zip(out, out[1:]))


def test_extend_examples():
    assert extend((1, 2), 1) == (1, 1, 2)
    assert extend((2, 2), 1) == (1, 2, 2)
    assert extend((1, 1), 2) == (1, 1, 2)
    assert extend((), 3) == (3,)


def test_extend_out_of_range():
    with pytest.raises(ValueError):
        extend((1,), 3, n=2)
    with pytest.raises(ValueError):
        extend((1,), 0)


def test_compare_lex():
    assert compare_lex((1, 1), (1, 2)) == -1
    assert compare_lex((2, 2), (2, 2)) == 0
    assert compare_lex((1, 2), (1, 1)) == 1
    with pytest.raises(ValueError):
        compare_lex((1,), (1, 1))


def test_count_repetitions():
    assert count_repetitions(2, 1) == 2
    assert count_repetitions(2, 2) == 3
    assert count_repetitions(3, 3) == len(brute_sk(3, 3)) == 10
    with pytest.raises(ValueError):
        count_repetitions(0, 2)


def test_universe_and_sigma():
    u = IndexUniverse(2, 2)
    assert u.sk(1) == ((1,), (2,))
    assert u.sigma_k == ((1,), (2,), (1, 1), (1, 2), (2, 2))
    assert u.index_of((1, 2)) == 3
    assert sigma(2, 0) == []
    assert sigma(2, 2) == list(u.sigma_k)


def test_multi_index_canonicalizes():
    assert multi_index([2, 1, 2]) == (1, 2, 2)
    with pytest.raises(ValueError):
        multi_index([3], n=2)


@given(st.lists(st.integers(1, 4), max_size=4), st.integers(1, 4), st.integers(1, 4))
def test_extend_commutes(entries, i, j):
    I = multi_index(entries)
    assert extend(extend(I, i), j) == extend(extend(I, j), i)
    assert list(extend(I, i)) == sorted(list(I) + [i])


@given(st.lists(st.integers(1, 6), max_size=5))
def test_canonicalization_idempotent(entries):
    I = multi_index(entries)
    assert multi_index(I) == I
