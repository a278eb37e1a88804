"""Symmetric multi-indices.

A multi-index of order ``k`` over ``n`` variables is stored as a sorted tuple
of integers in ``1..n``; ``(1, 2)`` and ``(2, 1)`` name the same derivative, so
only the sorted representative is ever built.  The lexicographic order on
sorted tuples is the order used for matrix columns and wedge factors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Iterable

MultiIndex = tuple[int, ...]

#: Upper bound on ``n`` and ``k`` accepted by the enumerators.
MAX_DIM = 6


def _check_dims(n: int, k: int, limit: int) -> None:
    if n < 1 or k < 1:
        raise ValueError(f"need n >= 1 and k >= 1, got n={n}, k={k}")
    if n > limit or k > limit:
        raise ValueError(f"n={n}, k={k} exceeds the enumeration limit {limit}")


def multi_index(entries: Iterable[int], n: int | None = None) -> MultiIndex:
    """Canonical (sorted) multi-index from arbitrary entries."""
    out = tuple(sorted(int(e) for e in entries))
    if out and out[0] < 1:
        raise ValueError(f"multi-index entries must be >= 1: {out}")
    if n is not None and out and out[-1] > n:
        raise ValueError(f"multi-index {out} has entries outside 1..{n}")
    return out


def enumerate_sk(n: int, k: int, limit: int = MAX_DIM) -> list[MultiIndex]:
    """All sorted multi-indices of order ``k`` in lexicographic order."""
    _check_dims(n, k, limit)
    # combinations_with_replacement emits sorted tuples in lexicographic order
    return list(combinations_with_replacement(range(1, n + 1), k))


def count_repetitions(n: int, j: int) -> int:
    """Number of combinations with repetition of ``j`` items from ``n``."""
    if n < 1 or j < 1:
        raise ValueError(f"need n >= 1 and j >= 1, got n={n}, j={j}")
    return math.comb(n + j - 1, j)


def extend(index: MultiIndex, i: int, n: int | None = None) -> MultiIndex:
    """Append ``i`` to ``index`` and re-sort (the multi-index ``Ii``)."""
    if i < 1 or (n is not None and i > n):
        raise ValueError(f"index {i} out of range 1..{n}")
    if n is not None and index and index[-1] > n:
        raise ValueError(f"multi-index {index} has entries outside 1..{n}")
    pos = 0
    while pos < len(index) and index[pos] <= i:
        pos += 1
    return index[:pos] + (i,) + index[pos:]


def compare_lex(a: MultiIndex, b: MultiIndex) -> int:
    """Return -1, 0 or 1 as ``a`` is less than, equal to or greater than ``b``."""
    if len(a) != len(b):
        raise ValueError(f"cannot compare multi-indices of orders {len(a)} and {len(b)}")
    for x, y in zip(a, b):
        if x != y:
            return -1 if x < y else 1
    return 0


@dataclass(frozen=True)
class IndexUniverse:
    """All multi-indices of order ``1..k`` over ``n`` variables.

    ``sigma_k`` is the flat concatenation ``S_1, S_2, ..., S_k``; the position
    of a multi-index in it is its stable integer id.
    """

    n: int
    k: int
    limit: int = MAX_DIM
    sk_lists: tuple[tuple[MultiIndex, ...], ...] = field(init=False, repr=False)
    sigma_k: tuple[MultiIndex, ...] = field(init=False, repr=False)

    def __post_init__(self):
        _check_dims(self.n, self.k, self.limit)
        lists = tuple(tuple(enumerate_sk(self.n, j, self.limit)) for j in range(1, self.k + 1))
        object.__setattr__(self, "sk_lists", lists)
        object.__setattr__(self, "sigma_k", tuple(I for group in lists for I in group))

    def sk(self, j: int) -> tuple[MultiIndex, ...]:
        return self.sk_lists[j - 1]

    def index_of(self, index: MultiIndex) -> int:
        return self.sigma_k.index(tuple(index))


def sigma(n: int, k: int) -> list[MultiIndex]:
    """Flat list of all multi-indices of order ``1..k`` (empty for ``k == 0``)."""
    if k == 0:
        return []
    return list(IndexUniverse(n, k).sigma_k)


def format_index(index: MultiIndex) -> str:
    """Digits of a multi-index, ``(1, 1, 2) -> "112"``."""
    return "".join(str(i) for i in index)
