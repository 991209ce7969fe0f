# app/core/subsets.py
from __future__ import annotations

from itertools import combinations
from math import comb
from typing import FrozenSet, Iterable, Iterator, Sequence

Edge = FrozenSet[int]


def to_mask(boxes: Iterable[int]) -> int:
    m = 0
    for b in boxes:
        m |= 1 << (b - 1)
    return m


def from_mask(mask: int) -> Edge:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)


def sorted_tuple(edge: Iterable[int]) -> tuple:
    return tuple(sorted(edge))


def k_subsets(boxes: Sequence[int], k: int) -> Iterator[Edge]:
    for c in combinations(boxes, k):
        yield frozenset(c)


def subsets_upto(boxes: Sequence[int], max_size: int) -> Iterator[Edge]:
    """Nonempty subsets by increasing size, lexicographic within a size."""
    for s in range(1, max_size + 1):
        for c in combinations(boxes, s):
            yield frozenset(c)


def count_subsets_upto(n: int, max_size: int) -> int:
    return sum(comb(n, s) for s in range(1, max_size + 1))


__all__ = [
    "Edge",
    "to_mask",
    "from_mask",
    "sorted_tuple",
    "k_subsets",
    "subsets_upto",
    "count_subsets_upto",
]
