"""Ground-truth LIS computations, independent of the level-set structure.

``oracle_levels`` is the quadratic DP over the definition of a level;
``oracle_length_fast`` is classic patience sorting. They share no code so
each can catch the other's mistakes.
"""

from __future__ import annotations

from bisect import bisect_left
from collections.abc import ItemsView, Mapping
from typing import Iterable, Sequence

import numpy as np


def _as_pairs(s: Iterable) -> list[tuple[int, int]]:
    if isinstance(s, Mapping):
        s = s.items()
    pairs = sorted(s)
    if not isinstance(s, ItemsView) and len({i for i, _ in pairs}) != len(pairs):
        raise ValueError("duplicate index")
    return pairs


def oracle_levels(s: Iterable) -> dict[int, int]:
    """Map each index to the length of the longest increasing run ending there.

    O(n^2): for each element, one vectorised max over all earlier elements
    with a strictly smaller value.
    """
    pairs = _as_pairs(s)
    n = len(pairs)
    if n == 0:
        return {}
    vals = np.fromiter((v for _, v in pairs), dtype=np.int64, count=n)
    lev = np.zeros(n, dtype=np.int64)
    for i in range(n):
        below = lev[:i][vals[:i] < vals[i]]
        lev[i] = 1 + (below.max() if below.size else 0)
    return {pairs[i][0]: int(lev[i]) for i in range(n)}


def patience_tails(values: Sequence[int]) -> list[int]:
    """Smallest possible last value of an increasing run of each length."""
    tails: list[int] = []
    append = tails.append
    for v in values:
        k = bisect_left(tails, v)
        try:
            tails[k] = v
        except IndexError:
            append(v)
    return tails


def oracle_length_fast(s: Iterable) -> int:
    return len(patience_tails([v for _, v in _as_pairs(s)]))


def oracle_is_valid_lis(s: Iterable, w: Sequence) -> bool:
    """True iff ``w`` is a maximum-length strictly increasing subsequence of ``s``."""
    pairs = _as_pairs(s)
    lookup = dict(pairs)
    w = [(int(i), int(v)) for i, v in w]
    for i, v in w:
        if i not in lookup or lookup[i] != v:
            return False
    for (i0, v0), (i1, v1) in zip(w, w[1:]):
        if not (i0 < i1 and v0 < v1):
            return False
    return len(w) == len(patience_tails([v for _, v in pairs]))
