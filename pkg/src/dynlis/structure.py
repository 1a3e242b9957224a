"""Dynamic longest increasing subsequence over level sets.

Level ``k`` holds every element whose longest increasing run ending at it
has length ``k``. An insertion pushes a contiguous block of each level up by
one, a deletion pulls a contiguous block down by one; both are carried out
with a constant number of splits and joins per touched level.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from itertools import repeat
from operator import ge
from typing import Optional

from .levels import CostCounters, Element, LevelSet, PreconditionViolated


class DuplicateIndex(KeyError):
    pass


class IndexNotFound(KeyError):
    pass


class NotAnAppend(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    invariant: str
    detail: str
    elements: tuple = field(default=())

    def __str__(self) -> str:
        return f"{self.invariant}: {self.detail}"


class InvariantError(AssertionError):
    def __init__(self, violation: Violation) -> None:
        super().__init__(str(violation))
        self.violation = violation


def _probes(m: int) -> int:
    # Comparisons made by a binary search over m sorted entries.
    return m.bit_length()


class DynLis:
    """Longest increasing subsequence of a keyed sequence under updates.

    Elements are ``(index, value)`` pairs with distinct integer indices.
    ``debug=True`` cross-checks every promoted and demoted block against a
    linear scan of its level while mutating (slow; for tests).
    """

    def __init__(self, debug: bool = False) -> None:
        self.debug = debug
        self.counters = CostCounters()
        self.levels: list[LevelSet] = []
        self.tails: list[Element] = []
        self._tail_values: list[int] = []
        self._level_of: dict[int, int] = {}
        self._max_index: Optional[int] = None
        self.side_ops = 0

    # -- queries ---------------------------------------------------------

    def __len__(self) -> int:
        return len(self._level_of)

    def __contains__(self, index) -> bool:
        return index in self._level_of

    @property
    def element_count(self) -> int:
        return len(self._level_of)

    @property
    def max_index(self) -> Optional[int]:
        return self._max_index

    def lis_length(self) -> int:
        return len(self.levels)

    def level_of(self, index: int) -> int:
        try:
            return self._level_of[index]
        except KeyError:
            raise IndexNotFound(index) from None

    def level_map(self) -> dict[int, int]:
        return dict(self._level_of)

    def tail_values(self) -> list[int]:
        return list(self._tail_values)

    def forest(self) -> list[list[tuple[int, int]]]:
        return [[tuple(e) for e in ls] for ls in self.levels]

    def snapshot(self) -> list[tuple[list, list]]:
        """Per level (indices, values) columns; cheap to compare."""
        return [ls.columns() for ls in self.levels]

    def elements(self) -> list[Element]:
        return sorted(e for ls in self.levels for e in ls)

    def find_insert_level(self, e: Element) -> int:
        """Level the new element will occupy once inserted.

        Binary search over levels: "some element of L_k precedes e with a
        smaller value" holds for a prefix of k, and only the index
        predecessor of e in L_k needs checking since it carries the
        smallest value among the candidates.
        """
        lo, hi = 0, len(self.levels)
        while lo < hi:
            mid = (lo + hi + 1) // 2
            p = self.levels[mid - 1].pred(e.index)
            if p is not None and p.value < e.value:
                lo = mid
            else:
                hi = mid - 1
        return lo + 1

    def extract_lis(self) -> list[Element]:
        """A maximum increasing subsequence, built top-down by predecessor queries."""
        self._begin()
        m = len(self.levels)
        if m == 0:
            return []
        out = [self.tails[m - 1]]
        for k in range(m - 2, -1, -1):
            p = self.levels[k].pred(out[-1].index)
            if p is None or not p.value < out[-1].value:
                raise InvariantError(
                    Violation("predecessor-support", f"level {k + 1} cannot extend {out[-1]}", (out[-1],))
                )
            out.append(p)
        out.reverse()
        return out

    # -- mutations -------------------------------------------------------

    def _begin(self) -> None:
        self.counters.reset()
        self.side_ops = 0

    def _set_tail(self, k: int) -> None:
        top = self.levels[k].max()
        self.tails[k] = top
        self._tail_values[k] = top.value

    def _relevel(self, ls: LevelSet, level: int) -> None:
        lv = self._level_of
        for e in ls:
            lv[e.index] = level
        self.side_ops += len(ls)

    def insert(self, index: int, value: int) -> None:
        e = Element(index, value)
        if index in self._level_of:
            raise DuplicateIndex(index)
        self._begin()
        c = self.counters
        levels = self.levels
        j = self.find_insert_level(e)
        moving = LevelSet(c).insert_max(e)
        t_min = t_max = e
        while True:
            if j > len(levels):
                levels.append(moving)
                self.tails.append(t_max)
                self._tail_values.append(t_max.value)
                self._relevel(moving, j)
                break
            cur = levels[j - 1]
            b = cur.last_with_value_above(t_max.value)
            if self.debug:
                expect = [x for x in cur if x.index > t_min.index and x.value > t_max.value]
            left, rest = cur.split_at(t_min.index)
            if b is not None and b.index > t_min.index:
                promoted, right = rest.split_at(b.index)
            else:
                promoted, right = LevelSet(c), rest
            if self.debug:
                got = list(promoted)
                if got != expect:
                    raise InvariantError(
                        Violation("promotion-contiguity", f"level {j}: expected {expect}, got {got}", tuple(got))
                    )
            self._relevel(moving, j)
            if not right:
                self.tails[j - 1] = t_max
                self._tail_values[j - 1] = t_max.value
            levels[j - 1] = LevelSet.join(LevelSet.join(left, moving), right)
            if not promoted:
                break
            moving = promoted
            t_min, t_max = promoted.min(), b
            j += 1
        if self._max_index is None or index > self._max_index:
            self._max_index = index

    def insert_append(self, index: int, value: int) -> None:
        """Insert past the current maximum index without any propagation."""
        if index in self._level_of:
            raise DuplicateIndex(index)
        if self._max_index is not None and index <= self._max_index:
            raise NotAnAppend(f"index {index} is not above {self._max_index}")
        self._begin()
        e = Element(index, value)
        m = len(self.levels)
        k = bisect_left(self._tail_values, value)
        self.counters.directory_probes += _probes(m)
        self.counters.node_steps += _probes(m)
        if k == m:
            self.levels.append(LevelSet(self.counters).insert_max(e))
            self.tails.append(e)
            self._tail_values.append(value)
        else:
            self.levels[k].insert_max(e)
            self.tails[k] = e
            self._tail_values[k] = value
        self._level_of[index] = k + 1
        self.side_ops += 1
        self._max_index = index

    def delete(self, index: int) -> None:
        """Remove the element at ``index``.

        Level k+1 element e falls to level k exactly when every level-k
        element below it (earlier index, smaller value) is itself falling.
        Those supporters form a contiguous run of level k ending at e's
        predecessor there, so the falling elements of level k+1 are those
        whose predecessor lies inside the falling run ``D`` of level k and
        whose value does not exceed that of the element just before ``D``.
        """
        k = self._level_of.get(index)
        if k is None:
            raise IndexNotFound(index)
        self._begin()
        c = self.counters
        levels = self.levels
        if self.debug:
            before = [list(ls) for ls in levels]
        cur = levels[k - 1]
        left, rest = cur.split_before(index)
        gone, right = rest.split_at(index)
        x = gone.root.key, gone.root.val
        del self._level_of[index]
        self.side_ops += 1
        d_min = x = Element(*x)
        run = [x]
        while True:
            w = left.max()
            s = right.min()
            nxt_left = nxt_right = None
            dropped = LevelSet(c)
            if k < len(levels):
                nxt = levels[k]
                lo = d_min.index
                if w is not None:
                    b = nxt.last_with_value_above(w.value)
                    if b is not None and b.index > lo:
                        lo = b.index
                first = nxt.succ(lo)
                if first is not None and (s is None or first.index < s.index):
                    nxt_left, rest = nxt.split_at(lo)
                    if s is not None:
                        dropped, nxt_right = rest.split_before(s.index)
                    else:
                        dropped, nxt_right = rest, LevelSet(c)
                if self.debug:
                    self._check_drop(k, before, run, dropped)
            if dropped:
                if self.debug:
                    run = list(dropped)
                self._relevel(dropped, k)
                tail_moves = not right
                levels[k - 1] = LevelSet.join(LevelSet.join(left, dropped), right)
                if tail_moves:
                    self._set_tail(k - 1)
                left, right = nxt_left, nxt_right
                d_min = first
                k += 1
                continue
            if w is not None and s is None:
                self.tails[k - 1] = w
                self._tail_values[k - 1] = w.value
            merged = LevelSet.join(left, right)
            if merged:
                levels[k - 1] = merged
            else:
                if k != len(levels):
                    raise InvariantError(Violation("partition", f"level {k} emptied below the top"))
                levels.pop()
                self.tails.pop()
                self._tail_values.pop()
            break
        if index == self._max_index:
            self._max_index = max((t.index for t in self.tails), default=None)

    @staticmethod
    def _check_drop(k: int, before: list, run: list, dropped: LevelSet) -> None:
        # Linear scan: an element of level k+1 falls iff every level-k
        # element below it lies in the falling run of level k.
        run_idx = {e.index for e in run}
        expect = [
            e
            for e in before[k]
            if all(j.index in run_idx for j in before[k - 1] if j.index < e.index and j.value < e.value)
        ]
        got = list(dropped)
        if got != expect:
            raise InvariantError(
                Violation("drop-contiguity", f"level {k + 1}: expected {expect}, got {got}", tuple(got))
            )

    # -- auditing --------------------------------------------------------

    def check_invariants(self, shape: bool = True) -> Optional[Violation]:
        """Full sweep of the structural invariants; the first failure or None.

        Checked: nonempty levels, values non-increasing within each level,
        the index -> level side map partitions the elements, each element
        above level 1 has an index predecessor one level down with a smaller
        value, and the tails directory. The first three of these imply every
        stored level equals the true longest-run length: predecessor support
        gives a run of the stored length, and a longer run would put two
        comparable elements on one level. ``shape`` adds the AVL audit.
        """
        m = len(self.levels)
        seen: dict[int, int] = {}
        per_level = []
        for k, ls in enumerate(self.levels, start=1):
            if not ls:
                return Violation("nonempty-levels", f"level {k} of {m} is empty")
            if shape:
                try:
                    keys, vals = ls.audit()
                except PreconditionViolated as exc:
                    return Violation("tree-shape", f"level {k}: {exc}")
            else:
                keys, vals = ls.columns()
            if not all(map(ge, vals, vals[1:])):
                i = next(i for i in range(len(vals) - 1) if vals[i] < vals[i + 1])
                a, b = Element(keys[i], vals[i]), Element(keys[i + 1], vals[i + 1])
                return Violation("nonincreasing-values", f"level {k} rises from {a} to {b}", (a, b))
            before = len(seen)
            seen.update(zip(keys, repeat(k)))
            if len(seen) != before + len(keys):
                return Violation("partition", f"level {k} shares an index with a lower level")
            per_level.append((keys, vals))
        if seen != self._level_of:
            return Violation("partition", f"{len(seen)} stored elements disagree with the side map")

        for k in range(1, m):
            bk, bv = per_level[k - 1]
            keys, vals = per_level[k]
            ps = [bisect_left(bk, x) - 1 for x in keys]
            if min(ps) < 0 or not all(bv[p] < v for p, v in zip(ps, vals)):
                i = next(i for i, p in enumerate(ps) if p < 0 or not bv[p] < vals[i])
                e, p = Element(keys[i], vals[i]), ps[i]
                pred = Element(bk[p], bv[p]) if p >= 0 else None
                return Violation(
                    "predecessor-support",
                    f"{e} at level {k + 1} has predecessor {pred} at level {k}",
                    (e,) if pred is None else (pred, e),
                )

        if len(self.tails) != m or len(self._tail_values) != m:
            return Violation("tails", f"{len(self.tails)} tails for {m} levels")
        for k, (keys, vals) in enumerate(per_level):
            top = Element(keys[-1], vals[-1])
            if self.tails[k] != top or self._tail_values[k] != top.value:
                return Violation("tails", f"tail of level {k + 1} is {self.tails[k]}, expected {top}", (top,))
            if k and not self._tail_values[k - 1] < self._tail_values[k]:
                return Violation("tails", f"tail values not increasing at level {k + 1}")
        if self._max_index != max((t.index for t in self.tails), default=None):
            return Violation("tails", f"max index {self._max_index} is stale")
        return None

    def assert_invariants(self) -> None:
        v = self.check_invariants()
        if v is not None:
            raise InvariantError(v)


__all__ = [
    "DynLis",
    "DuplicateIndex",
    "IndexNotFound",
    "NotAnAppend",
    "InvariantError",
    "Violation",
    "PreconditionViolated",
]
