"""Level sets: join-based AVL trees keyed by index.

Each level set holds the elements of one level ordered by index. Within a
level the values never increase with the index, so the same tree answers
threshold queries on values without a second index.

All mutating primitives are destructive: ``split_at`` and ``join`` consume
their inputs and hand back fresh ``LevelSet`` objects that reuse the nodes.
Split, join, predecessor and threshold search are worst-case O(log n)
(AVL height is at most 1.44 log2(n + 2)).

Every primitive adds to a shared :class:`CostCounters`, which is how the
complexity tests measure work independently of wall time.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from operator import ge, lt
from typing import Any, Iterator, NamedTuple, Optional


class PreconditionViolated(AssertionError):
    """A tree primitive was called with arguments that would break ordering."""


class Element(NamedTuple):
    index: int
    value: int


@dataclass
class CostCounters:
    splits: int = 0
    joins: int = 0
    pred_queries: int = 0
    succ_queries: int = 0
    threshold_queries: int = 0
    inserts: int = 0
    lookups: int = 0
    directory_probes: int = 0
    rotations_or_rebalances: int = 0
    # Nodes visited across all primitives; not part of tree_ops.
    node_steps: int = 0

    @property
    def tree_ops(self) -> int:
        """Primitive invocations plus rebalancing rotations."""
        return (
            self.splits
            + self.joins
            + self.pred_queries
            + self.succ_queries
            + self.threshold_queries
            + self.inserts
            + self.lookups
            + self.directory_probes
            + self.rotations_or_rebalances
        )

    def reset(self) -> None:
        for f in fields(self):
            setattr(self, f.name, 0)

    def snapshot(self) -> dict[str, int]:
        out = {f.name: getattr(self, f.name) for f in fields(self)}
        out["tree_ops"] = self.tree_ops
        return out


class _Node:
    __slots__ = ("key", "val", "left", "right", "h", "size")

    def __init__(self, key: Any, val: Any) -> None:
        self.key = key
        self.val = val
        self.left: Optional[_Node] = None
        self.right: Optional[_Node] = None
        self.h = 1
        self.size = 1


def _h(n: Optional[_Node]) -> int:
    return n.h if n is not None else 0


def _update(n: _Node) -> None:
    l, r = n.left, n.right
    lh = l.h if l is not None else 0
    rh = r.h if r is not None else 0
    n.h = (lh if lh > rh else rh) + 1
    n.size = 1 + (l.size if l is not None else 0) + (r.size if r is not None else 0)


def _rot_left(n: _Node, c: CostCounters) -> _Node:
    c.rotations_or_rebalances += 1
    r = n.right
    n.right = r.left
    _update(n)
    r.left = n
    _update(r)
    return r


def _rot_right(n: _Node, c: CostCounters) -> _Node:
    c.rotations_or_rebalances += 1
    l = n.left
    n.left = l.right
    _update(n)
    l.right = n
    _update(l)
    return l


def _join_right(tl: _Node, m: _Node, tr: Optional[_Node], c: CostCounters) -> _Node:
    c.node_steps += 1
    ll, lr = tl.left, tl.right
    if _h(lr) <= _h(tr) + 1:
        m.left, m.right = lr, tr
        _update(m)
        tl.right = m
        if m.h <= _h(ll) + 1:
            _update(tl)
            return tl
        tl.right = _rot_right(m, c)
        _update(tl)
        return _rot_left(tl, c)
    t = _join_right(lr, m, tr, c)
    tl.right = t
    _update(tl)
    if t.h <= _h(ll) + 1:
        return tl
    return _rot_left(tl, c)


def _join_left(tl: Optional[_Node], m: _Node, tr: _Node, c: CostCounters) -> _Node:
    c.node_steps += 1
    rl, rr = tr.left, tr.right
    if _h(rl) <= _h(tl) + 1:
        m.left, m.right = tl, rl
        _update(m)
        tr.left = m
        if m.h <= _h(rr) + 1:
            _update(tr)
            return tr
        tr.left = _rot_left(m, c)
        _update(tr)
        return _rot_right(tr, c)
    t = _join_left(tl, m, rl, c)
    tr.left = t
    _update(tr)
    if t.h <= _h(rr) + 1:
        return tr
    return _rot_right(tr, c)


def _join(tl: Optional[_Node], m: _Node, tr: Optional[_Node], c: CostCounters) -> _Node:
    """Join ``tl < m < tr`` into one balanced tree."""
    lh, rh = _h(tl), _h(tr)
    if lh > rh + 1:
        return _join_right(tl, m, tr, c)
    if rh > lh + 1:
        return _join_left(tl, m, tr, c)
    c.node_steps += 1
    m.left, m.right = tl, tr
    _update(m)
    return m


def _split(t: Optional[_Node], key: Any, c: CostCounters) -> tuple[Optional[_Node], Optional[_Node]]:
    # (keys <= key, keys > key)
    if t is None:
        return None, None
    c.node_steps += 1
    if key < t.key:
        l, r = _split(t.left, key, c)
        return l, _join(r, t, t.right, c)
    if key == t.key:
        r = t.right
        return _join(t.left, t, None, c), r
    l, r = _split(t.right, key, c)
    return _join(t.left, t, l, c), r


def _split_lt(t: Optional[_Node], key: Any, c: CostCounters) -> tuple[Optional[_Node], Optional[_Node]]:
    # (keys < key, keys >= key)
    if t is None:
        return None, None
    c.node_steps += 1
    if t.key < key:
        l, r = _split_lt(t.right, key, c)
        return _join(t.left, t, l, c), r
    if key == t.key:
        l = t.left
        return l, _join(None, t, t.right, c)
    l, r = _split_lt(t.left, key, c)
    return l, _join(r, t, t.right, c)


def _pop_max(t: _Node, c: CostCounters) -> tuple[Optional[_Node], _Node]:
    c.node_steps += 1
    if t.right is None:
        rest = t.left
        t.left = None
        _update(t)
        return rest, t
    rest, top = _pop_max(t.right, c)
    return _join(t.left, t, rest, c), top


def _join2(tl: Optional[_Node], tr: Optional[_Node], c: CostCounters) -> Optional[_Node]:
    if tl is None:
        return tr
    if tr is None:
        return tl
    rest, m = _pop_max(tl, c)
    return _join(rest, m, tr, c)


class LevelSet:
    """Index-ordered set of elements whose values are non-increasing in index."""

    __slots__ = ("root", "counters")

    def __init__(self, counters: Optional[CostCounters] = None, _root: Optional[_Node] = None) -> None:
        self.root = _root
        self.counters = counters if counters is not None else CostCounters()

    @classmethod
    def from_elements(cls, elements, counters: Optional[CostCounters] = None) -> "LevelSet":
        ls = cls(counters)
        for e in elements:
            ls.insert_max(Element(*e))
        return ls

    def __len__(self) -> int:
        return self.root.size if self.root is not None else 0

    def __bool__(self) -> bool:
        return self.root is not None

    def __iter__(self) -> Iterator[Element]:
        stack: list[_Node] = []
        n = self.root
        while stack or n is not None:
            while n is not None:
                stack.append(n)
                n = n.left
            n = stack.pop()
            yield Element(n.key, n.val)
            n = n.right

    def __repr__(self) -> str:
        return f"LevelSet({[tuple(e) for e in self]})"

    def height(self) -> int:
        return _h(self.root)

    def min(self) -> Optional[Element]:
        n = self.root
        if n is None:
            return None
        c = self.counters
        c.lookups += 1
        while n.left is not None:
            c.node_steps += 1
            n = n.left
        c.node_steps += 1
        return Element(n.key, n.val)

    def max(self) -> Optional[Element]:
        n = self.root
        if n is None:
            return None
        c = self.counters
        c.lookups += 1
        while n.right is not None:
            c.node_steps += 1
            n = n.right
        c.node_steps += 1
        return Element(n.key, n.val)

    def find(self, index) -> Optional[Element]:
        c = self.counters
        c.lookups += 1
        n = self.root
        while n is not None:
            c.node_steps += 1
            if index < n.key:
                n = n.left
            elif n.key < index:
                n = n.right
            else:
                return Element(n.key, n.val)
        return None

    def pred(self, index) -> Optional[Element]:
        """Element with the largest index strictly below ``index``."""
        c = self.counters
        c.pred_queries += 1
        best = None
        n = self.root
        while n is not None:
            c.node_steps += 1
            if n.key < index:
                best = n
                n = n.right
            else:
                n = n.left
        return None if best is None else Element(best.key, best.val)

    def succ(self, index) -> Optional[Element]:
        """Element with the smallest index strictly above ``index``."""
        c = self.counters
        c.succ_queries += 1
        best = None
        n = self.root
        while n is not None:
            c.node_steps += 1
            if index < n.key:
                best = n
                n = n.left
            else:
                n = n.right
        return None if best is None else Element(best.key, best.val)

    def last_with_value_above(self, v) -> Optional[Element]:
        # Values are non-increasing in index, so "value > v" holds on a prefix.
        c = self.counters
        c.threshold_queries += 1
        best = None
        n = self.root
        while n is not None:
            c.node_steps += 1
            if n.val > v:
                best = n
                n = n.right
            else:
                n = n.left
        return None if best is None else Element(best.key, best.val)

    def insert_max(self, e: Element) -> "LevelSet":
        """Append ``e`` past the current maximum index; returns ``self``."""
        c = self.counters
        c.inserts += 1
        top = self.max()
        if top is not None:
            if not top.index < e.index:
                raise PreconditionViolated(f"index {e.index} not above max index {top.index}")
            if e.value > top.value:
                raise PreconditionViolated(
                    f"value {e.value} exceeds value {top.value} of the max-index element"
                )
        self.root = _join(self.root, _Node(e.index, e.value), None, c)
        return self

    def split_at(self, index) -> tuple["LevelSet", "LevelSet"]:
        """Split into (indices <= index, indices > index); ``self`` is emptied."""
        c = self.counters
        c.splits += 1
        l, r = _split(self.root, index, c)
        self.root = None
        return LevelSet(c, l), LevelSet(c, r)

    def split_before(self, index) -> tuple["LevelSet", "LevelSet"]:
        """Split into (indices < index, indices >= index); ``self`` is emptied."""
        c = self.counters
        c.splits += 1
        l, r = _split_lt(self.root, index, c)
        self.root = None
        return LevelSet(c, l), LevelSet(c, r)

    @staticmethod
    def join(left: "LevelSet", right: "LevelSet") -> "LevelSet":
        """Concatenate two level sets; both inputs are emptied."""
        c = left.counters
        c.joins += 1
        if left.root is not None and right.root is not None:
            a, b = left.max(), right.min()
            if not a.index < b.index:
                raise PreconditionViolated(f"index ranges overlap: {a.index} >= {b.index}")
            if a.value < b.value:
                raise PreconditionViolated(
                    f"join would put value {b.value} after smaller value {a.value}"
                )
        root = _join2(left.root, right.root, c)
        left.root = right.root = None
        return LevelSet(c, root)

    def audit(self) -> tuple[list, list]:
        """Check AVL shape and return (indices, values) in index order.

        Raises PreconditionViolated on a stale height or size, an unbalanced
        node or out-of-order indices. Value order is left to :meth:`check`.
        """
        keys: list = []
        vals: list = []

        def walk(n: Optional[_Node]) -> tuple[int, int]:
            if n is None:
                return 0, 0
            lh, ls = walk(n.left)
            keys.append(n.key)
            vals.append(n.val)
            rh, rs = walk(n.right)
            if lh - rh > 1 or rh - lh > 1:
                raise PreconditionViolated(f"unbalanced at {n.key}")
            if n.h != (lh if lh > rh else rh) + 1 or n.size != ls + rs + 1:
                raise PreconditionViolated(f"stale height or size at {n.key}")
            return n.h, n.size

        walk(self.root)
        if not all(map(lt, keys, keys[1:])):
            raise PreconditionViolated("indices out of order")
        return keys, vals

    def check(self) -> None:
        """Audit shape, and that values never rise with the index."""
        keys, vals = self.audit()
        if not all(map(ge, vals, vals[1:])):
            i = next(i for i in range(len(vals) - 1) if vals[i] < vals[i + 1])
            raise PreconditionViolated(
                f"values rise from {Element(keys[i], vals[i])} to {Element(keys[i + 1], vals[i + 1])}"
            )

    def columns(self) -> tuple[list, list]:
        """(indices, values) in index order, without auditing."""
        keys: list = []
        vals: list = []
        stack: list[_Node] = []
        n = self.root
        push, pop = stack.append, stack.pop
        while True:
            while n is not None:
                push(n)
                n = n.left
            if not stack:
                return keys, vals
            n = pop()
            keys.append(n.key)
            vals.append(n.val)
            n = n.right


# Functional aliases matching the operation names used elsewhere.
def ls_insert_max(ls: LevelSet, e: Element) -> LevelSet:
    return ls.insert_max(e)


def ls_pred_by_index(ls: LevelSet, i) -> Optional[Element]:
    return ls.pred(i)


def ls_last_with_value_above(ls: LevelSet, v) -> Optional[Element]:
    return ls.last_with_value_above(v)


def ls_split_at(ls: LevelSet, i) -> tuple[LevelSet, LevelSet]:
    return ls.split_at(i)


def ls_join(left: LevelSet, right: LevelSet) -> LevelSet:
    return LevelSet.join(left, right)


def ls_min(ls: LevelSet) -> Optional[Element]:
    return ls.min()


def ls_max(ls: LevelSet) -> Optional[Element]:
    return ls.max()
