import math

import pytest
from hypothesis import given, strategies as st

from dynlis.levels import (
    CostCounters,
    Element,
    LevelSet,
    PreconditionViolated,
    ls_insert_max,
    ls_join,
    ls_last_with_value_above,
    ls_max,
    ls_min,
    ls_pred_by_index,
    ls_split_at,
)

# Nodes a single primitive may touch, per (log2(size) + 1). AVL height is
# below 1.45 log2(n + 2); split and join each walk at most two root paths.
PRIMITIVE_C = 6


def mk(*pairs):
    return LevelSet.from_elements(pairs)


def items(ls):
    return [tuple(e) for e in ls]


@st.composite
def level_sets(draw, max_size=256):
    """Distinct sorted indices paired with non-increasing values."""
    idx = sorted(draw(st.sets(st.integers(-10**6, 10**6), max_size=max_size)))
    drops = draw(st.lists(st.integers(0, 5), min_size=len(idx), max_size=len(idx)))
    v, vals = draw(st.integers(-50, 50)), []
    for d in drops:
        v -= d
        vals.append(v)
    return list(zip(idx, vals))


def test_insert_max_examples():
    assert items(ls_insert_max(LevelSet(), Element(10, 5))) == [(10, 5)]
    assert items(ls_insert_max(mk((10, 5)), Element(20, 3))) == [(10, 5), (20, 3)]
    with pytest.raises(PreconditionViolated):
        ls_insert_max(mk((10, 5)), Element(20, 7))
    with pytest.raises(PreconditionViolated):
        ls_insert_max(mk((10, 5)), Element(10, 1))


def test_pred_examples():
    assert ls_pred_by_index(mk((10, 5), (20, 3)), 15) == (10, 5)
    assert ls_pred_by_index(mk((10, 5)), 10) is None
    assert ls_pred_by_index(LevelSet(), 7) is None


def test_last_with_value_above_examples():
    assert ls_last_with_value_above(mk((10, 9), (20, 5), (30, 2)), 4) == (20, 5)
    assert ls_last_with_value_above(mk((10, 9)), 9) is None
    assert ls_last_with_value_above(mk((10, 9), (20, 5)), 0) == (20, 5)


def test_split_examples():
    a, b = ls_split_at(mk((10, 9), (20, 5), (30, 2)), 20)
    assert items(a) == [(10, 9), (20, 5)] and items(b) == [(30, 2)]
    a, b = ls_split_at(mk((10, 9)), 5)
    assert items(a) == [] and items(b) == [(10, 9)]
    a, b = ls_split_at(LevelSet(), 0)
    assert not a and not b


def test_join_examples():
    assert items(ls_join(mk((10, 9)), mk((30, 2)))) == [(10, 9), (30, 2)]
    assert items(ls_join(LevelSet(), mk((30, 2)))) == [(30, 2)]
    with pytest.raises(PreconditionViolated):
        ls_join(mk((10, 2)), mk((30, 9)))
    with pytest.raises(PreconditionViolated):
        ls_join(mk((10, 9), (40, 1)), mk((30, 0)))


def test_min_max_examples():
    assert ls_max(mk((10, 9), (20, 5))) == (20, 5)
    assert ls_min(mk((10, 9), (20, 5))) == (10, 9)
    assert ls_min(LevelSet()) is None
    assert ls_max(LevelSet()) is None


def test_split_before_excludes_key():
    a, b = mk((10, 9), (20, 5), (30, 2)).split_before(20)
    assert items(a) == [(10, 9)] and items(b) == [(20, 5), (30, 2)]


@given(level_sets())
def test_values_nonincreasing_and_shape(pairs):
    ls = mk(*pairs)
    ls.check()
    keys, vals = ls.audit()
    assert list(zip(keys, vals)) == pairs
    assert len(ls) == len(pairs)


@given(level_sets(), st.integers(-10**6 - 1, 10**6 + 1))
def test_split_join_round_trip(pairs, at):
    a, b = mk(*pairs).split_at(at)
    assert all(e.index <= at for e in a) and all(e.index > at for e in b)
    a.check()
    b.check()
    joined = LevelSet.join(a, b)
    joined.check()
    assert items(joined) == pairs


@given(level_sets(), st.integers(-60, 60))
def test_last_with_value_above_matches_scan(pairs, v):
    scan = [p for p in pairs if p[1] > v]
    expect = max(scan) if scan else None
    got = mk(*pairs).last_with_value_above(v)
    assert (None if got is None else tuple(got)) == expect


@given(level_sets(), st.integers(-10**6 - 1, 10**6 + 1))
def test_pred_succ_match_scan(pairs, i):
    ls = mk(*pairs)
    below = [p for p in pairs if p[0] < i]
    above = [p for p in pairs if p[0] > i]
    assert ls.pred(i) == (below[-1] if below else None)
    assert ls.succ(i) == (above[0] if above else None)
    assert ls.find(i) == next((p for p in pairs if p[0] == i), None)


@given(level_sets(), level_sets())
def test_join_of_arbitrary_heights(p1, p2):
    # shift p2 right of p1 and below its values so the join is legal
    if p1 and p2:
        di = p1[-1][0] - p2[0][0] + 1
        dv = p1[-1][1] - p2[0][1]
        p2 = [(i + di, v + dv) for i, v in p2]
    joined = LevelSet.join(mk(*p1), mk(*p2))
    joined.check()
    assert items(joined) == p1 + p2


def _cost(ls, fn):
    c = ls.counters
    c.reset()
    out = fn()
    return c.node_steps + c.rotations_or_rebalances, out


@given(level_sets(max_size=512), st.integers(-10**6, 10**6), st.integers(-60, 60))
def test_primitive_cost_is_logarithmic(pairs, i, v):
    n = len(pairs)
    bound = PRIMITIVE_C * (math.log2(max(n, 1)) + 1)
    ls = mk(*pairs)
    for fn in (lambda: ls.pred(i), lambda: ls.succ(i), lambda: ls.last_with_value_above(v), ls.min, ls.max):
        cost, _ = _cost(ls, fn)
        assert cost <= bound
    cost, (a, b) = _cost(ls, lambda: ls.split_at(i))
    assert cost <= bound
    cost, joined = _cost(a, lambda: LevelSet.join(a, b))
    assert cost <= bound
    assert len(joined) == n


def test_counters_track_invocations():
    c = CostCounters()
    ls = LevelSet.from_elements([(i, -i) for i in range(100)], c)
    c.reset()
    a, b = ls.split_at(50)
    LevelSet.join(a, b).pred(10)
    snap = c.snapshot()
    assert snap["splits"] == 1 and snap["joins"] == 1 and snap["pred_queries"] == 1
    assert snap["tree_ops"] == c.tree_ops >= 3
    c.reset()
    assert c.tree_ops == 0 and c.node_steps == 0


def test_audit_detects_corruption():
    ls = mk((1, 5), (2, 4), (3, 3))
    ls.root.val = 0  # middle element now smaller than its right neighbour
    ls.audit()
    with pytest.raises(PreconditionViolated):
        ls.check()
    ls = mk(*[(i, 0) for i in range(7)])
    ls.root.h += 1
    with pytest.raises(PreconditionViolated):
        ls.audit()
