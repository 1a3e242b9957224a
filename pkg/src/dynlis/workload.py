"""Replayable traces, positional addressing and workload generators.

A trace is plain text, one operation per line::

    <opname> [p=<int>] [k=<int>] [v=<int>]

``p`` is a position in the current sequence, ``k`` an explicit index key and
``v`` a value. Blank lines and lines starting with ``#`` are ignored.
"""

from __future__ import annotations

import math
import random
from bisect import bisect_left
from dataclasses import dataclass
from typing import Iterable, Optional

from .structure import DuplicateIndex, IndexNotFound

KEY_MIN = -(2**63)
KEY_MAX = 2**63 - 1
STRIDE = 2**32

# op name -> fields it must carry (all others must be absent)
OP_FIELDS: dict[str, tuple[str, ...]] = {
    "insert_key": ("key", "value"),
    "insert_after_pos": ("pos", "value"),
    "insert_front": ("value",),
    "append": ("value",),
    "delete_key": ("key",),
    "delete_pos": ("pos",),
    "query_length": (),
    "extract": (),
}
_TRACE_NAME = {"query_length": "query"}
_FROM_TRACE = {"query": "query_length", **{k: k for k in OP_FIELDS}}
_FIELD_TAG = (("pos", "p"), ("key", "k"), ("value", "v"))

DEFAULT_MIX = {"append": 0.4, "insert": 0.3, "delete": 0.2, "query": 0.1}
MIX_KINDS = ("append", "insert", "delete", "query", "extract")
ADVERSARIAL = ("increasing", "decreasing", "sawtooth")


class ParseError(ValueError):
    def __init__(self, lineno: int, msg: str) -> None:
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


class BadMix(ValueError):
    pass


class PositionOutOfRange(IndexError):
    pass


KeyNotFound = IndexNotFound


@dataclass(frozen=True)
class WorkloadOp:
    op: str
    key: Optional[int] = None
    pos: Optional[int] = None
    value: Optional[int] = None

    def __post_init__(self) -> None:
        need = OP_FIELDS.get(self.op)
        if need is None:
            raise ValueError(f"unknown op {self.op!r}")
        for name in ("key", "pos", "value"):
            present = getattr(self, name) is not None
            if present != (name in need):
                raise ValueError(f"{self.op} {'requires' if name in need else 'takes no'} {name}")
        if self.pos is not None and self.pos < 0:
            raise ValueError("pos must be nonnegative")

    def to_line(self) -> str:
        parts = [_TRACE_NAME.get(self.op, self.op)]
        for name, tag in _FIELD_TAG:
            x = getattr(self, name)
            if x is not None:
                parts.append(f"{tag}={x}")
        return " ".join(parts)


def parse_trace(text: str) -> list[WorkloadOp]:
    ops = []
    tags = {tag: name for name, tag in _FIELD_TAG}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, *rest = line.split()
        op = _FROM_TRACE.get(head)
        if op is None:
            raise ParseError(lineno, f"unknown op {head!r}")
        kw: dict[str, int] = {}
        for tok in rest:
            tag, eq, num = tok.partition("=")
            if not eq or tag not in tags:
                raise ParseError(lineno, f"bad field {tok!r}")
            if tags[tag] in kw:
                raise ParseError(lineno, f"repeated field {tag}")
            try:
                kw[tags[tag]] = int(num)
            except ValueError:
                raise ParseError(lineno, f"not an integer: {num!r}") from None
        try:
            ops.append(WorkloadOp(op, **kw))
        except ValueError as exc:
            raise ParseError(lineno, str(exc)) from None
    return ops


def emit_trace(ops: Iterable[WorkloadOp]) -> str:
    return "".join(op.to_line() + "\n" for op in ops)


@dataclass(frozen=True)
class KeyedOp:
    """An operation in index-key form, ready for :class:`DynLis`.

    ``kind`` is one of insert, append, delete, query, extract. ``relabel``
    is set when making room for the key forced every live key to move; it
    maps old keys to new keys and must be applied before this op.
    """

    kind: str
    key: Optional[int] = None
    value: Optional[int] = None
    relabel: Optional[dict] = None


class PositionalAdapter:
    """Live keys in sequence order, with midpoint key allocation.

    Inserting between two neighbours takes the midpoint of their keys; the
    ends step by ``STRIDE``. When no integer fits, every key is respaced
    ``STRIDE`` apart (a relabel) and the caller is told the mapping.
    """

    def __init__(self) -> None:
        self.keys: list[int] = []
        self.relabels = 0

    def __len__(self) -> int:
        return len(self.keys)

    def key_at(self, pos: int) -> int:
        if not 0 <= pos < len(self.keys):
            raise PositionOutOfRange(f"position {pos} of {len(self.keys)}")
        return self.keys[pos]

    def position_of(self, key: int) -> int:
        p = bisect_left(self.keys, key)
        if p == len(self.keys) or self.keys[p] != key:
            raise KeyNotFound(key)
        return p

    def _gap_key(self, gap: int) -> Optional[int]:
        # Candidate key for slot ``gap`` (0 = before keys[0]), or None if full.
        keys = self.keys
        if not keys:
            return 0
        if gap == len(keys):
            last = keys[-1]
            if last + STRIDE <= KEY_MAX:
                return last + STRIDE
            return (last + KEY_MAX + 1) // 2 if KEY_MAX - last >= 1 else None
        if gap == 0:
            first = keys[0]
            if first - STRIDE >= KEY_MIN:
                return first - STRIDE
            return (KEY_MIN + first) // 2 if first - KEY_MIN >= 1 else None
        a, b = keys[gap - 1], keys[gap]
        return (a + b) // 2 if b - a >= 2 else None

    def relabel(self) -> dict[int, int]:
        n = len(self.keys)
        stride = min(STRIDE, (KEY_MAX - KEY_MIN) // (n + 2))
        start = -(stride * (n - 1)) // 2 if n else 0
        new = [start + i * stride for i in range(n)]
        mapping = dict(zip(self.keys, new))
        self.keys = new
        self.relabels += 1
        return mapping

    def insert_gap(self, gap: int) -> tuple[int, Optional[dict]]:
        """Allocate a key for slot ``gap`` and record it; (key, relabel map)."""
        if not 0 <= gap <= len(self.keys):
            raise PositionOutOfRange(f"slot {gap} of {len(self.keys)}")
        mapping = None
        key = self._gap_key(gap)
        if key is None:
            mapping = self.relabel()
            key = self._gap_key(gap)
        self.keys.insert(gap, key)
        return key, mapping

    def insert_key(self, key: int) -> None:
        if not KEY_MIN <= key <= KEY_MAX:
            raise ValueError(f"key {key} outside the 64-bit range")
        p = bisect_left(self.keys, key)
        if p < len(self.keys) and self.keys[p] == key:
            raise DuplicateIndex(key)
        self.keys.insert(p, key)

    def remove_at(self, pos: int) -> int:
        key = self.key_at(pos)
        del self.keys[pos]
        return key


def resolve(op: WorkloadOp, a: PositionalAdapter) -> KeyedOp:
    """Translate ``op`` into key form, updating the adapter's live keys."""
    kind = op.op
    if kind == "query_length":
        return KeyedOp("query")
    if kind == "extract":
        return KeyedOp("extract")
    if kind == "insert_key":
        append = not a.keys or op.key > a.keys[-1]
        a.insert_key(op.key)
        return KeyedOp("append" if append else "insert", op.key, op.value)
    if kind == "delete_key":
        a.remove_at(a.position_of(op.key))
        return KeyedOp("delete", op.key)
    if kind == "delete_pos":
        return KeyedOp("delete", a.remove_at(op.pos))
    if kind == "append":
        key, mapping = a.insert_gap(len(a))
        return KeyedOp("append", key, op.value, mapping)
    if kind == "insert_front":
        key, mapping = a.insert_gap(0)
        return KeyedOp("insert", key, op.value, mapping)
    if op.pos >= len(a):
        raise PositionOutOfRange(f"position {op.pos} of {len(a)}")
    key, mapping = a.insert_gap(op.pos + 1)
    return KeyedOp("insert", key, op.value, mapping)


def parse_mix(text: str) -> dict[str, float]:
    """``"append=0.4,insert=0.6"`` -> ``{"append": 0.4, "insert": 0.6}``."""
    mix: dict[str, float] = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        name, eq, frac = part.partition("=")
        if not eq:
            raise BadMix(f"expected name=fraction, got {part!r}")
        try:
            mix[name.strip()] = float(frac)
        except ValueError:
            raise BadMix(f"bad fraction {frac!r}") from None
    return check_mix(mix)


def check_mix(mix: dict[str, float]) -> dict[str, float]:
    unknown = set(mix) - set(MIX_KINDS)
    if unknown:
        raise BadMix(f"unknown op kinds {sorted(unknown)}")
    if any(f < 0 or not math.isfinite(f) for f in mix.values()):
        raise BadMix("fractions must be finite and nonnegative")
    if not math.isclose(sum(mix.values()), 1.0, abs_tol=1e-9):
        raise BadMix(f"fractions sum to {sum(mix.values())}, not 1")
    return dict(mix)


def gen_workload(
    seed: int,
    n: int,
    mix: Optional[dict[str, float]] = None,
    value_range: tuple[int, int] = (0, 2**20),
) -> list[WorkloadOp]:
    """``n`` random ops drawn from ``mix`` with values uniform on ``value_range``.

    A delete drawn while the sequence is empty becomes an append.
    """
    mix = check_mix(DEFAULT_MIX if mix is None else mix)
    rng = random.Random(seed)
    kinds = [k for k in MIX_KINDS if mix.get(k, 0) > 0]
    weights = [mix[k] for k in kinds]
    lo, hi = value_range
    size = 0
    ops: list[WorkloadOp] = []
    for kind in rng.choices(kinds, weights, k=n) if kinds else []:
        if kind == "delete" and size == 0:
            kind = "append"
        if kind == "append":
            ops.append(WorkloadOp("append", value=rng.randint(lo, hi)))
            size += 1
        elif kind == "insert":
            slot = rng.randint(0, size)
            v = rng.randint(lo, hi)
            if slot == 0:
                ops.append(WorkloadOp("insert_front", value=v))
            else:
                ops.append(WorkloadOp("insert_after_pos", pos=slot - 1, value=v))
            size += 1
        elif kind == "delete":
            ops.append(WorkloadOp("delete_pos", pos=rng.randrange(size)))
            size -= 1
        elif kind == "query":
            ops.append(WorkloadOp("query_length"))
        else:
            ops.append(WorkloadOp("extract"))
    return ops


def gen_adversarial(name: str, n: int, period: Optional[int] = None) -> list[WorkloadOp]:
    """Append-only extremes: increasing (r = n), decreasing (r = 1), sawtooth."""
    if name == "increasing":
        values = range(n)
    elif name == "decreasing":
        values = range(n, 0, -1)
    elif name == "sawtooth":
        p = period or max(2, math.isqrt(n))
        values = (i % p for i in range(n))
    else:
        raise ValueError(f"unknown adversarial workload {name!r}; choose from {ADVERSARIAL}")
    return [WorkloadOp("append", value=v) for v in values]
