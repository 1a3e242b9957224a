"""Trace replay, oracle verification and operation-count benchmarking."""

from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .oracle import oracle_is_valid_lis, oracle_length_fast, oracle_levels
from .structure import DynLis, InvariantError
from .workload import KeyedOp, PositionalAdapter, WorkloadOp, resolve

LEVEL_ORACLE_MAX_N = 512
CSV_HEADER = ("op_index", "op_kind", "n_before", "r_before", "tree_ops", "side_ops", "ns")

# Documented cost constants (see README): tree_ops per operation never exceeds
# C * (r + 1) * (log2(n / r) + 2) for inserts and C * (log2(n) + 2) for appends.
COST_C = 4.0
# Same bound measured in visited tree nodes instead of primitive calls.
STEP_C = 16.0


class VerificationFailure(Exception):
    def __init__(self, op_index: int, detail: str) -> None:
        super().__init__(f"op {op_index}: {detail}")
        self.op_index = op_index
        self.detail = detail


def insert_bound(n: int, r: int) -> float:
    n = max(n, 1)
    return (r + 1) * (math.log2(n / max(r, 1)) + 2)


def append_bound(n: int) -> float:
    return math.log2(max(n, 1)) + 2


class Replayer:
    """Applies workload ops to a :class:`DynLis` through a positional adapter.

    Keeps its own ``live`` map of key -> value, independent of the
    structure, for feeding the oracles.
    """

    def __init__(self, debug: bool = False) -> None:
        self.d = DynLis(debug=debug)
        self.adapter = PositionalAdapter()
        self.live: dict[int, int] = {}
        self.relabels = 0

    def resolve(self, op: WorkloadOp) -> KeyedOp:
        k = resolve(op, self.adapter)
        if k.relabel is not None:
            self.relabel(k.relabel)
        return k

    def relabel(self, mapping: dict) -> None:
        # Keys move order-preservingly; rebuild from scratch by appends.
        self.relabels += 1
        self.live = {mapping[k]: v for k, v in self.live.items()}
        d = DynLis(debug=self.d.debug)
        for k in sorted(self.live):
            d.insert_append(k, self.live[k])
        self.d = d

    def apply(self, k: KeyedOp):
        """Run a resolved op; queries return their answer."""
        d = self.d
        if k.kind == "insert":
            d.insert(k.key, k.value)
            self.live[k.key] = k.value
        elif k.kind == "append":
            d.insert_append(k.key, k.value)
            self.live[k.key] = k.value
        elif k.kind == "delete":
            d.delete(k.key)
            del self.live[k.key]
        elif k.kind == "query":
            return d.lis_length()
        elif k.kind == "extract":
            return d.extract_lis()
        return None


@dataclass
class CheckStats:
    mutations: int = 0
    invariant_checks: int = 0
    level_checks: int = 0
    length_checks: int = 0
    witness_checks: int = 0
    damage_checks: int = 0
    differential_checks: int = 0


@dataclass
class VerifyReport:
    ok: bool
    lines: list[str]
    stats: CheckStats = field(default_factory=CheckStats)
    error: Optional[str] = None

    @property
    def text(self) -> str:
        return "".join(line + "\n" for line in self.lines)


def _witness_text(w) -> str:
    return " ".join(f"{e.index}:{e.value}" for e in w)


def verify_ops(
    ops: Iterable[WorkloadOp],
    mode: str = "full",
    *,
    invariants: Optional[bool] = None,
    levels: Optional[bool] = None,
    witnesses: Optional[bool] = None,
    shape: bool = True,
    damage: bool = False,
    differential: bool = False,
    level_max_n: int = LEVEL_ORACLE_MAX_N,
) -> VerifyReport:
    """Replay ``ops`` and check the structure against the oracles.

    ``full`` runs the invariant audit, the length oracle and (while at most
    ``level_max_n`` elements are live) the per-element level oracle after
    every mutation, and validates every witness. ``length_only`` runs just
    the length oracle. The keyword flags override those defaults one by
    one; ``damage`` checks that no level moves by more than one in the
    permitted direction, ``differential`` replays every insert through the
    general path on a twin and compares forests after appends. The report
    text depends only on the mode line and the op results, not the flags.
    """
    if mode not in ("full", "length_only"):
        raise ValueError(f"unknown mode {mode!r}")
    full = mode == "full"
    invariants = full if invariants is None else invariants
    levels = full if levels is None else levels
    witnesses = full if witnesses is None else witnesses
    rep = Replayer()
    twin = Replayer() if differential else None
    stats = CheckStats()
    lines = [f"mode {mode}"]
    n_ops = 0
    try:
        for i, op in enumerate(ops):
            n_ops += 1
            try:
                k = rep.resolve(op)
                if twin is not None:
                    tk = twin.resolve(op)
                before = rep.d.level_map() if damage and k.kind in ("insert", "append", "delete") else None
                out = rep.apply(k)
            except (KeyError, IndexError, ValueError) as exc:
                raise VerificationFailure(i, f"{type(exc).__name__}: {exc}") from None
            except InvariantError as exc:
                raise VerificationFailure(i, f"structural bug: {exc}") from None

            if k.kind in ("query", "extract"):
                expect = oracle_length_fast(rep.live.items())
                if k.kind == "query":
                    lines.append(f"op {i} query length={out}")
                    if out != expect:
                        raise VerificationFailure(i, f"length {out}, oracle {expect}")
                    w = rep.d.extract_lis() if witnesses else None
                else:
                    lines.append(f"op {i} extract length={len(out)} witness={_witness_text(out)}")
                    w = out
                    if len(out) != expect:
                        raise VerificationFailure(i, f"witness length {len(out)}, oracle {expect}")
                stats.length_checks += 1
                if w is not None and witnesses:
                    if not oracle_is_valid_lis(rep.live.items(), w):
                        raise VerificationFailure(i, f"invalid witness {_witness_text(w)}")
                    if any(not (a.index < b.index and a.value < b.value) for a, b in zip(w, w[1:])):
                        raise VerificationFailure(i, "witness not strictly increasing")
                    stats.witness_checks += 1
                continue

            stats.mutations += 1
            if twin is not None:
                twin_kind = "insert" if tk.kind == "append" else tk.kind
                twin.apply(KeyedOp(twin_kind, tk.key, tk.value))
                append_eligible = k.kind == "append" or (
                    k.kind == "insert" and k.key == rep.d.max_index
                )
                if append_eligible:
                    if rep.d.snapshot() != twin.d.snapshot():
                        raise VerificationFailure(i, "append path and general insert disagree")
                    stats.differential_checks += 1

            length = rep.d.lis_length()
            expect = oracle_length_fast(rep.live.items())
            if length != expect:
                raise VerificationFailure(i, f"length {length}, oracle {expect}")
            stats.length_checks += 1
            if invariants:
                v = rep.d.check_invariants(shape=shape)
                if v is not None:
                    raise VerificationFailure(i, f"invariant {v}")
                stats.invariant_checks += 1
            if levels and len(rep.live) <= level_max_n:
                got = rep.d.level_map()
                want = oracle_levels(rep.live.items())
                if got != want:
                    bad = sorted(x for x in want if got.get(x) != want[x])[:5]
                    raise VerificationFailure(
                        i, "levels differ at " + ", ".join(f"{x}: {got.get(x)} vs {want[x]}" for x in bad)
                    )
                stats.level_checks += 1
            if before is not None:
                after = rep.d.level_map()
                if before and any(x not in after for x in before if x != k.key):
                    raise VerificationFailure(i, "element lost")
                allowed = (0, 1) if k.kind in ("insert", "append") else (0, -1)
                for x, lv in before.items():
                    if x in after and after[x] - lv not in allowed:
                        raise VerificationFailure(i, f"level of {x} moved {lv} -> {after[x]}")
                stats.damage_checks += 1
    except VerificationFailure as exc:
        lines.append(f"error op {exc.op_index} {exc.detail}")
        lines.append("status mismatch")
        return VerifyReport(False, lines, stats, str(exc))
    lines.append(f"ops {n_ops}")
    lines.append(f"mutations {stats.mutations}")
    lines.append(f"relabels {rep.relabels}")
    lines.append(f"final_length {rep.d.lis_length()}")
    lines.append("status ok")
    return VerifyReport(True, lines, stats)


@dataclass
class BenchRecord:
    op_index: int
    op_kind: str
    n_before: int
    r_before: int
    tree_primitive_count: int
    side_map_updates: int
    wall_time_nanoseconds: int
    path: str = ""
    node_steps: int = 0

    def row(self) -> tuple:
        return (
            self.op_index,
            self.op_kind,
            self.n_before,
            self.r_before,
            self.tree_primitive_count,
            self.side_map_updates,
            self.wall_time_nanoseconds,
        )


@dataclass
class BenchSummary:
    max_insert_ratio: float = 0.0
    max_append_ratio: float = 0.0
    max_delete_ratio: float = 0.0
    max_insert_step_ratio: float = 0.0
    max_append_step_ratio: float = 0.0
    inserts: int = 0
    appends: int = 0
    deletes: int = 0
    relabels: int = 0

    def footer(self) -> list[str]:
        return [
            f"# max_insert_ratio={self.max_insert_ratio:.6f} (tree_ops / ((r+1)*(log2(n/max(r,1))+2)), {self.inserts} inserts)",
            f"# max_append_ratio={self.max_append_ratio:.6f} (tree_ops / (log2(n)+2), {self.appends} appends)",
            f"# max_delete_ratio={self.max_delete_ratio:.6f} (tree_ops / ((r+1)*(log2(n/max(r,1))+2)), {self.deletes} deletes)",
            f"# max_insert_step_ratio={self.max_insert_step_ratio:.6f} (node steps, same bound)",
            f"# max_append_step_ratio={self.max_append_step_ratio:.6f} (node steps, same bound)",
            f"# cost_constant C={COST_C} step_constant={STEP_C}",
            f"# relabels={self.relabels}",
        ]


def run_bench(ops: Iterable[WorkloadOp]) -> tuple[list[BenchRecord], BenchSummary]:
    rep = Replayer()
    records: list[BenchRecord] = []
    s = BenchSummary()
    clock = time.perf_counter_ns
    for i, op in enumerate(ops):
        k = rep.resolve(op)
        if k.kind in ("query", "extract"):
            rep.apply(k)
            continue
        d = rep.d
        n, r = len(d), d.lis_length()
        t0 = clock()
        rep.apply(k)
        ns = clock() - t0
        d = rep.d
        c = d.counters
        rec = BenchRecord(i, op.op, n, r, c.tree_ops, d.side_ops, ns, k.kind, c.node_steps)
        records.append(rec)
        if k.kind == "append":
            b = append_bound(n)
            s.appends += 1
            s.max_append_ratio = max(s.max_append_ratio, rec.tree_primitive_count / b)
            s.max_append_step_ratio = max(s.max_append_step_ratio, rec.node_steps / b)
        else:
            b = insert_bound(n, r)
            if k.kind == "insert":
                s.inserts += 1
                s.max_insert_ratio = max(s.max_insert_ratio, rec.tree_primitive_count / b)
                s.max_insert_step_ratio = max(s.max_insert_step_ratio, rec.node_steps / b)
            else:
                s.deletes += 1
                s.max_delete_ratio = max(s.max_delete_ratio, rec.tree_primitive_count / b)
    s.relabels = rep.relabels
    return records, s


def bench_csv(records: list[BenchRecord], summary: BenchSummary) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for rec in records:
        w.writerow(rec.row())
    for line in summary.footer():
        buf.write(line + "\n")
    return buf.getvalue()
