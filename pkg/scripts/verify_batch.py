"""Verify a batch of seeded random workloads and report mismatches and timing."""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass

from dynlis.bench import verify_ops
from dynlis.workload import gen_workload


@dataclass
class BatchConfig:
    seeds: int = 200
    first_seed: int = 0
    ops: int = 2048
    mode: str = "length_only"


def run(cfg: BatchConfig) -> int:
    t0 = time.perf_counter()
    failures = 0
    for seed in range(cfg.first_seed, cfg.first_seed + cfg.seeds):
        rep = verify_ops(gen_workload(seed, cfg.ops), cfg.mode, witnesses=True)
        if not rep.ok:
            failures += 1
            print(f"seed {seed}: {rep.error}")
    print(f"{cfg.seeds} workloads, {failures} failing, {time.perf_counter() - t0:.1f}s")
    return failures


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--seeds", type=int, default=BatchConfig.seeds)
    p.add_argument("--first-seed", type=int, default=BatchConfig.first_seed)
    p.add_argument("--ops", type=int, default=BatchConfig.ops)
    p.add_argument("--mode", choices=("full", "length_only"), default=BatchConfig.mode)
    a = p.parse_args()
    raise SystemExit(1 if run(BatchConfig(a.seeds, a.first_seed, a.ops, a.mode)) else 0)


if __name__ == "__main__":
    main()
