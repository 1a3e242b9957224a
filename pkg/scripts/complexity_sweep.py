"""Sweep workload sizes and write one bench CSV per run plus a summary table.

    python3 scripts/complexity_sweep.py --out-dir sweep_out
"""

from __future__ import annotations

import argparse
import csv
from dataclasses import asdict, dataclass, field
from pathlib import Path

from dynlis.bench import bench_csv, run_bench
from dynlis.workload import ADVERSARIAL, gen_adversarial, gen_workload


@dataclass
class SweepConfig:
    sizes: tuple[int, ...] = (10**3, 10**4, 10**5)
    seed: int = 5
    mixes: dict = field(default_factory=lambda: {"mixed": None, "append_only": {"append": 1.0}})
    adversarial: tuple[str, ...] = ADVERSARIAL
    out_dir: Path = Path("sweep_out")


def run(cfg: SweepConfig) -> list[dict]:
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    jobs = [(name, n, lambda n=n, m=mix: gen_workload(cfg.seed, n, m)) for name, mix in cfg.mixes.items() for n in cfg.sizes]
    jobs += [(name, n, lambda n=n, a=name: gen_adversarial(a, n)) for name in cfg.adversarial for n in cfg.sizes]
    rows = []
    for name, n, make in jobs:
        records, summary = run_bench(make())
        (cfg.out_dir / f"{name}_{n}.csv").write_text(bench_csv(records, summary))
        row = {"workload": name, "n": n, **asdict(summary)}
        rows.append(row)
        print(f"{name:>12} n={n:<7} insert={summary.max_insert_ratio:.3f} "
              f"append={summary.max_append_ratio:.3f} delete={summary.max_delete_ratio:.3f}")
    with open(cfg.out_dir / "summary.csv", "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]))
        w.writeheader()
        w.writerows(rows)
    return rows


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=list(SweepConfig.sizes))
    p.add_argument("--seed", type=int, default=SweepConfig.seed)
    p.add_argument("--out-dir", type=Path, default=SweepConfig.out_dir)
    a = p.parse_args()
    run(SweepConfig(sizes=tuple(a.sizes), seed=a.seed, out_dir=a.out_dir))


if __name__ == "__main__":
    main()
