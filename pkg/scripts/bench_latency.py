"""LCE and access latency against plain array reads, both variants.

    python3 scripts/bench_latency.py --n 1e8 --sigma 4 --queries 1e6
"""
import argparse
from dataclasses import dataclass

import numpy as np

from fplce.bench import BenchConfig, run_bench
from fplce.cli import build_index
from fplce.textgen import make_text


@dataclass
class LatencyConfig:
    n: int = 10**8
    sigma: int = 4
    kind: str = "random"
    queries: int = 10**6
    pattern: str = "random"
    seed: int = 0


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=float, default=1e8)
    ap.add_argument("--sigma", type=int, default=4)
    ap.add_argument("--kind", choices=("random", "periodic", "all-equal"), default="random")
    ap.add_argument("--queries", type=float, default=1e6)
    ap.add_argument("--pattern", choices=("random", "worst"), default="random")
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    cfg = LatencyConfig(int(a.n), a.sigma, a.kind, int(a.queries), a.pattern, a.seed)

    text = make_text(cfg.kind, cfg.n, cfg.sigma, np.random.default_rng(cfg.seed))
    for variant in ("mersenne", "general"):
        ix = build_index(text, cfg.sigma, variant, seed=cfg.seed)
        report = run_bench(ix, BenchConfig(queries=cfg.queries, pattern=cfg.pattern, seed=cfg.seed))
        print(f"== {variant} (n={cfg.n}, sigma={cfg.sigma}, {cfg.kind} text)")
        print(report.format())
        print()


if __name__ == "__main__":
    main()
