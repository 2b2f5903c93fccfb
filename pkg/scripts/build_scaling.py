"""Build time against text length for both index variants.

    python3 scripts/build_scaling.py --sizes 1e6 1e7 2e7 --sigma 4
"""
import argparse
import statistics
import time
from dataclasses import dataclass, field

import numpy as np

from fplce.cli import build_index
from fplce.textgen import random_text


@dataclass
class ScalingConfig:
    sizes: list = field(default_factory=lambda: [10**6, 10**7, 2 * 10**7])
    sigma: int = 4
    runs: int = 5
    seed: int = 0


def run(cfg: ScalingConfig):
    rng = np.random.default_rng(cfg.seed)
    texts = [random_text(n, cfg.sigma, rng) for n in cfg.sizes]
    rows = []
    for variant in ("mersenne", "general"):
        for t in texts:  # compile and touch memory once per size
            build_index(t, cfg.sigma, variant, seed=1)
        times = [[] for _ in texts]
        for _ in range(cfg.runs):
            for k, t in enumerate(texts):
                t0 = time.perf_counter()
                build_index(t, cfg.sigma, variant, seed=1)
                times[k].append(time.perf_counter() - t0)
        for n, ts in zip(cfg.sizes, times):
            rows.append((variant, n, statistics.median(ts)))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=float, nargs="+", default=[1e6, 1e7, 2e7])
    ap.add_argument("--sigma", type=int, default=4)
    ap.add_argument("--runs", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    cfg = ScalingConfig([int(s) for s in a.sizes], a.sigma, a.runs, a.seed)
    print(f"{'variant':<9} {'n':>12} {'median s':>10} {'ns/symbol':>10}")
    for variant, n, t in run(cfg):
        print(f"{variant:<9} {n:>12} {t:>10.4f} {t / n * 1e9:>10.2f}")


if __name__ == "__main__":
    main()
