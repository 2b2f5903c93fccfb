"""Query latency measurements relative to plain random array access.

Queries run in compiled batches; each batch is timed with a monotonic
clock and reported as nanoseconds per query.  Medians are taken over
batches.  Absolute numbers depend on the machine, the ratios are what
carry over.
"""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass

import numpy as np
from numba import njit


@dataclass
class BenchConfig:
    queries: int = 100_000
    pattern: str = "random"  # or "worst"
    batch: int = 10_000
    seed: int = 0


@dataclass
class BenchReport:
    queries: int
    pattern: str
    lce_mean_ns: float | None = None
    lce_median_ns: float | None = None
    access_mean_ns: float | None = None
    access_median_ns: float | None = None
    array_mean_ns: float | None = None
    array_median_ns: float | None = None
    mean_lce: float | None = None

    @property
    def access_vs_array(self) -> float | None:
        if self.access_median_ns is None:
            return None
        return self.access_median_ns / self.array_median_ns

    @property
    def lce_vs_array(self) -> float | None:
        if self.lce_median_ns is None:
            return None
        return self.lce_median_ns / self.array_median_ns

    @property
    def lce_vs_access(self) -> float | None:
        if self.lce_median_ns is None:
            return None
        return self.lce_median_ns / self.access_median_ns

    def as_dict(self) -> dict:
        d = asdict(self)
        d.update(access_vs_array=self.access_vs_array, lce_vs_array=self.lce_vs_array,
                 lce_vs_access=self.lce_vs_access)
        return d

    def format(self) -> str:
        if not self.queries:
            return "no queries"
        return "\n".join([
            f"queries            {self.queries} ({self.pattern})",
            f"LCE                mean {self.lce_mean_ns:9.1f} ns   median {self.lce_median_ns:9.1f} ns"
            f"   (mean answer {self.mean_lce:.2f} symbols)",
            f"access             mean {self.access_mean_ns:9.1f} ns   median {self.access_median_ns:9.1f} ns",
            f"raw array access   mean {self.array_mean_ns:9.1f} ns   median {self.array_median_ns:9.1f} ns",
            f"access / array     {self.access_vs_array:.2f}x",
            f"LCE / array        {self.lce_vs_array:.2f}x",
            f"LCE / access       {self.lce_vs_access:.2f}x",
        ])


@njit(cache=True)
def _array_access(arr, idx, out):
    for k in range(idx.shape[0]):
        out[k] = arr[idx[k]]


def _time_batches(fn, batches) -> np.ndarray:
    """ns per query for each batch, after one untimed warm-up call."""
    fn(batches[0])
    per_query = []
    for batch in batches:
        t0 = time.perf_counter_ns()
        fn(batch)
        per_query.append((time.perf_counter_ns() - t0) / max(len(batch[0]) if isinstance(batch, tuple) else len(batch), 1))
    return np.array(per_query)


def _split(arr: np.ndarray, size: int) -> list[np.ndarray]:
    return [arr[k : k + size] for k in range(0, arr.size, size)]


def query_pairs(ix, n: int, pattern: str, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Random suffix pairs; ``worst`` keeps the ``n`` longest-LCE pairs out of ``8n`` candidates."""
    if pattern == "random":
        return rng.integers(0, ix.n_symbols, n), rng.integers(0, ix.n_symbols, n)
    if pattern == "worst":
        I = rng.integers(0, ix.n_symbols, 8 * n)
        J = rng.integers(0, ix.n_symbols, 8 * n)
        ell, _ = ix.lce_many(I, J)
        keep = np.argsort(ell, kind="stable")[::-1][:n]
        keep = rng.permutation(keep)
        return I[keep], J[keep]
    raise ValueError(f"unknown pattern {pattern!r}")


def run_bench(ix, config: BenchConfig) -> BenchReport:
    report = BenchReport(config.queries, config.pattern)
    if config.queries <= 0 or ix.n_symbols == 0:
        report.queries = 0
        return report
    rng = np.random.default_rng(config.seed)
    I, J = query_pairs(ix, config.queries, config.pattern, rng)

    lce_times = _time_batches(lambda ij: ix.lce_many(*ij), list(zip(_split(I, config.batch), _split(J, config.batch))))
    answers, _ = ix.lce_many(I, J)

    pos = rng.integers(0, ix.n_symbols, config.queries)
    acc_times = _time_batches(ix.access_many, _split(pos, config.batch))

    # plain array with the same number of bytes as the packed text
    n_bytes = max(1, (ix.n_bits + 7) // 8)
    arr = rng.integers(0, 256, n_bytes, dtype=np.uint8)
    apos = rng.integers(0, n_bytes, config.queries)
    out = np.empty(config.batch, dtype=np.uint8)
    arr_times = _time_batches(lambda idx: _array_access(arr, idx, out[: idx.size]), _split(apos, config.batch))

    report.lce_mean_ns = float(lce_times.mean())
    report.lce_median_ns = float(np.median(lce_times))
    report.access_mean_ns = float(acc_times.mean())
    report.access_median_ns = float(np.median(acc_times))
    report.array_mean_ns = float(arr_times.mean())
    report.array_median_ns = float(np.median(arr_times))
    report.mean_lce = float(answers.mean())
    return report
