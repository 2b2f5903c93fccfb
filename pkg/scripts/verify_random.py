"""Random texts against the naive oracle, plus the collision rate of small primes.

With q near 2^61 or 2^63 no mismatch should ever show up.  Shrinking tau
makes fingerprint collisions visible: an LCE answer can then only come out
too long, never too short, since equal strings always hash equally.

    python3 scripts/verify_random.py --n 1e5 --queries 1e5 --small-tau 8 12 16 20
"""
import argparse
from dataclasses import dataclass, field

import numpy as np

from fplce.codec import encode_text
from fplce.general_index import GeneralLceIndex
from fplce.oracle import PlainText, naive_lce_many
from fplce.cli import build_index
from fplce.textgen import make_text


@dataclass
class VerifyConfig:
    n: int = 10**5
    queries: int = 10**5
    sigmas: tuple = (2, 4, 5, 26, 256)
    kinds: tuple = ("random", "periodic", "all-equal")
    small_tau: list = field(default_factory=lambda: [8, 12, 16, 20])
    seed: int = 0


def oracle_sweep(cfg: VerifyConfig, rng):
    bad_total = 0
    for kind in cfg.kinds:
        for sigma in cfg.sigmas:
            text = make_text(kind, cfg.n, sigma, rng)
            I = rng.integers(0, cfg.n, cfg.queries)
            J = rng.integers(0, cfg.n, cfg.queries)
            want = naive_lce_many(PlainText(text, sigma), I, J)
            for variant in ("mersenne", "general"):
                got, _ = build_index(text, sigma, variant, seed=int(rng.integers(1 << 30))).lce_many(I, J)
                bad = int((got != want).sum())
                bad_total += bad
                print(f"{kind:<10} sigma={sigma:<4} {variant:<9} mismatches {bad}")
    return bad_total


def _echo_text(n, rng, gap=100, stretch=32):
    """Random first half; the second half copies it with random stretches rewritten."""
    half = n // 2
    first = rng.integers(0, 2, half)
    second = first.copy()
    pos = 0
    while True:
        pos += int(rng.geometric(1 / gap))
        if pos >= half:
            break
        second[pos : pos + stretch] = rng.integers(0, 2, min(stretch, half - pos))
    return np.concatenate([first, second, rng.integers(0, 2, n - 2 * half)]), half


def collision_sweep(cfg: VerifyConfig, rng):
    # suffix pairs half a text apart agree for ~100 bits, then differ in many
    # bits, so the search compares strings a small q can confuse (a single
    # flipped bit never collides: 2^k is not 0 mod an odd prime)
    print(f"\n{'tau':>4} {'n':>8} {'primes':>8} {'wrong':>8} {'rate':>10} {'too short':>10}")
    for tau in cfg.small_tau:
        n = min(cfg.n, (1 << tau) - tau)
        wrong = short = done = 0
        primes = set()
        # a text of n <= 2^tau bits has only n/2 distinct pairs, so draw
        # fresh texts (and primes) until the query budget is spent
        while done < cfg.queries:
            text, half = _echo_text(n, rng)
            m = min(half, cfg.queries - done)
            I = rng.permutation(half)[:m]
            J = I + half
            want = naive_lce_many(PlainText(text, 2), I, J)
            ix = GeneralLceIndex.build(encode_text(text, 2, tau), seed=int(rng.integers(1 << 30)))
            got, _ = ix.lce_many(I, J)
            wrong += int((got != want).sum())
            short += int((got < want).sum())
            primes.add(ix.q)
            done += m
        print(f"{tau:>4} {n:>8} {len(primes):>8} {wrong:>8} {wrong / done:>10.2e} {short:>10}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=float, default=1e5)
    ap.add_argument("--queries", type=float, default=1e5)
    ap.add_argument("--small-tau", type=int, nargs="*", default=[8, 12, 16, 20])
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    cfg = VerifyConfig(n=int(a.n), queries=int(a.queries), small_tau=a.small_tau, seed=a.seed)
    rng = np.random.default_rng(cfg.seed)
    bad = oracle_sweep(cfg, rng)
    print(f"total mismatches at full width: {bad}")
    if cfg.small_tau:
        collision_sweep(cfg, rng)


if __name__ == "__main__":
    main()
