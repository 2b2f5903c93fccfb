"""Synthetic texts for tests, verification and benchmarks."""
from __future__ import annotations

import numpy as np

from .codec import symbol_dtype

KINDS = ("random", "periodic", "all-equal")


def random_text(n: int, sigma: int, rng: np.random.Generator) -> np.ndarray:
    return rng.integers(0, sigma, n, dtype=np.int64).astype(symbol_dtype(sigma))


def periodic_text(n: int, sigma: int, rng: np.random.Generator, period: int | None = None) -> np.ndarray:
    """A random word of length ``period`` repeated; every LCE is long or very short."""
    if period is None:
        period = int(rng.integers(1, 17))
    unit = random_text(period, sigma, rng)
    return np.resize(unit, n)


def all_equal_text(n: int, sigma: int, symbol: int | None = None) -> np.ndarray:
    """``n`` copies of one symbol (``sigma - 1`` by default: all ones for power-of-two alphabets)."""
    if symbol is None:
        symbol = sigma - 1
    return np.full(n, symbol, dtype=symbol_dtype(sigma))


def make_text(kind: str, n: int, sigma: int, rng: np.random.Generator) -> np.ndarray:
    if kind == "random":
        return random_text(n, sigma, rng)
    if kind == "periodic":
        return periodic_text(n, sigma, rng)
    if kind == "all-equal":
        return all_equal_text(n, sigma)
    raise ValueError(f"unknown text kind {kind!r}; expected one of {KINDS}")
