"""Random primes of a given bit length for the general-prime index."""
from __future__ import annotations

import random

# Miller-Rabin with these bases is exact for every n < 3.3 * 10^24.
_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _WITNESSES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def generate_prime(tau: int, seed: int | None = None) -> int:
    """Uniform random prime ``q`` with ``2^(tau-1) < q < 2^tau``.

    Odd candidates are drawn uniformly and rejected until one is prime; the
    accepted value is uniform over the primes in the range.
    """
    if not 2 <= tau <= 63:
        raise ValueError(f"tau must be in [2, 63], got {tau}")
    if tau == 2:
        return 3
    rng = random.Random(seed)
    lo = (1 << (tau - 1)) + 1
    hi = (1 << tau) - 1
    while True:
        q = rng.randrange(lo, hi + 1, 2)
        if is_prime(q):
            return q
