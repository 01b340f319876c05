"""Elementary arithmetic tables: primes, smallest prime factors, factoring."""

from __future__ import annotations

from bisect import bisect_right
from functools import lru_cache

import numpy as np


def prime_mask(limit: int) -> np.ndarray:
    """Boolean array ``is_prime[0..limit]`` (Eratosthenes)."""
    mask = np.ones(max(limit, 1) + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, int(limit**0.5) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return mask[: limit + 1]


def primes_upto(limit: int) -> list[int]:
    if limit < 2:
        return []
    return np.flatnonzero(prime_mask(limit)).tolist()


def spf_table(limit: int) -> np.ndarray:
    """Smallest-prime-factor table; ``spf[n]`` for 2 <= n <= limit, spf[0] = spf[1] = 0."""
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, int(limit**0.5) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    rest = np.flatnonzero(spf == 0)
    rest = rest[rest >= 2]
    spf[rest] = rest
    return spf


def factor_with_spf(n: int, spf: np.ndarray) -> dict[int, int]:
    out: dict[int, int] = {}
    while n > 1:
        p = int(spf[n])
        out[p] = out.get(p, 0) + 1
        n //= p
    return out


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division (fine for n up to ~1e12)."""
    if n < 1:
        raise ValueError(f"factorize expects n >= 1, got {n}")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


class _PrimeList:
    """Growable cache of the primes in ascending order."""

    def __init__(self) -> None:
        self.limit = 1
        self.primes: list[int] = []

    def ensure(self, limit: int) -> None:
        if limit > self.limit:
            self.limit = max(limit, 2 * self.limit)
            self.primes = primes_upto(self.limit)

    def first(self, r: int) -> list[int]:
        while len(self.primes) < r:
            self.ensure(max(2 * self.limit, 64))
        return self.primes[:r]

    def index(self, p: int) -> int:
        """1-based position of the prime ``p``."""
        self.ensure(p)
        k = bisect_right(self.primes, p)
        if k == 0 or self.primes[k - 1] != p:
            raise ValueError(f"{p} is not prime")
        return k


_PRIMES = _PrimeList()


def first_primes(r: int) -> list[int]:
    return _PRIMES.first(r)


def nth_prime(k: int) -> int:
    return _PRIMES.first(k)[k - 1]


def prime_index(p: int) -> int:
    return _PRIMES.index(p)


@lru_cache(maxsize=None)
def integer_root(n: int, m: int) -> int | None:
    """Return r with r**m == n, or None."""
    if m == 1:
        return n
    r = int(round(n ** (1.0 / m)))
    while r > 0 and r**m > n:
        r -= 1
    while (r + 1) ** m <= n:
        r += 1
    return r if r**m == n else None
