"""
Vectorized multiplicative arithmetic on [0, N].

Everything is driven by a smallest-prime-factor sieve; multiplicative
functions are assembled from their values at prime powers.
"""

from functools import lru_cache
from math import isqrt
from typing import Callable

import numpy as np


@lru_cache(maxsize=4)
def smallest_prime_factors(N: int) -> np.ndarray:
    """
    Smallest prime factor of every n in [0, N].

    Returns:
        int64 array with spf[0] = 0 and spf[1] = 1
    """
    spf = np.zeros(N + 1, dtype=np.int64)
    for i in range(2, isqrt(N) + 1):
        if spf[i] == 0:
            block = spf[i * i::i]
            block[block == 0] = i
    n = np.arange(N + 1, dtype=np.int64)
    unmarked = spf == 0
    spf[unmarked] = n[unmarked]
    if N >= 1:
        spf[1] = 1
    spf.flags.writeable = False
    return spf


def primes_up_to(N: int) -> np.ndarray:
    """Primes <= N, ascending."""
    if N < 2:
        return np.zeros(0, dtype=np.int64)
    spf = smallest_prime_factors(N)
    n = np.arange(N + 1, dtype=np.int64)
    return n[(spf == n) & (n >= 2)]


@lru_cache(maxsize=4)
def prime_power_part(N: int) -> np.ndarray:
    """
    pp[n] = largest power of spf(n) dividing n.

    Returns:
        int64 array with pp[0] = 0 and pp[1] = 1
    """
    spf = smallest_prime_factors(N)
    n = np.arange(N + 1, dtype=np.int64)
    pp = spf.copy()
    active = n >= 2
    while True:
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        grow = (n[idx] // pp[idx]) % spf[idx] == 0
        pp[idx[grow]] *= spf[idx[grow]]
        active[idx[~grow]] = False
    pp.flags.writeable = False
    return pp


def prime_power_exponents(N: int) -> np.ndarray:
    """Exponent k with pp[n] = spf(n)^k (0 for n < 2)."""
    spf = smallest_prime_factors(N)
    pp = prime_power_part(N)
    exps = np.zeros(N + 1, dtype=np.int64)
    rest = pp.copy()
    mask = rest > 1
    while mask.any():
        exps[mask] += 1
        rest[mask] //= spf[mask]
        mask = rest > 1
    return exps


def multiplicative_table(N: int, local: Callable[[np.ndarray, np.ndarray], np.ndarray],
                         dtype=np.float64) -> np.ndarray:
    """
    Tabulate a multiplicative function from its prime-power values.

    Args:
        N: Upper bound
        local: Vectorized map (primes, exponents) -> values at ell^k
        dtype: Output dtype

    Returns:
        Array f[0..N] with f[0] = 0 and f[1] = 1
    """
    spf = smallest_prime_factors(N)
    pp = prime_power_part(N)
    exps = prime_power_exponents(N)

    at_pp = np.zeros(N + 1, dtype=dtype)
    idx = np.nonzero(pp > 1)[0]
    # Values at the prime-power part of every n
    at_pp[idx] = local(spf[idx], exps[idx])
    at_pp[1] = 1

    values = at_pp.copy()
    cofactor = np.arange(N + 1, dtype=np.int64) // np.maximum(pp, 1)
    cofactor[0] = 1
    mask = cofactor > 1
    while mask.any():
        values[mask] *= at_pp[cofactor[mask]]
        cofactor[mask] //= pp[cofactor[mask]]
        mask = cofactor > 1
    values[0] = 0
    return values


def divisor_counts(N: int) -> np.ndarray:
    """d(n) for n in [0, N]."""
    return multiplicative_table(N, lambda ell, k: k + 1, dtype=np.int64)
