"""
Prime statistics of Hecke eigenvalues: the prime set used by trace sums and
Sato-Tate sums of |lambda_f(ell)|.
"""

from dataclasses import dataclass
from typing import List

import numpy as np

from .arithmetic import primes_up_to
from .table import NewformTable
from ..utils.errors import ValidationError

SATO_TATE_MEAN = 8.0 / (3.0 * np.pi)


@dataclass
class LfPrimeSet:
    """Primes ell <= bound admissible for trace sums."""
    p: int
    bound: int
    primes: List[int]
    prime_count: int

    @property
    def density(self) -> float:
        """Share of all primes <= bound, expected to tend to 1/p."""
        return len(self.primes) / self.prime_count if self.prime_count else 0.0

    def __contains__(self, ell: int) -> bool:
        return ell in self.primes


@dataclass
class SatoTateStatistic:
    """Sum of |lambda_f(ell)|/ell over ell <= z and the mean of |lambda_f(ell)|."""
    z: int
    total: float
    mean_abs: float
    prime_count: int
    expected_mean: float = SATO_TATE_MEAN

    @property
    def mean_deviation(self) -> float:
        return abs(self.mean_abs - self.expected_mean) / self.expected_mean


def _check_bound(table: NewformTable, bound: int) -> None:
    if bound < 2:
        raise ValidationError(f"Prime bound must be at least 2, got {bound}")
    table.require(bound)


def lf_prime_set(table: NewformTable, p: int, bound: int) -> LfPrimeSet:
    """
    Primes ell <= bound with ell not dividing pR, ell = 1 mod p, ell != 1 mod p^2
    and lambda_f(ell) not in {0, +-2}.

    Exact tables are tested exactly: a_ell != 0 and a_ell^2 != 4 ell^(2k-1).
    """
    _check_bound(table, bound)
    primes = primes_up_to(bound)
    mask = (primes % p == 1) & (primes % (p * p) != 1) & (table.R % primes != 0)
    selected = []
    for ell in primes[mask]:
        ell = int(ell)
        if table.is_exact:
            a = int(table.a[ell])
            if a == 0 or a * a == 4 * ell ** (table.two_kappa - 1):
                continue
        else:
            lam = float(table.lam[ell])
            if abs(lam) < 1e-12 or abs(abs(lam) - 2.0) < 1e-12:
                continue
        selected.append(ell)
    return LfPrimeSet(p=p, bound=bound, primes=selected, prime_count=int(primes.size))


def satotate_sum(table: NewformTable, z: int) -> SatoTateStatistic:
    """Sum over primes ell <= z of |lambda_f(ell)|/ell, with the mean |lambda_f(ell)|."""
    _check_bound(table, z)
    primes = primes_up_to(z)
    values = np.abs(table.lam[primes])
    return SatoTateStatistic(z=z, total=float(np.sum(values / primes)),
                             mean_abs=float(np.mean(values)), prime_count=int(primes.size))


def satotate_pair_sum(f: NewformTable, g: NewformTable, z: int) -> dict:
    """
    Sum of (|lambda_f(ell)| + |lambda_g(ell)|)/ell against (16/3 pi) log log z.

    Returns:
        Dictionary with the sum, the comparison term and their difference
    """
    total = satotate_sum(f, z).total + satotate_sum(g, z).total
    expected = 2.0 * SATO_TATE_MEAN * np.log(np.log(z)) if z > 2 else 0.0
    return {"z": z, "sum": total, "expected": float(expected), "excess": float(total - expected)}
