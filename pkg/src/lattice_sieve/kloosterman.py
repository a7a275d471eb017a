"""
Kloosterman sums modulo prime powers and bilinear forms in them.

S(m, n; r) = sum over units x mod r of e((m x + n x^-1) / r). For fixed m the
sums over all n mod r form one DFT of the sequence e(m y^-1 / r) on units y.
"""

from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Any, Dict, Tuple

import numpy as np
from sympy import divisor_count, divisors, factorint

from ..utils.errors import NumericalContractError, ValidationError
from ..utils.logger import get_logger

# Largest modulus evaluated by direct summation
MAX_KLOOSTERMAN_MODULUS = 3 ** 7

WEIL_SLACK = 1e-9


@dataclass
class BilinearReport:
    """B(alpha, beta; r) against min over s | r of the bilinear envelope."""
    value: complex
    envelope: float
    best_s: int
    M: int
    N_star: int
    r: int

    @property
    def ratio(self) -> float:
        return abs(self.value) / self.envelope

    def to_dict(self) -> Dict[str, Any]:
        return {"value": {"re": self.value.real, "im": self.value.imag}, "envelope": self.envelope,
                "best_s": self.best_s, "ratio": self.ratio, "M": self.M, "N_star": self.N_star, "r": self.r}


def _check_modulus(r: int) -> None:
    if r < 1 or r > MAX_KLOOSTERMAN_MODULUS:
        raise ValidationError(f"Kloosterman modulus must lie in [1, {MAX_KLOOSTERMAN_MODULUS}], got {r}")


@lru_cache(maxsize=32)
def _units(r: int) -> Tuple[np.ndarray, np.ndarray]:
    x = np.array([u for u in range(r) if gcd(u, r) == 1], dtype=np.int64)
    inverse = np.array([pow(int(u), -1, r) if r > 1 else 0 for u in x], dtype=np.int64)
    return x, inverse


def weil_bound(m: int, n: int, r: int) -> float:
    """d(r) (m, n, r)^(1/2) r^(1/2)."""
    return float(divisor_count(r)) * np.sqrt(gcd(gcd(m, n), r)) * np.sqrt(r)


def kloosterman(m: int, n: int, r: int, check: bool = True) -> complex:
    """
    S(m, n; r) by direct summation with modular inverses.

    Raises:
        NumericalContractError: If the value exceeds the Weil bound
    """
    _check_modulus(r)
    x, inverse = _units(r)
    phase = ((m * x + n * inverse) % r) / r
    value = complex(np.sum(np.exp(2j * np.pi * phase)))
    if check:
        bound = weil_bound(m, n, r)
        if abs(value) > bound * (1 + WEIL_SLACK) + WEIL_SLACK:
            get_logger().log_contract("weil_bound", False, f"|S|={abs(value):.6g} > {bound:.6g}",
                                      f"S({m},{n};{r})")
            raise NumericalContractError("weil_bound", f"|S({m},{n};{r})| = {abs(value):.6g} > {bound:.6g}")
    return value


def kloosterman_row(m: int, r: int) -> np.ndarray:
    """S(m, n; r) for n = 0..r-1."""
    _check_modulus(r)
    x, inverse = _units(r)
    v = np.zeros(r, dtype=complex)
    # substitute y = x^-1: S(m, n) = sum_y e(m y^-1 / r) e(n y / r)
    v[inverse] = np.exp(2j * np.pi * ((m * x) % r) / r)
    return r * np.fft.ifft(v)


def weil_bound_exhaustive(p: int, limit: int = 343) -> Dict[int, float]:
    """
    Check |S(m, n; p^k)| against the Weil bound for every p^k <= limit and 0 <= m, n < p^k.

    Returns:
        The largest |S| / bound per modulus

    Raises:
        NumericalContractError: If any sum exceeds its bound
    """
    worst: Dict[int, float] = {}
    r = p
    while r <= limit:
        n = np.arange(r)
        gcd_r = np.array([gcd(int(k), r) for k in range(r)])
        ratio = 0.0
        for m in range(r):
            row = kloosterman_row(m, r)
            bound = float(divisor_count(r)) * np.sqrt(np.gcd(gcd_r[m], gcd_r[n])) * np.sqrt(r)
            ratio = max(ratio, float(np.max(np.abs(row) / bound)))
        worst[r] = ratio
        passed = ratio <= 1 + WEIL_SLACK
        get_logger().log_contract("weil_bound", passed, f"max ratio {ratio:.6f}", f"r={r}")
        if not passed:
            raise NumericalContractError("weil_bound", f"modulus {r}: max |S|/bound = {ratio:.6g}")
        r *= p
    return worst


def bm_envelope(M: int, N_star: int, r: int) -> Tuple[float, int]:
    """
    M N* min over s | r of ((r/N*)^(1/2) + (s/r)^(1/4) + (r/(M^2 s))^(1/4)).

    Returns:
        (envelope, minimizing s); every divisor of r is scanned
    """
    best, best_s = np.inf, 1
    for s in divisors(r):
        value = (r / N_star) ** 0.5 + (s / r) ** 0.25 + (r / (M * M * s)) ** 0.25
        if value < best:
            best, best_s = value, int(s)
    return float(M * N_star * best), best_s


def bilinear_B(alpha: np.ndarray, beta: np.ndarray, l: int, d: int, r: int) -> BilinearReport:
    """
    B(alpha, beta; r) = sum over m <= M, n <= N* of alpha_m beta_n S(l d m, n; r) / sqrt(r).

    Args:
        alpha: alpha_1..alpha_M
        beta: beta_1..beta_N*
        l: Integer coprime to r
        d: One of 1, p, p^2
        r: Prime power modulus

    Raises:
        ValidationError: On a composite-base modulus, (l, r) != 1 or an invalid d
    """
    _check_modulus(r)
    primes = factorint(r)
    if len(primes) != 1:
        raise ValidationError(f"Bilinear modulus must be a prime power, got {r}")
    p = next(iter(primes))
    if gcd(l, r) != 1:
        raise ValidationError(f"l={l} must be coprime to r={r}")
    if d not in (1, p, p * p):
        raise ValidationError(f"d must be 1, p or p^2, got {d}")
    alpha = np.asarray(alpha, dtype=complex)
    beta = np.asarray(beta, dtype=complex)
    M, N_star = alpha.size, beta.size
    if M < 1 or N_star < 1:
        raise ValidationError("alpha and beta must be nonempty")

    n_index = np.arange(1, N_star + 1) % r
    total = 0j
    for m in range(1, M + 1):
        row = kloosterman_row(l * d * m % r, r)
        total += alpha[m - 1] * np.dot(beta, row[n_index])
    value = total / np.sqrt(r)
    envelope, best_s = bm_envelope(M, N_star, r)
    get_logger().log_stage("bilinear_kloosterman", f"r={r}", M=M, N_star=N_star,
                           ratio=f"{abs(value) / envelope:.4g}", s=best_s)
    return BilinearReport(value=complex(value), envelope=envelope, best_s=best_s, M=M, N_star=N_star, r=r)
