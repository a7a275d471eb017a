"""
Exact q-expansions of eta quotients.

The product prod_d eta(dz)^(r_d) is expanded modulo several NTT-friendly primes
with an iterative radix-2 number-theoretic transform and reconstructed by
Garner's mixed-radix CRT. Coefficients of Delta outgrow 64-bit integers, so
reconstruction switches to Python integers when needed.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np
from sympy import primitive_root

from ..utils.errors import ValidationError
from ..utils.logger import get_logger

# (prime, 2-adic valuation of prime - 1), most transform capacity first
NTT_PRIMES: List[Tuple[int, int]] = [
    (469762049, 26),
    (1811939329, 26),
    (2013265921, 27),
    (167772161, 25),
    (2113929217, 25),
    (754974721, 24),
    (998244353, 23),
]


@dataclass(frozen=True)
class EtaQuotient:
    """A newform given as an eta product with positive exponents."""
    label: str
    level: int
    two_kappa: int
    exponents: Dict[int, int] = field(default_factory=dict)
    eps: int = 1

    @property
    def shift(self) -> int:
        """Order of vanishing at infinity, sum d*r_d/24."""
        total = sum(d * r for d, r in self.exponents.items())
        if total % 24:
            raise ValidationError(f"Eta quotient {self.label} has non-integral q-shift {total}/24")
        return total // 24


BUILTIN_FORMS: Dict[str, EtaQuotient] = {
    "delta": EtaQuotient("delta", level=1, two_kappa=12, exponents={1: 24}, eps=1),
    "level11": EtaQuotient("level11", level=11, two_kappa=2, exponents={1: 2, 11: 2}, eps=1),
}


def _bit_reverse(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n, dtype=np.int64)
    rev = np.zeros(n, dtype=np.int64)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    return rev


def _twiddles(w: int, half: int, prime: int) -> np.ndarray:
    tw = np.ones(1, dtype=np.int64)
    while tw.size < half:
        step = pow(w, tw.size, prime)
        tw = np.concatenate((tw, tw * step % prime))
    return tw[:half]


def ntt(a: np.ndarray, prime: int, root: int, invert: bool = False) -> np.ndarray:
    """
    In-order number-theoretic transform of a power-of-two length array.

    Args:
        a: int64 residues modulo prime
        prime: NTT prime
        root: Primitive root modulo prime
        invert: Compute the inverse transform

    Returns:
        Transformed residues
    """
    n = a.size
    a = a[_bit_reverse(n)]
    length = 2
    while length <= n:
        w = pow(root, (prime - 1) // length, prime)
        if invert:
            w = pow(w, -1, prime)
        half = length // 2
        tw = _twiddles(w, half, prime)
        blocks = a.reshape(-1, length)
        u = blocks[:, :half]
        v = blocks[:, half:] * tw % prime
        a = np.concatenate(((u + v) % prime, (u - v) % prime), axis=1).ravel()
        length *= 2
    if invert:
        a = a * pow(n, -1, prime) % prime
    return a


def _multiply(a: np.ndarray, b: np.ndarray, prime: int, root: int, length: int) -> np.ndarray:
    size = 1
    while size < 2 * length - 1:
        size *= 2
    fa = np.zeros(size, dtype=np.int64)
    fb = np.zeros(size, dtype=np.int64)
    fa[:a.size] = a
    fb[:b.size] = b
    fa = ntt(fa, prime, root)
    fb = fa if b is a else ntt(fb, prime, root)
    return ntt(fa * fb % prime, prime, root, invert=True)[:length]


def _power(base: np.ndarray, exponent: int, prime: int, root: int, length: int) -> np.ndarray:
    result = None
    square = base
    while exponent:
        if exponent & 1:
            result = square if result is None else _multiply(result, square, prime, root, length)
        exponent >>= 1
        if exponent:
            square = _multiply(square, square, prime, root, length)
    return result


def euler_series(length: int, step: int = 1) -> np.ndarray:
    """
    prod (1 - q^(step*n)) to `length` terms by the pentagonal number theorem.

    Returns:
        int64 coefficient array
    """
    out = np.zeros(length, dtype=np.int64)
    out[0] = 1
    k = 1
    while True:
        first = step * k * (3 * k - 1) // 2
        if first >= length:
            break
        sign = -1 if k % 2 else 1
        out[first] = sign
        second = step * k * (3 * k + 1) // 2
        if second < length:
            out[second] = sign
        k += 1
    return out


def jacobi_cube_series(length: int, step: int = 1) -> np.ndarray:
    """prod (1 - q^(step*n))^3 = sum (-1)^k (2k+1) q^(step*k(k+1)/2)."""
    out = np.zeros(length, dtype=np.int64)
    k = 0
    while step * k * (k + 1) // 2 < length:
        out[step * k * (k + 1) // 2] = (-1) ** k * (2 * k + 1)
        k += 1
    return out


def _series_mod(quotient: EtaQuotient, length: int, prime: int, root: int) -> np.ndarray:
    result = None
    for d, r in sorted(quotient.exponents.items()):
        if r % 3 == 0:
            factor = _power(jacobi_cube_series(length, d) % prime, r // 3, prime, root, length)
        else:
            factor = _power(euler_series(length, d) % prime, r, prime, root, length)
        result = factor if result is None else _multiply(result, factor, prime, root, length)
    return result


def _garner(residues: List[np.ndarray], primes: List[int]) -> np.ndarray:
    digits = [residues[0]]
    for i in range(1, len(primes)):
        t = residues[i]
        for j in range(i):
            t = (t - digits[j]) % primes[i] * pow(primes[j], -1, primes[i]) % primes[i]
        digits.append(t)

    modulus = 1
    for prime in primes:
        modulus *= prime

    if modulus < 2 ** 62:
        value = digits[-1].copy()
        for j in range(len(primes) - 2, -1, -1):
            value = value * primes[j] + digits[j]
        value[value > modulus // 2] -= modulus
        return value

    value = digits[-1].astype(object)
    for j in range(len(primes) - 2, -1, -1):
        value = value * primes[j] + digits[j].astype(object)
    half = modulus // 2
    value = np.array([v - modulus if v > half else v for v in value], dtype=object)
    if all(-2 ** 62 < v < 2 ** 62 for v in value):
        return value.astype(np.int64)
    return value


def expand_eta_quotient(quotient: EtaQuotient, N: int) -> np.ndarray:
    """
    Coefficients a_0..a_N of an eta quotient newform.

    Args:
        quotient: Eta quotient with positive exponents
        N: Coefficient bound

    Returns:
        int64 or object array of exact integers, index = n
    """
    if any(r <= 0 for r in quotient.exponents.values()):
        raise ValidationError(f"Eta quotient {quotient.label}: only positive exponents are supported")
    shift = quotient.shift
    length = max(N + 1 - shift, 1)

    size = 1
    while size < 2 * length - 1:
        size *= 2
    # Deligne: |a_n| <= d(n) n^(kappa - 1/2) <= 2 n^kappa
    bound = 4 * N ** (quotient.two_kappa // 2) + 1
    usable = [prime for prime, capacity in NTT_PRIMES if 2 ** capacity >= size]
    chosen, product = [], 1
    for prime in usable:
        if product > bound:
            break
        chosen.append(prime)
        product *= prime
    if product <= bound:
        raise ValidationError(f"N={N} is beyond the exact expansion range for {quotient.label}")

    get_logger().log_stage("eta_expansion", quotient.label, N=N, primes=len(chosen), size=size)
    residues = [_series_mod(quotient, length, prime, primitive_root(prime)) for prime in chosen]
    series = _garner(residues, chosen)

    coeffs = np.zeros(N + 1, dtype=series.dtype)
    coeffs[shift:shift + length] = series[:N + 1 - shift]
    return coeffs
