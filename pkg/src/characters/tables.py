"""
Dirichlet characters of odd prime-power conductor.

A CharacterTable fixes a primitive root g modulo q = p^h and the discrete
logarithm of every unit; the character with index j sends g^k to e(jk/phi(q)).
"""

from dataclasses import dataclass
from math import gcd
from typing import List, Tuple

import numpy as np
from sympy import isprime
from sympy.ntheory import n_order

from .cyclotomic import CyclotomicElement
from ..utils.errors import ValidationError
from ..utils.logger import get_logger

# Largest modulus handled by the dense discrete-log table
MAX_MODULUS = 10 ** 7


@dataclass(frozen=True, eq=False)
class CharacterTable:
    """Discrete-log structure of (Z/p^h Z)^x."""
    p: int
    h: int
    q: int
    g: int
    phi: int
    dlog: np.ndarray

    @classmethod
    def trivial(cls) -> 'CharacterTable':
        """Table of the single character modulo 1."""
        return cls(p=1, h=0, q=1, g=0, phi=1, dlog=np.zeros(1, dtype=np.int64))

    def units(self) -> np.ndarray:
        """Residues coprime to q, ascending."""
        return np.nonzero(self.dlog >= 0)[0]

    def log(self, n: int) -> int:
        """Discrete logarithm of n (which must be a unit)."""
        k = int(self.dlog[n % self.q])
        if k < 0:
            raise ValidationError(f"{n} is not a unit modulo {self.q}")
        return k

    def character(self, j: int) -> 'DirichletCharacter':
        return DirichletCharacter(self, j % self.phi)


@dataclass(frozen=True)
class DirichletCharacter:
    """The character chi_j(g^k) = e(jk/phi)."""
    table: CharacterTable
    j: int

    @property
    def modulus(self) -> int:
        return self.table.q

    @property
    def order(self) -> int:
        return self.table.phi // gcd(self.j, self.table.phi)

    @property
    def is_wild(self) -> bool:
        p = self.table.p
        if self.table.h < 2 or self.j % (p - 1):
            return False
        return (self.j // (p - 1)) % p != 0

    @property
    def is_primitive(self) -> bool:
        """Conductor equals the full modulus."""
        t = self.table
        if t.q == 1:
            return True
        if t.h == 1:
            return self.j != 0
        # chi is primitive iff it is nontrivial on 1 + p^(h-1)
        return (self.j * t.log(1 + t.p ** (t.h - 1))) % t.phi != 0

    @property
    def is_even(self) -> bool:
        return self.exponent(-1) % self.order == 0

    def exponent(self, n: int) -> int:
        """
        Exponent k with chi(n) = zeta_order^k.

        Raises:
            ValidationError: If n is not a unit
        """
        scale = self.table.phi // self.order
        return (self.j * self.table.log(n) // scale) % self.order

    def power(self, a: int) -> 'DirichletCharacter':
        return self.table.character(self.j * a)

    def conjugate(self) -> 'DirichletCharacter':
        return self.power(-1)

    def values(self) -> np.ndarray:
        """Complex values chi(0..q-1), zero on non-units."""
        dlog = self.table.dlog
        out = np.exp(2j * np.pi * ((self.j * dlog) % self.table.phi) / self.table.phi)
        out[dlog < 0] = 0.0
        return out

    def galois_orbit(self) -> List['DirichletCharacter']:
        """Conjugates chi^a for a coprime to the order, ascending in a."""
        return [self.power(a) for a in range(1, self.order + 1) if gcd(a, self.order) == 1]


def _find_primitive_root(p: int, q: int, phi: int) -> int:
    for candidate in range(2, q):
        if candidate % p and n_order(candidate, q) == phi:
            return candidate
    raise ValidationError(f"No primitive root found modulo {q}")


def _discrete_log_table(g: int, q: int, phi: int) -> np.ndarray:
    # Baby steps g^0..g^(B-1), then giant rows g^(iB) * baby
    block = int(np.ceil(np.sqrt(phi)))
    baby = np.empty(block, dtype=np.int64)
    value = 1
    for k in range(block):
        baby[k] = value
        value = value * g % q
    giant_step = value

    dlog = np.full(q, -1, dtype=np.int64)
    row_factor = 1
    for start in range(0, phi, block):
        count = min(block, phi - start)
        residues = (row_factor * baby[:count]) % q
        dlog[residues] = np.arange(start, start + count, dtype=np.int64)
        row_factor = row_factor * giant_step % q
    return dlog


def build_character_table(p: int, h: int) -> CharacterTable:
    """
    Build the discrete-log table modulo p^h.

    Args:
        p: Odd prime
        h: Exponent >= 1

    Returns:
        CharacterTable with the smallest primitive root

    Raises:
        ValidationError: On even or composite p, h < 1, or an oversized modulus
    """
    if p == 2 or p < 2 or not isprime(p):
        raise ValidationError(f"--p must be an odd prime, got {p}")
    if h < 1:
        raise ValidationError(f"--h must be at least 1, got {h}")
    q = p ** h
    if q > MAX_MODULUS:
        raise ValidationError(f"Modulus {p}^{h} exceeds the supported range {MAX_MODULUS}")

    phi = (p - 1) * p ** (h - 1)
    g = _find_primitive_root(p, q, phi)
    dlog = _discrete_log_table(g, q, phi)
    get_logger().log_stage("character_table", f"q={q}", g=g, phi=phi)
    return CharacterTable(p=p, h=h, q=q, g=g, phi=phi, dlog=dlog)


def wild_characters(table: CharacterTable) -> List[DirichletCharacter]:
    """
    Characters of conductor p^h and p-power order, ascending in j.

    Raises:
        ValidationError: If h < 2
    """
    if table.h < 2:
        raise ValidationError(f"No wild characters of conductor {table.q} (h must be >= 2)")
    p = table.p
    return [table.character((p - 1) * k) for k in range(1, p ** (table.h - 1)) if k % p]


def evaluate_exact(chi: DirichletCharacter, n: int) -> CyclotomicElement:
    """Exact value chi(n) as an element of Q(mu_order); zero when p | n."""
    if chi.table.q > 1 and n % chi.table.p == 0:
        return CyclotomicElement.zero(chi.order)
    return CyclotomicElement.root(chi.order, chi.exponent(n))


def evaluate_complex(chi: DirichletCharacter, n: int) -> complex:
    if chi.table.q > 1 and n % chi.table.p == 0:
        return 0j
    return complex(np.exp(2j * np.pi * chi.exponent(n) / chi.order))


def gauss_sum(chi: DirichletCharacter) -> complex:
    """
    G(chi) = sum over n mod q of chi(n) e(n/q).

    Raises:
        ValidationError: If chi is not primitive
    """
    if chi.table.q == 1:
        return 1 + 0j
    if not chi.is_primitive:
        raise ValidationError(f"Gauss sum requires a primitive character, j={chi.j} mod {chi.modulus}")
    q = chi.table.q
    n = np.arange(q)
    return complex(np.sum(chi.values() * np.exp(2j * np.pi * n / q)))


def gauss_sums_all(table: CharacterTable) -> np.ndarray:
    """
    Gauss sums of every character modulo q at once.

    With v_k = e(g^k/q) the sum for chi_j is sum_k v_k e(jk/phi), an inverse DFT.

    Returns:
        Complex array indexed by j in [0, phi)
    """
    if table.q == 1:
        return np.ones(1, dtype=complex)
    powers = np.empty(table.phi, dtype=np.int64)
    units = table.units()
    powers[table.dlog[units]] = units
    v = np.exp(2j * np.pi * powers / table.q)
    return table.phi * np.fft.ifft(v)


def teichmuller_decompose(n: int, p: int, h: int) -> Tuple[int, int]:
    """
    Split a unit n = [n] <n> modulo p^h.

    Args:
        n: Integer coprime to p
        p: Odd prime
        h: Exponent >= 1

    Returns:
        ([n], <n>) with [n] = n^(p^(h-1)) mod p^h of order dividing p-1 and <n> = 1 mod p
    """
    if n % p == 0:
        raise ValidationError(f"Teichmuller decomposition needs gcd(n, p) = 1, got n={n}, p={p}")
    if h < 1:
        raise ValidationError(f"Exponent h must be at least 1, got {h}")
    q = p ** h
    root = pow(n, p ** (h - 1), q)
    principal = n * pow(root, -1, q) % q
    return root, principal
