"""
Galois averages of wild character values over a base field F.

For a wild character chi mod p^h the group Gal(F(chi)/F) is identified with a
subgroup H of (Z/p^(h-1) Z)^x acting on exponents. Three base fields are
supported: Q, Q(mu_{p^r}) and its maximal real subfield.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, log
from typing import List

from .cyclotomic import CyclotomicElement
from .tables import DirichletCharacter, evaluate_exact, teichmuller_decompose
from ..utils.errors import ValidationError

RATIONAL = "rational"
CYCLOTOMIC = "cyclotomic"
REAL_CYCLOTOMIC = "real_cyclotomic"


@dataclass(frozen=True)
class GaloisAverageContext:
    """
    Base field data for Galois averaging.

    Attributes:
        p: Odd prime
        h0: Largest integer with Q(mu_{p^h0}) inside F(mu_p)
        kind: One of rational, cyclotomic, real_cyclotomic
        F_degree: [F:Q]
    """
    p: int
    h0: int
    kind: str = RATIONAL
    F_degree: int = 1

    def __post_init__(self):
        if self.kind not in (RATIONAL, CYCLOTOMIC, REAL_CYCLOTOMIC):
            raise ValidationError(f"Unknown base field kind: {self.kind}")
        if self.h0 < 1:
            raise ValidationError(f"h0 must be at least 1, got {self.h0}")
        if self.F_degree < 1:
            raise ValidationError(f"Field degree must be positive, got {self.F_degree}")
        if self.h0 - 1 > log(self.F_degree) / log(2) + 1e-12:
            raise ValidationError(
                f"h0={self.h0} violates h0 - 1 <= log[F:Q]/log 2 for [F:Q]={self.F_degree}"
            )

    @classmethod
    def rational(cls, p: int) -> 'GaloisAverageContext':
        return cls(p=p, h0=1, kind=RATIONAL, F_degree=1)

    @classmethod
    def cyclotomic(cls, p: int, r: int) -> 'GaloisAverageContext':
        """F = Q(mu_{p^r})."""
        return cls(p=p, h0=r, kind=CYCLOTOMIC, F_degree=(p - 1) * p ** (r - 1))

    @classmethod
    def real_cyclotomic(cls, p: int, r: int) -> 'GaloisAverageContext':
        """F = Q(mu_{p^r})^+; F(mu_p) = Q(mu_{p^r}) so h0 = r."""
        return cls(p=p, h0=r, kind=REAL_CYCLOTOMIC, F_degree=max(1, (p - 1) * p ** (r - 1) // 2))

    def _in_group(self, a: int) -> bool:
        if self.kind == RATIONAL:
            return True
        modulus = self.p ** self.h0
        if self.kind == CYCLOTOMIC:
            return a % modulus == 1
        return a % modulus in (1, modulus - 1)

    def subgroup(self, h: int) -> List[int]:
        """Exponents a mod p^(h-1) representing Gal(F(chi)/F), ascending."""
        m = self.p ** (h - 1)
        return [a for a in range(1, m + 1) if gcd(a, self.p) == 1 and self._in_group(a)]

    def residue_classes(self) -> List[int]:
        """Representatives of Gal(F(mu_p)/F) acting on mu_{p^h0}."""
        modulus = self.p ** self.h0
        return [a for a in range(1, modulus) if a % self.p and self._in_group(a)]

    @property
    def local_degree(self) -> int:
        """[F(mu_p):F]."""
        return len(self.residue_classes())


def galois_average(chi: DirichletCharacter, n: int, ctx: GaloisAverageContext) -> CyclotomicElement:
    """
    Average of chi^sigma(n) over Gal(F(chi)/F) by the Teichmuller criterion.

    The average vanishes unless <n> = 1 mod p^(h-h0); in that case chi(n) lies
    in mu_{p^h0} and the average reduces to Gal(F(mu_p)/F).

    Args:
        chi: Wild character mod p^h
        n: Integer
        ctx: Base field context

    Returns:
        Exact element of Q(mu_{p^(h-1)})

    Raises:
        ValidationError: If h <= h0 or chi is not wild
    """
    table = chi.table
    if not chi.is_wild:
        raise ValidationError(f"Galois averaging needs a wild character, got j={chi.j} mod {table.q}")
    if table.h <= ctx.h0:
        raise ValidationError(f"Galois average needs h > h0, got h={table.h}, h0={ctx.h0}")

    m = chi.order
    if n % table.p == 0:
        return CyclotomicElement.zero(m)
    _, principal = teichmuller_decompose(n, table.p, table.h)
    if (principal - 1) % table.p ** (table.h - ctx.h0):
        return CyclotomicElement.zero(m)

    value = evaluate_exact(chi, n)
    classes = ctx.residue_classes()
    total = CyclotomicElement.zero(m)
    for a in classes:
        total = total + value.galois(a)
    return total.scale(Fraction(1, len(classes)))


def galois_average_bruteforce(chi: DirichletCharacter, n: int,
                              ctx: GaloisAverageContext) -> CyclotomicElement:
    """Literal average of chi^a(n) over every a in Gal(F(chi)/F)."""
    value = evaluate_exact(chi, n)
    group = ctx.subgroup(chi.table.h)
    total = CyclotomicElement.zero(chi.order)
    for a in group:
        total = total + value.galois(a)
    return total.scale(Fraction(1, len(group)))


def subfield_trace_root_of_unity(zeta: CyclotomicElement, p: int, r: int) -> CyclotomicElement:
    """
    Trace from Q(mu_{p^(h-1)}) down to L = Q(mu_{p^r}).

    Args:
        zeta: Element of Q(mu_m) with m = p^(h-1)
        p: Odd prime
        r: Subfield exponent, 1 <= r <= h-1

    Returns:
        Sum of the conjugates zeta^n over n = 1 mod p^r

    Raises:
        ValidationError: If r = 0 (L lacks mu_p) or r exceeds h-1
    """
    m = zeta.m
    top = 0
    while p ** top < m:
        top += 1
    if p ** top != m:
        raise ValidationError(f"Element order {m} is not a power of {p}")
    if r < 1:
        raise ValidationError("Subfield trace requires mu_p inside L (r >= 1)")
    if r > top:
        raise ValidationError(f"Subfield exponent r={r} exceeds h-1={top}")

    step = p ** r
    total = CyclotomicElement.zero(m)
    for a in range(1, m + 1, step):
        total = total + zeta.galois(a)
    return total
