"""
Exact arithmetic in the cyclotomic field Q(mu_m).

Elements are stored as exponent-indexed coefficient vectors sum c_k zeta_m^k.
The representation is not unique (the powers of zeta_m satisfy the cyclotomic
relation), so equality is decided on the canonical remainder modulo the m-th
cyclotomic polynomial.
"""

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Tuple, Union

import numpy as np
from sympy import Poly, QQ, Symbol, cyclotomic_poly

Scalar = Union[int, Fraction]

_X = Symbol("x")


@lru_cache(maxsize=None)
def _cyclotomic_modulus(m: int) -> Poly:
    return Poly(cyclotomic_poly(m, _X), _X, domain=QQ)


class CyclotomicElement:
    """Immutable element of Q(mu_m) given by exponent coefficients."""

    __slots__ = ("m", "coeffs", "_canonical")

    def __init__(self, m: int, coeffs: Iterable[Scalar]):
        """
        Create an element.

        Args:
            m: Root-of-unity order (m >= 1)
            coeffs: Coefficients c_0..c_{m-1} of zeta_m^k (shorter vectors are zero padded)
        """
        if m < 1:
            raise ValueError(f"Root-of-unity order must be positive, got {m}")
        values = [Fraction(c) for c in coeffs]
        if len(values) > m:
            raise ValueError(f"At most {m} coefficients allowed, got {len(values)}")
        values.extend([Fraction(0)] * (m - len(values)))
        self.m = m
        self.coeffs: Tuple[Fraction, ...] = tuple(values)
        self._canonical = None

    @classmethod
    def zero(cls, m: int) -> 'CyclotomicElement':
        return cls(m, [])

    @classmethod
    def one(cls, m: int) -> 'CyclotomicElement':
        return cls(m, [1])

    @classmethod
    def root(cls, m: int, k: int) -> 'CyclotomicElement':
        """The root of unity zeta_m^k."""
        coeffs = [0] * m
        coeffs[k % m] = 1
        return cls(m, coeffs)

    @classmethod
    def from_scalar(cls, m: int, value: Scalar) -> 'CyclotomicElement':
        return cls(m, [value])

    def _coerce(self, other) -> 'CyclotomicElement':
        if isinstance(other, CyclotomicElement):
            if other.m != self.m:
                raise ValueError(f"Cannot combine elements of orders {self.m} and {other.m}")
            return other
        if isinstance(other, (int, Fraction)):
            return CyclotomicElement.from_scalar(self.m, other)
        return NotImplemented

    def __add__(self, other) -> 'CyclotomicElement':
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CyclotomicElement(self.m, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self) -> 'CyclotomicElement':
        return CyclotomicElement(self.m, [-c for c in self.coeffs])

    def __sub__(self, other) -> 'CyclotomicElement':
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __mul__(self, other) -> 'CyclotomicElement':
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        # Cyclic convolution: zeta_m^m = 1
        product = [Fraction(0)] * self.m
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    product[(i + j) % self.m] += a * b
        return CyclotomicElement(self.m, product)

    __rmul__ = __mul__

    def scale(self, factor: Scalar) -> 'CyclotomicElement':
        """Multiply by a rational scalar."""
        factor = Fraction(factor)
        return CyclotomicElement(self.m, [c * factor for c in self.coeffs])

    def galois(self, a: int) -> 'CyclotomicElement':
        """
        Apply the automorphism zeta_m -> zeta_m^a.

        Args:
            a: Exponent coprime to m

        Returns:
            The conjugate element
        """
        if np.gcd(a, self.m) != 1:
            raise ValueError(f"Galois exponent {a} is not a unit modulo {self.m}")
        image = [Fraction(0)] * self.m
        for k, c in enumerate(self.coeffs):
            if c:
                image[(a * k) % self.m] += c
        return CyclotomicElement(self.m, image)

    def conjugate(self) -> 'CyclotomicElement':
        """Complex conjugation."""
        return self.galois(-1 % self.m if self.m > 1 else 1)

    def lift(self, multiple: int) -> 'CyclotomicElement':
        """Re-express the element in Q(mu_multiple) for m | multiple."""
        if multiple % self.m:
            raise ValueError(f"{self.m} does not divide {multiple}")
        step = multiple // self.m
        coeffs = [Fraction(0)] * multiple
        for k, c in enumerate(self.coeffs):
            coeffs[k * step] = c
        return CyclotomicElement(multiple, coeffs)

    def canonical(self) -> Tuple[Fraction, ...]:
        """
        Canonical coefficients: remainder modulo the m-th cyclotomic polynomial.

        Returns:
            Tuple of phi(m) rationals (ascending powers of zeta_m)
        """
        if self._canonical is None:
            modulus = _cyclotomic_modulus(self.m)
            degree = modulus.degree()
            poly = Poly(list(reversed(self.coeffs)), _X, domain=QQ)
            remainder = poly.rem(modulus).all_coeffs()[::-1]
            values = [Fraction(int(c.p), int(c.q)) for c in remainder]
            values.extend([Fraction(0)] * (degree - len(values)))
            self._canonical = tuple(values)
        return self._canonical

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.canonical())

    def rational_value(self) -> Fraction:
        """
        The element as a rational number.

        Raises:
            ValueError: If the element is not rational
        """
        canonical = self.canonical()
        if any(c != 0 for c in canonical[1:]):
            raise ValueError("Cyclotomic element is not rational")
        return canonical[0] if canonical else Fraction(0)

    def embed(self) -> complex:
        """Complex embedding zeta_m -> e(1/m)."""
        k = np.arange(self.m)
        weights = np.array([float(c) for c in self.coeffs])
        return complex(np.sum(weights * np.exp(2j * np.pi * k / self.m)))

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CyclotomicElement.from_scalar(self.m, other)
        if not isinstance(other, CyclotomicElement):
            return NotImplemented
        if other.m != self.m:
            common = int(np.lcm(self.m, other.m))
            return self.lift(common).canonical() == other.lift(common).canonical()
        return self.canonical() == other.canonical()

    def __hash__(self) -> int:
        return hash((self.m, self.canonical()))

    def __repr__(self) -> str:
        terms = [f"{c}*z{self.m}^{k}" for k, c in enumerate(self.coeffs) if c]
        return f"CyclotomicElement({' + '.join(terms) or '0'})"
