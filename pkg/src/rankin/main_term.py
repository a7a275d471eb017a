"""
Main term of the twisted second moment over a Galois orbit.

MT(f, g; q, l1, l2) = P_(l1,l2)(log q) + P_(l2,l1)(log q). For f != g both
polynomials are constants; for f = g they have degree one, with an exactly
assembled leading coefficient and a constant term that is only known to be
bounded, which is carried as a FITTED parameter.
"""

from dataclasses import dataclass, field
from math import gcd
from typing import Any, Dict, Optional

import numpy as np
from sympy import isprime, primefactors

from .local_factors import A_l_closed, euler_factor_rs, euler_factor_sym2, zeta_local
from .series import rs_partial, sym2_residue
from ..newforms.table import NewformTable
from ..utils.errors import ValidationError
from ..utils.logger import get_logger

FITTED = "FITTED"


@dataclass
class MainTermSpec:
    """Forms, modulus q = p^h and coprime twisting integers l1, l2."""
    f: NewformTable
    g: NewformTable
    p: int
    h: int
    l1: int = 1
    l2: int = 1

    def __post_init__(self):
        if not isprime(self.p) or self.p == 2:
            raise ValidationError(f"p must be an odd prime, got {self.p}")
        if self.h < 1:
            raise ValidationError(f"h must be at least 1, got {self.h}")
        if self.l1 < 1 or self.l2 < 1:
            raise ValidationError(f"l1, l2 must be positive, got {self.l1}, {self.l2}")
        if gcd(self.l1, self.l2) != 1:
            raise ValidationError(f"l1={self.l1} and l2={self.l2} must be coprime")
        if gcd(self.l1 * self.l2, self.p * self.f.R * self.g.R) != 1:
            raise ValidationError(f"l1 l2 = {self.l1 * self.l2} must be coprime to p R R'")
        if gcd(self.p, self.f.R * self.g.R) != 1:
            raise ValidationError(f"p={self.p} must not divide the levels {self.f.R}, {self.g.R}")

    @property
    def q(self) -> int:
        return self.p ** self.h

    @property
    def diagonal(self) -> bool:
        """f and g are the same form."""
        f, g = self.f, self.g
        return f is g or (f.label == g.label and f.R == g.R and f.two_kappa == g.two_kappa)

    def swapped(self) -> 'MainTermSpec':
        return MainTermSpec(self.f, self.g, self.p, self.h, self.l2, self.l1)


@dataclass
class PolynomialTerm:
    """P(X) = leading X + constant; constant is None until fitted."""
    leading: float
    constant: Optional[float]
    constant_provenance: str = "exact"

    def __call__(self, log_q: float) -> float:
        return self.leading * log_q + (self.constant or 0.0)

    def to_dict(self) -> Dict[str, Any]:
        return {"leading": self.leading, "constant": self.constant,
                "constant_provenance": self.constant_provenance}


@dataclass
class MainTermResult:
    spec: MainTermSpec
    first: PolynomialTerm
    second: PolynomialTerm
    components: Dict[str, Any] = field(default_factory=dict)

    @property
    def slope(self) -> float:
        """Coefficient of log q in MT."""
        return self.first.leading + self.second.leading

    @property
    def constant_fitted(self) -> bool:
        return self.first.constant_provenance == FITTED

    def value(self, log_q: Optional[float] = None) -> float:
        if log_q is None:
            log_q = np.log(self.spec.q)
        return self.first(log_q) + self.second(log_q)

    def with_constant(self, constant: float) -> 'MainTermResult':
        """Copy with the FITTED total constant term split evenly between the two orderings."""
        if not self.spec.diagonal:
            raise ValidationError("Only the f = g main term has a fitted constant")
        half = constant / 2
        return MainTermResult(self.spec, PolynomialTerm(self.first.leading, half, FITTED),
                              PolynomialTerm(self.second.leading, half, FITTED), dict(self.components))

    def to_dict(self) -> Dict[str, Any]:
        return {"f": self.spec.f.label, "g": self.spec.g.label, "p": self.spec.p, "h": self.spec.h,
                "l1": self.spec.l1, "l2": self.spec.l2, "slope": self.slope,
                "mt": self.value(), "constant_fitted": self.constant_fitted,
                "P_l1_l2": self.first.to_dict(), "P_l2_l1": self.second.to_dict(),
                "components": self.components}


def _removed_primes(spec: MainTermSpec):
    return [int(ell) for ell in primefactors(spec.p * spec.l1 * spec.l2)]


def leading_coefficient(spec: MainTermSpec, rs_residue: float) -> Dict[str, float]:
    """
    L^(N)(1, sym^2 f) / (zeta_N(1) zeta^(N)(2)) A_l1(f; 1) A_l2(f; 1) with N = p l1 l2.

    Args:
        spec: Diagonal main-term spec
        rs_residue: Residue at s = 1 of zeta(2s) sum lambda_f(n)^2 n^(-s)

    Returns:
        Dictionary with the coefficient and its factors
    """
    f = spec.f
    primes = _removed_primes(spec)
    sym2_local = float(np.prod([euler_factor_sym2(f, ell, 1).real for ell in primes]))
    zeta_n1 = float(np.prod([zeta_local(ell, 1) for ell in primes]))
    zeta_removed2 = (np.pi ** 2 / 6) * float(np.prod([1 - ell ** -2.0 for ell in primes]))
    a1 = A_l_closed(f, f, spec.l1, 1).real
    a2 = A_l_closed(f, f, spec.l2, 1).real
    partial_sym2 = rs_residue / sym2_local
    coefficient = partial_sym2 / (zeta_n1 * zeta_removed2) * a1 * a2
    return {"leading": coefficient, "sym2_removed": partial_sym2, "zeta_N_1": zeta_n1,
            "zeta_removed_2": zeta_removed2, "A_l1": a1, "A_l2": a2}


def _off_diagonal_constant(spec: MainTermSpec, rs_value: complex, l_first: int, l_second: int) -> float:
    f, g = spec.f, spec.g
    removed = 1.0 + 0j
    for ell in _removed_primes(spec):
        removed /= euler_factor_rs(f, g, ell, 1)
    zeta_removed2 = (np.pi ** 2 / 6) * float(np.prod([1 - ell ** -2.0 for ell in _removed_primes(spec)]))
    value = (rs_value * removed / zeta_removed2
             * A_l_closed(f, g, l_first, 1) * A_l_closed(g, f, l_second, 1))
    return float(value.real)


def main_term(spec: MainTermSpec, rs_residue: Optional[float] = None,
              rs_value: Optional[complex] = None) -> MainTermResult:
    """
    Assemble both P polynomials.

    Args:
        spec: MainTermSpec
        rs_residue: Residue of the naive Rankin-Selberg series of f (f = g);
            computed from sym2_residue when omitted
        rs_value: L(1, f x g) from the naive series (f != g); computed when omitted

    Returns:
        MainTermResult; for f = g the constant terms are None until fitted
    """
    logger = get_logger()
    context = f"{spec.f.label}x{spec.g.label} q={spec.q}"
    if spec.diagonal:
        if rs_residue is None:
            rs_residue = sym2_residue(spec.f).rs_residue
        first = leading_coefficient(spec, rs_residue)
        second = leading_coefficient(spec.swapped(), rs_residue)
        logger.log_stage("main_term", context, leading=first["leading"], residue=rs_residue)
        return MainTermResult(spec, PolynomialTerm(first["leading"], None, FITTED),
                              PolynomialTerm(second["leading"], None, FITTED),
                              {"rs_residue": rs_residue, "P_l1_l2": first, "P_l2_l1": second})

    if rs_value is None:
        rs_value = rs_partial(spec.f, spec.g, 1.0).value
    c1 = _off_diagonal_constant(spec, rs_value, spec.l1, spec.l2)
    c2 = _off_diagonal_constant(spec, rs_value, spec.l2, spec.l1)
    logger.log_stage("main_term", context, P1=c1, P2=c2)
    return MainTermResult(spec, PolynomialTerm(0.0, c1), PolynomialTerm(0.0, c2),
                          {"rs_value": [complex(rs_value).real, complex(rs_value).imag]})
