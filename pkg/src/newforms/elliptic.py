"""
Point counting on elliptic curves over prime fields.

Gives an oracle for the level-11 coefficients that is independent of the
eta-product expansion: a_ell = ell + 1 - #E(F_ell).
"""

from dataclasses import dataclass
from typing import Dict

import numpy as np

from .arithmetic import primes_up_to
from ..utils.errors import ValidationError


@dataclass(frozen=True)
class EllipticCurve:
    """Weierstrass model y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6."""
    a1: int
    a2: int
    a3: int
    a4: int
    a6: int

    @property
    def b2(self) -> int:
        return self.a1 ** 2 + 4 * self.a2

    @property
    def b4(self) -> int:
        return 2 * self.a4 + self.a1 * self.a3

    @property
    def b6(self) -> int:
        return self.a3 ** 2 + 4 * self.a6

    @property
    def b8(self) -> int:
        return (self.a1 ** 2 * self.a6 + 4 * self.a2 * self.a6 - self.a1 * self.a3 * self.a4
                + self.a2 * self.a3 ** 2 - self.a4 ** 2)

    @property
    def discriminant(self) -> int:
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        return -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6


# Curve 11a1, whose newform is eta(z)^2 eta(11z)^2
CURVE_11A = EllipticCurve(a1=0, a2=-1, a3=1, a4=-10, a6=-20)


def _count_points_char2(curve: EllipticCurve) -> int:
    count = 1
    for x in range(2):
        for y in range(2):
            lhs = y * y + curve.a1 * x * y + curve.a3 * y
            rhs = x ** 3 + curve.a2 * x * x + curve.a4 * x + curve.a6
            if (lhs - rhs) % 2 == 0:
                count += 1
    return count


def elliptic_ap(curve: EllipticCurve, ell: int) -> int:
    """
    Trace of Frobenius at a prime of good reduction.

    For odd ell, completing the square gives
    a_ell = -sum_x (4x^3 + b2 x^2 + 2 b4 x + b6 | ell).

    Args:
        curve: Curve over Q
        ell: Prime not dividing the discriminant

    Returns:
        a_ell with |a_ell| <= 2 sqrt(ell)

    Raises:
        ValidationError: At a prime of bad reduction
    """
    if curve.discriminant % ell == 0:
        raise ValidationError(f"ell={ell} is a prime of bad reduction")
    if ell == 2:
        ap = 3 - _count_points_char2(curve)
    else:
        x = np.arange(ell, dtype=np.int64)
        squares = x * x % ell
        legendre = np.full(ell, -1, dtype=np.int64)
        legendre[squares] = 1
        legendre[0] = 0
        x2 = squares
        x3 = x2 * x % ell
        cubic = (4 * x3 + (curve.b2 % ell) * x2 + (2 * curve.b4 % ell) * x + curve.b6) % ell
        ap = -int(np.sum(legendre[cubic]))
    if ap * ap > 4 * ell:
        raise ValidationError(f"Hasse bound violated at ell={ell}: a_ell={ap}")
    return ap


def ap_list(curve: EllipticCurve, bound: int) -> Dict[int, int]:
    """a_ell for every good prime ell <= bound."""
    disc = curve.discriminant
    return {int(ell): elliptic_ap(curve, int(ell)) for ell in primes_up_to(bound) if disc % ell}
