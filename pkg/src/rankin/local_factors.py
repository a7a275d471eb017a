"""
Local Euler factors and the factors A_l(f, g; s).

For a prime ell not dividing the level,

    A_(ell^t)(f, g; s) = sum_(r>=0) lambda_f(ell^(t+r)) lambda_g(ell^r) ell^(-rs)

satisfies the Hecke recursion in t with characteristic polynomial
X^2 - lambda_f(ell) X + 1, so it is a combination of alpha^t and beta^t fixed by
t = 0 and t = 1. When alpha = beta the solution is linear in t times alpha^t.
"""

from dataclasses import dataclass
from math import gcd
from typing import Dict

import numpy as np
from sympy import factorint

from ..newforms.table import NewformTable, hecke_sequence, lambda_value, langlands_from_lambda
from ..utils.errors import ValidationError

GENERIC = "generic"
DEGENERATE = "degenerate"

# lambda_f(ell) within this distance of +-2 uses the double-root solution
DEGENERATE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class LocalFactorValue:
    """A_(ell^t)(f, g; s) with the branch of the recursion solution used."""
    ell: int
    t: int
    value: complex
    branch: str


def zeta_local(ell: int, s: complex) -> complex:
    """zeta_ell(s) = (1 - ell^(-s))^(-1)."""
    return 1.0 / (1.0 - ell ** (-s))


def _unramified(table: NewformTable, ell: int) -> float:
    if table.R % ell == 0:
        raise ValidationError(f"Local factor at ell={ell} requires ell coprime to the level of {table.label}")
    return lambda_value(table, ell)


def euler_factor_rs_values(lam_f: float, lam_g: float, ell: int, s: complex) -> complex:
    """L_ell(s, f x g) = prod over roots (1 - alpha_i beta_j ell^(-s))^(-1)."""
    pf, pg = langlands_from_lambda(lam_f), langlands_from_lambda(lam_g)
    x = ell ** (-s)
    out = 1.0 + 0j
    for a in (pf.alpha, pf.beta):
        for b in (pg.alpha, pg.beta):
            out /= 1.0 - a * b * x
    return out


def euler_factor_rs(f: NewformTable, g: NewformTable, ell: int, s: complex) -> complex:
    return euler_factor_rs_values(_unramified(f, ell), _unramified(g, ell), ell, s)


def euler_factor_sym2(f: NewformTable, ell: int, s: complex) -> complex:
    """L_ell(s, sym^2 f) = ((1 - alpha^2 x)(1 - x)(1 - beta^2 x))^(-1), x = ell^(-s)."""
    pair = langlands_from_lambda(_unramified(f, ell))
    x = ell ** (-s)
    return 1.0 / ((1 - pair.alpha ** 2 * x) * (1 - x) * (1 - pair.beta ** 2 * x))


def c_factor(lam_f: float, lam_g: float, ell: int, s: complex) -> complex:
    """c_(f,g,ell)(s) = (lambda_f(ell) - lambda_g(ell) ell^(-s)) / (1 - ell^(-2s))."""
    return (lam_f - lam_g * ell ** (-s)) / (1 - ell ** (-2 * s))


def local_factor_A_values(lam_f: float, lam_g: float, ell: int, t: int, s: complex) -> LocalFactorValue:
    """
    Closed form of A_(ell^t)(f, g; s) from lambda_f(ell) and lambda_g(ell).

    Args:
        lam_f: lambda_f(ell)
        lam_g: lambda_g(ell)
        ell: Prime coprime to both levels
        t: Exponent >= 0
        s: Complex point with Re s > 0

    Returns:
        LocalFactorValue; branch is degenerate when lambda_f(ell) = +-2
    """
    if t < 0:
        raise ValidationError(f"Exponent t must be non-negative, got {t}")
    base = euler_factor_rs_values(lam_f, lam_g, ell, s) / zeta_local(ell, 2 * s)
    c = c_factor(lam_f, lam_g, ell, s)
    pair = langlands_from_lambda(lam_f)
    if abs(abs(lam_f) - 2.0) < DEGENERATE_TOLERANCE:
        alpha = pair.alpha
        value = base * (1 + (c / alpha - 1) * t) * alpha ** t
        return LocalFactorValue(ell, t, complex(value), DEGENERATE)
    alpha, beta = pair.alpha, pair.beta
    a = (c - beta) / (alpha - beta)
    b = (alpha - c) / (alpha - beta)
    value = base * (a * alpha ** t + b * beta ** t)
    return LocalFactorValue(ell, t, complex(value), GENERIC)


def local_factor_A(f: NewformTable, g: NewformTable, ell: int, t: int, s: complex) -> LocalFactorValue:
    return local_factor_A_values(_unramified(f, ell), _unramified(g, ell), ell, t, s)


def _factor(l: int, f: NewformTable, g: NewformTable) -> Dict[int, int]:
    if l < 1:
        raise ValidationError(f"l must be a positive integer, got {l}")
    if gcd(l, f.R * g.R) != 1:
        raise ValidationError(f"l={l} must be coprime to the levels {f.R} and {g.R}")
    return {int(ell): int(t) for ell, t in factorint(l).items()}


def A_l_closed(f: NewformTable, g: NewformTable, l: int, s: complex) -> complex:
    """A_l(f, g; s) as the product of closed-form local factors over ell^t || l."""
    value = 1.0 + 0j
    for ell, t in _factor(l, f, g).items():
        value *= local_factor_A(f, g, ell, t, s).value
    return value


def A_l_brute(f: NewformTable, g: NewformTable, l: int, s: complex, r_max: int = 60) -> complex:
    """A_l(f, g; s) by summing sum_(r <= r_max) lambda_f(ell^(t+r)) lambda_g(ell^r) ell^(-rs) per prime."""
    value = 1.0 + 0j
    for ell, t in _factor(l, f, g).items():
        seq_f = hecke_sequence(lambda_value(f, ell), t + r_max)
        seq_g = hecke_sequence(lambda_value(g, ell), r_max)
        r = np.arange(r_max + 1)
        value *= complex(np.sum(seq_f[t:] * seq_g * np.power(float(ell), -r * s)))
    return value
