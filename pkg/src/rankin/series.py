"""
Smoothed Rankin-Selberg series, the symmetric-square residue and the
p-removed twisted series D^(p)(f, g, s; l1, l2).

Every series here is evaluated as S(X) = sum c_n n^(-s) e^(-n/X), which differs
from its Dirichlet-series value by terms in X^(-1), X^(-2), ... (plus
Gamma-damped terms from the zeros of zeta(2s)). Two Richardson steps over
X/4, X/2, X remove the first two orders.
"""

from dataclasses import dataclass
from math import gcd
from typing import Optional

import mpmath
import numpy as np
from sympy import primefactors

from .local_factors import A_l_closed, euler_factor_rs, zeta_local
from ..lfun.series import SMOOTHING_SPAN, richardson, smoothed_sum
from ..newforms.arithmetic import multiplicative_table
from ..newforms.table import NewformTable
from ..utils.errors import NumericalContractError, ValidationError
from ..utils.logger import get_logger

# Relative change between extrapolants accepted for the symmetric-square residue
SYM2_TOLERANCE = 1e-3


@dataclass
class SeriesValue:
    """An extrapolated series value, the change from the previous order, and the scale."""
    value: complex
    delta: float
    X: float

    def to_dict(self) -> dict:
        return {"value": [self.value.real, self.value.imag], "delta": self.delta, "X": self.X}


def zeta_value(s: complex) -> complex:
    """Riemann zeta at a complex point."""
    return complex(mpmath.zeta(s))


def _extrapolate(coefficients: np.ndarray, s: complex, X: float) -> SeriesValue:
    sums = [smoothed_sum(coefficients, s, scale) for scale in (X / 4, X / 2, X)]
    first = 2 * sums[2] - sums[1]
    value = richardson(sums, order=2)
    return SeriesValue(value=complex(value), delta=float(abs(value - first)), X=X)


def _default_scale(length: int, X: Optional[float]) -> float:
    top = (length - 1) / SMOOTHING_SPAN
    if X is None:
        X = top
    if X < 4:
        raise ValidationError(f"Smoothing scale must be at least 4, got {X:g}")
    return X


def rs_partial(f: NewformTable, g: NewformTable, s: complex, X: Optional[float] = None) -> SeriesValue:
    """
    zeta(2s) sum lambda_f(n) lambda_g(n) n^(-s) e^(-n/X), extrapolated in X.

    Args:
        f: First form
        g: Second form
        s: Point with Re s >= 1
        X: Largest smoothing scale (defaults to the longest the tables allow)

    Returns:
        SeriesValue; delta is the distance to the first-order extrapolant

    Raises:
        InsufficientCoefficientsError: If a table is shorter than 40X
    """
    if complex(s).real < 1:
        raise ValidationError(f"rs_partial requires Re s >= 1, got s={s}")
    X = _default_scale(min(f.N, g.N) + 1, X)
    needed = int(SMOOTHING_SPAN * X)
    f.require(needed)
    g.require(needed)
    product = f.lam[:needed + 1] * g.lam[:needed + 1]
    result = _extrapolate(product, s, X)
    zeta2 = zeta_value(2 * s)
    return SeriesValue(value=zeta2 * result.value, delta=abs(zeta2) * result.delta, X=X)


def square_argument_series(f: NewformTable, N: int) -> np.ndarray:
    """lambda_f(n^2) for n <= N from lambda_f at primes and the Hecke recursion."""
    f.require(N)

    def local(ell: np.ndarray, k: np.ndarray) -> np.ndarray:
        lam = f.lam[ell]
        chi0 = (f.R % ell != 0).astype(np.float64)
        prev, cur = np.zeros(ell.size), np.ones(ell.size)
        out = np.ones(ell.size)
        for t in range(1, 2 * int(k.max()) + 1):
            prev, cur = cur, lam * cur - chi0 * prev
            hit = 2 * k == t
            out[hit] = cur[hit]
        return out

    return multiplicative_table(N, local)


@dataclass
class Sym2Residue:
    """L(1, sym^2 f) from the smoothed sum of lambda_f(n^2)/n."""
    value: float
    relative_delta: float
    X: float
    ramified_factor: float

    @property
    def rs_residue(self) -> float:
        """Residue at s = 1 of zeta(2s) sum lambda_f(n)^2 n^(-s)."""
        return self.value * self.ramified_factor

    def to_dict(self) -> dict:
        return {"value": self.value, "relative_delta": self.relative_delta, "X": self.X,
                "rs_residue": self.rs_residue}


def ramified_factor(f: NewformTable) -> float:
    """prod over ell | R of (1 - 1/ell)."""
    return float(np.prod([1 - 1 / ell for ell in primefactors(f.R)])) if f.R > 1 else 1.0


def sym2_residue(f: NewformTable, X: Optional[float] = None) -> Sym2Residue:
    """
    L(1, sym^2 f) = zeta(2) sum lambda_f(n^2)/n, extrapolated over X/4, X/2, X.

    Raises:
        NumericalContractError: If the extrapolants disagree by more than 1e-3
            relative or the value is not positive
    """
    X = _default_scale(f.N + 1, X)
    needed = int(SMOOTHING_SPAN * X)
    coefficients = square_argument_series(f, needed)
    result = _extrapolate(coefficients, 1.0, X)
    value = float(zeta_value(2).real * result.value.real)
    relative = result.delta / abs(result.value) if result.value != 0 else np.inf
    passed = value > 0 and relative <= SYM2_TOLERANCE
    get_logger().log_contract("sym2_residue", passed, f"value={value:.10g}, relative_delta={relative:.2e}",
                              f.label)
    if not passed:
        raise NumericalContractError("sym2_residue",
                                     f"{f.label}: value={value:.6g}, relative delta={relative:.2e}")
    return Sym2Residue(value=value, relative_delta=float(relative), X=X, ramified_factor=ramified_factor(f))


def sym2_residue_by_slope(f: NewformTable, X: Optional[float] = None) -> float:
    """
    Residue of zeta(2s) sum lambda_f(n)^2 n^(-s) at s = 1 from the growth of the smoothed sum.

    S(X) = sum lambda_f(n)^2 n^(-1) e^(-n/X) grows like r log X / zeta(2) + c + O(1/X),
    so zeta(2) (S(X) - S(X/2)) / log 2 tends to the residue r; one Richardson
    step over the scales X/2 and X removes the 1/X term.
    """
    X = _default_scale(f.N + 1, X)
    squares = f.lam[:int(SMOOTHING_SPAN * X) + 1] ** 2
    sums = [smoothed_sum(squares, 1.0, scale).real for scale in (X / 4, X / 2, X)]
    slopes = [(sums[1] - sums[0]) / np.log(2), (sums[2] - sums[1]) / np.log(2)]
    return float(zeta_value(2).real * richardson(slopes, order=1))


def _check_twists(p: int, l1: int, l2: int, f: NewformTable, g: NewformTable) -> None:
    if gcd(l1, l2) != 1:
        raise ValidationError(f"l1={l1} and l2={l2} must be coprime")
    if gcd(l1 * l2, p * f.R * g.R) != 1:
        raise ValidationError(f"l1 l2 = {l1 * l2} must be coprime to p R R' = {p * f.R * g.R}")


def d_direct(f: NewformTable, g: NewformTable, s: complex, p: int, l1: int = 1, l2: int = 1,
             X: Optional[float] = None) -> SeriesValue:
    """sum over (n, p) = 1 of lambda_f(n l1) lambda_g(n l2) n^(-s), smoothed and extrapolated."""
    _check_twists(p, l1, l2, f, g)
    width = max(l1, l2)
    X = _default_scale(min(f.N, g.N) // width + 1, X)
    top = int(SMOOTHING_SPAN * X)
    f.require(top * l1)
    g.require(top * l2)
    n = np.arange(top + 1)
    coefficients = f.lam[n * l1] * g.lam[n * l2]
    coefficients[n % p == 0] = 0.0
    return _extrapolate(coefficients, s, X)


def d_assembled(f: NewformTable, g: NewformTable, s: complex, p: int, l1: int = 1, l2: int = 1,
                X: Optional[float] = None) -> SeriesValue:
    """
    A_l1(f, g; s) A_l2(g, f; s) L^(p l1 l2)(s, f x g) / zeta^(p l1 l2)(2s).

    The p l1 l2-removed ratio is the naive series divided by its local factors
    L_ell(s, f x g) / zeta_ell(2s) at ell | p l1 l2.
    """
    _check_twists(p, l1, l2, f, g)
    rs = rs_partial(f, g, s, X)
    zeta2 = zeta_value(2 * s)
    removed = 1.0 + 0j
    for ell in primefactors(p * l1 * l2):
        removed *= zeta_local(ell, 2 * s) / euler_factor_rs(f, g, ell, s)
    factor = A_l_closed(f, g, l1, s) * A_l_closed(g, f, l2, s) * removed / zeta2
    return SeriesValue(value=complex(factor * rs.value), delta=float(abs(factor) * rs.delta), X=rs.X)
