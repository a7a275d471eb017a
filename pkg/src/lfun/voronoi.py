"""
Voronoi summation for additively twisted coefficient sums.

For (aR, q) = 1 and a window W supported in (1, 2),

    sum lambda(n) e(an/q) W(n/N)
        = eta N / (q sqrt R) sum lambda(n) e(-conj(aR) n / q) W~(N n / (q^2 R)),

    W~(y) = 2 pi i^(2k) int W(x) J_(2k-1)(4 pi sqrt(xy)) dx,

where eta = eps(f) i^(-2k) is the Atkin-Lehner eigenvalue. Both sides are
summed directly and compared.
"""

from dataclasses import dataclass
from math import gcd
from typing import Callable, Optional

import numpy as np
from scipy.special import jv

from ..newforms.table import NewformTable
from ..utils.errors import InsufficientCoefficientsError, ValidationError
from ..utils.logger import get_logger
from ..utils.summation import compensated_sum

PANELS = 64
NODES_PER_PANEL = 16
BLOCK = 256
# Stop once two consecutive blocks contribute less than this, relative to the left side
CONVERGENCE = 1e-13

Window = Callable[[np.ndarray], np.ndarray]


def bump_window(x: np.ndarray) -> np.ndarray:
    """exp(-1/((x-1)(2-x))) on (1, 2), zero elsewhere."""
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros(x.shape)
    inside = (x > 1) & (x < 2)
    out[inside] = np.exp(-1.0 / ((x[inside] - 1) * (2 - x[inside])))
    return out


def _quadrature() -> tuple:
    nodes, weights = np.polynomial.legendre.leggauss(NODES_PER_PANEL)
    width = 1.0 / PANELS
    left = 1.0 + width * np.arange(PANELS)
    x = (left[:, None] + width * (nodes[None, :] + 1) / 2).ravel()
    w = np.tile(weights * width / 2, PANELS)
    return x, w


class BesselTransform:
    """W~(y) by composite Gauss-Legendre quadrature on [1, 2]."""

    def __init__(self, two_kappa: int, window: Window = bump_window):
        self.two_kappa = two_kappa
        x, w = _quadrature()
        self._sqrt_x = np.sqrt(x)
        self._weights = w * window(x)
        self._phase = 1j ** two_kappa

    def __call__(self, y: np.ndarray) -> np.ndarray:
        y = np.atleast_1d(np.asarray(y, dtype=np.float64))
        argument = 4 * np.pi * np.outer(np.sqrt(y), self._sqrt_x)
        return 2 * np.pi * self._phase * (jv(self.two_kappa - 1, argument) @ self._weights)


@dataclass
class VoronoiResult:
    lhs: complex
    rhs: complex
    discrepancy: float
    terms_used: int

    def to_dict(self) -> dict:
        return {"lhs": [self.lhs.real, self.lhs.imag], "rhs": [self.rhs.real, self.rhs.imag],
                "discrepancy": self.discrepancy, "terms_used": self.terms_used}


def _additive(n: np.ndarray, a: int, q: int) -> np.ndarray:
    return np.exp(2j * np.pi * ((a * n) % q) / q)


def voronoi_check(f: NewformTable, a: int, q: int, N: int,
                  window: Window = bump_window, max_terms: Optional[int] = None) -> VoronoiResult:
    """
    Evaluate both sides of the Voronoi formula.

    Args:
        f: Newform table
        a: Numerator with gcd(aR, q) = 1
        q: Modulus
        N: Scale of the window W(n/N)
        window: Smooth function supported in (1, 2)
        max_terms: Largest dual index to try (defaults to the table length)

    Returns:
        VoronoiResult with both sides and |lhs - rhs|

    Raises:
        ValidationError: If gcd(aR, q) != 1 or a = 0 mod q
        InsufficientCoefficientsError: If the dual sum does not converge within the table
    """
    if q < 1 or N < 1:
        raise ValidationError(f"Voronoi check needs q >= 1 and N >= 1, got q={q}, N={N}")
    if (q > 1 and a % q == 0) or gcd(a * f.R, q) != 1:
        raise ValidationError(f"Voronoi check needs gcd(aR, q) = 1, got a={a}, R={f.R}, q={q}")
    f.require(2 * N)
    logger = get_logger()
    logger.log_stage("voronoi", f.label, a=a, q=q, N=N)

    n = np.arange(N + 1, 2 * N + 1)
    lhs_terms = f.lam[n] * _additive(n, a, q) * window(n / N)
    lhs = complex(compensated_sum(lhs_terms))
    scale = max(float(np.sum(np.abs(lhs_terms))), 1e-300)

    transform = BesselTransform(f.two_kappa, window)
    dual = (-pow(a * f.R, -1, q)) % q if q > 1 else 0
    eta = f.eps_f * (1j ** (-f.two_kappa))
    prefactor = eta * N / (q * np.sqrt(f.R))

    limit = f.N if max_terms is None else min(max_terms, f.N)
    parts = []
    quiet = 0
    start = 1
    while start <= limit:
        m = np.arange(start, min(start + BLOCK, limit + 1))
        terms = f.lam[m] * _additive(m, dual, q) * transform(N * m / (q * q * f.R))
        parts.append(compensated_sum(terms))
        block_mass = abs(prefactor) * float(np.sum(np.abs(terms)))
        # J_(2k-1) is tiny before its turning point, so small blocks there prove nothing
        past_turning = 4 * np.pi * np.sqrt(N * start / (q * q * f.R)) > 2 * f.two_kappa + 10
        quiet = quiet + 1 if past_turning and block_mass < CONVERGENCE * scale else 0
        start += BLOCK
        if quiet >= 2:
            break
    else:
        raise InsufficientCoefficientsError(f.label, f.N, start + BLOCK)

    rhs = complex(prefactor * compensated_sum(np.array(parts)))
    result = VoronoiResult(lhs=lhs, rhs=rhs, discrepancy=abs(lhs - rhs), terms_used=start - 1)
    logger.debug(f"Voronoi lhs={lhs:.12g} rhs={rhs:.12g} discrepancy={result.discrepancy:.2e}", f.label)
    return result


def bessel_decay_constant(f: NewformTable, A: float = 3.0, window: Window = bump_window,
                          y_max: float = 100.0, samples: int = 400) -> float:
    """max over y in [1, y_max] of |W~(y)| (1 + y)^A."""
    y = np.geomspace(1.0, y_max, samples)
    return float(np.max(np.abs(BesselTransform(f.two_kappa, window)(y)) * (1 + y) ** A))
