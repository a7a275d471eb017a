"""
Smooth weights of the approximate functional equations.

The product weight

    W(y) = (1/2 pi i) int G(u) e^(u^2) y^(-u) du/u,
    G(u) = L_inf(f, 1/2+u) L_inf(g, 1/2+u) / (L_inf(f, 1/2) L_inf(g, 1/2)),

is evaluated by the trapezoid rule on a vertical line. For y >= 1 the line is
Re u = 2; for y < 1 it is Re u = -1/2 plus the residue 1 at u = 0, which keeps
the integrand of size O(1) instead of y^(-2).

The single-twist weight uses G = L_inf ratio with no Gaussian kernel and is
the regularized incomplete gamma function V(y) = Q(k, 2 pi y).
"""

from typing import Tuple, Union

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.special import gamma, gammaincc, gammainccinv, zeta

from .gamma import GammaFactorSpec
from ..utils.errors import ValidationError
from ..utils.logger import get_logger

QUAD_STEP = 0.05
QUAD_HEIGHT = 12.0
RIGHT_LINE = 2.0
LEFT_LINE = -0.5

# Below this argument W(y) = 1 to within y^k
SMALL_Y = 1e-12
SPLINE_NODES_PER_UNIT = 256

# Single-AFE weights are cut where V drops below this value
SINGLE_WEIGHT_FLOOR = 1e-18


def _line_kernel(spec_f: GammaFactorSpec, spec_g: GammaFactorSpec, c: float,
                 step: float, height: float) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes u = c + it and values G(u) e^(u^2) / u times the trapezoid weight."""
    t = np.arange(-height, height + step / 2, step)
    u = c + 1j * t
    log_g = spec_f.log_ratio(u) + spec_g.log_ratio(u)
    kernel = np.exp(log_g + u * u) / u
    weights = np.full(t.size, step)
    weights[0] = weights[-1] = step / 2
    return u, kernel * weights / (2 * np.pi)


def _evaluate_lines(log_y: np.ndarray, spec_f: GammaFactorSpec, spec_g: GammaFactorSpec,
                    step: float, height: float) -> np.ndarray:
    out = np.empty(log_y.size)
    right = log_y >= 0
    for mask, c, residue in ((right, RIGHT_LINE, 0.0), (~right, LEFT_LINE, 1.0)):
        if not np.any(mask):
            continue
        u, kernel = _line_kernel(spec_f, spec_g, c, step, height)
        values = np.exp(-np.outer(log_y[mask], u)) @ kernel
        out[mask] = residue + values.real
    return out


def afe_weight(y: Union[float, np.ndarray], spec_f: GammaFactorSpec, spec_g: GammaFactorSpec,
               step: float = QUAD_STEP, height: float = QUAD_HEIGHT) -> Union[float, np.ndarray]:
    """
    Product weight W(y) by direct quadrature.

    Args:
        y: Positive argument(s)
        spec_f: Gamma factor of the first form
        spec_g: Gamma factor of the second form
        step: Trapezoid step in Im u
        height: Truncation |Im u| <= height

    Returns:
        W(y), same shape as y

    Raises:
        ValidationError: If some y <= 0
    """
    arr = np.atleast_1d(np.asarray(y, dtype=np.float64))
    if np.any(arr <= 0):
        raise ValidationError("afe_weight requires y > 0")
    values = _evaluate_lines(np.log(arr), spec_f, spec_g, step, height)
    return float(values[0]) if np.ndim(y) == 0 else values.reshape(np.shape(y))


def weight_bound(A: float, spec_f: GammaFactorSpec, spec_g: GammaFactorSpec) -> float:
    """B(A) with |W(y)| <= B(A) y^(-A) for every y > 0."""
    growth = (gamma(spec_f.kappa + A) * gamma(spec_g.kappa + A)
              / (gamma(spec_f.kappa) * gamma(spec_g.kappa)))
    return float((2 * np.pi) ** (-2 * A) * growth * np.exp(A * A) * np.sqrt(np.pi) / (2 * np.pi * A))


def product_tail_bound(M: int, Q: float, spec_f: GammaFactorSpec, spec_g: GammaFactorSpec) -> float:
    """
    Bound for both dual sums of the product AFE beyond mn > M.

    Uses |lambda_f(m) lambda_g(n)| summed over mn = k <= d_4(k) and the
    Rankin trick sum_{k>M} d_4(k) k^(-1/2-A) <= M^(3/4-A) zeta(5/4)^4.
    """
    best = np.inf
    for A in np.arange(1.0, 30.0, 0.25):
        bound = weight_bound(A, spec_f, spec_g) * (M / Q) ** (-A) * M ** 0.75 * zeta(1.25) ** 4
        best = min(best, bound)
    return float(2 * best)


class ProductWeight:
    """
    W(y) tabulated on a cubic spline in log y over [SMALL_Y, y_cutoff].

    W is 1 below SMALL_Y and treated as 0 above y_cutoff (the omitted mass is
    covered by product_tail_bound).
    """

    def __init__(self, spec_f: GammaFactorSpec, spec_g: GammaFactorSpec, y_cutoff: float,
                 step: float = QUAD_STEP, height: float = QUAD_HEIGHT):
        if y_cutoff <= 1:
            raise ValidationError(f"Product weight cutoff must exceed 1, got {y_cutoff}")
        self.spec_f = spec_f
        self.spec_g = spec_g
        self.y_cutoff = y_cutoff
        self.step = step
        self.height = height

        lo, hi = np.log(SMALL_Y), np.log(y_cutoff)
        count = int(np.ceil((hi - lo) * SPLINE_NODES_PER_UNIT)) + 1
        nodes = np.linspace(lo, hi, count)
        self._spline = CubicSpline(nodes, _evaluate_lines(nodes, spec_f, spec_g, step, height))
        get_logger().log_stage("product_weight", kappa_f=spec_f.kappa, kappa_g=spec_g.kappa,
                               y_cutoff=y_cutoff, nodes=count)

    def __call__(self, y: np.ndarray) -> np.ndarray:
        y = np.asarray(y, dtype=np.float64)
        out = np.zeros(y.shape)
        small = y < SMALL_Y
        inside = ~small & (y <= self.y_cutoff)
        out[small] = 1.0
        out[inside] = self._spline(np.log(y[inside]))
        return out


def single_weight(y: np.ndarray, spec: GammaFactorSpec) -> np.ndarray:
    """V(y) = Q(k, 2 pi y) = (1/2 pi i) int Gamma(k+u)/Gamma(k) (2 pi y)^(-u) du/u."""
    return gammaincc(spec.kappa, 2 * np.pi * np.asarray(y, dtype=np.float64))


def single_cutoff(scale: float, spec: GammaFactorSpec, multiplier: float = 1.0) -> int:
    """Smallest M with V(n/scale) <= SINGLE_WEIGHT_FLOOR for all n > M."""
    x_star = float(gammainccinv(spec.kappa, SINGLE_WEIGHT_FLOOR))
    return max(1, int(np.ceil(multiplier * scale * x_star / (2 * np.pi))))


def single_tail_bound(M: int, scale: float, spec: GammaFactorSpec) -> float:
    """
    Bound for sum_{n>M} |lambda(n)| n^(-1/2) V(n/scale).

    With |lambda(n)| n^(-1/2) <= d(n) n^(-1/2) <= 2 and V decreasing, the sum is
    at most 2 [V(M/scale) + int_M^inf V(t/scale) dt], and
    int_x^inf Q(k, u) du = k Q(k+1, x) - x Q(k, x).
    """
    k = spec.kappa
    x = 2 * np.pi * M / scale
    integral = k * gammaincc(k + 1, x) - x * gammaincc(k, x)
    return float(2 * (gammaincc(k, x) + scale / (2 * np.pi) * max(integral, 0.0)))
