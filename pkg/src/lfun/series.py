"""
Smoothed Dirichlet series at the central point.

S(X) = sum lambda_f(n) n^(-1/2) e^(-n/X) equals L(1/2, f) up to terms
c_k X^(-k) coming from the poles of Gamma(w) at w = -k. Two Richardson steps
over X, 2X, 4X remove the first two of them. This is independent of the
functional equation and serves as an oracle for the approximate functional
equation at the trivial character.
"""

from typing import Optional

import numpy as np

from .afe import METHOD_SMOOTHED, LValueRecord
from ..newforms.table import NewformTable
from ..utils.errors import ValidationError
from ..utils.logger import get_logger
from ..utils.summation import ROUNDOFF_FACTOR, absolute_mass, compensated_sum

# Terms beyond n = SMOOTHING_SPAN * X carry weight below e^(-40)
SMOOTHING_SPAN = 40


def smoothed_sum(coefficients: np.ndarray, s: float, X: float) -> complex:
    """sum_{1 <= n <= 40X} c_n n^(-s) e^(-n/X) for a coefficient array indexed from 0."""
    top = int(SMOOTHING_SPAN * X)
    if top >= coefficients.size:
        raise ValidationError(f"Smoothed sum at X={X:g} needs {top} coefficients, have {coefficients.size - 1}")
    n = np.arange(1, top + 1, dtype=np.float64)
    return compensated_sum(coefficients[1:top + 1] * n ** (-s) * np.exp(-n / X))


def richardson(values, ratio: float = 2.0, order: int = 1) -> float:
    """Combine S(X), S(rX), ... to cancel X^(-1), ..., X^(-order)."""
    level = list(values)
    for k in range(1, order + 1):
        factor = ratio ** k
        level = [(factor * level[i + 1] - level[i]) / (factor - 1) for i in range(len(level) - 1)]
    return level[-1]


def smoothed_central_value(f: NewformTable, X: Optional[float] = None) -> LValueRecord:
    """
    L(1/2, f) from the smoothed Dirichlet series with Richardson extrapolation.

    Args:
        f: Newform table
        X: Smoothing scale; defaults to the largest scale the table supports

    Returns:
        LValueRecord with the extrapolated value; err_estimate is the change
        of the extrapolant between the last two levels plus roundoff

    Raises:
        InsufficientCoefficientsError: If the table cannot reach 4X
    """
    if X is None:
        X = (f.N - 1) / (4 * SMOOTHING_SPAN)
    if X < 1:
        raise ValidationError(f"Smoothing scale must be at least 1, got {X}")
    f.require(int(4 * SMOOTHING_SPAN * X) + 1)

    sums = [float(smoothed_sum(f.lam, 0.5, scale)) for scale in (X, 2 * X, 4 * X)]
    first = [2 * sums[1] - sums[0], 2 * sums[2] - sums[1]]
    value = richardson(sums, order=2)
    top = int(4 * SMOOTHING_SPAN * X)
    n = np.arange(1, top + 1)
    err = abs(value - first[1]) + ROUNDOFF_FACTOR * absolute_mass(f.lam[1:top + 1] / np.sqrt(n))
    get_logger().log_lvalue(complex(value), METHOD_SMOOTHED, top, err, f.label)
    return LValueRecord(value=complex(value), method=METHOD_SMOOTHED, terms_used=top, err_estimate=err,
                        details={"X": X, "levels": sums})
