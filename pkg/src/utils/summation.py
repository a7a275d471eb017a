"""
Compensated summation for long floating-point reductions.

Sums are reduced pairwise with error-free two_sum transformations; the rounding
errors of every level are collected and added back at the end. The reduction
order depends only on the input length, so results are bit-reproducible.
"""

from typing import Iterable, Tuple, Union

import numpy as np

Number = Union[float, complex]


def two_sum(a: np.ndarray, b: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Error-free transformation of a + b.

    Returns:
        (s, e) with s = fl(a + b) and a + b = s + e exactly
    """
    s = a + b
    bp = s - a
    ap = s - bp
    return s, (a - ap) + (b - bp)


def _cascade(values: np.ndarray) -> float:
    x = np.ascontiguousarray(values, dtype=np.float64).ravel()
    if x.size == 0:
        return 0.0

    errors = []
    while x.size > 1:
        if x.size % 2:
            x = np.append(x, 0.0)
        x, e = two_sum(x[0::2], x[1::2])
        errors.append(e)

    correction = 0.0
    for e in reversed(errors):
        correction += float(np.sum(e))
    return float(x[0] + correction)


def compensated_sum(values: Union[np.ndarray, Iterable[Number]]) -> Number:
    """
    Sum real or complex values with error recycling.

    Args:
        values: Array or iterable of numbers

    Returns:
        float for real input, complex for complex input
    """
    x = np.asarray(values if isinstance(values, np.ndarray) else list(values))
    if np.iscomplexobj(x):
        return complex(_cascade(x.real), _cascade(x.imag))
    return _cascade(x)


def compensated_dot(a: np.ndarray, b: np.ndarray) -> Number:
    """Compensated sum of the elementwise products a * b."""
    return compensated_sum(np.asarray(a) * np.asarray(b))


def absolute_mass(values: np.ndarray) -> float:
    """Sum of absolute values, the scale used for roundoff budgets."""
    return float(np.sum(np.abs(values)))


# Roundoff budget per summed term, relative to the absolute mass of the sum
ROUNDOFF_FACTOR = 64 * np.finfo(np.float64).eps
