"""
Gamma factors of holomorphic newforms.

Only ratios L_inf(s + u) / L_inf(s) enter the weight functions, so the
constants of Gamma_C(s) = 2 (2 pi)^(-s) Gamma(s) cancel.

log Gamma itself comes from scipy.special.loggamma, which evaluates the principal
branch with absolute error below 1e-12 for Re z >= 1/2 and uses reflection to the
left of that line.
"""

from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.special import loggamma

from ..newforms.table import NewformTable
from ..utils.errors import ValidationError


def _is_pole(z: complex) -> bool:
    return z.imag == 0 and z.real <= 0 and float(z.real).is_integer()


def complex_log_gamma(z: Union[complex, float]) -> complex:
    """
    Principal branch of log Gamma(z), evaluated by scipy.special.loggamma.

    Absolute error stays below 1e-12 on Re z >= 1/2 (the region the weights use).

    Args:
        z: Point off the non-positive integers

    Returns:
        log Gamma(z), continuous away from the negative real axis

    Raises:
        ValidationError: At a pole of Gamma
    """
    z = complex(z)
    if _is_pole(z):
        raise ValidationError(f"log Gamma has a pole at z={z.real:g}")
    return complex(loggamma(z))


def complex_log_gamma_array(z: np.ndarray) -> np.ndarray:
    """Vectorized complex_log_gamma."""
    z = np.asarray(z, dtype=complex)
    poles = (z.imag == 0) & (z.real <= 0) & (np.floor(z.real) == z.real)
    if np.any(poles):
        raise ValidationError(f"log Gamma has a pole at z={z[poles][0].real:g}")
    return loggamma(z)


@dataclass(frozen=True)
class GammaFactorSpec:
    """L_inf(f, +-, s) = Gamma_C(s + shift) with shift = (2k - 1)/2."""
    two_kappa: int
    parity: int = 1

    def __post_init__(self):
        if self.two_kappa < 1:
            raise ValidationError(f"Weight must be positive, got {self.two_kappa}")
        if self.parity not in (1, -1):
            raise ValidationError(f"Parity must be +1 or -1, got {self.parity}")

    @property
    def shift(self) -> float:
        return (self.two_kappa - 1) / 2

    @property
    def kappa(self) -> float:
        """Gamma argument at the central point, 1/2 + shift."""
        return self.two_kappa / 2

    def log_ratio(self, u: np.ndarray, s: float = 0.5) -> np.ndarray:
        """
        log of L_inf(s + u) / L_inf(s) = -u log 2 pi + log Gamma(s+u+shift) - log Gamma(s+shift).

        Requires Re(s + u + shift) > 0.
        """
        u = np.asarray(u, dtype=complex)
        base = s + self.shift
        return (-u * np.log(2 * np.pi) + complex_log_gamma_array(base + u)
                - complex_log_gamma(base))


def gamma_spec(table: NewformTable, parity: int = 1) -> GammaFactorSpec:
    return GammaFactorSpec(two_kappa=table.two_kappa, parity=parity)
