"""Rankin-Selberg series, local factors A_l(f, g; s) and the moment main term."""

from .local_factors import (
    DEGENERATE,
    GENERIC,
    A_l_brute,
    A_l_closed,
    LocalFactorValue,
    c_factor,
    euler_factor_rs,
    euler_factor_sym2,
    local_factor_A,
    local_factor_A_values,
    zeta_local,
)
from .main_term import FITTED, MainTermResult, MainTermSpec, PolynomialTerm, leading_coefficient, main_term
from .series import (
    SeriesValue,
    Sym2Residue,
    d_assembled,
    d_direct,
    ramified_factor,
    rs_partial,
    square_argument_series,
    sym2_residue,
    sym2_residue_by_slope,
    zeta_value,
)

__all__ = [
    "A_l_brute",
    "A_l_closed",
    "DEGENERATE",
    "FITTED",
    "GENERIC",
    "LocalFactorValue",
    "MainTermResult",
    "MainTermSpec",
    "PolynomialTerm",
    "SeriesValue",
    "Sym2Residue",
    "c_factor",
    "d_assembled",
    "d_direct",
    "euler_factor_rs",
    "euler_factor_sym2",
    "leading_coefficient",
    "local_factor_A",
    "local_factor_A_values",
    "main_term",
    "ramified_factor",
    "rs_partial",
    "square_argument_series",
    "sym2_residue",
    "sym2_residue_by_slope",
    "zeta_local",
    "zeta_value",
]
