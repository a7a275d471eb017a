"""Galois-orbit moments, trace sums and the congruence sums behind them."""

from .congruence import (
    CongruenceSumSpec,
    CongruenceSumValue,
    XiClass,
    class_totals,
    congruence_sum,
    diagonal_sum,
    error_term_profile,
    moment_by_congruence,
    xi_decomposition,
)
from .orbit import (
    MomentReport,
    MomentSeries,
    ProxyPeriod,
    TraceReport,
    moment_series,
    orbit_characters,
    orbit_moment,
    proxy_period,
    trace_exponent_bound,
    trace_sum,
)

__all__ = [
    "CongruenceSumSpec",
    "CongruenceSumValue",
    "MomentReport",
    "MomentSeries",
    "ProxyPeriod",
    "TraceReport",
    "XiClass",
    "class_totals",
    "congruence_sum",
    "diagonal_sum",
    "error_term_profile",
    "moment_by_congruence",
    "moment_series",
    "orbit_characters",
    "orbit_moment",
    "proxy_period",
    "trace_exponent_bound",
    "trace_sum",
]
