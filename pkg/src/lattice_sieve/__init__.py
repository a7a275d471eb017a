"""Congruence lattices, point counts, Kloosterman sums and bilinear bounds."""

from .kloosterman import (
    BilinearReport,
    bilinear_B,
    bm_envelope,
    kloosterman,
    kloosterman_row,
    weil_bound,
    weil_bound_exhaustive,
)
from .lattice import (
    BallCount,
    BoxCount,
    CongruenceLattice,
    ReducedBasis,
    SieveCheck,
    ball_count,
    box_count,
    box_count_samples,
    gauss_reduce,
    shortest_vector_exhaustive,
    sieve_condition_check,
    small_vector_violations,
    sublattice_covolume,
)

__all__ = [
    "BallCount",
    "BilinearReport",
    "BoxCount",
    "CongruenceLattice",
    "ReducedBasis",
    "SieveCheck",
    "ball_count",
    "bilinear_B",
    "bm_envelope",
    "box_count",
    "box_count_samples",
    "gauss_reduce",
    "kloosterman",
    "kloosterman_row",
    "shortest_vector_exhaustive",
    "sieve_condition_check",
    "small_vector_violations",
    "sublattice_covolume",
    "weil_bound",
    "weil_bound_exhaustive",
]
