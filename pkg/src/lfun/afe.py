"""
Approximate functional equations for twisted central values.

Single twist, for even primitive chi of conductor q and (q, R) = 1:

    L(1/2, f x chi) = sum lambda(n) chi(n) n^(-1/2) V(n / (A c))
                      + eps(f x chi) sum lambda(n) chi~(n) n^(-1/2) V(n c / A),

with A = q sqrt(R), any split c > 0, and eps(f x chi) = eps(f) chi(R) G(chi)^2 / q.

Product of two twists:

    L(1/2, f x chi) conj(L(1/2, g x chi)) = S + eps(f, g) conj(S),
    S = sum_{m,n} lambda_f(m) lambda_g(n) chi(m) chi~(n) (mn)^(-1/2) W(mn / Q),

with Q = q^2 sqrt(R R') and eps(f, g) = eps(f) eps(g) chi(R) chi~(R').
"""

from dataclasses import dataclass, field, asdict
from math import gcd, isqrt
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .gamma import gamma_spec
from .weights import (
    QUAD_HEIGHT,
    QUAD_STEP,
    ProductWeight,
    product_tail_bound,
    single_cutoff,
    single_tail_bound,
    single_weight,
)
from ..characters.tables import (
    CharacterTable,
    DirichletCharacter,
    evaluate_complex,
    gauss_sum,
    gauss_sums_all,
    wild_characters,
)
from ..newforms.table import NewformTable
from ..utils.errors import NumericalContractError, ValidationError
from ..utils.logger import get_logger
from ..utils.parallel import ordered_map
from ..utils.summation import ROUNDOFF_FACTOR, absolute_mass, compensated_sum

METHOD_SINGLE = "single_afe"
METHOD_PRODUCT = "product_afe"
METHOD_SMOOTHED = "smoothed_series"

# Default product-weight cutoff y_c: the sum runs over mn <= y_c Q
PRODUCT_Y_CUTOFF = 2000.0

ROOT_NUMBER_TOLERANCE = 1e-8


@dataclass
class LValueRecord:
    """A computed L-value with its absolute error bound."""
    value: complex
    method: str
    terms_used: int
    err_estimate: float
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["value"] = {"re": self.value.real, "im": self.value.imag}
        return data


def _check_coprime(table: NewformTable, q: int) -> None:
    if gcd(table.R, q) != 1:
        raise ValidationError(f"Form {table.label}: level {table.R} and modulus {q} must be coprime")


def _check_root_number(eps: complex, context: str) -> complex:
    deviation = abs(abs(eps) - 1.0)
    passed = deviation <= ROOT_NUMBER_TOLERANCE
    get_logger().log_contract("root_number_modulus", passed, f"||eps|-1|={deviation:.2e}", context)
    if not passed:
        raise NumericalContractError("root_number_modulus", f"|eps| - 1 = {deviation:.3e} at {context}")
    return eps


def root_number(f: NewformTable, chi: DirichletCharacter, gauss: Optional[complex] = None) -> complex:
    """
    eps(f x chi) = eps(f) chi(R) G(chi)^2 / q, checked to have modulus 1.

    Raises:
        NumericalContractError: If |eps| deviates from 1 by more than 1e-8
    """
    q = chi.modulus
    _check_coprime(f, q)
    if gauss is None:
        gauss = gauss_sum(chi)
    eps = f.eps_f * evaluate_complex(chi, f.R) * gauss * gauss / q
    return _check_root_number(eps, f"{f.label} mod {q} j={chi.j}")


def _single_terms(f: NewformTable, M: int, scale: float) -> Tuple[np.ndarray, np.ndarray]:
    n = np.arange(1, M + 1)
    return n, f.lam[1:M + 1] / np.sqrt(n) * single_weight(n / scale, gamma_spec(f))


def _single_setup(f: NewformTable, q: int, split: float, cutoff_multiplier: float):
    if split <= 0:
        raise ValidationError(f"AFE split must be positive, got {split}")
    _check_coprime(f, q)
    spec = gamma_spec(f)
    A = q * np.sqrt(f.R)
    scale1, scale2 = A * split, A / split
    M1 = single_cutoff(scale1, spec, cutoff_multiplier)
    M2 = single_cutoff(scale2, spec, cutoff_multiplier)
    f.require(max(M1, M2))
    tail = single_tail_bound(M1, scale1, spec) + single_tail_bound(M2, scale2, spec)
    return scale1, scale2, M1, M2, tail


def lvalue_single(f: NewformTable, chi: DirichletCharacter, split: float = 1.0,
                  cutoff_multiplier: float = 1.0) -> LValueRecord:
    """
    L(1/2, f x chi) by the single-twist approximate functional equation.

    Args:
        f: Newform table
        chi: Even primitive character with modulus coprime to the level
        split: Balance c between the two sums; the value is independent of it
        cutoff_multiplier: Scales the truncation points

    Returns:
        LValueRecord with method single_afe

    Raises:
        InsufficientCoefficientsError: If the table is shorter than the cutoff
    """
    q = chi.modulus
    scale1, scale2, M1, M2, tail = _single_setup(f, q, split, cutoff_multiplier)
    values = chi.values()

    n1, w1 = _single_terms(f, M1, scale1)
    n2, w2 = _single_terms(f, M2, scale2)
    t1 = w1 * values[n1 % q]
    t2 = w2 * np.conj(values[n2 % q])
    eps = root_number(f, chi)

    value = complex(compensated_sum(t1)) + eps * complex(compensated_sum(t2))
    err = tail + ROUNDOFF_FACTOR * (absolute_mass(t1) + absolute_mass(t2))
    context = f"{f.label} mod {q}"
    get_logger().log_lvalue(value, METHOD_SINGLE, M1 + M2, err, context)
    return LValueRecord(value=value, method=METHOD_SINGLE, terms_used=M1 + M2, err_estimate=err,
                        details={"q": q, "j": chi.j, "split": split, "root_number": [eps.real, eps.imag]})


def orbit_lvalues(f: NewformTable, table: CharacterTable,
                  characters: Optional[Sequence[DirichletCharacter]] = None,
                  split: float = 1.0, cutoff_multiplier: float = 1.0) -> List[LValueRecord]:
    """
    Single-AFE values for many characters of one modulus at once.

    The weighted coefficients are binned by discrete-log class; for chi_j the
    first sum is then a DFT of the bins at frequency j.

    Args:
        f: Newform table
        table: Character table modulo q
        characters: Characters of this table (defaults to all wild characters)
        split: AFE split c
        cutoff_multiplier: Scales the truncation points

    Returns:
        One LValueRecord per character, in input order
    """
    if characters is None:
        characters = wild_characters(table)
    for chi in characters:
        if chi.table is not table:
            raise ValidationError(f"Character j={chi.j} does not belong to the table modulo {table.q}")
    q, phi = table.q, table.phi
    scale1, scale2, M1, M2, tail = _single_setup(f, q, split, cutoff_multiplier)
    get_logger().log_stage("orbit", f"{f.label} mod {q}", characters=len(characters), M1=M1, M2=M2)

    sums = []
    masses = []
    for M, scale in ((M1, scale1), (M2, scale2)):
        n, w = _single_terms(f, M, scale)
        dl = table.dlog[n % q]
        unit = dl >= 0
        sums.append(np.bincount(dl[unit], weights=w[unit], minlength=phi))
        masses.append(absolute_mass(w[unit]))
    first = phi * np.fft.ifft(sums[0])
    second = np.fft.fft(sums[1])

    gauss = gauss_sums_all(table)
    log_r = table.dlog[f.R % q] if q > 1 else 0
    err = tail + ROUNDOFF_FACTOR * (masses[0] + masses[1])

    records = []
    for chi in characters:
        j = chi.j
        chi_r = np.exp(2j * np.pi * (j * log_r % phi) / phi)
        eps = _check_root_number(f.eps_f * chi_r * gauss[j] ** 2 / q, f"{f.label} mod {q} j={j}")
        value = complex(first[j] + eps * second[j])
        records.append(LValueRecord(value=value, method=METHOD_SINGLE, terms_used=M1 + M2,
                                    err_estimate=err,
                                    details={"q": q, "j": j, "split": split,
                                             "root_number": [eps.real, eps.imag]}))
    return records


def _hyperbola_sum(a: np.ndarray, b: np.ndarray, w: np.ndarray, M: int) -> Tuple[complex, float]:
    """
    sum over mn <= M of a[m] b[n] w[mn], with the absolute mass of the terms.

    Pairs with m <= sqrt(M) are summed along strides of w in n, the rest along
    strides in m with n <= sqrt(M).
    """
    r = isqrt(M)
    abs_a, abs_b, abs_w = np.abs(a), np.abs(b), np.abs(w)
    parts = []
    mass = []
    for m in range(1, r + 1):
        L = M // m
        wm = w[m:m * L + 1:m]
        parts.append(a[m] * np.dot(b[1:L + 1], wm))
        mass.append(abs_a[m] * np.dot(abs_b[1:L + 1], abs_w[m:m * L + 1:m]))
    for n in range(1, r + 1):
        top = M // n
        if top <= r:
            continue
        wn = w[(r + 1) * n:top * n + 1:n]
        parts.append(b[n] * np.dot(a[r + 1:top + 1], wn))
        mass.append(abs_b[n] * np.dot(abs_a[r + 1:top + 1], abs_w[(r + 1) * n:top * n + 1:n]))
    return complex(compensated_sum(np.array(parts))), float(compensated_sum(np.array(mass)))


def product_conductor(f: NewformTable, g: NewformTable, q: int) -> float:
    """Q = q^2 sqrt(R R')."""
    return q * q * np.sqrt(f.R * g.R)


def product_weight_for(f: NewformTable, g: NewformTable, y_cutoff: float = PRODUCT_Y_CUTOFF,
                       step: float = QUAD_STEP, height: float = QUAD_HEIGHT) -> ProductWeight:
    return ProductWeight(gamma_spec(f), gamma_spec(g), y_cutoff, step, height)


def lvalue_pair_product(f: NewformTable, g: NewformTable, chi: DirichletCharacter,
                        weight: Optional[ProductWeight] = None,
                        y_cutoff: float = PRODUCT_Y_CUTOFF) -> LValueRecord:
    """
    L(1/2, f x chi) conj(L(1/2, g x chi)) from the double-sum functional equation.

    Args:
        f: First form
        g: Second form
        chi: Even primitive character with modulus coprime to R R'
        weight: Prebuilt product weight for (f, g), reused across an orbit
        y_cutoff: Weight cutoff when no weight is given

    Returns:
        LValueRecord with method product_afe

    Raises:
        InsufficientCoefficientsError: If either table is shorter than y_c Q
    """
    q = chi.modulus
    _check_coprime(f, q)
    _check_coprime(g, q)
    if weight is None:
        weight = product_weight_for(f, g, y_cutoff)
    elif (weight.spec_f.two_kappa, weight.spec_g.two_kappa) != (f.two_kappa, g.two_kappa):
        raise ValidationError("Product weight was built for different weights")

    Q = product_conductor(f, g, q)
    M = int(np.floor(weight.y_cutoff * Q))
    f.require(M)
    g.require(M)

    n = np.arange(M + 1)
    values = chi.values()[n % q]
    root_n = np.sqrt(np.maximum(n, 1))
    a = f.lam[:M + 1] * values / root_n
    b = g.lam[:M + 1] * np.conj(values) / root_n
    w = weight(np.maximum(n, 1) / Q)
    w[0] = 0.0

    S, mass = _hyperbola_sum(a, b, w, M)
    eps = (f.eps_f * g.eps_f * evaluate_complex(chi, f.R)
           * np.conj(evaluate_complex(chi, g.R)))
    value = S + eps * np.conj(S)
    err = product_tail_bound(M, Q, weight.spec_f, weight.spec_g) + 2 * ROUNDOFF_FACTOR * mass

    context = f"{f.label}x{g.label} mod {q}"
    get_logger().log_lvalue(complex(value), METHOD_PRODUCT, M, err, context)
    return LValueRecord(value=complex(value), method=METHOD_PRODUCT, terms_used=M, err_estimate=err,
                        details={"q": q, "j": chi.j, "Q": Q, "y_cutoff": weight.y_cutoff,
                                 "root_number": [complex(eps).real, complex(eps).imag]})


def orbit_pair_products(f: NewformTable, g: NewformTable, characters: Sequence[DirichletCharacter],
                        y_cutoff: float = PRODUCT_Y_CUTOFF, threads: Optional[int] = None) -> List[LValueRecord]:
    """lvalue_pair_product over a set of characters sharing one weight, in input order."""
    weight = product_weight_for(f, g, y_cutoff)
    return ordered_map(lambda chi: lvalue_pair_product(f, g, chi, weight), characters,
                       threads=threads, chunk_size=1)
