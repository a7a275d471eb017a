"""
Numerical recognition of rationals and real cyclotomic numbers.

A verdict is one-sided: "recognized" means a bounded-height candidate fits
the input and survives a re-check; "rejected" means no relation was found at
the stated height, residual and precision.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import mpmath
from sympy import totient

from ..utils.errors import ValidationError
from ..utils.logger import get_logger
from .lll import MAX_DIMENSION, find_integer_relation

RESIDUAL_FACTOR = 1e-8

# 1 / (D^2 residual) must exceed this for a convergent p/D to count as isolated
CONVERGENT_QUALITY = 1e3

IMAGINARY_TOLERANCE = 1e-6

DEFAULT_FLOAT_PRECISION = 1e-14

# Relation searches run at 0.01 / precision and at this factor smaller
SCALE_RATIO = 100

Real = Union[float, int, mpmath.mpf]

RECOGNIZED = "recognized"
REJECTED = "rejected"


@dataclass
class RecognitionResult:
    """
    Outcome of a recognition attempt.

    The candidate is (c_0 + c_1 z_1 + ... + c_{d-1} z_{d-1}) / denominator with
    z_k = 2 cos(2 pi k / m); for kind "rational" only c_0 is present.
    """
    status: str
    kind: str
    m: int
    denominator: Optional[int]
    coefficients: Tuple[int, ...]
    residual: Optional[float]
    height: Optional[int]
    precision: float
    detail: str = ""
    ladder: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def recognized(self) -> bool:
        return self.status == RECOGNIZED

    @property
    def is_rational(self) -> bool:
        """True when the candidate lies in the trivial subspace."""
        return self.recognized and not any(self.coefficients[1:])

    @property
    def fraction(self) -> Optional[Fraction]:
        if not self.is_rational:
            return None
        return Fraction(self.coefficients[0], self.denominator)

    def value(self) -> float:
        if not self.recognized:
            raise ValidationError("Only recognized candidates have a value")
        return evaluate_real_cyclotomic(self.coefficients, self.denominator, self.m)

    def to_dict(self) -> Dict[str, Any]:
        return {"status": self.status, "kind": self.kind, "m": self.m,
                "denominator": self.denominator, "coefficients": list(self.coefficients),
                "residual": self.residual, "height": self.height, "precision": self.precision,
                "detail": self.detail, "ladder": self.ladder}


def real_cyclotomic_degree(m: int) -> int:
    """[Q(mu_m)^+ : Q]."""
    if m < 1:
        raise ValidationError(f"Cyclotomic order must be positive, got {m}")
    if m <= 2:
        return 1
    return int(totient(m)) // 2


def real_cyclotomic_basis(m: int) -> List[mpmath.mpf]:
    """1, 2 cos(2 pi k / m) for k < degree, at the current mpmath precision."""
    degree = real_cyclotomic_degree(m)
    return [mpmath.mpf(1)] + [2 * mpmath.cos(2 * mpmath.pi * k / m) for k in range(1, degree)]


def evaluate_real_cyclotomic(coefficients: Sequence[int], denominator: int, m: int,
                             conjugate: int = 1) -> float:
    """Value of the candidate under zeta_m -> zeta_m^conjugate."""
    total = float(coefficients[0])
    for k, c in enumerate(coefficients[1:], start=1):
        total += c * 2 * math.cos(2 * math.pi * k * conjugate / m)
    return total / denominator


def galois_conjugates(result: RecognitionResult) -> List[float]:
    """
    Images of a recognized element under Gal(Q(mu_m)^+ / Q), one per class a mod m up to sign.
    """
    if not result.recognized:
        raise ValidationError("Galois conjugates need a recognized candidate")
    m = result.m
    classes = [a for a in range(1, m // 2 + 1) if math.gcd(a, m) == 1] if m > 2 else [1]
    return [evaluate_real_cyclotomic(result.coefficients, result.denominator, m, a) for a in classes]


def exact_trace(result: RecognitionResult) -> Fraction:
    """Tr from Q(mu_m)^+ to Q of a recognized candidate, as an exact rational."""
    if not result.recognized:
        raise ValidationError("Traces need a recognized candidate")
    conjugate_classes = len(galois_conjugates(result))
    total = Fraction(conjugate_classes * result.coefficients[0])
    for k, c in enumerate(result.coefficients[1:], start=1):
        # traces of 2 cos(2 pi k / m) are rational integers
        trace_k = sum(2 * math.cos(2 * math.pi * k * a / result.m)
                      for a in range(1, result.m // 2 + 1) if math.gcd(a, result.m) == 1)
        total += c * round(trace_k)
    return total / result.denominator


def _default_precision(x: Real) -> float:
    if isinstance(x, mpmath.mpf):
        return float(mpmath.mpf(2) ** (-mpmath.mp.prec)) * 1e3
    return DEFAULT_FLOAT_PRECISION


def _rejected(kind: str, m: int, height_bound: int, precision: float, reason: str,
              ladder: List[Dict[str, Any]], residual: Optional[float] = None) -> RecognitionResult:
    detail = (f"no relation found at (height {height_bound}, residual "
              f"{RESIDUAL_FACTOR:g} x scale, precision {precision:.1e}): {reason}")
    return RecognitionResult(status=REJECTED, kind=kind, m=m, denominator=None, coefficients=(),
                             residual=residual, height=None, precision=precision,
                             detail=detail, ladder=ladder)


def _search(x: mpmath.mpf, basis: List[mpmath.mpf], scale: int,
            height_bound: int) -> Optional[Tuple[int, Tuple[int, ...]]]:
    for relation in find_integer_relation([x] + basis, scale, height_bound):
        a0 = relation[0]
        if a0 == 0:
            continue
        # a0 x + sum a_k z_k = 0
        coefficients = tuple(-c for c in relation[1:])
        common = math.gcd(a0, *coefficients)
        return a0 // common, tuple(c // common for c in coefficients)
    return None


def recognize_real_cyclotomic(x: Real, m: int, height_bound: int = 1000,
                              precision: Optional[float] = None) -> RecognitionResult:
    """
    Find x as a bounded-height element of Q(mu_m)^+ by relation-lattice reduction.

    The search runs at two scales derived from the precision; only a candidate
    found identically at both, with residual <= 1e-8 max(1, |x|) and height
    <= height_bound, is recognized.

    Args:
        x: Finite real number (float or mpmath mpf)
        m: Cyclotomic order, real subfield degree <= 12
        height_bound: Largest admissible coefficient or denominator
        precision: Relative accuracy of x (defaults from its type)

    Raises:
        ValidationError: If x is not finite or the degree exceeds the cap
    """
    if not mpmath.isfinite(x):
        raise ValidationError(f"Recognition input must be finite, got {x}")
    degree = real_cyclotomic_degree(m)
    if degree + 1 > MAX_DIMENSION:
        raise ValidationError(f"Q(mu_{m})^+ has degree {degree}, above the cap {MAX_DIMENSION - 1}")
    if precision is None:
        precision = _default_precision(x)
    precision = float(precision)
    if not 0 < precision < 1e-2:
        raise ValidationError(f"Recognition precision must lie in (0, 1e-2), got {precision}")

    dps = max(30, int(-math.log10(precision)) + 20)
    bar = RESIDUAL_FACTOR * max(1.0, abs(float(x)))
    high = int(0.01 / precision)
    scales = [high, max(1, high // SCALE_RATIO)]
    ladder: List[Dict[str, Any]] = []
    found = []
    with mpmath.workdps(dps):
        xm = mpmath.mpf(x)
        basis = real_cyclotomic_basis(m)
        for scale in scales:
            candidate = _search(xm, basis, scale, height_bound)
            if candidate is None:
                ladder.append({"scale": scale, "candidate": None})
                found.append(None)
                continue
            denominator, coefficients = candidate
            fitted = sum(c * z for c, z in zip(coefficients, basis)) / denominator
            residual = float(abs(xm - fitted))
            ladder.append({"scale": scale, "denominator": denominator,
                           "coefficients": list(coefficients), "residual": residual})
            found.append((denominator, coefficients, residual))

    kind = "rational" if degree == 1 else "real_cyclotomic"
    context = f"m={m}"
    if found[0] is None or found[1] is None:
        get_logger().log_stage("recognize", context, status=REJECTED, reason="no_candidate")
        return _rejected(kind, m, height_bound, precision, "no bounded relation", ladder)
    (denominator, coefficients, residual), (d2, c2, _) = found
    if (denominator, coefficients) != (d2, c2):
        get_logger().log_stage("recognize", context, status=REJECTED, reason="unstable")
        return _rejected(kind, m, height_bound, precision, "candidates differ between scales",
                         ladder, residual)
    if residual > bar:
        get_logger().log_stage("recognize", context, status=REJECTED, reason="residual")
        return _rejected(kind, m, height_bound, precision, f"residual {residual:.2e} above {bar:.2e}",
                         ladder, residual)

    height = max(abs(denominator), *(abs(c) for c in coefficients))
    get_logger().log_stage("recognize", context, status=RECOGNIZED, height=height,
                           residual=f"{residual:.2e}")
    return RecognitionResult(status=RECOGNIZED, kind=kind, m=m, denominator=denominator,
                             coefficients=coefficients, residual=residual, height=height,
                             precision=precision, detail="stable at both relation scales",
                             ladder=ladder)


def _real_part(value: Union[complex, Real], name: str) -> float:
    value = complex(value)
    if abs(value.imag) > IMAGINARY_TOLERANCE * abs(value.real):
        raise ValidationError(f"{name} has imaginary part {value.imag:.3e} "
                              f"above {IMAGINARY_TOLERANCE:g} x |real| = {abs(value.real):.3e}")
    return value.real


def _best_convergent(x: float, bound: int) -> Tuple[Fraction, float, float]:
    fraction = Fraction(x).limit_denominator(bound)
    residual = abs(x - float(fraction))
    quality = math.inf if residual == 0 else 1.0 / (fraction.denominator ** 2 * residual)
    return fraction, residual, quality


def rationality_check(value: Union[complex, Real], denominator_bound: int,
                      recheck: Optional[Union[complex, Real]] = None) -> RecognitionResult:
    """
    Continued-fraction recognition of a real number as a rational p/D with D <= bound.

    A convergent is accepted when 1 / (D^2 residual) > 1e3 and, if a recheck
    value computed at doubled precision is given, it yields the same rational.

    Args:
        value: Real, or complex with |imag| <= 1e-6 |real|
        denominator_bound: Largest admissible D
        recheck: The same quantity recomputed at doubled working cutoffs

    Raises:
        ValidationError: If an imaginary part is too large or the bound is not positive
    """
    if denominator_bound < 1:
        raise ValidationError(f"--denominator-bound must be positive, got {denominator_bound}")
    x = _real_part(value, "Trace value")
    if not math.isfinite(x):
        raise ValidationError(f"Recognition input must be finite, got {x}")

    fraction, residual, quality = _best_convergent(x, int(denominator_bound))
    ladder: List[Dict[str, Any]] = [{"precision": "working", "fraction": str(fraction),
                                     "residual": residual, "quality": quality}]
    bar = RESIDUAL_FACTOR * max(1.0, abs(x))
    agreed = True
    if recheck is not None:
        second, second_residual, second_quality = _best_convergent(_real_part(recheck, "Recheck value"),
                                                                   int(denominator_bound))
        ladder.append({"precision": "doubled", "fraction": str(second),
                       "residual": second_residual, "quality": second_quality})
        agreed = second == fraction

    precision = DEFAULT_FLOAT_PRECISION
    reasons = []
    if quality <= CONVERGENT_QUALITY:
        reasons.append(f"convergent {fraction} not isolated (1/(D^2 r) = {quality:.3g})")
    if residual > bar:
        reasons.append(f"residual {residual:.2e} above {bar:.2e}")
    if not agreed:
        reasons.append("doubled-precision recheck gives a different rational")

    context = f"D<={denominator_bound}"
    if reasons:
        get_logger().log_stage("rationality", context, status=REJECTED, reason=reasons[0])
        detail = (f"no relation found at (height {denominator_bound}, residual "
                  f"{RESIDUAL_FACTOR:g} x scale, precision {precision:.1e}): " + "; ".join(reasons))
        return RecognitionResult(status=REJECTED, kind="rational", m=1, denominator=None,
                                 coefficients=(), residual=residual, height=None,
                                 precision=precision, detail=detail, ladder=ladder)

    height = max(abs(fraction.numerator), fraction.denominator)
    get_logger().log_stage("rationality", context, status=RECOGNIZED, value=str(fraction),
                           residual=f"{residual:.2e}")
    return RecognitionResult(status=RECOGNIZED, kind="rational", m=1,
                             denominator=fraction.denominator, coefficients=(fraction.numerator,),
                             residual=residual, height=height, precision=precision,
                             detail="isolated convergent", ladder=ladder)
