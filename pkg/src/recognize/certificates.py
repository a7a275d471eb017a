"""
Desk-scale certificates that normalized twisted central values generate the
expected real cyclotomic field.

For a rational newform f and a wild character chi mod q = p^h the ratio

    r(chi) = q |L(1/2, f x chi)|^2 / Omega

with Omega the proxy period should be a number of Q(mu_m)^+, m = p^(h-1),
and generate it. The certificate recognizes r for one orbit member at the
working cutoffs and again at doubled cutoffs, rejects it as rational when the
field is larger than Q, and compares the orbit values with the Galois
conjugates of the recognized element.
"""

import json
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from ..characters.galois import GaloisAverageContext
from ..characters.tables import build_character_table
from ..lfun.afe import orbit_lvalues
from ..moments.orbit import ProxyPeriod, orbit_characters, proxy_period
from ..newforms.table import NewformTable
from ..utils.errors import ValidationError
from ..utils.logger import get_logger
from .recognition import (
    RecognitionResult,
    exact_trace,
    galois_conjugates,
    rationality_check,
    real_cyclotomic_degree,
    recognize_real_cyclotomic,
)

SHIMURA_TOLERANCE = 1e-6

# Recognition precision is never claimed below this relative level
PRECISION_FLOOR = 1e-14

RATIO_DEFINITION = "R_f(chi, chi0) = q |L(1/2, f x chi)|^2 / |G(conj chi0) L(1/2, f x chi0)|^2"


@dataclass
class NormalizedOrbit:
    """Normalized ratios over a Galois orbit at one cutoff multiplier."""
    cutoff_multiplier: float
    omega: ProxyPeriod
    characters: List[int]
    ratios: np.ndarray
    errors: np.ndarray

    def to_dict(self) -> Dict[str, Any]:
        return {"cutoff_multiplier": self.cutoff_multiplier, "omega": self.omega.to_dict(),
                "characters": self.characters, "ratios": self.ratios.tolist(),
                "errors": self.errors.tolist()}


@dataclass
class GenerationCertificate:
    """Recognition evidence for one (f, p, h)."""
    f: str
    p: int
    h: int
    m: int
    degree: int
    ladder: List[NormalizedOrbit]
    recognition: RecognitionResult
    recheck: RecognitionResult
    rational_test: Optional[RecognitionResult]
    trace_test: RecognitionResult
    checks: Dict[str, Any] = field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        return all(value is True for key, value in self.checks.items() if key.endswith("_passed"))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "f": self.f, "p": self.p, "h": self.h, "q": self.p ** self.h,
            "target_field": f"Q(mu_{self.m})^+", "degree": self.degree,
            "ratio_definition": RATIO_DEFINITION,
            "proxy_definition": self.ladder[0].omega.definition,
            "precision_ladder": [rung.to_dict() for rung in self.ladder],
            "recognition": self.recognition.to_dict(),
            "recheck": self.recheck.to_dict(),
            "rational_test": self.rational_test.to_dict() if self.rational_test else None,
            "trace_test": self.trace_test.to_dict(),
            "checks": self.checks,
            "status": "consistent at desk scale" if self.consistent else "inconsistent",
        }


def normalized_orbit(f: NewformTable, p: int, h: int, cutoff_multiplier: float = 1.0) -> NormalizedOrbit:
    """r(chi) with error bounds for every member of the rational Galois orbit mod p^h."""
    omega = proxy_period(f, cutoff_multiplier=cutoff_multiplier)
    table = build_character_table(p, h)
    characters = orbit_characters(table, GaloisAverageContext.rational(p))
    records = orbit_lvalues(f, table, characters, cutoff_multiplier=cutoff_multiplier)
    values = np.array([abs(record.value) for record in records])
    errors = np.array([record.err_estimate for record in records])
    q = table.q
    ratios = q * values ** 2 / omega.value
    ratio_err = q * (2 * values * errors + errors ** 2) / omega.value + ratios * omega.err_estimate / omega.value
    return NormalizedOrbit(cutoff_multiplier=cutoff_multiplier, omega=omega,
                           characters=[chi.j for chi in characters], ratios=ratios, errors=ratio_err)


def ladder_precision(working: NormalizedOrbit, doubled: NormalizedOrbit) -> float:
    """Relative change of r between the working and doubled cutoffs, floored."""
    x = abs(float(working.ratios[0]))
    change = abs(float(working.ratios[0]) - float(doubled.ratios[0]))
    return max(change / max(x, 1e-300), PRECISION_FLOOR)


def _recognize(rung: NormalizedOrbit, m: int, degree: int, height_bound: int,
               denominator_bound: int, precision: float,
               recheck: Optional[float] = None) -> RecognitionResult:
    x = float(rung.ratios[0])
    if degree == 1:
        return rationality_check(x, denominator_bound, recheck=recheck)
    return recognize_real_cyclotomic(x, m, height_bound, precision=precision)


def _shimura_check(result: RecognitionResult, ratios: np.ndarray, degree: int) -> Dict[str, Any]:
    conjugates = galois_conjugates(result)
    repeat = ratios.size // degree
    expected = np.sort(np.repeat(conjugates, repeat))
    observed = np.sort(ratios)
    deviation = float(np.max(np.abs(observed - expected))) if observed.size == expected.size else float("inf")
    return {"conjugates": conjugates, "orbit_ratios": observed.tolist(),
            "max_deviation": deviation, "passed": deviation <= SHIMURA_TOLERANCE}


def certify_generation(f: NewformTable, p: int = 3, h: int = 2, height_bound: int = 10 ** 6,
                       denominator_bound: int = 10 ** 6, cutoff_multiplier: float = 1.0) -> GenerationCertificate:
    """
    Recognize r(chi) in Q(mu_{p^(h-1)})^+ and record every residual.

    Args:
        f: Rational newform with exact coefficients
        p: Odd prime coprime to the level
        h: Conductor exponent >= 2
        height_bound: Largest admissible coefficient of the candidate
        denominator_bound: Largest denominator for rational recognition
        cutoff_multiplier: Working cutoff multiplier; the recheck runs at twice it

    Returns:
        GenerationCertificate; its checks name each verified property

    Raises:
        ValidationError: If f is not given exactly or the field degree exceeds the cap
        NumericalContractError: If the reference L-value cannot normalize
    """
    if not f.is_exact:
        raise ValidationError(f"Form {f.label}: certificates need exact rational coefficients")
    if h < 2:
        raise ValidationError(f"--h must be at least 2 for wild characters, got {h}")
    m = p ** (h - 1)
    degree = real_cyclotomic_degree(m)
    context = f"{f.label} p={p} h={h}"
    logger = get_logger()
    logger.log_stage("certificate", context, target=f"Q(mu_{m})^+", degree=degree)

    working = normalized_orbit(f, p, h, cutoff_multiplier)
    doubled = normalized_orbit(f, p, h, 2 * cutoff_multiplier)
    recheck_value = float(doubled.ratios[0])
    precision = ladder_precision(working, doubled)
    recognition = _recognize(working, m, degree, height_bound, denominator_bound, precision,
                             recheck=recheck_value)
    recheck = _recognize(doubled, m, degree, height_bound, denominator_bound, precision)

    checks: Dict[str, Any] = {"ladder_precision": precision}
    checks["recognized_passed"] = recognition.recognized and recognition.height <= height_bound
    checks["stable_passed"] = (recheck.recognized and recognition.recognized
                               and recheck.coefficients == recognition.coefficients
                               and recheck.denominator == recognition.denominator)

    rational_test = None
    if degree > 1:
        rational_test = rationality_check(float(working.ratios[0]), denominator_bound, recheck=recheck_value)
        checks["subfield_rejected_passed"] = (not rational_test.recognized
                                              and recognition.recognized and not recognition.is_rational)

    trace = float(np.sum(working.ratios))
    trace_test = rationality_check(trace, denominator_bound, recheck=float(np.sum(doubled.ratios)))
    checks["trace_rational_passed"] = trace_test.recognized
    if recognition.recognized:
        shimura = _shimura_check(recognition, working.ratios, degree)
        checks["shimura"] = shimura
        checks["shimura_passed"] = shimura["passed"]
        expected_trace = exact_trace(recognition) * (working.ratios.size // degree)
        checks["trace_expected"] = str(expected_trace)
        checks["trace_agreement_passed"] = trace_test.recognized and trace_test.fraction == expected_trace

    certificate = GenerationCertificate(f=f.label, p=p, h=h, m=m, degree=degree,
                                        ladder=[working, doubled], recognition=recognition,
                                        recheck=recheck, rational_test=rational_test,
                                        trace_test=trace_test, checks=checks)
    for name, value in checks.items():
        if name.endswith("_passed"):
            logger.log_contract(name[:-len("_passed")], bool(value), "", context)
    logger.log_stage("certificate_done", context, status=certificate.to_dict()["status"])
    return certificate


def save_certificate(certificate: GenerationCertificate, path: str) -> None:
    """Write the certificate as an indented JSON document."""
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(certificate.to_dict(), fh, indent=2)
    get_logger().info(f"Certificate written to {path}", certificate.f)
