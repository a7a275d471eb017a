"""
Desk-scale invariant suite.

Each check exercises one module against an exact identity, an independent
oracle or a proven bound on small tables. The report lists every check with
its verdict and details; the suite fails if any check fails.
"""

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

from ..characters import (
    CharacterTable,
    CyclotomicElement,
    GaloisAverageContext,
    build_character_table,
    galois_average,
    galois_average_bruteforce,
    subfield_trace_root_of_unity,
    teichmuller_decompose,
    wild_characters,
)
from ..lattice_sieve import (
    CongruenceLattice,
    box_count_samples,
    gauss_reduce,
    small_vector_violations,
    weil_bound_exhaustive,
)
from ..lattice_sieve.kloosterman import WEIL_SLACK
from ..lfun import lvalue_pair_product, lvalue_single, smoothed_central_value, voronoi_check
from ..moments import trace_sum
from ..newforms import CURVE_11A, NewformTable, elliptic_ap, satotate_pair_sum, validate_table
from ..newforms.arithmetic import primes_up_to
from ..rankin import A_l_brute, A_l_closed
from ..recognize import rationality_check, real_cyclotomic_basis, recognize_real_cyclotomic
from ..utils.errors import NumericalContractError, ValidationError
from ..utils.logger import get_logger

L_HALF_LEVEL11 = 0.2538

CheckResult = Tuple[bool, Dict[str, Any]]


@dataclass
class CheckOutcome:
    name: str
    passed: bool
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "passed": self.passed, "details": self.details}


@dataclass
class SelfTestReport:
    checks: List[CheckOutcome]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> List[str]:
        return [check.name for check in self.checks if not check.passed]

    def to_dict(self) -> Dict[str, Any]:
        return {"passed": self.passed, "failures": self.failures,
                "rows": [check.to_dict() for check in self.checks]}


class SelfTestSuite:
    """Runs the invariant checks against one level-11 and one level-1 table."""

    def __init__(self, level11: NewformTable, delta: NewformTable, seed: int = 0):
        """
        Args:
            level11: Table of the weight-2 level-11 form, N >= 20000
            delta: Table of the weight-12 level-1 form, N >= 20000
            seed: Seed of the lattice box samples
        """
        self.level11 = level11
        self.delta = delta
        self.seed = seed
        self.logger = get_logger()

    def registry(self) -> List[Tuple[str, Callable[[], CheckResult]]]:
        return [
            ("galois_average_exact", self.check_galois_averages),
            ("subfield_trace_orthogonality", self.check_orthogonality),
            ("coefficient_oracle", self.check_coefficient_oracle),
            ("table_invariants", self.check_table_invariants),
            ("local_factor_closed_form", self.check_local_factors),
            ("central_value", self.check_central_value),
            ("product_afe_exchange", self.check_product_exchange),
            ("voronoi_summation", self.check_voronoi),
            ("weil_bound", self.check_weil),
            ("lattice_shortest_vector", self.check_lattices),
            ("box_count_envelope", self.check_box_counts),
            ("sato_tate_pair_sum", self.check_sato_tate),
            ("trace_nonvanishing", self.check_trace),
            ("recognition_round_trip", self.check_recognition),
        ]

    def run(self, only: Optional[List[str]] = None) -> SelfTestReport:
        """
        Run every registered check (or the named subset) in a fixed order.

        Raises:
            ValidationError: If only names an unknown check
        """
        registry = self.registry()
        if only:
            known = {name for name, _ in registry}
            unknown = [name for name in only if name not in known]
            if unknown:
                raise ValidationError(f"--only names unknown checks {unknown}; known: {sorted(known)}")
            registry = [(name, check) for name, check in registry if name in only]

        outcomes = []
        for name, check in registry:
            try:
                passed, details = check()
            except (ValidationError, NumericalContractError) as e:
                passed, details = False, {"error": str(e)}
            self.logger.log_contract(name, passed, "" if passed else str(details), "selftest")
            outcomes.append(CheckOutcome(name=name, passed=bool(passed), details=details))
        return SelfTestReport(checks=outcomes)

    def check_galois_averages(self) -> CheckResult:
        configs = [(3, 3, GaloisAverageContext.rational(3)), (3, 4, GaloisAverageContext.rational(3)),
                   (5, 2, GaloisAverageContext.rational(5)), (3, 4, GaloisAverageContext.cyclotomic(3, 2)),
                   (3, 4, GaloisAverageContext.real_cyclotomic(3, 2))]
        mismatches = 0
        compared = 0
        for p, h, ctx in configs:
            chi = wild_characters(build_character_table(p, h))[0]
            for n in range(1, 301):
                if n % p:
                    compared += 1
                    if galois_average(chi, n, ctx) != galois_average_bruteforce(chi, n, ctx):
                        mismatches += 1
        return mismatches == 0, {"compared": compared, "mismatches": mismatches, "exact": True}

    def check_orthogonality(self) -> CheckResult:
        failures = 0
        for top in (1, 2, 3):
            m = 3 ** top
            for r in range(1, top + 1):
                index = 3 ** (top - r)
                for k in range(m):
                    zeta = CyclotomicElement.root(m, k)
                    trace = subfield_trace_root_of_unity(zeta, 3, r)
                    expected_in_field = k % (m // 3 ** r) == 0
                    ok = trace == zeta.scale(index) if expected_in_field else trace.is_zero()
                    failures += not ok
        return failures == 0, {"failures": failures, "exact": True}

    def check_coefficient_oracle(self) -> CheckResult:
        bound = min(2000, self.level11.N)
        disagreements = [int(ell) for ell in primes_up_to(bound)
                         if ell != 11 and elliptic_ap(CURVE_11A, int(ell)) != int(self.level11.a[ell])]
        return not disagreements, {"bound": bound, "disagreements": disagreements[:10], "exact": True}

    def check_table_invariants(self) -> CheckResult:
        for table in (self.level11, self.delta):
            validate_table(table)
        return True, {"forms": [self.level11.label, self.delta.label], "N": [self.level11.N, self.delta.N],
                      "exact": True}

    def check_local_factors(self) -> CheckResult:
        worst = 0.0
        for f, g in ((self.delta, self.delta), (self.level11, self.level11), (self.delta, self.level11)):
            for l in (1, 2, 4, 7, 13, 26):
                for s in (1.0, 1.2):
                    brute = A_l_brute(f, g, l, s, r_max=60)
                    error = abs(A_l_closed(f, g, l, s) - brute) / max(1.0, abs(brute))
                    worst = max(worst, error)
        return worst <= 1e-10, {"max_relative_error": worst}

    def check_central_value(self) -> CheckResult:
        trivial = CharacterTable.trivial().character(0)
        afe = lvalue_single(self.level11, trivial)
        series = smoothed_central_value(self.level11)
        deviation = abs(afe.value.real - L_HALF_LEVEL11)
        agreement = abs(afe.value - series.value)
        return deviation <= 1e-3 and agreement <= 1e-8, {
            "value": afe.value.real, "err_estimate": afe.err_estimate,
            "oracle": series.value.real, "oracle_err_estimate": series.err_estimate,
            "agreement": agreement}

    def check_product_exchange(self) -> CheckResult:
        chi = wild_characters(build_character_table(3, 2))[0]
        fg = lvalue_pair_product(self.level11, self.delta, chi, y_cutoff=20.0)
        gf = lvalue_pair_product(self.delta, self.level11, chi, y_cutoff=20.0)
        gap = abs(fg.value - gf.value.conjugate())
        return gap <= 1e-12, {"gap": gap, "err_estimate": fg.err_estimate}

    def check_voronoi(self) -> CheckResult:
        result = voronoi_check(self.delta, a=1, q=5, N=50)
        return result.discrepancy <= 1e-6, result.to_dict()

    def check_weil(self) -> CheckResult:
        worst = {}
        for p, limit in ((3, 243), (5, 125), (7, 343)):
            worst.update({str(r): ratio for r, ratio in weil_bound_exhaustive(p, limit).items()})
        largest = max(worst.values())
        return largest <= 1 + WEIL_SLACK, {"max_ratio": largest, "max_ratio_by_modulus": worst}

    def check_lattices(self) -> CheckResult:
        violations = 0
        checked = 0
        for k in (2, 3):
            xi = teichmuller_decompose(k, 5, 4)[0]
            for l1, l2 in ((1, 1), (1, 2), (3, 1), (2, 3)):
                lattice = CongruenceLattice(q=625, l1=l1, l2=l2, xi=xi)
                violations += len(small_vector_violations(lattice))
                gauss_reduce(lattice)
                checked += 1
        return violations == 0, {"lattices": checked, "violations": violations}

    def check_box_counts(self) -> CheckResult:
        lattice = CongruenceLattice(q=27, l1=1, l2=1, xi=1)
        samples = box_count_samples(lattice, 200, 100, seed=self.seed)
        return samples["max_ratio"] <= 10, samples

    def check_sato_tate(self) -> CheckResult:
        z = min(20000, self.level11.N, self.delta.N)
        rows = [satotate_pair_sum(f, f, z) for f in (self.level11, self.delta)]
        return all(abs(row["excess"]) <= 3.0 for row in rows), {"rows": rows}

    def check_trace(self) -> CheckResult:
        report = trace_sum(self.level11, 3, 3, ell=13, t=1)
        real = abs(report.value.imag) <= 1e-6 * abs(report.value)
        return real and report.nonzero, {"value": report.value, "err_estimate": report.err_estimate}

    def check_recognition(self) -> CheckResult:
        x = 2 * math.cos(2 * math.pi / 9) + 1
        cyclotomic = recognize_real_cyclotomic(x, 9, height_bound=1000)
        rational = rationality_check(0.5000000001, 1000)
        irrational = rationality_check(math.sqrt(2), 10 ** 6)
        passed = (cyclotomic.recognized and cyclotomic.coefficients == (1, 1, 0)
                  and rational.recognized and str(rational.fraction) == "1/2"
                  and not irrational.recognized and len(real_cyclotomic_basis(9)) == 3)
        return passed, {"cyclotomic": cyclotomic.to_dict(), "rational": rational.to_dict(),
                        "irrational": irrational.status}
