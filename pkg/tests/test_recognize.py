"""Tests for exact LLL, recognition and generation certificates."""

import json
import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from sympy import Matrix

from src.recognize import (
    certify_generation,
    exact_trace,
    find_integer_relation,
    galois_conjugates,
    is_lll_reduced,
    lll_reduce,
    rationality_check,
    real_cyclotomic_basis,
    real_cyclotomic_degree,
    recognize_real_cyclotomic,
    save_certificate,
)
from src.utils.errors import ValidationError


class TestLLL:
    def test_identity(self):
        identity = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
        reduced = lll_reduce(identity)
        assert reduced.basis == identity
        assert reduced.swaps == 0
        assert reduced.gram_determinant == 1

    def test_sqrt_two(self):
        x = math.sqrt(2)
        relations = find_integer_relation([1.0, x, x * x], 10 ** 10)
        assert relations[0] == (2, 0, -1)

    def test_golden_ratio(self):
        x = 1.6180339887
        relations = find_integer_relation([1.0, x, x * x], 10 ** 8)
        assert relations[0] == (1, 1, -1)

    def test_matches_pslq(self):
        with mpmath.workdps(30):
            c = mpmath.cbrt(2)
            values = [mpmath.mpf(1), c, c ** 2, c ** 3]
            ours = find_integer_relation(values, 10 ** 25)[0]
            oracle = tuple(int(v) for v in mpmath.pslq(values, maxcoeff=1000, maxsteps=10 ** 5))
        assert ours == (2, 0, 0, -1)
        assert ours in (oracle, tuple(-v for v in oracle))

    def test_random_bases_are_reduced(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            rows = rng.integers(-50, 51, size=(5, 5)).tolist()
            det = Matrix(rows).det()
            if det == 0:
                continue
            reduced = lll_reduce(rows)
            assert is_lll_reduced(reduced.basis)
            assert reduced.gram_determinant == det * det
            assert reduced.orthogonality_defect() >= 1 - 1e-12
            first = reduced.first
            assert sum(v * v for v in first) <= reduced.first_vector_bound() * (1 + 1e-12)

    def test_rank_deficient(self):
        with pytest.raises(ValidationError):
            lll_reduce([(1, 2), (2, 4)])

    def test_dimension_cap(self):
        identity = [tuple(1 if i == j else 0 for j in range(13)) for i in range(13)]
        with pytest.raises(ValidationError):
            lll_reduce(identity)

    def test_non_integer_entries(self):
        with pytest.raises(ValidationError):
            lll_reduce([(1.5, 0), (0, 1)])

    def test_unreduced_basis_detected(self):
        assert not is_lll_reduced([(1, 0), (7, 1)])


class TestRealCyclotomic:
    def test_degrees(self):
        assert real_cyclotomic_degree(3) == 1
        assert real_cyclotomic_degree(9) == 3
        assert real_cyclotomic_degree(27) == 9
        assert len(real_cyclotomic_basis(9)) == 3

    def test_shifted_cosine(self):
        x = 2 * math.cos(2 * math.pi / 9) + 1
        result = recognize_real_cyclotomic(x, 9, height_bound=1000)
        assert result.recognized
        assert result.height <= 2
        assert result.denominator == 1
        assert result.coefficients == (1, 1, 0)
        assert not result.is_rational

    def test_pi_rejected(self):
        result = recognize_real_cyclotomic(math.pi, 9, height_bound=1000)
        assert result.status == "rejected"
        assert result.detail.startswith("no relation found at")

    @pytest.mark.parametrize("m", [5, 9])
    def test_rational_in_trivial_subspace(self, m):
        result = recognize_real_cyclotomic(3 / 7, m, height_bound=1000)
        assert result.is_rational
        assert result.fraction == Fraction(3, 7)

    @pytest.mark.parametrize("m", [9, 27])
    def test_synthetic_round_trip(self, m):
        rng = np.random.default_rng(m)
        degree = real_cyclotomic_degree(m)
        for _ in range(2):
            coefficients = (1,) + tuple(int(c) for c in rng.integers(-10, 11, size=degree - 1))
            with mpmath.workdps(60):
                basis = real_cyclotomic_basis(m)
                x = sum(c * z for c, z in zip(coefficients, basis)) / 3
                result = recognize_real_cyclotomic(x, m, height_bound=10, precision=1e-50)
            assert result.recognized
            assert result.denominator == 3
            assert result.coefficients == coefficients

    def test_conjugates_and_trace(self):
        result = recognize_real_cyclotomic(2 * math.cos(2 * math.pi / 9) + 1, 9)
        conjugates = galois_conjugates(result)
        assert len(conjugates) == 3
        assert sum(conjugates) == pytest.approx(3.0)
        assert exact_trace(result) == 3

    def test_degree_cap(self):
        with pytest.raises(ValidationError):
            recognize_real_cyclotomic(1.0, 53)

    def test_non_finite(self):
        with pytest.raises(ValidationError):
            recognize_real_cyclotomic(float("nan"), 9)


class TestRationality:
    def test_nearby_rational(self):
        result = rationality_check(0.5000000001, 10 ** 3)
        assert result.recognized
        assert result.fraction == Fraction(1, 2)

    def test_sqrt_two_rejected(self):
        result = rationality_check(math.sqrt(2), 10 ** 6)
        assert not result.recognized
        assert "no relation found" in result.detail

    def test_complex_with_small_imaginary_part(self):
        assert rationality_check(complex(0.75, 1e-12), 100).fraction == Fraction(3, 4)

    def test_imaginary_part_too_large(self):
        with pytest.raises(ValidationError):
            rationality_check(complex(1.0, 0.1), 10)

    def test_recheck_disagreement(self):
        result = rationality_check(0.5, 100, recheck=1 / 3)
        assert not result.recognized
        assert len(result.ladder) == 2


@pytest.mark.slow
class TestCertificates:
    def test_rational_at_h2(self, level11_small, tmp_path):
        certificate = certify_generation(level11_small, 3, 2)
        assert certificate.recognition.is_rational
        assert certificate.recognition.height <= 10 ** 6
        assert certificate.recognition.residual <= 1e-8
        assert certificate.checks["stable_passed"]
        assert certificate.checks["trace_agreement_passed"]
        assert certificate.consistent

        path = tmp_path / "certs" / "level11_3_2.json"
        save_certificate(certificate, str(path))
        data = json.loads(path.read_text())
        assert data["status"] == "consistent at desk scale"
        assert len(data["precision_ladder"]) == 2

    def test_degree_three_at_h3(self, level11_small):
        certificate = certify_generation(level11_small, 3, 3)
        assert certificate.degree == 3
        assert certificate.recognition.recognized
        assert not certificate.recognition.is_rational
        assert not certificate.rational_test.recognized
        assert certificate.trace_test.recognized
        assert certificate.checks["shimura_passed"]
        assert certificate.consistent

    def test_requires_exact_form(self, level11_small):
        approximate = type(level11_small)(level11_small.label, level11_small.R, level11_small.two_kappa,
                                          level11_small.a.astype(np.float64), level11_small.eps_f)
        with pytest.raises(ValidationError):
            certify_generation(approximate, 3, 2)
