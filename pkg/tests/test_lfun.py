"""Tests for gamma factors, AFE weights, central values and Voronoi summation."""

import mpmath
import numpy as np
import pytest

from src.characters import CharacterTable, build_character_table, wild_characters
from src.lfun import (
    GammaFactorSpec,
    ProductWeight,
    afe_weight,
    bessel_decay_constant,
    complex_log_gamma,
    lvalue_pair_product,
    lvalue_single,
    orbit_lvalues,
    product_weight_for,
    richardson,
    root_number,
    smoothed_central_value,
    voronoi_check,
)
from src.lfun.gamma import complex_log_gamma_array
from src.newforms import eta_product_coefficients
from src.utils.errors import InsufficientCoefficientsError, ValidationError

# L(E, 1) for the curve 11a1
L_HALF_LEVEL11 = 0.2538418608559


def trivial_character():
    return CharacterTable.trivial().character(0)


class TestLogGamma:
    def test_values(self):
        assert abs(complex_log_gamma(1)) < 1e-14
        assert complex_log_gamma(0.5) == pytest.approx(np.log(np.sqrt(np.pi)), abs=1e-13)
        assert complex_log_gamma(5) == pytest.approx(np.log(24), abs=1e-13)

    def test_recursion_off_axis(self):
        z = 0.7 + 3.2j
        assert complex_log_gamma(z + 1) == pytest.approx(complex_log_gamma(z) + np.log(z), abs=1e-12)

    @pytest.mark.parametrize("z", [0.5 + 0.1j, 1.5 + 12j, 6 + 12j, 0.5 - 11j, 2.75 + 0.5j, -2.5 + 0.3j])
    def test_matches_high_precision(self, z):
        with mpmath.workdps(40):
            expected = complex(mpmath.loggamma(mpmath.mpc(z.real, z.imag)))
        assert abs(complex_log_gamma(z) - expected) <= 1e-12

    @pytest.mark.parametrize("z", [0, -1, -7])
    def test_poles_rejected(self, z):
        with pytest.raises(ValidationError):
            complex_log_gamma(z)

    def test_array_matches_scalar(self):
        z = np.array([0.5 + 1j, 3 - 2j, 12.25])
        assert np.allclose(complex_log_gamma_array(z), [complex_log_gamma(x) for x in z], atol=1e-14)


class TestGammaFactor:
    def test_shift(self):
        assert GammaFactorSpec(12).shift == 5.5
        assert GammaFactorSpec(2).kappa == 1.0

    def test_invalid(self):
        with pytest.raises(ValidationError):
            GammaFactorSpec(0)
        with pytest.raises(ValidationError):
            GammaFactorSpec(2, parity=0)

    def test_ratio_vanishes_at_zero(self):
        assert abs(GammaFactorSpec(12).log_ratio(np.array([0.0]))[0]) < 1e-14


class TestProductWeight:
    spec11 = GammaFactorSpec(2)
    spec_delta = GammaFactorSpec(12)

    def test_small_argument(self):
        assert afe_weight(1e-8, self.spec11, self.spec11) == pytest.approx(1.0, abs=1e-6)
        assert afe_weight(1e-8, self.spec_delta, self.spec11) == pytest.approx(1.0, abs=1e-6)

    def test_decay(self):
        assert abs(afe_weight(1e3, self.spec11, self.spec11)) <= 1e-6

    def test_step_convergence(self):
        y = np.array([1e-3, 0.2, 0.9, 1.0, 3.0, 40.0, 500.0])
        for specs in ((self.spec11, self.spec11), (self.spec_delta, self.spec_delta)):
            coarse = afe_weight(y, *specs, step=0.05)
            fine = afe_weight(y, *specs, step=0.025)
            assert np.max(np.abs(coarse - fine)) <= 1e-9

    def test_contours_agree_at_one(self):
        below = afe_weight(1 - 1e-9, self.spec11, self.spec_delta)
        above = afe_weight(1 + 1e-9, self.spec11, self.spec_delta)
        assert below == pytest.approx(above, abs=1e-8)

    def test_spline_matches_direct(self):
        weight = ProductWeight(self.spec11, self.spec11, y_cutoff=100.0)
        y = np.array([1e-13, 1e-6, 0.05, 0.7, 2.5, 60.0, 150.0])
        direct = afe_weight(y[1:6], self.spec11, self.spec11)
        values = weight(y)
        assert values[0] == 1.0
        assert values[-1] == 0.0
        assert np.max(np.abs(values[1:6] - direct)) <= 1e-9

    def test_nonpositive_rejected(self):
        with pytest.raises(ValidationError):
            afe_weight(0.0, self.spec11, self.spec11)


class TestSingleAFE:
    def test_central_value_level11(self, level11_small):
        record = lvalue_single(level11_small, trivial_character())
        assert record.value.real == pytest.approx(L_HALF_LEVEL11, abs=1e-4)
        assert abs(record.value.imag) < 1e-12
        assert record.err_estimate < 1e-10

    def test_agrees_with_smoothed_series(self, level11_small, delta_small):
        for table, tol in ((level11_small, 1e-8), (delta_small, 1e-6)):
            afe = lvalue_single(table, trivial_character()).value.real
            series = smoothed_central_value(table).value.real
            assert afe == pytest.approx(series, abs=tol)

    def test_conjugation_symmetry(self, level11_small):
        chi = wild_characters(build_character_table(3, 3))[0]
        value = lvalue_single(level11_small, chi).value
        assert lvalue_single(level11_small, chi.conjugate()).value == pytest.approx(np.conj(value), abs=1e-12)

    def test_orbit_closed_under_conjugation(self, level11_small):
        values = [r.value for r in orbit_lvalues(level11_small, build_character_table(3, 2))]
        for v in values:
            assert min(abs(np.conj(v) - w) for w in values) < 1e-12

    def test_split_independence(self, delta_small):
        chi = wild_characters(build_character_table(5, 2))[3]
        a = lvalue_single(delta_small, chi, split=1.0).value
        b = lvalue_single(delta_small, chi, split=1.7).value
        assert abs(a - b) <= 1e-10

    def test_orbit_matches_single(self, level11_small):
        table = build_character_table(3, 3)
        records = orbit_lvalues(level11_small, table)
        for chi, record in zip(wild_characters(table), records):
            assert record.value == pytest.approx(lvalue_single(level11_small, chi).value, abs=1e-10)

    def test_root_numbers_unimodular(self, delta_small):
        table = build_character_table(7, 2)
        for chi in wild_characters(table):
            assert abs(root_number(delta_small, chi)) == pytest.approx(1.0, abs=1e-8)

    def test_short_table(self, level11_small):
        chi = wild_characters(build_character_table(3, 4))[0]
        with pytest.raises(InsufficientCoefficientsError) as info:
            lvalue_single(level11_small.truncated(50), chi)
        assert info.value.required > 50

    def test_level_must_be_coprime(self, level11_small):
        chi = wild_characters(build_character_table(11, 2))[0]
        with pytest.raises(ValidationError):
            lvalue_single(level11_small, chi)


class TestProductAFE:
    def test_exchange_symmetry(self, level11_small, delta_small):
        chi = wild_characters(build_character_table(3, 2))[0]
        fg = lvalue_pair_product(level11_small, delta_small, chi, y_cutoff=20.0).value
        gf = lvalue_pair_product(delta_small, level11_small, chi, y_cutoff=20.0).value
        assert fg == pytest.approx(np.conj(gf), abs=1e-12)

    def test_diagonal_is_real(self, level11_small):
        chi = wild_characters(build_character_table(3, 2))[1]
        record = lvalue_pair_product(level11_small, level11_small, chi, y_cutoff=20.0)
        assert abs(record.value.imag) <= 1e-12
        assert record.value.real >= -record.err_estimate

    def test_weight_mismatch(self, level11_small, delta_small):
        chi = wild_characters(build_character_table(3, 2))[0]
        weight = product_weight_for(level11_small, level11_small, 20.0)
        with pytest.raises(ValidationError):
            lvalue_pair_product(delta_small, delta_small, chi, weight)

    def test_short_table(self, level11_small):
        chi = wild_characters(build_character_table(3, 2))[0]
        with pytest.raises(InsufficientCoefficientsError):
            lvalue_pair_product(level11_small, level11_small, chi, y_cutoff=100.0)

    @pytest.mark.slow
    def test_matches_product_of_single_values(self):
        f = eta_product_coefficients("level11", 1_800_000)
        table = build_character_table(3, 2)
        weight = product_weight_for(f, f)
        for chi in wild_characters(table):
            single = lvalue_single(f, chi)
            product = lvalue_pair_product(f, f, chi, weight)
            expected = abs(single.value) ** 2
            assert abs(product.value - expected) <= 1e-6 * expected
            assert abs(product.value - expected) <= product.err_estimate + 3 * single.err_estimate


class TestSmoothedSeries:
    def test_richardson_removes_two_orders(self):
        def s(X):
            return 0.3 + 2.0 / X - 5.0 / X ** 2

        assert richardson([s(10), s(20), s(40)], order=2) == pytest.approx(0.3, abs=1e-14)

    def test_scale_must_fit_table(self, level11_small):
        with pytest.raises(InsufficientCoefficientsError):
            smoothed_central_value(level11_small, X=1000)


class TestVoronoi:
    def test_delta(self, delta_small):
        result = voronoi_check(delta_small, a=1, q=5, N=50)
        assert result.discrepancy <= 1e-6
        assert abs(result.lhs) > 1e-3

    def test_level11(self, level11_small):
        result = voronoi_check(level11_small, a=1, q=3, N=100)
        assert result.discrepancy <= 1e-6

    def test_zero_numerator_rejected(self, delta_small):
        with pytest.raises(ValidationError):
            voronoi_check(delta_small, a=0, q=5, N=50)

    def test_gcd_violation_rejected(self, level11_small):
        with pytest.raises(ValidationError):
            voronoi_check(level11_small, a=1, q=11, N=50)

    def test_decay_constant(self, delta_small, level11_small):
        for f in (delta_small, level11_small):
            constant = bessel_decay_constant(f, A=3)
            assert np.isfinite(constant) and constant > 0
