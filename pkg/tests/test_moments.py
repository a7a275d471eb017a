"""Tests for orbit moments, trace sums and congruence sums."""

import numpy as np
import pytest

from src.characters import GaloisAverageContext
from src.moments import (
    CongruenceSumSpec,
    congruence_sum,
    diagonal_sum,
    error_term_profile,
    moment_by_congruence,
    moment_series,
    orbit_moment,
    proxy_period,
    trace_exponent_bound,
    trace_sum,
    xi_decomposition,
)
from src.utils.errors import ValidationError

L_HALF_LEVEL11 = 0.2538418608559


class TestXiDecomposition:
    def test_class_count(self):
        classes = xi_decomposition(3, 3, 1)
        assert len(classes) == 6
        assert {cls.residue for cls in classes} == {u for u in range(1, 27) if u % 9 in (1, 8)}

    def test_identity_class(self):
        classes = xi_decomposition(5, 3, 1)
        identity = [cls for cls in classes if cls.xi == 1 and cls.a == 0]
        assert identity[0].residue == 1

    @pytest.mark.parametrize("p,h,h0", [(3, 3, 1), (5, 3, 1), (7, 2, 1), (3, 4, 2)])
    def test_roots_of_unity(self, p, h, h0):
        q = p ** h
        for cls in xi_decomposition(p, h, h0):
            assert pow(cls.xi, p - 1, q) == 1

    def test_h_must_exceed_h0(self):
        with pytest.raises(ValidationError):
            xi_decomposition(3, 2, 2)


class TestCongruenceSpec:
    def test_order(self):
        assert CongruenceSumSpec(q=27, l1=1, l2=1, xi=26).d == 2
        assert CongruenceSumSpec(q=25, l1=1, l2=1, xi=7).d == 4
        assert CongruenceSumSpec(q=27, l1=1, l2=1, xi=26).is_plus_minus_one
        assert not CongruenceSumSpec(q=25, l1=1, l2=1, xi=7).is_plus_minus_one

    @pytest.mark.parametrize("kwargs", [dict(q=27, xi=2), dict(q=12, xi=1), dict(q=27, xi=1, l1=3),
                                        dict(q=16, xi=1)])
    def test_invalid(self, kwargs):
        params = dict(l1=1, l2=1)
        params.update(kwargs)
        with pytest.raises(ValidationError):
            CongruenceSumSpec(**params)


class TestCongruenceSum:
    def test_empty_class(self, level11_small):
        spec = CongruenceSumSpec(q=729, l1=1, l2=1, xi=728, conductor=3)
        result = congruence_sum(spec, level11_small, level11_small, y_cutoff=2.0)
        assert result.value == 0.0
        assert result.pairs == 0

    def test_swap_conjugates(self, delta_small, level11_small):
        spec = CongruenceSumSpec(q=27, l1=2, l2=5, xi=26, conductor=3)
        swapped = CongruenceSumSpec(q=27, l1=5, l2=2, xi=pow(26, -1, 27), conductor=3)
        first = congruence_sum(spec, delta_small, level11_small, y_cutoff=20.0)
        second = congruence_sum(swapped, level11_small, delta_small, y_cutoff=20.0)
        assert first.pairs == second.pairs
        assert second.value == pytest.approx(first.value, rel=1e-10, abs=1e-14)

    def test_excluded_part_is_diagonal(self, level11_small):
        spec = CongruenceSumSpec(q=9, l1=1, l2=1, xi=1, conductor=9)
        full = congruence_sum(spec, level11_small, level11_small, y_cutoff=20.0)
        off = congruence_sum(spec, level11_small, level11_small, exclude_diagonal=True, y_cutoff=20.0)
        diagonal = diagonal_sum(level11_small, level11_small, 3, 9, y_cutoff=20.0)
        assert full.value - off.value == pytest.approx(diagonal, rel=1e-10)

    def test_error_term_profile_rows(self, level11_small):
        profile = error_term_profile(level11_small, level11_small, 5, [2], y_cutoff=2.0)
        assert len(profile["rows"]) == 4
        orders = sorted(row["d"] for row in profile["rows"])
        assert orders == [1, 2, 4, 4]
        assert all(row["ratio"] is not None and np.isfinite(row["ratio"]) for row in profile["rows"])
        assert profile["mt_constant_fitted"]
        for row in profile["rows"]:
            assert row["ratio"] == pytest.approx(abs(row["et"]) / abs(row["mt"]), rel=1e-12)

    def test_error_term_profile_uses_supplied_constant(self, level11_small):
        profile = error_term_profile(level11_small, level11_small, 5, [2], y_cutoff=2.0, mt_constant=1.5)
        mt = profile["main_terms"][0]
        assert mt["constant_fitted"]
        assert mt["mt"] == pytest.approx(mt["slope"] * np.log(25) + 1.5, rel=1e-12)
        assert all(row["mt"] == pytest.approx(mt["mt"], rel=1e-12) for row in profile["rows"])

    def test_error_term_profile_empty_range(self, level11_small):
        with pytest.raises(ValidationError, match="--h"):
            error_term_profile(level11_small, level11_small, 5, [])

    def test_off_diagonal_small_against_main_term(self, level11_medium):
        profile = error_term_profile(level11_medium, level11_medium, 3, [3, 4], y_cutoff=5.0)
        rows = [row for row in profile["rows"] if row["plus_minus_one"]]
        assert sorted({row["h"] for row in rows}) == [3, 4]
        for row in rows:
            assert abs(row["et"]) <= 0.1 * abs(row["mt"]), row

    @pytest.mark.slow
    def test_error_term_ratio_decreases_for_order_four(self, level11_large):
        profile = error_term_profile(level11_large, level11_large, 5, [2, 3, 4], y_cutoff=2.0)
        order_four = [key for key, trend in profile["trend_by_xi_mod_p"].items() if trend["d"] == 4]
        assert len(order_four) == 2
        for key in order_four:
            assert profile["trend_by_xi_mod_p"][key]["decreasing"], profile["rows"]


class TestOrbitMoment:
    def test_nonnegative_without_twist(self, level11_small):
        report = orbit_moment(level11_small, level11_small, 3, 2, with_main_term=False)
        assert report.orbit_size == 2
        assert report.empirical.real >= 0
        assert abs(report.empirical.imag) <= 1e-12 * report.empirical.real

    def test_orbit_size(self, level11_small):
        assert orbit_moment(level11_small, level11_small, 3, 3, with_main_term=False).orbit_size == 6

    def test_smaller_orbit_over_cyclotomic_field(self, level11_small):
        ctx = GaloisAverageContext.cyclotomic(3, 1)
        report = orbit_moment(level11_small, level11_small, 3, 3, ctx=ctx, with_main_term=False)
        assert report.orbit_size == 3

    def test_exchange_conjugates(self, delta_small, level11_small):
        forward = orbit_moment(delta_small, level11_small, 3, 3, with_main_term=False)
        backward = orbit_moment(level11_small, delta_small, 3, 3, with_main_term=False)
        assert backward.empirical == pytest.approx(forward.empirical.conjugate(), abs=1e-10)

    def test_twisted_weight_is_real(self, level11_small):
        report = orbit_moment(level11_small, level11_small, 3, 4, l1=2, l2=1, with_main_term=False)
        assert abs(report.empirical.imag) <= 1e-6 * abs(report.empirical)

    def test_attaches_main_term(self, level11_small):
        report = orbit_moment(level11_small, level11_small, 3, 3)
        assert report.mt is not None and report.mt > 0
        assert report.components["main_term"]["constant_fitted"]

    @pytest.mark.parametrize("h", [2, 3])
    def test_congruence_route_agrees(self, level11_medium, h):
        direct = orbit_moment(level11_medium, level11_medium, 3, h, with_main_term=False)
        route = moment_by_congruence(level11_medium, level11_medium, 3, h, y_cutoff=20.0)
        assert route.empirical.real == pytest.approx(direct.empirical.real, rel=1e-6)
        assert abs(route.empirical.imag) <= 1e-9
        assert route.components["diagonal"] > 0

    def test_series_slope_matches_main_term(self, level11_small):
        series = moment_series(level11_small, level11_small, 3, [3, 4, 5, 6])
        regression = series.regression
        assert regression["relative_slope_error"] <= 0.15
        assert regression["max_residual_ratio"] <= 0.10
        assert all(mt.constant_fitted for mt in series.main_terms)

    def test_series_needs_two_points(self, level11_small):
        with pytest.raises(ValidationError):
            moment_series(level11_small, level11_small, 3, [4, 4])


class TestTraceSum:
    def test_proxy_period_is_central_value_squared(self, level11_small):
        omega = proxy_period(level11_small)
        assert omega.value == pytest.approx(L_HALF_LEVEL11 ** 2, rel=1e-7)
        assert omega.reference_modulus == 1

    @pytest.mark.parametrize("h", [3, 4, 5, 6])
    def test_real_and_nonzero(self, level11_small, h):
        report = trace_sum(level11_small, 3, h, ell=13, t=1)
        assert abs(report.value.imag) <= 1e-6 * abs(report.value)
        assert report.nonzero
        assert report.orbit_size == 2 * 3 ** (h - 2)

    def test_reduced_value(self, level11_small):
        report = trace_sum(level11_small, 3, 3, ell=13)
        assert report.reduced == pytest.approx(report.value / 27)

    def test_prediction_needs_fitted_constant(self, level11_small):
        report = trace_sum(level11_small, 3, 3, ell=13)
        assert report.prediction is None
        assert not report.constant_fitted
        assert report.to_dict()["prediction"] is None
        assert report.components["main_term"]["P_l1_l2"]["constant"] is None

    def test_prediction_with_fitted_constant(self, level11_small):
        omega = proxy_period(level11_small)
        report = trace_sum(level11_small, 3, 3, ell=13, c=2.0, omega=omega, mt_constant=0.75)
        main = report.components["main_term"]
        assert report.constant_fitted
        assert main["constant_fitted"]
        assert main["mt"] == pytest.approx(main["slope"] * np.log(27) + 0.75, rel=1e-12)
        assert report.prediction == pytest.approx(2.0 * main["mt"] / omega.value, rel=1e-12)

    @pytest.mark.parametrize("ell", [5, 19])
    def test_inadmissible_prime(self, level11_small, ell):
        with pytest.raises(ValidationError):
            trace_sum(level11_small, 3, 3, ell=ell)

    @pytest.mark.parametrize("t", [0, 5])
    def test_exponent_range(self, level11_small, t):
        with pytest.raises(ValidationError):
            trace_sum(level11_small, 3, 3, ell=13, t=t)

    def test_exponent_bound(self):
        assert trace_exponent_bound(1) == 4
        assert trace_exponent_bound(3) == 6
