"""Tests for local factors, Rankin-Selberg series and the main term."""

import numpy as np
import pytest

from src.newforms import hecke_sequence, lambda_value
from src.rankin import (
    DEGENERATE,
    FITTED,
    GENERIC,
    A_l_brute,
    A_l_closed,
    MainTermSpec,
    c_factor,
    d_assembled,
    d_direct,
    euler_factor_rs,
    euler_factor_sym2,
    local_factor_A,
    local_factor_A_values,
    main_term,
    rs_partial,
    square_argument_series,
    sym2_residue,
    sym2_residue_by_slope,
    zeta_local,
)
from src.utils.errors import ValidationError


def brute_local(lam_f, lam_g, ell, t, s, r_max=80):
    seq_f = hecke_sequence(lam_f, t + r_max)
    seq_g = hecke_sequence(lam_g, r_max)
    return sum(seq_f[t + r] * seq_g[r] * ell ** (-r * s) for r in range(r_max + 1))


class TestLocalFactors:
    @pytest.mark.parametrize("l", [1, 2, 4, 7, 13, 14, 26])
    @pytest.mark.parametrize("s", [1.0, 1.2])
    def test_closed_matches_brute(self, delta_small, level11_small, l, s):
        for f, g in ((delta_small, delta_small), (level11_small, level11_small),
                     (delta_small, level11_small)):
            closed = A_l_closed(f, g, l, s)
            brute = A_l_brute(f, g, l, s, r_max=60)
            assert abs(closed - brute) <= 1e-10 * max(1.0, abs(brute))

    def test_example_prime_power(self, delta_small, level11_small):
        closed = local_factor_A(delta_small, level11_small, 13, 3, 1.0)
        assert closed.branch == GENERIC
        assert closed.value == pytest.approx(A_l_brute(delta_small, level11_small, 13 ** 3, 1.0), abs=1e-10)

    def test_t_zero_is_euler_ratio(self, level11_small, delta_small):
        value = local_factor_A(level11_small, delta_small, 5, 0, 1.0).value
        expected = euler_factor_rs(level11_small, delta_small, 5, 1.0) / zeta_local(5, 2.0)
        assert value == pytest.approx(expected, rel=1e-12)

    def test_diagonal_c_factor(self, level11_small):
        lam = lambda_value(level11_small, 7)
        assert c_factor(lam, lam, 7, 1.0) == pytest.approx(lam / (1 + 1 / 7), rel=1e-14)

    def test_l_coprime_to_level(self, level11_small):
        with pytest.raises(ValidationError):
            A_l_closed(level11_small, level11_small, 22, 1.0)

    @pytest.mark.parametrize("sign", [1.0, -1.0])
    def test_degenerate_branch(self, sign):
        exact = local_factor_A_values(2.0 * sign, 0.7, 5, 3, 1.0)
        assert exact.branch == DEGENERATE
        assert exact.value == pytest.approx(brute_local(2.0 * sign, 0.7, 5, 3, 1.0), abs=1e-12)

    @pytest.mark.parametrize("sign", [1.0, -1.0])
    def test_degenerate_continuity(self, sign):
        near = sign * 2 * np.cos(1e-4)
        for t in range(6):
            generic = local_factor_A_values(near, -0.4, 3, t, 1.0)
            limit = local_factor_A_values(2.0 * sign, -0.4, 3, t, 1.0)
            assert generic.branch == GENERIC
            assert abs(generic.value - limit.value) <= 1e-6

    def test_sym2_euler_factor(self, delta_small):
        lam = lambda_value(delta_small, 2)
        x = 0.5
        # alpha^2 + beta^2 = lambda^2 - 2
        expected = 1 / ((1 - x) * (1 - (lam ** 2 - 2) * x + x * x))
        assert euler_factor_sym2(delta_small, 2, 1.0) == pytest.approx(expected, rel=1e-12)


class TestRankinSelberg:
    def test_off_diagonal_stability(self, delta_medium, level11_medium):
        coarse = rs_partial(delta_medium, level11_medium, 1.5, X=5000)
        fine = rs_partial(delta_medium, level11_medium, 1.5, X=10000)
        assert abs(coarse.value - fine.value) <= 1e-6
        assert fine.delta <= 1e-6

    def test_diagonal_at_two_positive(self, level11_small):
        value = rs_partial(level11_small, level11_small, 2.0).value
        assert value.real > 0
        assert abs(value.imag) < 1e-14

    def test_left_of_one_rejected(self, level11_small):
        with pytest.raises(ValidationError):
            rs_partial(level11_small, level11_small, 0.9)

    def test_square_argument_series(self, delta_small):
        squares = square_argument_series(delta_small, 100)
        for n in (2, 3, 6, 10, 12):
            assert squares[n] == pytest.approx(lambda_value(delta_small, n * n), abs=1e-12)


class TestSym2Residue:
    def test_level11_stable(self, level11_small):
        result = sym2_residue(level11_small)
        assert result.value > 0
        assert result.relative_delta <= 1e-4

    def test_delta_positive(self, delta_small):
        assert sym2_residue(delta_small).value > 0

    def test_slope_route_agrees(self, level11_small, delta_small):
        for f in (level11_small, delta_small):
            residue = sym2_residue(f).rs_residue
            assert sym2_residue_by_slope(f) == pytest.approx(residue, rel=0.01)

    def test_ramified_factor(self, level11_small):
        result = sym2_residue(level11_small)
        assert result.rs_residue == pytest.approx(result.value * 10 / 11, rel=1e-14)


class TestTwistedSeries:
    @pytest.mark.parametrize("pair", ["diagonal", "mixed"])
    def test_assembled_matches_direct(self, level11_medium, delta_medium, pair):
        f, g = (level11_medium, level11_medium) if pair == "diagonal" else (delta_medium, level11_medium)
        direct = d_direct(f, g, 1.5, p=3, l1=2, l2=7)
        assembled = d_assembled(f, g, 1.5, p=3, l1=2, l2=7)
        assert abs(direct.value - assembled.value) <= 1e-6

    def test_twists_must_be_coprime(self, level11_small):
        with pytest.raises(ValidationError):
            d_direct(level11_small, level11_small, 1.5, p=3, l1=2, l2=4)


class TestMainTerm:
    def test_leading_coefficient_level11(self, level11_small):
        residue = sym2_residue(level11_small).rs_residue
        result = main_term(MainTermSpec(level11_small, level11_small, p=3, h=2), rs_residue=residue)
        local = euler_factor_sym2(level11_small, 3, 1.0).real
        expected = residue / local / (1.5 * (np.pi ** 2 / 6) * (8 / 9))
        assert result.first.leading == pytest.approx(expected, rel=1e-12)
        assert result.first.leading > 0
        assert result.slope == pytest.approx(2 * expected, rel=1e-12)
        assert result.constant_fitted

    def test_empty_product_for_unit_twists(self, level11_small, delta_small):
        assert A_l_closed(level11_small, delta_small, 1, 1.0) == 1.0

    def test_swapping_twists(self, level11_small, delta_small):
        spec = MainTermSpec(delta_small, level11_small, p=3, h=3, l1=2, l2=5)
        rs_value = rs_partial(delta_small, level11_small, 1.0).value
        result = main_term(spec, rs_value=rs_value)
        swapped = main_term(spec.swapped(), rs_value=rs_value)
        assert swapped.first.constant == pytest.approx(result.second.constant, rel=1e-12)
        assert swapped.second.constant == pytest.approx(result.first.constant, rel=1e-12)
        assert swapped.value() == pytest.approx(result.value(), rel=1e-12)
        assert result.slope == 0.0

    def test_fitted_constant(self, level11_small):
        result = main_term(MainTermSpec(level11_small, level11_small, p=3, h=2), rs_residue=1.0)
        fitted = result.with_constant(0.4)
        assert fitted.first.constant_provenance == FITTED
        assert fitted.value(0.0) == pytest.approx(0.4)

    @pytest.mark.parametrize("kwargs", [dict(l1=2, l2=4), dict(l1=11), dict(p=11), dict(p=2), dict(h=0)])
    def test_invalid_spec(self, level11_small, kwargs):
        params = dict(p=3, h=2, l1=1, l2=1)
        params.update(kwargs)
        with pytest.raises(ValidationError):
            MainTermSpec(level11_small, level11_small, **params)
