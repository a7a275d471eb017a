"""Tests for coefficient sources, Hecke relations and prime statistics."""

from math import gcd, isqrt

import numpy as np
import pytest
from sympy import divisor_count, divisor_sigma, divisors, primerange, totient

from src.newforms import (
    CURVE_11A,
    SATO_TATE_MEAN,
    NewformTable,
    elliptic_ap,
    eta_product_coefficients,
    hecke_value_primepower,
    lambda_value,
    langlands_from_lambda,
    langlands_pair,
    lf_prime_set,
    load_qexpansion,
    satotate_pair_sum,
    satotate_sum,
    save_qexpansion,
)
from src.newforms.arithmetic import (
    divisor_counts,
    multiplicative_table,
    prime_power_part,
    primes_up_to,
    smallest_prime_factors,
)
from src.newforms.series import NTT_PRIMES, ntt
from src.utils.errors import InsufficientCoefficientsError, ValidationError


class TestArithmetic:
    def test_smallest_prime_factors(self):
        spf = smallest_prime_factors(100)
        assert spf[97] == 97
        assert spf[91] == 7
        assert spf[64] == 2

    def test_primes(self):
        assert primes_up_to(50).tolist() == list(primerange(2, 51))

    def test_prime_power_part(self):
        pp = prime_power_part(1000)
        assert pp[360] == 8
        assert pp[243] == 243
        assert pp[75] == 3
        assert pp[1] == 1

    def test_divisor_counts(self):
        d = divisor_counts(500)
        assert all(d[n] == divisor_count(n) for n in range(1, 501))

    def test_multiplicative_table_totient(self):
        phi = multiplicative_table(400, lambda ell, k: ell ** (k - 1) * (ell - 1), dtype=np.int64)
        assert all(phi[n] == totient(n) for n in range(1, 401))


class TestSeries:
    def test_ntt_inverse(self):
        prime, _ = NTT_PRIMES[-1]
        rng = np.random.default_rng(7)
        a = rng.integers(0, prime, size=64, dtype=np.int64)
        back = ntt(ntt(a, prime, 3), prime, 3, invert=True)
        assert np.array_equal(back, a)

    def test_delta_coefficients(self):
        table = eta_product_coefficients("delta", 11)
        assert [int(x) for x in table.a[1:7]] == [1, -24, 252, -1472, 4830, -6048]
        assert int(table.a[11]) == 534612

    def test_delta_matches_eisenstein_identity(self):
        # 1728 Delta = E4^3 - E6^2
        N = 120
        e4 = [1] + [240 * int(divisor_sigma(n, 3)) for n in range(1, N + 1)]
        e6 = [1] + [-504 * int(divisor_sigma(n, 5)) for n in range(1, N + 1)]

        def mul(a, b):
            return [sum(a[i] * b[n - i] for i in range(n + 1)) for n in range(N + 1)]

        e4_cubed = mul(mul(e4, e4), e4)
        e6_squared = mul(e6, e6)
        expected = [(x - y) // 1728 for x, y in zip(e4_cubed, e6_squared)]
        table = eta_product_coefficients("delta", N)
        assert [int(x) for x in table.a] == expected

    def test_level11_coefficients(self):
        table = eta_product_coefficients("level11", 13)
        assert [int(x) for x in table.a[1:8]] == [1, -2, -1, 2, 1, 2, -2]
        assert int(table.a[11]) == 1
        assert int(table.a[13]) == 4

    def test_unknown_form(self):
        with pytest.raises(ValidationError):
            eta_product_coefficients("level37", 10)

    def test_large_delta_is_exact_object_array(self, delta_small):
        assert delta_small.a.dtype == object
        assert delta_small.a[1] == 1


class TestElliptic:
    def test_invariants(self):
        assert (CURVE_11A.b2, CURVE_11A.b4, CURVE_11A.b6, CURVE_11A.b8) == (-4, -20, -79, -21)
        assert CURVE_11A.discriminant == -161051

    def test_examples(self):
        assert elliptic_ap(CURVE_11A, 2) == -2
        assert elliptic_ap(CURVE_11A, 13) == 4

    def test_bad_prime(self):
        with pytest.raises(ValidationError):
            elliptic_ap(CURVE_11A, 11)

    def test_matches_eta_expansion(self, level11_small):
        for ell in primerange(2, 10 ** 4):
            if ell != 11:
                assert elliptic_ap(CURVE_11A, ell) == int(level11_small.a[ell])


class TestHecke:
    def test_coprime_multiplicativity(self, level11_small):
        assert lambda_value(level11_small, 6) == pytest.approx(
            lambda_value(level11_small, 2) * lambda_value(level11_small, 3), rel=1e-12)

    def test_delta_square(self, delta_small):
        lam2 = lambda_value(delta_small, 2)
        assert lambda_value(delta_small, 4) == pytest.approx(lam2 ** 2 - 1, rel=1e-12)
        assert lambda_value(delta_small, 4) == pytest.approx(-1472 / 2048, rel=1e-12)

    def test_ramified_recursion(self, level11_small):
        lam11 = lambda_value(level11_small, 11)
        assert hecke_value_primepower(level11_small, 11, 2) == pytest.approx(lam11 ** 2, rel=1e-10)

    @pytest.mark.parametrize("ell", [2, 3, 5, 7, 13])
    def test_recursion_matches_table(self, delta_small, level11_small, ell):
        for table in (delta_small, level11_small):
            t = 1
            while ell ** t <= table.N:
                assert hecke_value_primepower(table, ell, t) == pytest.approx(
                    lambda_value(table, ell ** t), rel=1e-10, abs=1e-12)
                t += 1

    def test_multiplicativity_identity(self, level11_small, delta_small):
        for table in (level11_small, delta_small):
            for m in range(1, 120):
                for n in range(1, 120):
                    if m * n > table.N:
                        continue
                    rhs = sum(table.chi0(d) * lambda_value(table, m * n // (d * d))
                              for d in divisors(gcd(m, n)))
                    lhs = lambda_value(table, m) * lambda_value(table, n)
                    assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs))


class TestLanglands:
    def test_double_root(self):
        pair = langlands_from_lambda(2.0)
        assert pair.alpha == pair.beta == 1

    def test_imaginary_roots(self):
        pair = langlands_from_lambda(0.0)
        assert pair.alpha == pytest.approx(1j)
        assert pair.beta == pytest.approx(-1j)

    def test_level11_at_2(self, level11_small):
        pair = langlands_pair(level11_small, 2)
        assert (pair.alpha + pair.beta).real == pytest.approx(-np.sqrt(2), rel=1e-12)
        assert pair.alpha * pair.beta == pytest.approx(1.0)
        assert abs(pair.alpha) == pytest.approx(1.0)

    def test_reproduces_table(self, delta_small):
        pair = langlands_pair(delta_small, 3)
        for t in range(1, 9):
            assert pair.hecke_value(t).real == pytest.approx(lambda_value(delta_small, 3 ** t), abs=1e-10)

    def test_ramified_rejected(self, level11_small):
        with pytest.raises(ValidationError):
            langlands_pair(level11_small, 11)


class TestQExpansionFiles:
    def test_round_trip(self, tmp_path, level11_small):
        table = level11_small.truncated(300)
        path = tmp_path / "l11.txt"
        save_qexpansion(table, str(path))
        loaded = load_qexpansion(str(path))
        assert loaded.R == 11 and loaded.two_kappa == 2 and loaded.N == 300
        assert np.array_equal(loaded.a, table.a)

    def test_minimal_header(self, tmp_path):
        path = tmp_path / "elevens.txt"
        lines = ["# eleven", "level 11 weight 2"] + [f"{n} {a}" for n, a in enumerate([1, -2, -1, 2, 1, 2], 1)]
        path.write_text("\n".join(lines) + "\n")
        table = load_qexpansion(str(path))
        assert table.label == "elevens"
        assert table.eps_f == 1
        assert table.N == 6

    def test_multiplicativity_violation_names_n(self, tmp_path):
        path = tmp_path / "bad.txt"
        values = [1, -2, -1, 2, 1, 3]
        path.write_text("level 11 weight 2\n" + "".join(f"{n} {a}\n" for n, a in enumerate(values, 1)))
        with pytest.raises(ValidationError, match="n=6"):
            load_qexpansion(str(path))

    def test_gap_rejected(self, tmp_path):
        path = tmp_path / "gap.txt"
        path.write_text("level 11 weight 2\n1 1\n3 -1\n")
        with pytest.raises(ValidationError):
            load_qexpansion(str(path))

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_qexpansion(str(tmp_path / "absent.txt"))

    def test_embedded_real_table(self, tmp_path, level11_small):
        # a synthetic embedded-real form: the rational form written with floats
        path = tmp_path / "real.txt"
        body = "".join(f"{n} {float(level11_small.a[n])!r}\n" for n in range(1, 200))
        path.write_text("label sigma1 level 11 weight 2 eps +1\n" + body)
        table = load_qexpansion(str(path))
        assert not table.is_exact
        assert table.label == "sigma1"


class TestStatistics:
    def test_membership(self, level11_small):
        primes = lf_prime_set(level11_small, 3, 1000)
        assert 13 in primes
        assert 7 in primes
        assert 19 not in primes  # 19 = 1 mod 9
        assert 5 not in primes

    def test_short_table_rejected(self, level11_small):
        with pytest.raises(InsufficientCoefficientsError):
            lf_prime_set(level11_small, 3, level11_small.N + 1)

    def test_single_term_sum(self, level11_small):
        stat = satotate_sum(level11_small, 2)
        assert stat.total == pytest.approx(abs(lambda_value(level11_small, 2)) / 2)

    def test_pair_sum_excess_bounded(self, level11_small, delta_small):
        for f in (level11_small, delta_small):
            result = satotate_pair_sum(f, f, 20000)
            assert abs(result["excess"]) <= 3.0


@pytest.mark.slow
class TestLargeTables:
    @pytest.fixture(scope="class")
    def level11_large(self):
        return eta_product_coefficients("level11", 10 ** 6)

    def test_delta_deligne_to_million(self):
        table = eta_product_coefficients("delta", 10 ** 6)
        assert table.N == 10 ** 6

    def test_lf_density(self, level11_large):
        primes = lf_prime_set(level11_large, 3, 10 ** 6)
        assert abs(primes.density - 1 / 3) <= 0.05 / 3

    def test_sato_tate_mean(self, level11_large):
        stat = satotate_sum(level11_large, 10 ** 6)
        assert stat.mean_deviation <= 0.01
        assert stat.expected_mean == pytest.approx(SATO_TATE_MEAN)
