"""Tests for characters, Gauss sums, Teichmuller lifts and Galois averages."""

from fractions import Fraction
from math import gcd

import numpy as np
import pytest

from src.characters import (
    CharacterTable,
    CyclotomicElement,
    GaloisAverageContext,
    build_character_table,
    evaluate_complex,
    evaluate_exact,
    galois_average,
    galois_average_bruteforce,
    gauss_sum,
    gauss_sums_all,
    subfield_trace_root_of_unity,
    teichmuller_decompose,
    wild_characters,
)
from src.utils.errors import ValidationError


class TestCyclotomicElement:
    def test_cyclotomic_relation_is_zero(self):
        # 1 + z + z^2 = 0 in Q(mu_3)
        assert CyclotomicElement(3, [1, 1, 1]).is_zero()

    def test_multiplication_wraps_exponents(self):
        z = CyclotomicElement.root(9, 5)
        assert z * z == CyclotomicElement.root(9, 1)

    def test_galois_and_conjugate(self):
        z = CyclotomicElement.root(9, 2)
        assert z.galois(4) == CyclotomicElement.root(9, 8)
        assert z.conjugate() == CyclotomicElement.root(9, 7)

    def test_rational_value(self):
        x = CyclotomicElement(9, [Fraction(1, 2)]) + CyclotomicElement(9, [0, 0, 0, 1, 0, 0, 1])
        # z^3 + z^6 = -1
        assert x.rational_value() == Fraction(-1, 2)

    def test_embed_matches_root_of_unity(self):
        assert abs(CyclotomicElement.root(9, 1).embed() - np.exp(2j * np.pi / 9)) < 1e-14

    def test_equality_across_orders(self):
        assert CyclotomicElement.root(3, 1) == CyclotomicElement.root(9, 3)


class TestCharacterTable:
    @pytest.mark.parametrize("p,h,phi", [(3, 2, 6), (3, 1, 2), (5, 2, 20), (7, 3, 294)])
    def test_phi(self, p, h, phi):
        assert build_character_table(p, h).phi == phi

    def test_primitive_root_mod_9(self):
        assert build_character_table(3, 2).g == 2

    @pytest.mark.parametrize("p,h", [(3, 4), (5, 3), (11, 2)])
    def test_dlog_is_bijective_inverse(self, p, h):
        table = build_character_table(p, h)
        units = table.units()
        assert len(units) == table.phi
        assert sorted(table.dlog[units].tolist()) == list(range(table.phi))
        for n in units[:200]:
            assert pow(table.g, int(table.dlog[n]), table.q) == n

    @pytest.mark.parametrize("p,h", [(2, 3), (9, 1), (3, 0)])
    def test_invalid_inputs(self, p, h):
        with pytest.raises(ValidationError):
            build_character_table(p, h)


class TestWildCharacters:
    @pytest.mark.parametrize("p,h,count", [(3, 2, 2), (3, 3, 6), (5, 2, 4), (3, 4, 18)])
    def test_counts(self, p, h, count):
        assert len(wild_characters(build_character_table(p, h))) == count

    def test_indices_mod_9(self):
        assert [chi.j for chi in wild_characters(build_character_table(3, 2))] == [2, 4]

    def test_structure(self):
        table = build_character_table(3, 4)
        wild = wild_characters(table)
        indices = {chi.j for chi in wild}
        for chi in wild:
            assert chi.order == 27
            assert chi.is_primitive
            assert chi.is_even
            for a in range(1, 27):
                if a % 3:
                    assert chi.power(a).j in indices

    def test_h1_rejected(self):
        with pytest.raises(ValidationError):
            wild_characters(build_character_table(3, 1))


class TestEvaluation:
    def test_exact_values_mod_9(self):
        chi = build_character_table(3, 2).character(2)
        assert evaluate_exact(chi, 2) == CyclotomicElement.root(3, 1)
        assert evaluate_exact(chi, 1) == CyclotomicElement.one(3)
        assert evaluate_exact(chi, 3).is_zero()
        assert abs(evaluate_complex(chi, 2) - np.exp(2j * np.pi / 3)) < 1e-14
        assert evaluate_complex(chi, 6) == 0

    def test_multiplicative(self):
        table = build_character_table(5, 3)
        chi = wild_characters(table)[3]
        for m in (2, 7, 11):
            for n in (3, 13, 124):
                assert evaluate_exact(chi, m * n) == evaluate_exact(chi, m) * evaluate_exact(chi, n)

    def test_principal_units_give_primitive_roots(self):
        # n = 1 mod p, n != 1 mod p^2 generates 1 + pZ mod p^h
        table = build_character_table(3, 4)
        chi = wild_characters(table)[0]
        for n in (4, 7, 13):
            value = evaluate_exact(chi, n)
            assert gcd(chi.exponent(n), 27) == 1
            assert value != CyclotomicElement.one(27)


class TestGaussSums:
    @pytest.mark.parametrize("p,h", [(3, 1), (3, 2), (3, 3), (3, 4), (3, 5), (5, 1), (5, 2), (7, 2)])
    def test_modulus_squared(self, p, h):
        table = build_character_table(p, h)
        for j in range(table.phi):
            chi = table.character(j)
            if chi.is_primitive:
                assert abs(abs(gauss_sum(chi)) ** 2 - table.q) <= 1e-10 * table.q

    def test_trivial_modulus_one(self):
        assert gauss_sum(CharacterTable.trivial().character(0)) == 1

    def test_conjugate_product_for_even_wild(self):
        for chi in wild_characters(build_character_table(3, 3)):
            product = gauss_sum(chi) * gauss_sum(chi.conjugate())
            assert abs(product - 27) < 1e-9

    def test_imprimitive_rejected(self):
        with pytest.raises(ValidationError):
            gauss_sum(build_character_table(3, 2).character(3))

    def test_fft_matches_direct(self):
        table = build_character_table(5, 2)
        all_sums = gauss_sums_all(table)
        for j in range(table.phi):
            chi = table.character(j)
            if chi.is_primitive:
                assert abs(all_sums[j] - gauss_sum(chi)) < 1e-9


class TestTeichmuller:
    def test_examples(self):
        assert teichmuller_decompose(2, 3, 2) == (8, 7)
        assert teichmuller_decompose(2, 3, 3) == (26, 25)
        assert teichmuller_decompose(1, 5, 4) == (1, 1)

    @pytest.mark.parametrize("p,h", [(3, 4), (5, 3), (7, 2)])
    def test_properties(self, p, h):
        q = p ** h
        for n in range(1, 300):
            if n % p == 0:
                continue
            root, principal = teichmuller_decompose(n, p, h)
            assert pow(root, p - 1, q) == 1
            assert principal % p == 1
            assert root * principal % q == n % q

    def test_multiple_of_p_rejected(self):
        with pytest.raises(ValidationError):
            teichmuller_decompose(6, 3, 2)


class TestGaloisAverage:
    def test_zero_case(self):
        chi = wild_characters(build_character_table(3, 3))[0]
        assert galois_average(chi, 2, GaloisAverageContext.rational(3)).is_zero()

    def test_identity_element(self):
        chi = wild_characters(build_character_table(3, 4))[0]
        for ctx in (GaloisAverageContext.rational(3), GaloisAverageContext.cyclotomic(3, 2)):
            assert galois_average(chi, 1, ctx) == 1

    @pytest.mark.parametrize("p,h,ctx", [
        (3, 2, GaloisAverageContext.rational(3)),
        (3, 3, GaloisAverageContext.rational(3)),
        (3, 4, GaloisAverageContext.rational(3)),
        (5, 2, GaloisAverageContext.rational(5)),
        (3, 4, GaloisAverageContext.cyclotomic(3, 2)),
        (3, 4, GaloisAverageContext.real_cyclotomic(3, 2)),
    ])
    def test_matches_conjugate_enumeration(self, p, h, ctx):
        chi = wild_characters(build_character_table(p, h))[0]
        for n in range(1, 1001):
            if n % p:
                assert galois_average(chi, n, ctx) == galois_average_bruteforce(chi, n, ctx)

    def test_h_not_above_h0_rejected(self):
        chi = wild_characters(build_character_table(3, 2))[0]
        with pytest.raises(ValidationError):
            galois_average(chi, 2, GaloisAverageContext.cyclotomic(3, 2))

    def test_h0_bound_enforced(self):
        with pytest.raises(ValidationError):
            GaloisAverageContext(p=3, h0=3, F_degree=2)


class TestSubfieldTrace:
    def test_primitive_ninth_root(self):
        assert subfield_trace_root_of_unity(CyclotomicElement.root(9, 1), 3, 1).is_zero()

    def test_in_field_case(self):
        zeta = CyclotomicElement.root(9, 3)
        assert subfield_trace_root_of_unity(zeta, 3, 1) == zeta.scale(3)

    def test_primitive_27th_root(self):
        assert subfield_trace_root_of_unity(CyclotomicElement.root(27, 1), 3, 2).is_zero()

    @pytest.mark.parametrize("top", [1, 2, 3])
    def test_orthogonality_grid(self, top):
        m = 3 ** top
        for r in range(1, top + 1):
            index = 3 ** (top - r)
            for k in range(m):
                zeta = CyclotomicElement.root(m, k)
                trace = subfield_trace_root_of_unity(zeta, 3, r)
                if k % (m // 3 ** r) == 0:
                    assert trace == zeta.scale(index)
                else:
                    assert trace.is_zero()

    def test_rational_subfield_rejected(self):
        with pytest.raises(ValidationError):
            subfield_trace_root_of_unity(CyclotomicElement.root(9, 1), 3, 0)
