"""Sequence generators, inter-family transforms, and integrality behavior."""

import random
from fractions import Fraction

import pytest

from recint.multipoly import MultiPoly, denom_profile, parse_poly
from recint.scalars import factorial, lcm_upto
from recint.sequences import (
    RING_BC,
    apery_closed_form,
    gen_apery,
    gen_u,
    gen_w,
    inv_formula_sum,
    poch_product,
    seq_records,
    split_sqrt_parity,
    u_bin,
    u_c0,
    u_conv,
    w_inv,
)


class TestGenW:
    def test_frozen_first_terms(self):
        w = gen_w(4)
        assert w[0].text() == "1"
        assert w[1].text() == "b"
        assert w[2].text() == "1/2*b^2 - b"
        assert w[3].text() == "1/6*b^3 - 4/3*b^2 + 2*b + 1/3*c"
        assert w[4].text() == "1/24*b^4 - 5/6*b^3 + 9/2*b^2 + 1/3*b*c - 6*b - c"

    def test_recurrence_numerically(self):
        # independent scalar-arithmetic replay of the recurrence
        rng = random.Random(31)
        w = gen_w(15)
        for _ in range(25):
            pt = {"b": Fraction(rng.randint(-9, 9)), "c": Fraction(rng.randint(-9, 9))}
            vals = [Fraction(1)]
            for n in range(1, 16):
                acc = (pt["b"] - n * (n - 1)) * vals[n - 1]
                if n >= 3:
                    acc += pt["c"] * vals[n - 3]
                vals.append(acc / n)
            for n in range(16):
                assert w[n].eval(pt) == vals[n]

    def test_denominator_is_exactly_factorial(self):
        w = gen_w(15)
        for n in range(16):
            assert denom_profile(w[n]).lcm_denominator == factorial(n)

    def test_factorial_scale_clears_denominators(self):
        w = gen_w(30)
        for n in range(31):
            assert denom_profile(w[n] * factorial(n)).lcm_denominator == 1

    def test_lcm_scale_does_not_clear_from_n4(self):
        # lcm(1..n) is too small from n = 4 on: the leading coefficient of
        # w[n] is 1/n! and n! does not divide lcm(1..n) for n >= 4
        w = gen_w(8)
        for n in range(4):
            assert denom_profile(w[n] * lcm_upto(n)).lcm_denominator == 1
        for n in range(4, 9):
            assert denom_profile(w[n] * lcm_upto(n)).lcm_denominator > 1
        assert denom_profile(w[4] * lcm_upto(4)).lcm_denominator == 2

    def test_leading_coefficient(self):
        w = gen_w(10)
        for n in range(11):
            assert w[n].terms.get((n, 0)) == Fraction(1, factorial(n))

    def test_weighted_degree_is_index(self):
        # wt(b) = 1, wt(c) = 2: the maximum weighted degree equals n
        # (strict homogeneity fails from n = 2: w[2] mixes weights 1 and 2)
        w = gen_w(20)
        for n in range(21):
            weights = {i + 2 * j for (i, j) in w[n].terms}
            assert max(weights, default=0) == n
        assert {i + 2 * j for (i, j) in w[2].terms} == {1, 2}

    def test_negative_length_rejected(self):
        with pytest.raises(ValueError):
            gen_w(-1)

    def test_prefix_stability(self):
        # the cache returns identical objects for overlapping prefixes
        a = gen_w(5)
        b = gen_w(9)
        for n in range(6):
            assert a[n] == b[n]


class TestGenU:
    def test_frozen_first_terms(self):
        u = gen_u(3)
        assert u[0].text() == "1"
        assert u[1].text() == "-2*b"
        assert u[2].text() == "6*b^2 - 12*b - 2*c"
        assert u[3].text() == "-20*b^3 + 160*b^2 + 12*b*c - 240*b - 40*c"

    def test_integrality_at_unit_scale(self):
        u = gen_u(30)
        for n in range(31):
            assert denom_profile(u[n]).lcm_denominator == 1

    def test_weighted_degree_is_index(self):
        u = gen_u(20)
        for n in range(21):
            weights = {i + 2 * j for (i, j) in u[n].terms}
            assert max(weights, default=0) == n
        assert {i + 2 * j for (i, j) in u[2].terms} == {1, 2}

    def test_parity_of_leading_sign(self):
        u = gen_u(8)
        for n in range(9):
            lead = u[n].terms.get((n, 0))
            assert lead is not None
            assert (lead < 0) == (n % 2 == 1)


class TestTransforms:
    def test_convolution_matches_generator(self):
        u = gen_u(12)
        conv = u_conv(12, gen_w(24))
        assert all(conv[m] == u[m] for m in range(13))

    def test_binomial_formula_matches_generator(self):
        u = gen_u(12)
        ub = u_bin(12, gen_w(12))
        assert all(ub[m] == u[m] for m in range(13))

    def test_conv_requires_double_length(self):
        with pytest.raises(ValueError):
            u_conv(5, gen_w(9))

    def test_bin_requires_full_length(self):
        with pytest.raises(ValueError):
            u_bin(5, gen_w(4))

    def test_inversion_matches_scaled_w(self):
        w = gen_w(10)
        wi = w_inv(10, gen_u(10))
        for n in range(11):
            assert wi[n] == w[n] * factorial(n)

    def test_inversion_requires_full_length(self):
        with pytest.raises(ValueError):
            w_inv(5, gen_u(4))

    def test_inversion_raw_sum_has_no_odd_sqrt_powers(self):
        u = gen_u(8)
        for n in range(9):
            raw = inv_formula_sum(n, u)
            _, odd = split_sqrt_parity(raw)
            assert odd.is_zero()

    def test_sqrt_parity_split_recombines(self):
        from recint.sequences import RING_BS

        p = parse_poly("b^2*s + 3*s^2 - s^3 + 7", RING_BS)
        even, odd = split_sqrt_parity(p)
        assert even + odd == p
        assert all(j % 2 == 0 for (_, j) in even.terms)
        assert all(j % 2 == 1 for (_, j) in odd.terms)

    def test_odd_power_cancellation_is_structural(self):
        # the cancellation is a binomial-coefficient identity: it holds for
        # arbitrary input sequences, not just the genuine u family
        rng = random.Random(7)
        fake_terms = [MultiPoly.one(RING_BC)] + [
            MultiPoly(
                RING_BC,
                {
                    (rng.randint(0, 3), rng.randint(0, 2)): Fraction(rng.randint(-9, 9))
                    for _ in range(3)
                },
            )
            for _ in range(6)
        ]
        fake = type(gen_u(0))(RING_BC, fake_terms, "random")
        for n in range(7):
            _, odd = split_sqrt_parity(inv_formula_sum(n, fake))
            assert odd.is_zero()

    def test_poisoned_input_breaks_reconstruction(self):
        # what a wrong input does break is the equality with the scaled
        # base sequence, not the parity cancellation
        u = gen_u(4)
        poisoned = type(u)(u.ring, list(u.terms), u.provenance)
        poisoned.terms[1] = poisoned.terms[1] + 1
        out = w_inv(4, poisoned)
        w = gen_w(4)
        assert any(out[n] != w[n] * factorial(n) for n in range(5))


class TestSpecializations:
    def test_poch_product_structure(self):
        p3 = poch_product(3)
        assert p3 == parse_poly("-b^3 + 8*b^2 - 12*b", poch_product(1).vs)
        assert poch_product(0).constant_value() == 1

    def test_c0_closed_form_matches_generator(self):
        u = gen_u(15)
        for n in range(16):
            collapsed = u[n].subst_value("c", 0)
            expected = u_c0(n).cast(RING_BC)
            assert collapsed == expected

    def test_c0_closed_form_values(self):
        assert u_c0(2).text() == "6*b^2 - 12*b"


class TestApery:
    def test_frozen_prefix(self):
        assert gen_apery(5) == [1, 5, 73, 1445, 33001, 819005]

    def test_matches_closed_form(self):
        terms = gen_apery(20)
        for n in range(21):
            assert terms[n] == apery_closed_form(n)

    def test_all_divisions_exact(self):
        # the generator raises if any /n^3 step leaves a remainder
        gen_apery(40)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            gen_apery(-2)


class TestRecords:
    def test_seq_records_shape(self):
        recs = seq_records(gen_w(3))
        assert [r["n"] for r in recs] == [0, 1, 2, 3]
        assert recs[3]["poly"] == "1/6*b^3 - 4/3*b^2 + 2*b + 1/3*c"
        assert recs[3]["denominator"] == 6
        assert recs[3]["v2_defect"] == 1
        assert recs[2]["denominator"] == 2

    def test_paramseq_container(self):
        w = gen_w(4)
        assert len(w) == 5
        assert w[2] is w.terms[2]
