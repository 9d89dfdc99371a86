import os
import unittest
import sys
from fractions import Fraction

from hypothesis import given, settings, strategies as st

sys.path.insert(0, os.path.normpath(os.path.dirname(__file__)).rsplit(os.path.sep, 1)[0])
from padic_simpson import exception
from padic_simpson.cyclotomic import CycElt, context_from_json, epsilon_alpha, make_context, zeta_power


class TestContext(unittest.TestCase):

    def test_ramification(self):
        ctx = make_context(5, 2, 10)
        self.assertEqual(ctx.e, 20)
        self.assertEqual(ctx.level, 25)
        self.assertEqual(ctx.r, Fraction(1, 4))
        self.assertEqual(ctx.smallness, Fraction(3, 4))
        self.assertEqual(ctx.smallness_index, 15)

    def test_eisenstein(self):
        self.assertEqual(make_context(3, 1, 8, a=1).eisenstein, (3, 3))

    def test_invalid_prime(self):
        with self.assertRaises(exception.ConfigError):
            make_context(2, 1, 10)
        with self.assertRaises(exception.ConfigError):
            make_context(9, 1, 10)

    def test_smallness_hypothesis(self):
        with self.assertRaises(exception.SmallnessHypothesisError):
            make_context(3, 1, 10, a=Fraction(1, 2))
        self.assertTrue(issubclass(exception.SmallnessHypothesisError, exception.ConfigError))

    def test_fractional_index(self):
        with self.assertRaises(exception.ConfigError):
            make_context(5, 1, 10, a=Fraction(1, 3))

    def test_precision_headroom(self):
        with self.assertRaises(exception.ConfigError):
            make_context(3, 1, 3, a=1)
        make_context(3, 1, 4, a=1)

    def test_json(self):
        ctx = make_context(5, 2, 10, D=1, G=4, d=2)
        self.assertEqual(context_from_json(ctx.to_json()), ctx)

    def test_with_precision(self):
        ctx = make_context(3, 1, 6, a=1)
        lifted = ctx.with_precision(9)
        self.assertEqual(lifted.N, 9)
        self.assertIs(ctx.with_precision(9), lifted)
        self.assertIs(ctx.with_precision(6), ctx)


class TestCycElt(unittest.TestCase):

    def setUp(self):
        self.ctx = make_context(5, 2, 6)

    def test_valuation(self):
        ctx = self.ctx
        self.assertEqual(ctx.pi.valuation(), Fraction(1, 20))
        self.assertEqual(ctx.p_elt.valuation(), 1)
        self.assertEqual(ctx.rho_k.valuation(), ctx.r)
        self.assertEqual((ctx.pi ** ctx.e).valuation(), 1)
        self.assertIsNone(ctx.zero.valuation())
        self.assertIsNone((ctx.p_elt ** ctx.N).valuation())

    def test_inverse(self):
        ctx = self.ctx
        unit = 2 + ctx.pi * 3
        self.assertEqual(unit * unit.inverse(), ctx.one)
        with self.assertRaises(exception.NonUnitError):
            ctx.pi.inverse()

    def test_exact_div(self):
        ctx = self.ctx
        value = ctx.pi ** 7 * (1 + ctx.pi)
        divisor = ctx.pi ** 3 * 2
        self.assertEqual(value.exact_div(divisor) * divisor, value)
        self.assertEqual(value.exact_div(divisor).valuation(), Fraction(4, 20))
        with self.assertRaises(exception.NotDivisibleError):
            divisor.exact_div(value)

    def test_div_int(self):
        ctx = self.ctx
        self.assertEqual((ctx.one * 15).div_int(5), ctx.one * 3)
        self.assertEqual((ctx.one * 6).div_int(-3), ctx.one * -2)
        with self.assertRaises(exception.NotDivisibleError):
            (ctx.one * 7).div_int(5)

    def test_unit_part(self):
        ctx = self.ctx
        k, unit = (ctx.pi ** 5 * 3).unit_part()
        self.assertEqual(k, 5)
        self.assertEqual(unit.valuation(), 0)

    def test_json(self):
        value = self.ctx.pi * 4 + 7
        self.assertEqual(CycElt.from_json(self.ctx, value.to_json()), value)

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.integers(0, 15624), min_size=20, max_size=20),
           st.lists(st.integers(0, 15624), min_size=20, max_size=20))
    def test_fast_product(self, left, right):
        ctx = self.ctx
        self.assertTrue(ctx.fast)
        product = [0] * 39
        for i, a in enumerate(left):
            for j, b in enumerate(right):
                product[i + j] += a * b
        self.assertEqual(CycElt(ctx, left) * CycElt(ctx, right), CycElt(ctx, product))

    def test_small_degree_not_fast(self):
        self.assertFalse(make_context(3, 1, 6, a=1).fast)
        self.assertFalse(make_context(5, 2, 40).fast)

    def test_foreign_context(self):
        other = make_context(5, 2, 7)
        with self.assertRaises(ValueError):
            self.ctx.pi + other.pi


class TestRootsOfUnity(unittest.TestCase):

    def setUp(self):
        self.ctx = make_context(5, 2, 6)

    def test_zeta_p(self):
        ctx = make_context(5, 1, 4)
        self.assertEqual(zeta_power(ctx, Fraction(1, 5)), 1 + ctx.pi)

    def test_integral_exponent(self):
        self.assertEqual(zeta_power(self.ctx, 3), self.ctx.one)

    def test_order(self):
        zeta = zeta_power(self.ctx, Fraction(1, 25))
        self.assertEqual(zeta ** 25, self.ctx.one)
        self.assertNotEqual(zeta ** 5, self.ctx.one)

    def test_insufficient_level(self):
        with self.assertRaises(exception.InsufficientLevelError):
            zeta_power(self.ctx, Fraction(1, 125))

    @settings(max_examples=30, deadline=None)
    @given(st.integers(-60, 60), st.integers(-60, 60))
    def test_homomorphism(self, x, y):
        ctx = self.ctx
        left = zeta_power(ctx, Fraction(x, 25)) * zeta_power(ctx, Fraction(y, 25))
        self.assertEqual(left, zeta_power(ctx, Fraction(x + y, 25)))

    def test_epsilon(self):
        ctx = self.ctx
        self.assertEqual(epsilon_alpha(ctx, Fraction(1, 5)).valuation(), ctx.r)
        self.assertEqual(epsilon_alpha(ctx, Fraction(2, 25)).valuation(), Fraction(1, 20))
        with self.assertRaises(exception.EpsilonUndefinedError):
            epsilon_alpha(ctx, 2)


if __name__ == '__main__':
    unittest.main()
