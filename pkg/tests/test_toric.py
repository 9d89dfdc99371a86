import os
import unittest
import sys
from fractions import Fraction

from hypothesis import given, settings, strategies as st

sys.path.insert(0, os.path.normpath(os.path.dirname(__file__)).rsplit(os.path.sep, 1)[0])
from padic_simpson import exception
from padic_simpson.cyclotomic import make_context
from padic_simpson.toric import (LaurentElt, PerfLaurentElt, as_base, box_exponents, gamma_act,
                                 gauss_valuation, solve_gamma_shift, split_integral)


CTX = make_context(3, 1, 6, D=1, G=3, a=1)

exponents = st.integers(-3, 3).map(lambda k: (Fraction(k, 3),))


def monomial(exponent, coeff=1):
    return PerfLaurentElt.monomial(CTX, exponent, coeff)


class TestLaurent(unittest.TestCase):

    def test_product(self):
        self.assertEqual(monomial((Fraction(1, 3),)) * monomial((Fraction(2, 3),)), monomial((1,)))

    def test_overflow(self):
        product = monomial((1,)) * monomial((Fraction(1, 3),))
        self.assertTrue(product.is_zero())
        self.assertTrue(product.overflow)
        self.assertFalse((monomial((1,)) * monomial((-1,))).overflow)

    def test_outside_box(self):
        with self.assertRaises(ValueError):
            monomial((2,))

    def test_chart_exponents(self):
        with self.assertRaises(ValueError):
            LaurentElt.monomial(CTX, (Fraction(1, 3),))
        self.assertIsInstance(LaurentElt.monomial(CTX, (1,)) * 2, LaurentElt)

    def test_level(self):
        with self.assertRaises(exception.InsufficientLevelError):
            monomial((Fraction(1, 9),))

    def test_box(self):
        self.assertEqual(len(box_exponents(CTX)), 7)
        self.assertEqual(box_exponents(CTX, integral=True), [(-3,), (0,), (3,)])

    def test_box_coset(self):
        self.assertEqual(box_exponents(CTX, coset=(1,)), [(-2,), (1,)])
        self.assertEqual(box_exponents(CTX, coset=(2,)), [(-1,), (2,)])
        self.assertEqual(box_exponents(CTX, coset=(0,)), box_exponents(CTX, integral=True))
        plane = make_context(3, 1, 6, D=1, G=3, d=2, a=1)
        expected = [k for k in box_exponents(plane) if (k[0] - 1) % 3 == 0 and k[1] % 3 == 0]
        self.assertEqual(box_exponents(plane, coset=(1, 0)), expected)

    def test_gauss_valuation(self):
        x = monomial((Fraction(1, 3),), CTX.pi) + monomial((0,), CTX.p_elt)
        self.assertEqual(gauss_valuation(x), Fraction(1, 2))
        self.assertIsNone(gauss_valuation(PerfLaurentElt(CTX)))

    def test_split(self):
        x = monomial((Fraction(1, 3),), 2) + monomial((1,), 5)
        integral, complement = split_integral(x)
        self.assertIsInstance(integral, LaurentElt)
        self.assertEqual(integral, monomial((1,), 5))
        self.assertEqual(complement, monomial((Fraction(1, 3),), 2))

    def test_as_base(self):
        self.assertIsInstance(as_base(CTX, 3, 'chart'), LaurentElt)
        self.assertIsInstance(as_base(CTX, monomial((1,)), 'chart'), LaurentElt)
        with self.assertRaises(ValueError):
            as_base(CTX, monomial((Fraction(1, 3),)), 'chart')
        with self.assertRaises(ValueError):
            as_base(CTX, 1, 'torus')

    def test_json(self):
        x = monomial((Fraction(-2, 3),), CTX.pi) + monomial((1,), 4)
        self.assertEqual(PerfLaurentElt.from_json(CTX, x.to_json()), x)
        with self.assertRaises(ValueError):
            LaurentElt.from_json(CTX, x.to_json())


class TestGamma(unittest.TestCase):

    def test_root_of_unity(self):
        x = monomial((Fraction(1, 3),))
        self.assertEqual(gamma_act(0, 1, x), monomial((Fraction(1, 3),), CTX.zeta(1)))
        self.assertEqual(gamma_act(0, 3, x), x)

    def test_chart_fixed(self):
        x = LaurentElt.monomial(CTX, (1,), 7)
        self.assertEqual(gamma_act(0, 1, x), x)

    def test_index(self):
        with self.assertRaises(ValueError):
            gamma_act(1, 1, monomial((0,)))

    @settings(max_examples=25, deadline=None)
    @given(exponents, exponents, st.integers(-4, 4))
    def test_multiplicative(self, first, second, k):
        x, y = monomial(first, 2), monomial(second, CTX.pi + 1)
        self.assertEqual(gamma_act(0, k, x * y), gamma_act(0, k, x) * gamma_act(0, k, y))
        self.assertEqual(gamma_act(0, -k, gamma_act(0, k, x)), x)

    def test_solve_shift(self):
        y = monomial((Fraction(1, 3),), CTX.pi) + monomial((Fraction(-2, 3),), CTX.pi * 2)
        g = solve_gamma_shift(0, y)
        self.assertEqual(gamma_act(0, 1, g) - g, y)

    def test_solve_shift_integral(self):
        with self.assertRaises(exception.NotInComplementError) as context:
            solve_gamma_shift(0, monomial((1,), CTX.pi))
        self.assertEqual(context.exception.exponent, (Fraction(1),))

    def test_solve_shift_not_divisible(self):
        with self.assertRaises(exception.NotDivisibleError):
            solve_gamma_shift(0, monomial((Fraction(1, 3),), 1))


if __name__ == '__main__':
    unittest.main()
