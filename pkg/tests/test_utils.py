import os
import unittest
import sys
from fractions import Fraction

sys.path.insert(0, os.path.normpath(os.path.dirname(__file__)).rsplit(os.path.sep, 1)[0])
from padic_simpson import type_hints
from padic_simpson.utils import (at_least, env_int, exponent_from_str, exponent_to_str, fraction_from_json,
                                 fraction_to_json, min_valuation, parse_fraction, vp, vp_factorial)


class TestTypeHints(unittest.TestCase):

    def test_runtime_flag(self):
        self.assertFalse(type_hints.TYPE_CHECKING)


class TestValuations(unittest.TestCase):

    def test_vp(self):
        self.assertEqual(vp(5, 250), 3)
        self.assertEqual(vp(3, -18), 2)
        with self.assertRaises(ValueError):
            vp(3, 0)

    def test_vp_factorial(self):
        self.assertEqual(vp_factorial(5, 25), 6)
        self.assertEqual(vp_factorial(3, 9), 4)
        self.assertEqual(vp_factorial(3, 1), 0)

    def test_min_valuation(self):
        self.assertEqual(min_valuation([None, Fraction(3, 2), 1]), 1)
        self.assertIsNone(min_valuation([None, None]))

    def test_at_least(self):
        self.assertTrue(at_least(None, 100))
        self.assertFalse(at_least(Fraction(1, 2), 1))


class TestParsing(unittest.TestCase):

    def test_fraction(self):
        self.assertEqual(parse_fraction('3/4'), Fraction(3, 4))
        self.assertEqual(parse_fraction(2), 2)
        self.assertEqual(parse_fraction([1, 3]), Fraction(1, 3))
        self.assertEqual(fraction_from_json(fraction_to_json(Fraction(-5, 6))), Fraction(-5, 6))
        self.assertIsNone(fraction_to_json(None))

    def test_exponent(self):
        exponent = (Fraction(1, 5), Fraction(-2))
        self.assertEqual(exponent_to_str(exponent), '1/5,-2/1')
        self.assertEqual(exponent_from_str('1/5,-2/1'), exponent)

    def test_env_int(self):
        self.assertEqual(env_int('SIMPSON_TEST_LIMIT', 7), 7)
        os.environ['SIMPSON_TEST_LIMIT'] = '12'
        self.assertEqual(env_int('SIMPSON_TEST_LIMIT', 7), 12)
        os.environ['SIMPSON_TEST_LIMIT'] = 'many'
        self.assertEqual(env_int('SIMPSON_TEST_LIMIT', 7), 7)
        del os.environ['SIMPSON_TEST_LIMIT']


if __name__ == '__main__':
    unittest.main()
