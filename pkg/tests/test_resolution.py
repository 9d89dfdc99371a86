import os
import unittest
import sys
from fractions import Fraction

sys.path.insert(0, os.path.normpath(os.path.dirname(__file__)).rsplit(os.path.sep, 1)[0])
from padic_simpson.cyclotomic import make_context
from padic_simpson.period import RhoValue, parse_rho
from padic_simpson.resolution import (expected_torsion, resolution_report, torsion_bound, transition_exponent,
                                      trivial_higgs_report, trivial_rep_report, truncated_transition_exponent)


CTX = make_context(5, 1, 6, D=1, G=4)


class TestTorsion(unittest.TestCase):

    def test_expected(self):
        self.assertEqual(expected_torsion(CTX, RhoValue.rho_k(CTX)), [])
        self.assertEqual(expected_torsion(CTX, parse_rho(CTX, 'rho_k*pi')), [Fraction(1, 4)] * 4)
        self.assertEqual(expected_torsion(CTX, parse_rho(CTX, 'p*rho_k')), [1] * 4)

    def test_bound(self):
        self.assertEqual(torsion_bound(CTX, RhoValue.rho_k(CTX)), 0)
        ctx = make_context(5, 1, 6, D=1, G=5)
        self.assertEqual(torsion_bound(ctx, parse_rho(ctx, 'p*rho_k')), 2)

    def test_higgs_complex(self):
        report = trivial_higgs_report(CTX, parse_rho(CTX, 'rho_k*pi'))
        self.assertEqual(report[0].stable_free_rank, 1)
        self.assertEqual(sorted(report[1].torsion_values(stable_only=True)), [Fraction(1, 4)] * 4)
        self.assertEqual(report[1].twist, -1)


class TestTransition(unittest.TestCase):

    def test_exponent(self):
        ctx = make_context(5, 2, 6, D=1, G=5)
        rho_k = RhoValue.rho_k(ctx)
        rho = parse_rho(ctx, 'rho_k*pi')
        self.assertEqual(transition_exponent(rho, rho_k), Fraction(4, 5))
        self.assertEqual(truncated_transition_exponent(ctx, rho, rho_k), Fraction(4, 5))
        self.assertEqual(transition_exponent(parse_rho(ctx, 'p*rho_k'), rho_k), 0)

    def test_truncated_below_full(self):
        ctx = make_context(5, 2, 6, D=1, G=4)
        rho = parse_rho(ctx, 'rho_k*pi')
        self.assertEqual(truncated_transition_exponent(ctx, rho, RhoValue.rho_k(ctx)), 0)

    def test_wrong_order(self):
        rho_k = RhoValue.rho_k(CTX)
        with self.assertRaises(ValueError):
            transition_exponent(rho_k, parse_rho(CTX, 'rho_k*pi'))
        with self.assertRaises(ValueError):
            truncated_transition_exponent(CTX, rho_k, rho_k)


class TestReports(unittest.TestCase):

    def test_resolution(self):
        report = resolution_report(CTX)
        self.assertTrue(report['passed'])
        self.assertTrue(report['trend_ok'])
        self.assertEqual([entry['rho'] for entry in report['entries']][0], 'rho_k')

    def test_trivial_rep(self):
        ctx = make_context(3, 1, 6, D=1, G=3, a=1)
        report = trivial_rep_report(ctx)
        self.assertTrue(report['passed'])
        self.assertEqual(report['h0_free_rank'], 3)
        self.assertEqual(report['expected_h1_torsion'], [[1, 2]] * 6 + [[3, 2]] * 3)


if __name__ == '__main__':
    unittest.main()
