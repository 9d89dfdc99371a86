import os
import unittest
import sys
from fractions import Fraction

import numpy as np

sys.path.insert(0, os.path.normpath(os.path.dirname(__file__)).rsplit(os.path.sep, 1)[0])
from padic_simpson import exception
from padic_simpson import matrix as mx
from padic_simpson.cyclotomic import make_context
from padic_simpson.higgs import make_higgs, zero_higgs
from padic_simpson.period import RhoValue, parse_rho
from padic_simpson.representation import base_change, make_rep, random_rep, trivial_rep
from padic_simpson.simpson import (cohomology_compare, functoriality_check, higgs_to_rep, horizontal_sections,
                                   invariance_defect, invariant_basis, invariant_span_check,
                                   log_derivative_check, matrix_binomial_power, rep_to_higgs,
                                   roundtrip_check, section_gamma_check, section_span_check)
from padic_simpson.utils import fraction_from_json


CTX = make_context(3, 1, 6, D=1, G=3, a=1)


def scalar_higgs(value):
    return make_higgs(CTX, [[[value]]])


class TestFunctors(unittest.TestCase):

    def test_exp(self):
        p = CTX.p_elt
        rep = higgs_to_rep(scalar_higgs(p ** 2))
        # exp(-p^2) = 1 - p^2 + p^4/2 - p^6/6 mod p^6
        expected = 1 - p ** 2 + (p ** 4).div_int(2) - (p ** 5).div_int(2)
        self.assertEqual(rep.mats[0][0, 0].terms[(0,)], expected)
        self.assertEqual(rep.a, CTX.a)

    def test_zero(self):
        self.assertEqual(higgs_to_rep(zero_higgs(CTX, 2)), trivial_rep(CTX, 2))
        self.assertEqual(rep_to_higgs(trivial_rep(CTX, 2)), zero_higgs(CTX, 2))

    def test_perfectoid_has_no_partner(self):
        with self.assertRaises(ValueError):
            rep_to_higgs(base_change(trivial_rep(CTX)))

    def test_roundtrip(self):
        higgs = make_higgs(CTX, [[[CTX.p_elt ** 2, CTX.pi ** 3], [0, CTX.p_elt ** 2]]])
        result = roundtrip_check(rep=higgs_to_rep(higgs), higgs=higgs)
        self.assertTrue(result['passed'])

    def test_random_roundtrip(self):
        ctx = make_context(5, 2, 6, D=1, G=2, a=Fraction(1, 2))
        for trial in range(3):
            rep = random_rep(ctx, np.random.default_rng([11, trial]), 2)
            result = roundtrip_check(rep=rep)
            defect = fraction_from_json(result['max_defect_valuation'])
            self.assertTrue(defect is None or defect >= ctx.N - 2)


class TestInvariants(unittest.TestCase):

    def setUp(self):
        self.rep = higgs_to_rep(scalar_higgs(CTX.p_elt ** 2))

    def test_span(self):
        result = invariant_span_check(self.rep)
        self.assertTrue(result['passed'])
        self.assertEqual(result['kernel_rank'], result['vectors'])

    def test_trivial_basis(self):
        rep = trivial_rep(CTX)
        self.assertIsNone(invariance_defect(rep, invariant_basis(rep)))

    def test_rho_too_large(self):
        with self.assertRaises(exception.RhoTooLargeError):
            invariant_basis(self.rep, parse_rho(CTX, 'p*rho_k'))

    def test_log_derivative(self):
        self.assertTrue(log_derivative_check(self.rep)['passed'])

    def test_binomial_divergent(self):
        with self.assertRaises(exception.DivergentExponentError):
            matrix_binomial_power(mx.matrix([[CTX.pi]]), 0)


class TestSections(unittest.TestCase):

    def setUp(self):
        self.higgs = scalar_higgs(CTX.p_elt ** 2)

    def test_span(self):
        self.assertTrue(section_span_check(self.higgs)['passed'])

    def test_gamma(self):
        self.assertTrue(section_gamma_check(self.higgs)['passed'])

    def test_modes(self):
        sections, module = horizontal_sections(self.higgs, RhoValue.rho_k(CTX), mode='bruteforce')
        self.assertEqual(sections.shape[0], module.rank)
        with self.assertRaises(ValueError):
            horizontal_sections(self.higgs, mode='iterative')


class TestCohomologyCompare(unittest.TestCase):

    def test_scalar(self):
        rep = higgs_to_rep(scalar_higgs(CTX.p_elt ** 2))
        result = cohomology_compare(rep, instance_id=4)
        self.assertTrue(result['passed'])
        self.assertEqual(result['instance_id'], 4)
        self.assertEqual(result['degrees'][1]['rep_torsion'], result['degrees'][1]['higgs_torsion'])

    def test_trivial(self):
        result = cohomology_compare(trivial_rep(CTX))
        self.assertTrue(result['passed'])
        self.assertEqual([d['rep_free'] for d in result['degrees']], [3, 3])
        self.assertEqual(result['degrees'][0]['period_free'], 3)
        self.assertEqual(result['rho'], RhoValue.rho_k(CTX).descriptor)
        self.assertIsNone(result['roundtrip_max_defect_valuation'])

    def test_unipotent_scalar(self):
        # log(1 + p^2) has valuation 2, so H0 is ann(p^2) on each chart monomial.
        result = cohomology_compare(make_rep(CTX, 'chart', [[[1 + CTX.p_elt ** 2]]]))
        self.assertTrue(result['passed'])
        degree = result['degrees'][0]
        self.assertEqual(degree['rep_free'], 0)
        self.assertEqual(degree['higgs_free'], 0)
        self.assertEqual(degree['period_free'], 0)
        self.assertEqual(degree['rep_torsion'], [[2, 1]] * 3)
        self.assertEqual(degree['higgs_torsion'], [[2, 1]] * 3)

    def test_rho_too_large(self):
        with self.assertRaises(exception.RhoTooLargeError):
            cohomology_compare(trivial_rep(CTX), rho=parse_rho(CTX, 'p*rho_k'))


class TestFunctoriality(unittest.TestCase):

    def test_tensor_and_dual(self):
        first = higgs_to_rep(make_higgs(CTX, [[[CTX.p_elt ** 2, CTX.pi ** 3], [0, 0]]]))
        second = higgs_to_rep(scalar_higgs(CTX.pi ** 4))
        self.assertTrue(functoriality_check(first, second)['passed'])

    def test_trivial(self):
        result = functoriality_check(trivial_rep(CTX), make_rep(CTX, 'chart', [[[1]]]))
        self.assertIsNone(fraction_from_json(result['max_defect_valuation']))


if __name__ == '__main__':
    unittest.main()
