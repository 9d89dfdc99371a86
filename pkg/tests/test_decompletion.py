import os
import unittest
import sys
from fractions import Fraction

import numpy as np

sys.path.insert(0, os.path.normpath(os.path.dirname(__file__)).rsplit(os.path.sep, 1)[0])
from padic_simpson import exception
from padic_simpson import matrix as mx
from padic_simpson.cyclotomic import make_context
from padic_simpson.decompletion import (DescentState, coboundary, complement_cohomology_bound, complement_split,
                                        conjugate, conjugation_defect, coset_representatives, decomplete_rep,
                                        descend_cocycle, max_iterations, random_conjugator, solve_pi_coboundary,
                                        verify_smallness_upgrade)
from padic_simpson.representation import SmallRep, base_change, make_rep, trivial_rep
from padic_simpson.toric import PerfLaurentElt


CTX = make_context(3, 1, 4, D=1, G=2, a=1)

THIRD = (Fraction(1, 3),)


def monomial(exponent, coeff=1):
    return PerfLaurentElt.monomial(CTX, exponent, coeff)


def conjugated_trivial(scale):
    unit = mx.matrix([[PerfLaurentElt.constant(CTX, 1) + monomial(THIRD, scale)]])
    return conjugate(trivial_rep(CTX), unit)


class TestSplit(unittest.TestCase):

    def test_complement_split(self):
        mat = mx.matrix([[monomial(THIRD, CTX.pi) + monomial((1,), 2)]])
        integral, complement = complement_split(mat)
        self.assertEqual(integral[0, 0], monomial((1,), 2))
        self.assertEqual(complement[0, 0], monomial(THIRD, CTX.pi))


class TestCoboundary(unittest.TestCase):

    def test_solve(self):
        f = [[monomial(THIRD, CTX.pi)]]
        g = solve_pi_coboundary(f)
        self.assertEqual(coboundary(g, [mx.identity(PerfLaurentElt(CTX), PerfLaurentElt.constant(CTX, 1), 1)]),
                         [[f[0][0] * CTX.rho_k]])

    def test_integral_monomial(self):
        with self.assertRaises(exception.NotInComplementError):
            solve_pi_coboundary([[monomial((1,), CTX.pi)]])

    def test_iteration_limit(self):
        os.environ['SIMPSON_MAX_ITERATIONS'] = '1'
        try:
            self.assertEqual(max_iterations(), 1)
            with self.assertRaises(exception.ContractionFailure) as context:
                solve_pi_coboundary([[monomial(THIRD, CTX.pi)]])
            self.assertEqual(len(context.exception.trace), 1)
        finally:
            del os.environ['SIMPSON_MAX_ITERATIONS']
        self.assertEqual(max_iterations(), 64)


class TestDescent(unittest.TestCase):

    def test_trivial(self):
        state = decomplete_rep(base_change(trivial_rep(CTX)))
        self.assertEqual(state.trace, [])
        self.assertEqual(state.rep(), trivial_rep(CTX))

    def test_coboundary_descends(self):
        rep = conjugated_trivial(CTX.pi ** 3)
        state = decomplete_rep(rep)
        self.assertTrue(state.is_descended())
        self.assertLessEqual(len(state.trace), 8)
        values = [value for _, value, _ in state.trace]
        self.assertEqual(values, sorted(values))
        defect = conjugation_defect(rep, state)
        self.assertTrue(defect is None or defect >= CTX.N - 2)
        self.assertTrue(verify_smallness_upgrade(state.rep())['passed'])

    def test_hypothesis_check(self):
        with self.assertRaises(exception.HypothesisCheckError) as context:
            decomplete_rep(conjugated_trivial(CTX.pi))
        self.assertEqual(context.exception.name, 'complement part')
        self.assertEqual(context.exception.observed, 1)
        self.assertEqual(context.exception.required, Fraction(3, 2))

    def test_margin(self):
        with self.assertRaises(ValueError):
            descend_cocycle(base_change(trivial_rep(CTX)), 0)

    def test_not_descended(self):
        state = DescentState(CTX, conjugated_trivial(CTX.pi ** 3).mats, None, CTX.a)
        self.assertFalse(state.is_descended())
        with self.assertRaises(ValueError):
            state.rep()

    def test_random_conjugator(self):
        unit = random_conjugator(CTX, np.random.default_rng([5, 0]), 2, 3)
        self.assertEqual(unit.shape, (2, 2))
        self.assertEqual(mx.valuation(unit - mx.identity_like(unit)), Fraction(3, 2))
        exponents = set()
        for x in (unit - mx.identity_like(unit)).flat:
            exponents.update(x.terms)
        self.assertEqual(len(exponents), 1)

    def test_trace_json(self):
        state = decomplete_rep(conjugated_trivial(CTX.pi ** 3))
        self.assertEqual(DescentState.trace_from_json(state.trace_to_json()), state.trace)


class TestSmallnessUpgrade(unittest.TestCase):

    def test_small(self):
        result = verify_smallness_upgrade(make_rep(CTX, 'chart', [[[1 + CTX.pi ** 3]]]))
        self.assertTrue(result['passed'])
        self.assertEqual(result['h0_free_rank'], 3)

    def test_not_small(self):
        result = verify_smallness_upgrade(SmallRep(CTX, 'chart', [[[1 + CTX.pi]]]))
        self.assertFalse(result['direct_check'])
        self.assertEqual(result['h0_free_rank'], 0)
        self.assertFalse(result['passed'])


class TestComplementBound(unittest.TestCase):

    def test_representatives(self):
        self.assertEqual(coset_representatives(CTX), [(1,)])
        plane = make_context(5, 2, 6, D=1, G=2, d=2, a=Fraction(1, 2))
        cosets = coset_representatives(plane)
        self.assertEqual(len(cosets), 8)
        self.assertIn((5, 0), cosets)
        self.assertNotIn((0, 0), cosets)

    def test_trivial(self):
        result = complement_cohomology_bound(trivial_rep(CTX))
        self.assertTrue(result['passed'])
        self.assertEqual(len(result['cosets']), 1)
        self.assertEqual(result['cosets'][0]['coset'], [[1, 3]])
        self.assertEqual(result['cosets'][0]['max_torsion'], [1, 2])


if __name__ == '__main__':
    unittest.main()
