import os
import unittest
import sys
from fractions import Fraction

import numpy as np

sys.path.insert(0, os.path.normpath(os.path.dirname(__file__)).rsplit(os.path.sep, 1)[0])
from padic_simpson import exception
from padic_simpson import matrix as mx
from padic_simpson.cyclotomic import make_context
from padic_simpson.higgs import SmallHiggs, dual, higgs_cohomology, make_higgs, random_higgs, tensor, zero_higgs


CTX = make_context(3, 1, 6, D=1, G=3, a=1)

PLANE = make_context(3, 1, 6, D=1, G=3, d=2, a=1)


class TestMakeHiggs(unittest.TestCase):

    def test_valid(self):
        higgs = make_higgs(CTX, [[[CTX.p_elt ** 2]]])
        self.assertEqual(higgs.smallness_valuation(), 2)
        self.assertEqual((higgs.l, higgs.d), (1, 1))

    def test_not_small(self):
        with self.assertRaises(exception.NotSmallError) as context:
            make_higgs(CTX, [[[CTX.pi]]])
        self.assertEqual(context.exception.required, Fraction(3, 2))

    def test_not_flat(self):
        small = PLANE.p_elt ** 2
        with self.assertRaises(exception.NotFlatError):
            make_higgs(PLANE, [[[0, small], [0, 0]], [[0, 0], [small, 0]]])

    def test_component_count(self):
        with self.assertRaises(ValueError):
            make_higgs(PLANE, [[[0]]])

    def test_zero(self):
        higgs = zero_higgs(CTX, 2)
        self.assertIsNone(higgs.smallness_valuation())
        self.assertEqual(higgs.l, 2)

    def test_json(self):
        higgs = make_higgs(CTX, [[[CTX.p_elt ** 2, CTX.pi ** 3], [0, 0]]])
        self.assertEqual(SmallHiggs.from_json(CTX, higgs.to_json()), higgs)


class TestOperations(unittest.TestCase):

    def test_tensor(self):
        first = make_higgs(CTX, [[[CTX.p_elt ** 2]]])
        second = make_higgs(CTX, [[[CTX.pi ** 5]]])
        product = tensor(first, second)
        self.assertEqual(product, make_higgs(CTX, [[[CTX.p_elt ** 2 + CTX.pi ** 5]]]))
        self.assertEqual(tensor(first, zero_higgs(CTX, 3)).l, 3)

    def test_dual(self):
        higgs = make_higgs(CTX, [[[0, CTX.p_elt ** 2], [0, 0]]])
        self.assertEqual(dual(higgs), make_higgs(CTX, [[[0, 0], [-CTX.p_elt ** 2, 0]]]))
        self.assertEqual(dual(dual(higgs)), higgs)

    def test_random(self):
        ctx = make_context(5, 2, 6, D=1, G=2, d=2, a=Fraction(1, 2))
        higgs = random_higgs(ctx, np.random.default_rng([3, 1]), 2)
        self.assertTrue(mx.commute(higgs.thetas[0], higgs.thetas[1]))
        self.assertEqual(higgs, random_higgs(ctx, np.random.default_rng([3, 1]), 2))


class TestHiggsCohomology(unittest.TestCase):

    def test_zero_field(self):
        report = higgs_cohomology(zero_higgs(CTX))
        self.assertEqual(report.free_ranks(), [3, 3])
        self.assertEqual([r.twist for r in report], [0, -1])

    def test_scalar_field(self):
        report = higgs_cohomology(make_higgs(CTX, [[[CTX.p_elt ** 2]]]))
        self.assertEqual(report.free_ranks(), [0, 0])
        self.assertEqual(report[0].torsion_values(), [Fraction(2)] * 3)
        self.assertEqual(report[1].torsion_values(), [Fraction(2)] * 3)

    def test_power_of_p(self):
        for s in (2, 3, 4):
            report = higgs_cohomology(make_higgs(CTX, [[[CTX.p_elt ** s]]]))
            self.assertEqual(report.free_ranks(), [0, 0])
            self.assertEqual(report[0].torsion_values(), [s] * 3)
            self.assertEqual(report[1].torsion_values(), [s] * 3)


if __name__ == '__main__':
    unittest.main()
