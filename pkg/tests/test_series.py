import os
import unittest
import sys
from fractions import Fraction

sys.path.insert(0, os.path.normpath(os.path.dirname(__file__)).rsplit(os.path.sep, 1)[0])
from padic_simpson import exception
from padic_simpson import matrix as mx
from padic_simpson.cyclotomic import make_context
from padic_simpson.series import exp_matrix, log_matrix, max_terms, tail_bound
from padic_simpson.utils import at_least


class TestTailBound(unittest.TestCase):

    def setUp(self):
        self.ctx = make_context(3, 1, 6, D=1, G=3, a=1)

    def test_exp_cutoff(self):
        bound = tail_bound(self.ctx, 'exp', Fraction(1))
        # m - v_3(m!) drops to 5 at m = 9
        self.assertEqual(bound.cutoff, 10)
        self.assertEqual(bound.guard, 4)

    def test_zero_argument(self):
        self.assertEqual(tail_bound(self.ctx, 'log', None).cutoff, 1)

    def test_divergent(self):
        with self.assertRaises(exception.DivergentExponentError) as context:
            tail_bound(self.ctx, 'exp', self.ctx.r)
        self.assertEqual(context.exception.bound, self.ctx.r)
        with self.assertRaises(exception.DivergentExponentError):
            tail_bound(self.ctx, 'log', Fraction(0))

    def test_unknown_kind(self):
        with self.assertRaises(ValueError):
            tail_bound(self.ctx, 'sin', Fraction(1))

    def test_term_limit(self):
        self.assertEqual(max_terms(), 256)
        os.environ['SIMPSON_MAX_TERMS'] = '2'
        try:
            self.assertEqual(max_terms(), 2)
            with self.assertRaises(exception.PrecisionExhaustedError):
                tail_bound(self.ctx, 'exp', Fraction(1))
        finally:
            del os.environ['SIMPSON_MAX_TERMS']

    def test_invalid_override(self):
        os.environ['SIMPSON_MAX_TERMS'] = 'many'
        try:
            self.assertEqual(max_terms(), 256)
        finally:
            del os.environ['SIMPSON_MAX_TERMS']


class TestSeries(unittest.TestCase):

    def setUp(self):
        self.ctx = make_context(3, 1, 6, D=1, G=3, a=1)

    def test_exp_log(self):
        ctx = self.ctx
        theta = mx.matrix([[ctx.pi ** 2, ctx.pi ** 3], [ctx.zero, ctx.p_elt * 2]])
        exp, _ = exp_matrix(theta, ctx)
        self.assertEqual(mx.valuation(exp - mx.identity_like(exp)), 1)
        log, _ = log_matrix(exp, ctx)
        self.assertTrue(at_least(mx.defect(log, theta), ctx.N - 2))

    def test_exp_additive(self):
        ctx = self.ctx
        theta = mx.matrix([[ctx.pi ** 2]])
        double, _ = exp_matrix(theta * 2, ctx)
        single, _ = exp_matrix(theta, ctx)
        self.assertTrue(at_least(mx.defect(single.dot(single), double), ctx.N - 2))

    def test_log_divergent(self):
        ctx = self.ctx
        with self.assertRaises(exception.DivergentExponentError):
            log_matrix(mx.matrix([[ctx.one * 2]]), ctx)


if __name__ == '__main__':
    unittest.main()
