import os
import unittest
import sys

sys.path.insert(0, os.path.normpath(os.path.dirname(__file__)).rsplit(os.path.sep, 1)[0])
from padic_simpson import matrix as mx
from padic_simpson.cyclotomic import make_context
from padic_simpson.toric import PerfLaurentElt


class TestMatrix(unittest.TestCase):

    def setUp(self):
        self.ctx = make_context(3, 1, 6, D=1, G=3, a=1)

    def test_inverse(self):
        ctx = self.ctx
        mat = mx.matrix([[1 + ctx.pi, ctx.pi], [ctx.p_elt, 1 - ctx.pi]])
        self.assertTrue(mx.is_equal(mat.dot(mx.inverse(mat)), mx.identity_like(mat)))

    def test_inverse_not_unipotent(self):
        ctx = self.ctx
        with self.assertRaises(ValueError):
            mx.inverse(mx.matrix([[ctx.one * 2]]))

    def test_defect(self):
        ctx = self.ctx
        left = mx.matrix([[ctx.one, ctx.pi ** 3]])
        right = mx.matrix([[ctx.one, ctx.zero]])
        self.assertEqual(mx.defect(left, right), 3 * ctx.pi.valuation())
        self.assertIsNone(mx.defect(left, left))

    def test_kron(self):
        ctx = self.ctx
        left = mx.matrix([[ctx.one, ctx.pi], [ctx.zero, ctx.one]])
        right = mx.identity(ctx.zero, ctx.one, 3)
        product = mx.kron(left, right)
        self.assertEqual(product.shape, (6, 6))
        self.assertEqual(product[1, 4], ctx.pi)
        self.assertTrue(product[4, 1].is_zero())

    def test_row_times(self):
        ctx = self.ctx
        x = PerfLaurentElt.constant(ctx, 2)
        mat = mx.matrix([[ctx.one, ctx.pi], [ctx.one, ctx.zero]])
        self.assertEqual(mx.row_times([x, x], mat), [x * 2, x * ctx.pi])

    def test_commute(self):
        ctx = self.ctx
        mat = mx.matrix([[ctx.one, ctx.pi], [ctx.zero, ctx.one]])
        self.assertTrue(mx.commute(mat, mx.power(mat, 3)))
        self.assertFalse(mx.commute(mat, mat.T.copy()))

    def test_overflowed(self):
        ctx = self.ctx
        big = PerfLaurentElt.monomial(ctx, (1,))
        self.assertTrue(mx.overflowed(mx.matrix([[big * big]])))
        self.assertFalse(mx.overflowed(mx.matrix([[big]])))


if __name__ == '__main__':
    unittest.main()
