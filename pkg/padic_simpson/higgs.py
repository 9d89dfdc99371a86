# pylint: disable=consider-using-f-string, useless-object-inheritance
"""Small Higgs modules over the chart.

A Higgs field is stored as the d-tuple (theta_0, ..., theta_(d-1)) of its
components along dlog T_i / t, acting on row vectors by v -> v * theta_i.
"""

__all__ = ['SmallHiggs', 'make_higgs', 'zero_higgs', 'higgs_cohomology', 'tensor', 'dual',
           'random_higgs']

import itertools
import logging

from . import exception
from . import matrix as mx
from .homological import KoszulComplex, koszul_cohomology
from .representation import flat_module, random_thetas
from .toric import LaurentElt, as_base
from .type_hints import TYPE_CHECKING
from .utils import at_least, fraction_to_json, parse_fraction

if TYPE_CHECKING:
    from fractions import Fraction
    from typing import Any, Dict, Optional, Sequence
    import numpy as np
    from .cyclotomic import PrecisionContext
    from .homological import CohomologyReport


logger = logging.getLogger(__name__)


class SmallHiggs(object):
    """Higgs module given by its field components; unvalidated."""

    def __init__(self, ctx, thetas, a=None):
        # type: (PrecisionContext, Sequence[Any], Optional[Any]) -> None
        self.ctx = ctx
        self.thetas = [mx.matrix(theta, lambda x: as_base(ctx, x, 'chart'))
                       if not hasattr(theta, 'shape') else
                       mx.map_entries(lambda x: as_base(ctx, x, 'chart'), theta)
                       for theta in thetas]
        self.a = ctx.a if a is None else parse_fraction(a)

    def __repr__(self):
        # type: () -> str
        return 'SmallHiggs(l={}, d={}, a={})'.format(self.l, self.d, self.a)

    def __eq__(self, other):
        # type: (Any) -> bool
        if not isinstance(other, SmallHiggs):
            return NotImplemented
        return self.d == other.d and all(mx.is_equal(x, y) for x, y in zip(self.thetas, other.thetas))

    def __ne__(self, other):
        # type: (Any) -> bool
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    __hash__ = None  # type: ignore

    @property
    def l(self):  # pylint: disable=invalid-name
        # type: () -> int
        return self.thetas[0].shape[0] if self.thetas else 0

    @property
    def d(self):
        # type: () -> int
        return len(self.thetas)

    def smallness_valuation(self):
        # type: () -> Optional[Fraction]
        values = [v for v in (mx.valuation(theta) for theta in self.thetas) if v is not None]
        return min(values) if values else None

    def to_json(self):
        # type: () -> Dict[str, Any]
        return {
            'l': self.l,
            'd': self.d,
            'a': fraction_to_json(self.a),
            'thetas': [[[x.to_json() for x in row] for row in theta] for theta in self.thetas],
        }

    @classmethod
    def from_json(cls, ctx, data, validate=True):
        # type: (PrecisionContext, Dict[str, Any], bool) -> SmallHiggs
        thetas = [[[LaurentElt.from_json(ctx, x) for x in row] for row in theta] for theta in data['thetas']]
        if validate:
            return make_higgs(ctx, thetas, parse_fraction(data['a']))
        return cls(ctx, thetas, parse_fraction(data['a']))


def make_higgs(ctx, thetas, a=None):
    # type: (PrecisionContext, Sequence[Any], Optional[Any]) -> SmallHiggs
    """Build a Higgs module, checking flatness and smallness.

    Raises:
        NotFlatError: If two components do not commute.
        NotSmallError: If a component has valuation below a + 1/(p-1).
    """
    higgs = SmallHiggs(ctx, thetas, a)
    if higgs.d != ctx.d:
        raise ValueError('expected {} components, got {}'.format(ctx.d, higgs.d))
    shapes = set(theta.shape for theta in higgs.thetas)
    if len(shapes) != 1 or any(rows != cols for rows, cols in shapes):
        raise ValueError('Higgs components must be square and of equal size')

    for i, j in itertools.combinations(range(higgs.d), 2):
        if not mx.commute(higgs.thetas[i], higgs.thetas[j]):
            raise exception.NotFlatError(i, j)

    required = higgs.a + ctx.r
    for i, theta in enumerate(higgs.thetas):
        valuation = mx.valuation(theta)
        if not at_least(valuation, required):
            raise exception.NotSmallError(i, valuation, required)
    return higgs


def zero_higgs(ctx, l=1, a=None):  # pylint: disable=invalid-name
    # type: (PrecisionContext, int, Optional[Any]) -> SmallHiggs
    return make_higgs(ctx, [mx.zeros(ctx.zero, l)] * ctx.d, a)


def higgs_cohomology(higgs):
    # type: (SmallHiggs) -> CohomologyReport
    """Koszul cohomology of the theta_i on the flattened chart module.
    Degree q carries the twist label -q.
    """
    module = flat_module(higgs.ctx, higgs.l, 'chart')
    operators = [module.operator(lambda v, theta=theta: mx.row_times(v, theta)) for theta in higgs.thetas]
    report = koszul_cohomology(KoszulComplex(module, operators), twists=[-q for q in range(higgs.d + 1)])
    logger.info('Higgs cohomology: free ranks %s', report.free_ranks())
    return report


def tensor(first, second):
    # type: (SmallHiggs, SmallHiggs) -> SmallHiggs
    """Tensor product with theta = theta_1 x I + I x theta_2."""
    if first.ctx != second.ctx:
        raise ValueError('tensor product needs Higgs modules over the same context')
    ctx = first.ctx
    left = mx.identity(LaurentElt(ctx), LaurentElt.constant(ctx, 1), first.l)
    right = mx.identity(LaurentElt(ctx), LaurentElt.constant(ctx, 1), second.l)
    thetas = [mx.kron(x, right) + mx.kron(left, y) for x, y in zip(first.thetas, second.thetas)]
    return SmallHiggs(ctx, thetas, min(first.a, second.a))


def dual(higgs):
    # type: (SmallHiggs) -> SmallHiggs
    """Dual Higgs module with theta = -theta^T."""
    return SmallHiggs(higgs.ctx, [(-theta).T.copy() for theta in higgs.thetas], higgs.a)


def random_higgs(ctx, rng, l=1, a=None):  # pylint: disable=invalid-name
    # type: (PrecisionContext, np.random.Generator, int, Optional[Any]) -> SmallHiggs
    """Random small Higgs module theta_i = pi^k q_i(C)."""
    return make_higgs(ctx, random_thetas(ctx, rng, l), a)
