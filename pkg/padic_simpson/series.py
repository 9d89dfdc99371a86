# pylint: disable=consider-using-f-string, useless-object-inheritance
"""Truncated exponential and logarithm series with certified cutoffs.

Series are summed at a raised working precision N + guard, where guard
covers the largest valuation lost to the divisions by n! (or n), and the
result is reduced back to N. The result is then exact modulo p^N for the
canonical lift of the argument.
"""

__all__ = ['TailBound', 'tail_bound', 'exp_matrix', 'log_matrix', 'max_terms']

import logging
import math
from fractions import Fraction

from . import exception
from . import matrix as mx
from .type_hints import TYPE_CHECKING
from .utils import env_int, fraction_to_json, vp, vp_factorial

if TYPE_CHECKING:
    from typing import Any, Dict, Optional, Tuple
    import numpy as np
    from .cyclotomic import PrecisionContext


logger = logging.getLogger(__name__)

DEFAULT_MAX_TERMS = 256


def max_terms():
    # type: () -> int
    """Series term limit, overridable by SIMPSON_MAX_TERMS."""
    return env_int('SIMPSON_MAX_TERMS', DEFAULT_MAX_TERMS)


class TailBound(object):  # pylint: disable=too-few-public-methods
    """Cutoff of a truncated series.

    Attributes:
        kind: One of "exp", "log" or "binomial".
        valuation: Valuation of the series argument (None if zero).
        cutoff: Terms with index >= cutoff vanish mod p^N.
        guard: Extra precision used while summing.
        precision: Valuation below which the result is exact.
    """

    def __init__(self, kind, valuation, cutoff, guard, precision):
        # type: (str, Optional[Fraction], int, int, int) -> None
        self.kind = kind
        self.valuation = valuation
        self.cutoff = cutoff
        self.guard = guard
        self.precision = precision

    def __repr__(self):
        # type: () -> str
        return 'TailBound({}, cutoff={}, guard={})'.format(self.kind, self.cutoff, self.guard)

    def to_json(self):
        # type: () -> Dict[str, Any]
        return {'kind': self.kind, 'valuation': fraction_to_json(self.valuation),
                'cutoff': self.cutoff, 'guard': self.guard, 'precision': self.precision}


def _exp_cutoff(p, N, s, r):
    # type: (int, int, Fraction, Fraction) -> int
    """Least n such that every m >= n has m*s - v_p(m!) >= N."""
    # m*s - v_p(m!) >= m*(s - r) + r, so every m >= bound qualifies
    bound = max(1, int(math.ceil((N - r) / (s - r))))
    cutoff = 1
    for m in range(1, bound):
        if m * s - vp_factorial(p, m) < N:
            cutoff = m + 1
    return cutoff


def _log_cutoff(p, N, s):
    # type: (int, int, Fraction) -> int
    """Least n such that every m >= n has m*s - v_p(m) >= N."""
    # for m in [p^k, p^(k+1)) the term is at least p^k*s - k
    k = 0
    while p ** k * s - k < N:
        k += 1
    bound = p ** k
    cutoff = 1
    for m in range(1, bound):
        if m * s - vp(p, m) < N:
            cutoff = m + 1
    return cutoff


def tail_bound(ctx, kind, valuation):
    # type: (PrecisionContext, str, Optional[Fraction]) -> TailBound
    """Compute the cutoff of an exp, binomial or log series.

    Raises:
        DivergentExponentError: If the argument is not small enough.
        PrecisionExhaustedError: If the cutoff exceeds the term limit.
    """
    p, N, r = ctx.p, ctx.N, ctx.r
    if valuation is None:
        return TailBound(kind, None, 1, 0, N)

    if kind in ('exp', 'binomial'):
        if valuation <= r:
            raise exception.DivergentExponentError(valuation, r)
        cutoff = _exp_cutoff(p, N, valuation, r)
        guard = vp_factorial(p, cutoff - 1)
    elif kind == 'log':
        if valuation <= 0:
            raise exception.DivergentExponentError(valuation, Fraction(0))
        cutoff = _log_cutoff(p, N, valuation)
        guard = max([vp(p, m) for m in range(1, cutoff)] or [0])
    else:
        raise ValueError('unknown series kind {!r}'.format(kind))

    limit = max_terms()
    if cutoff > limit:
        raise exception.PrecisionExhaustedError(kind, cutoff, limit)
    logger.debug('%s series: valuation %s, cutoff %d, guard %d', kind, valuation, cutoff, guard)
    return TailBound(kind, valuation, cutoff, guard, N)


def exp_matrix(mat, ctx, kind='exp'):
    # type: (np.ndarray, PrecisionContext, str) -> Tuple[np.ndarray, TailBound]
    """Sum exp(mat) = sum mat^k/k! up to the certified cutoff."""
    bound = tail_bound(ctx, kind, mx.valuation(mat))
    work = ctx.with_precision(ctx.N + bound.guard)
    lifted = mx.map_entries(lambda x: x.lift(work), mat)
    total = mx.identity_like(lifted)
    power = total
    for k in range(1, bound.cutoff):
        power = power.dot(lifted)
        factorial = math.factorial(k)
        total = total + mx.map_entries(lambda x, f=factorial: x.div_int(f), power)
    return mx.map_entries(lambda x: x.reduce(ctx), total), bound


def log_matrix(mat, ctx):
    # type: (np.ndarray, PrecisionContext) -> Tuple[np.ndarray, TailBound]
    """Sum log(mat) = sum (-1)^(k+1) (mat - I)^k / k up to the certified cutoff."""
    step = mat - mx.identity_like(mat)
    bound = tail_bound(ctx, 'log', mx.valuation(step))
    work = ctx.with_precision(ctx.N + bound.guard)
    lifted = mx.map_entries(lambda x: x.lift(work), step)
    total = mx.zeros(lifted.flat[0].zero_like(), *lifted.shape)
    power = mx.identity_like(lifted)
    for k in range(1, bound.cutoff):
        power = power.dot(lifted)
        term = mx.map_entries(lambda x, k=k: x.div_int(k), power)
        total = total + term if k % 2 else total - term
    return mx.map_entries(lambda x: x.reduce(ctx), total), bound
