# pylint: disable=consider-using-f-string, useless-object-inheritance
"""Truncated Laurent rings of the torus chart and of its perfectoid tower.

Exponent vectors are stored as integer tuples scaled by p^n, so the
monomial with scaled exponent k is T^(k/p^n). Only exponents with
|k_i| <= D*p^n are kept; products that would leave that box drop the
term and set the `overflow` flag instead.

Generator indices are 0-based: `gamma_act(0, 1, x)` applies gamma_1.
"""

__all__ = ['PerfLaurentElt', 'LaurentElt', 'gamma_act', 'gauss_valuation',
           'split_integral', 'solve_gamma_shift', 'box_exponents', 'as_base']

import itertools
import logging
import numbers
from fractions import Fraction

from . import exception
from .cyclotomic import CycElt
from .type_hints import TYPE_CHECKING
from .utils import exponent_from_str, exponent_to_str, min_valuation

if TYPE_CHECKING:
    from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple, Type
    from .cyclotomic import PrecisionContext
    Exponent = Tuple[int, ...]


logger = logging.getLogger(__name__)


def _scale(ctx, exponent):
    # type: (PrecisionContext, Sequence[Any]) -> Exponent
    """Convert a vector of rational exponents to scaled integers."""
    if len(exponent) != ctx.d:
        raise ValueError('expected {} exponents, got {}'.format(ctx.d, len(exponent)))
    scaled = []
    for value in exponent:
        value = Fraction(value) * ctx.level
        if value.denominator != 1:
            raise exception.InsufficientLevelError(Fraction(value / ctx.level).denominator, ctx.n)
        scaled.append(int(value))
    return tuple(scaled)


def _unscale(ctx, exponent):
    # type: (PrecisionContext, Exponent) -> Tuple[Fraction, ...]
    return tuple(Fraction(k, ctx.level) for k in exponent)


def box_exponents(ctx, integral=False, coset=None):
    # type: (PrecisionContext, bool, Optional[Sequence[int]]) -> List[Exponent]
    """List the scaled exponents of the truncation box in a fixed order.

    A coset keeps only the exponents congruent to it mod p^n.
    """
    bound = ctx.D * ctx.level
    if coset is not None:
        axes = [range(-bound + (c + bound) % ctx.level, bound + 1, ctx.level) for c in coset]
        return list(itertools.product(*axes))
    step = ctx.level if integral else 1
    axis = range(-bound, bound + 1, step)
    return list(itertools.product(axis, repeat=ctx.d))


class PerfLaurentElt(object):
    """Truncated element of the perfectoid ring, exponents in p^{-n}Z^d."""

    __slots__ = ('ctx', 'terms', 'overflow')

    def __init__(self, ctx, terms=None, overflow=False):
        # type: (PrecisionContext, Optional[Dict[Exponent, CycElt]], bool) -> None
        self.ctx = ctx
        self.terms = {k: c for k, c in (terms or {}).items() if not c.is_zero()}
        self.overflow = overflow

    @classmethod
    def monomial(cls, ctx, exponent, coeff=1):
        # type: (PrecisionContext, Sequence[Any], Any) -> PerfLaurentElt
        """Build coeff * T^exponent from rational exponents."""
        scaled = _scale(ctx, exponent)
        bound = ctx.D * ctx.level
        if any(abs(k) > bound for k in scaled):
            raise ValueError('exponent {} is outside the truncation box'.format(tuple(exponent)))
        return cls(ctx, {scaled: ctx.elt(coeff)})

    @classmethod
    def constant(cls, ctx, coeff):
        # type: (PrecisionContext, Any) -> PerfLaurentElt
        return cls(ctx, {(0,) * ctx.d: ctx.elt(coeff)})

    def zero_like(self):
        # type: () -> PerfLaurentElt
        return type(self)(self.ctx)

    def one_like(self):
        # type: () -> PerfLaurentElt
        return type(self).constant(self.ctx, 1)

    def _result_type(self, other):
        # type: (Any) -> Type[PerfLaurentElt]
        if isinstance(self, LaurentElt) and (not isinstance(other, PerfLaurentElt) or isinstance(other, LaurentElt)):
            return LaurentElt
        return PerfLaurentElt

    def _coerce(self, other):
        # type: (Any) -> Any
        if isinstance(other, PerfLaurentElt):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                raise ValueError('elements belong to different contexts')
            return other
        if isinstance(other, (CycElt, numbers.Integral)):
            return type(self).constant(self.ctx, other)
        return NotImplemented

    def __repr__(self):
        # type: () -> str
        parts = ['{}*T^({})'.format(c, exponent_to_str(_unscale(self.ctx, k)))
                 for k, c in sorted(self.terms.items())]
        return '{}({})'.format(type(self).__name__, ' + '.join(parts) or '0')

    def __eq__(self, other):
        # type: (Any) -> bool
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.terms == other.terms

    def __ne__(self, other):
        # type: (Any) -> bool
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __hash__(self):
        # type: () -> int
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        # type: () -> bool
        return bool(self.terms)
    __nonzero__ = __bool__

    def __neg__(self):
        # type: () -> PerfLaurentElt
        return type(self)(self.ctx, {k: -c for k, c in self.terms.items()}, self.overflow)

    def __add__(self, other):
        # type: (Any) -> PerfLaurentElt
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms[k] + c if k in terms else c
        return self._result_type(other)(self.ctx, terms, self.overflow or other.overflow)
    __radd__ = __add__

    def __sub__(self, other):
        # type: (Any) -> PerfLaurentElt
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        # type: (Any) -> PerfLaurentElt
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        # type: (Any) -> PerfLaurentElt
        if isinstance(other, (CycElt, numbers.Integral)):
            return type(self)(self.ctx, {k: c * other for k, c in self.terms.items()}, self.overflow)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        bound = self.ctx.D * self.ctx.level
        overflow = self.overflow or other.overflow
        terms = {}  # type: Dict[Exponent, CycElt]
        for ka, ca in self.terms.items():
            for kb, cb in other.terms.items():
                coeff = ca * cb
                if coeff.is_zero():
                    continue
                k = tuple(x + y for x, y in zip(ka, kb))
                if any(abs(x) > bound for x in k):
                    overflow = True
                    continue
                terms[k] = terms[k] + coeff if k in terms else coeff
        return self._result_type(other)(self.ctx, terms, overflow)
    __rmul__ = __mul__

    def is_zero(self):
        # type: () -> bool
        return not self.terms

    def valuation(self):
        # type: () -> Optional[Fraction]
        """Gauss valuation: the minimum coefficient valuation."""
        return min_valuation(c.valuation() for c in self.terms.values())

    def is_integral(self):
        # type: () -> bool
        """Check whether every exponent is an integer vector."""
        level = self.ctx.level
        return all(not any(x % level for x in k) for k in self.terms)

    def exponents(self):
        # type: () -> List[Tuple[Fraction, ...]]
        return [_unscale(self.ctx, k) for k in sorted(self.terms)]

    def coefficient(self, exponent):
        # type: (Sequence[Any]) -> CycElt
        return self.terms.get(_scale(self.ctx, exponent), self.ctx.zero)

    def map_coefficients(self, func):
        # type: (Callable[[CycElt], CycElt]) -> PerfLaurentElt
        return type(self)(self.ctx, {k: func(c) for k, c in self.terms.items()}, self.overflow)

    def div_int(self, value):
        # type: (int) -> PerfLaurentElt
        return self.map_coefficients(lambda c: c.div_int(value))

    def exact_div(self, value):
        # type: (Any) -> PerfLaurentElt
        """Divide every coefficient exactly by a ring element."""
        return self.map_coefficients(lambda c: c.exact_div(value))

    def lift(self, ctx):
        # type: (PrecisionContext) -> PerfLaurentElt
        return type(self)(ctx, {k: c.lift(ctx) for k, c in self.terms.items()}, self.overflow)

    def reduce(self, ctx):
        # type: (PrecisionContext) -> PerfLaurentElt
        return type(self)(ctx, {k: c.reduce(ctx) for k, c in self.terms.items()}, self.overflow)

    def gamma_act(self, i, k=1):
        # type: (int, int) -> PerfLaurentElt
        """Apply gamma_i^k: T^alpha -> zeta^(k*alpha_i) T^alpha."""
        ctx = self.ctx
        terms = {}
        for exponent, coeff in self.terms.items():
            j = (k * exponent[i]) % ctx.level
            terms[exponent] = coeff * ctx.zeta(j) if j else coeff
        return type(self)(ctx, terms, self.overflow)

    def to_json(self):
        # type: () -> Dict[str, List[int]]
        return {exponent_to_str(_unscale(self.ctx, k)): c.to_json()
                for k, c in sorted(self.terms.items())}

    @classmethod
    def from_json(cls, ctx, data):
        # type: (PrecisionContext, Dict[str, List[int]]) -> PerfLaurentElt
        terms = {_scale(ctx, exponent_from_str(k)): CycElt.from_json(ctx, v) for k, v in data.items()}
        result = cls(ctx, terms)
        if isinstance(result, LaurentElt) and not result.is_integral():
            raise ValueError('chart elements must have integral exponents')
        return result


class LaurentElt(PerfLaurentElt):
    """Truncated element of the chart ring, integral exponents only.
    Gamma acts trivially on these.
    """

    __slots__ = ()

    @classmethod
    def monomial(cls, ctx, exponent, coeff=1):
        # type: (PrecisionContext, Sequence[Any], Any) -> PerfLaurentElt
        if any(Fraction(x).denominator != 1 for x in exponent):
            raise ValueError('chart monomials need integral exponents, got {}'.format(tuple(exponent)))
        return super(LaurentElt, cls).monomial(ctx, exponent, coeff)

    def gamma_act(self, i, k=1):
        # type: (int, int) -> PerfLaurentElt
        return self


def as_base(ctx, value, base):
    # type: (PrecisionContext, Any, str) -> PerfLaurentElt
    """Coerce an int, ring element or Laurent element into a base ring.

    Parameters:
        base: Either "chart" or "perfectoid".
    """
    if base not in ('chart', 'perfectoid'):
        raise ValueError('unknown base {!r}'.format(base))
    cls = LaurentElt if base == 'chart' else PerfLaurentElt
    if isinstance(value, PerfLaurentElt):
        if base == 'chart' and not value.is_integral():
            raise ValueError('value has non-integral exponents')
        if type(value) is cls:
            return value
        return cls(ctx, value.terms, value.overflow)
    return cls.constant(ctx, value)


def gamma_act(i, k, x):
    # type: (int, int, PerfLaurentElt) -> PerfLaurentElt
    """Apply gamma_i^k to a Laurent element."""
    if not 0 <= i < x.ctx.d:
        raise ValueError('generator index {} out of range'.format(i))
    return x.gamma_act(i, k)


def gauss_valuation(x):
    # type: (PerfLaurentElt) -> Optional[Fraction]
    return x.valuation()


def split_integral(x):
    # type: (PerfLaurentElt) -> Tuple[LaurentElt, PerfLaurentElt]
    """Split into the integral-exponent part and the complement."""
    level = x.ctx.level
    integral, complement = {}, {}
    for k, c in x.terms.items():
        if any(e % level for e in k):
            complement[k] = c
        else:
            integral[k] = c
    return LaurentElt(x.ctx, integral, x.overflow), PerfLaurentElt(x.ctx, complement, x.overflow)


def solve_gamma_shift(i, y):
    # type: (int, PerfLaurentElt) -> PerfLaurentElt
    """Solve (gamma_i - 1) g = y monomial by monomial.

    Raises:
        NotInComplementError: If y has a monomial fixed by gamma_i.
        NotDivisibleError: If a coefficient has smaller valuation than
            the eigenvalue zeta^(alpha_i) - 1.
    """
    ctx = y.ctx
    terms = {}
    for k, c in y.terms.items():
        j = k[i] % ctx.level
        if not j:
            raise exception.NotInComplementError(i, _unscale(ctx, k))
        terms[k] = c.exact_div(ctx.zeta(j) - 1)
    return PerfLaurentElt(ctx, terms, y.overflow)
