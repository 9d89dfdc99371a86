# pylint: disable=consider-using-f-string, useless-object-inheritance, super-with-arguments
"""Exact arithmetic in the truncated cyclotomic integers O_{K_n}/p^N.

Elements are stored in the power basis of the uniformiser
pi = zeta_{p^n} - 1, which is a root of the Eisenstein polynomial
E_n(x) = Phi_{p^n}(1 + x). Because E_n is Eisenstein, the valuation of
sum(a_i pi^i) is min(v_p(a_i) + i/e), normalised so that v(p) = 1.

Example:
    >>> ctx = make_context(3, 1, 8, a=1)
    >>> ctx.eisenstein
    (3, 3)
    >>> (ctx.pi ** 2).coeffs == ((-3) % 3**8, (-3) % 3**8)
    True
"""

__all__ = ['PrecisionContext', 'CycElt', 'make_context', 'context_from_json',
           'zeta_power', 'epsilon_alpha']

import logging
import numbers
from fractions import Fraction

import numpy as np
from sympy import Poly, Symbol, isprime, mod_inverse

from . import exception
from .type_hints import TYPE_CHECKING
from .utils import parse_fraction, fraction_to_json, vp

if TYPE_CHECKING:
    from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union


logger = logging.getLogger(__name__)


def _eisenstein(p, n):
    # type: (int, int) -> Tuple[int, ...]
    """Coefficients c_0..c_e of Phi_{p^n}(1 + x), lowest degree first."""
    x = Symbol('x')
    poly = Poly(sum((1 + x) ** (k * p ** (n - 1)) for k in range(p)), x)
    return tuple(int(c) for c in reversed(poly.all_coeffs()))


# Ramification degree from which products go through numpy.
FAST_DEGREE = 8


class PrecisionContext(object):
    """Global truncation parameters.

    Attributes:
        p: Odd prime.
        n: Cyclotomic level, also the denominator level of the
            perfectoid exponents.
        N: Coefficients live modulo p^N.
        D: Laurent exponent bound.
        G: Total Y-degree bound of period elements.
        d: Number of variables / generators of Gamma.
        a: Smallness exponent.
    """

    def __init__(self, p, n, N, D=2, G=6, d=1, a=Fraction(1, 2)):
        # type: (int, int, int, int, int, int, Union[Fraction, str, int]) -> None
        self.p = int(p)
        self.n = int(n)
        self.N = int(N)
        self.D = int(D)
        self.G = int(G)
        self.d = int(d)
        self.a = parse_fraction(a)

        self.e = self.p ** (self.n - 1) * (self.p - 1)
        self.r = Fraction(1, self.p - 1)
        self.modulus = self.p ** self.N
        self.level = self.p ** self.n

        poly = _eisenstein(self.p, self.n)
        self.eisenstein = tuple(c % self.modulus for c in poly[:-1])

        # p/pi = -(pi^{e-1} + sum_{i=1}^{e-1} c_i pi^{i-1})
        p_over_pi = [-c for c in poly[1:-1]] + [-1]
        self.p_over_pi = tuple(c % self.modulus for c in p_over_pi)

        self._zeta = None  # type: Optional[List[CycElt]]
        self._lifted = {}  # type: Dict[int, PrecisionContext]
        self._fold = None  # type: Optional[np.ndarray]
        # int64 products stay exact below this bound
        self.fast = self.e >= FAST_DEGREE and 2 * self.e * self.modulus ** 2 < 2 ** 63

    def fold_table(self):
        # type: () -> np.ndarray
        """Powers pi^e .. pi^(2e-2) written in the power basis."""
        if self._fold is None:
            rows = []
            for k in range(self.e, 2 * self.e - 1):
                values = [0] * (k + 1)
                values[k] = 1
                rows.append(_reduce(self, values))
            self._fold = np.array(rows, dtype=np.int64).reshape(self.e - 1, self.e)
        return self._fold

    @property
    def key(self):
        # type: () -> tuple
        return (self.p, self.n, self.N, self.D, self.G, self.d, self.a)

    def __eq__(self, other):
        # type: (Any) -> bool
        if not isinstance(other, PrecisionContext):
            return NotImplemented
        return self.key == other.key

    def __ne__(self, other):
        # type: (Any) -> bool
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __hash__(self):
        # type: () -> int
        return hash(self.key)

    def __repr__(self):
        # type: () -> str
        return 'PrecisionContext(p={}, n={}, N={}, D={}, G={}, d={}, a={})'.format(*self.key)

    def copy(self, **kwargs):
        # type: (**Any) -> PrecisionContext
        """Create a context with some parameters replaced."""
        params = dict(zip(('p', 'n', 'N', 'D', 'G', 'd', 'a'), self.key))
        params.update(kwargs)
        return PrecisionContext(**params)

    def with_precision(self, N):
        # type: (int) -> PrecisionContext
        """Get the same context at a different p-adic precision.
        Used as working precision for series with divisions.
        """
        if N == self.N:
            return self
        if N not in self._lifted:
            self._lifted[N] = self.copy(N=N)
        return self._lifted[N]

    @property
    def smallness(self):
        # type: () -> Fraction
        """The valuation a + 1/(p-1) required by smallness."""
        return self.a + self.r

    @property
    def smallness_index(self):
        # type: () -> int
        """Power of pi realising the smallness valuation."""
        return int(self.smallness * self.e)

    def elt(self, value):
        # type: (Any) -> CycElt
        """Convert an int, coefficient sequence or element to an element."""
        if isinstance(value, CycElt):
            return value if value.ctx is self else CycElt(self, value.coeffs)
        if isinstance(value, numbers.Integral):
            return CycElt(self, (int(value),))
        return CycElt(self, value)

    @property
    def zero(self):
        # type: () -> CycElt
        return CycElt(self, ())

    @property
    def one(self):
        # type: () -> CycElt
        return CycElt(self, (1,))

    @property
    def pi(self):
        # type: () -> CycElt
        """The uniformiser zeta_{p^n} - 1."""
        return CycElt(self, (0, 1))

    @property
    def p_elt(self):
        # type: () -> CycElt
        return CycElt(self, (self.p,))

    @property
    def rho_k(self):
        # type: () -> CycElt
        """The element zeta_p - 1 of valuation 1/(p-1)."""
        return self.zeta(self.p ** (self.n - 1)) - 1

    def zeta(self, j):
        # type: (int) -> CycElt
        """Get zeta_{p^n}^j."""
        if self._zeta is None:
            table = [self.one]
            step = CycElt(self, (1, 1))
            for _ in range(self.level - 1):
                table.append(table[-1] * step)
            self._zeta = table
        return self._zeta[j % self.level]

    def to_json(self):
        # type: () -> Dict[str, Any]
        return {'p': self.p, 'n': self.n, 'N': self.N, 'D': self.D,
                'G': self.G, 'd': self.d, 'a': fraction_to_json(self.a)}


def make_context(p, n=1, N=10, D=2, G=6, d=1, a=Fraction(1, 2)):
    # type: (int, int, int, int, int, int, Union[Fraction, str, int]) -> PrecisionContext
    """Validate the truncation parameters and build a context.

    Raises:
        ConfigError: If p is not an odd prime, a*e is not an integer,
            or the precision leaves no headroom for smallness checks.
        SmallnessHypothesisError: If a <= 1/(p-1).

    Example:
        >>> make_context(5, 2, 10).e
        20
    """
    a = parse_fraction(a)
    if p == 2 or not isprime(p):
        raise exception.ConfigError('p must be an odd prime, got {}'.format(p))
    if n < 1 or N < 1:
        raise exception.ConfigError('tower level and precision must be positive')
    if D < 0 or G < 0 or d < 1:
        raise exception.ConfigError('bounds must be non-negative and d positive')

    e = p ** (n - 1) * (p - 1)
    if (a * e).denominator != 1:
        raise exception.ConfigError('a*e must be an integer, got a={} with e={}'.format(a, e))
    r = Fraction(1, p - 1)
    if a <= r:
        raise exception.SmallnessHypothesisError(a, r)
    if N < 2 * (a + r) + 1:
        raise exception.ConfigError('precision N={} is below 2(a + 1/(p-1)) + 1'.format(N))

    ctx = PrecisionContext(p, n, N, D, G, d, a)
    logger.info('Context: %r', ctx)
    return ctx


def context_from_json(data):
    # type: (Dict[str, Any]) -> PrecisionContext
    """Build a validated context from its JSON form."""
    return make_context(data['p'], data['n'], data['N'], data['D'], data['G'], data['d'],
                        parse_fraction(data['a']))


def _reduce(ctx, values):
    # type: (PrecisionContext, List[int]) -> Tuple[int, ...]
    """Reduce an integer polynomial in pi modulo (E_n, p^N)."""
    e = ctx.e
    eis = ctx.eisenstein
    for k in range(len(values) - 1, e - 1, -1):
        c = values[k]
        if c:
            values[k] = 0
            base = k - e
            for i, ei in enumerate(eis):
                if ei:
                    values[base + i] -= c * ei
    mod = ctx.modulus
    values = [v % mod for v in values[:e]]
    values.extend([0] * (e - len(values)))
    return tuple(values)


class CycElt(object):
    """Element of O_{K_n}/p^N in the power basis of pi."""

    __slots__ = ('ctx', 'coeffs')

    def __init__(self, ctx, coeffs):
        # type: (PrecisionContext, Iterable[int]) -> None
        self.ctx = ctx
        values = [int(c) for c in coeffs]
        if len(values) == ctx.e:
            mod = ctx.modulus
            self.coeffs = tuple(v % mod for v in values)
        else:
            self.coeffs = _reduce(ctx, values)

    @classmethod
    def _reduced(cls, ctx, coeffs):
        # type: (PrecisionContext, Tuple[int, ...]) -> CycElt
        """Wrap coefficients already reduced modulo p^N."""
        elt = cls.__new__(cls)
        elt.ctx = ctx
        elt.coeffs = coeffs
        return elt

    def _coerce(self, other):
        # type: (Any) -> Any
        if isinstance(other, CycElt):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                raise ValueError('elements belong to different contexts')
            return other
        if isinstance(other, numbers.Integral):
            return CycElt(self.ctx, (int(other),))
        return NotImplemented

    def __repr__(self):
        # type: () -> str
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(str(c) if not i else '{}*pi^{}'.format(c, i))
        return 'CycElt({})'.format(' + '.join(terms) or '0')

    def __eq__(self, other):
        # type: (Any) -> bool
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.coeffs == other.coeffs

    def __ne__(self, other):
        # type: (Any) -> bool
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __hash__(self):
        # type: () -> int
        return hash(self.coeffs)

    def __bool__(self):
        # type: () -> bool
        return any(self.coeffs)
    __nonzero__ = __bool__

    def __neg__(self):
        # type: () -> CycElt
        return CycElt(self.ctx, [-c for c in self.coeffs])

    def __add__(self, other):
        # type: (Any) -> CycElt
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycElt(self.ctx, [a + b for a, b in zip(self.coeffs, other.coeffs)])
    __radd__ = __add__

    def __sub__(self, other):
        # type: (Any) -> CycElt
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycElt(self.ctx, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __rsub__(self, other):
        # type: (Any) -> CycElt
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        # type: (Any) -> CycElt
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if not any(a[1:]):
            return CycElt(self.ctx, [a[0] * c for c in b])
        if not any(b[1:]):
            return CycElt(self.ctx, [b[0] * c for c in a])
        ctx = self.ctx
        if ctx.fast:
            e, mod = ctx.e, ctx.modulus
            product = np.convolve(np.array(a, dtype=np.int64), np.array(b, dtype=np.int64))
            values = (product[:e] % mod + (product[e:] % mod).dot(ctx.fold_table())) % mod
            return CycElt._reduced(ctx, tuple(int(v) for v in values))
        product = [0] * (2 * len(a) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        product[i + j] += ai * bj
        return CycElt(self.ctx, product)
    __rmul__ = __mul__

    def __pow__(self, exponent):
        # type: (int) -> CycElt
        if exponent < 0:
            return self.inverse() ** -exponent
        result = self.ctx.one
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def is_zero(self):
        # type: () -> bool
        return not any(self.coeffs)

    def zero_like(self):
        # type: () -> CycElt
        return self.ctx.zero

    def one_like(self):
        # type: () -> CycElt
        return self.ctx.one

    def valuation(self):
        # type: () -> Optional[Fraction]
        """Exact valuation, or None if the element is zero mod p^N."""
        p, e = self.ctx.p, self.ctx.e
        best = None
        for i, c in enumerate(self.coeffs):
            if c:
                value = Fraction(vp(p, c) * e + i, e)
                if best is None or value < best:
                    best = value
        return best

    def inverse(self):
        # type: () -> CycElt
        """Invert a unit by Newton iteration from the inverse of its constant term.

        Raises:
            NonUnitError: If the valuation is positive.
        """
        valuation = self.valuation()
        if valuation != 0:
            raise exception.NonUnitError(valuation)
        ctx = self.ctx
        inverse = CycElt(ctx, (int(mod_inverse(self.coeffs[0], ctx.modulus)),))
        for _ in range((ctx.e * ctx.N).bit_length() + 2):
            error = 1 - self * inverse
            if error.is_zero():
                return inverse
            inverse = inverse * (1 + error)
        raise exception.PrecisionError('unit inverse failed to converge')

    def div_pi(self, times=1):
        # type: (int) -> CycElt
        """Exact division by pi^times.

        Raises:
            NotDivisibleError: If the valuation is below times/e.
        """
        ctx = self.ctx
        p = ctx.p
        coeffs = self.coeffs
        for step in range(times):
            if coeffs[0] % p:
                raise exception.NotDivisibleError(self.valuation(), Fraction(times, ctx.e))
            quotient = coeffs[0] // p
            shifted = list(coeffs[1:]) + [0]
            if quotient:
                shifted = [s + quotient * q for s, q in zip(shifted, ctx.p_over_pi)]
            coeffs = CycElt(ctx, shifted).coeffs
            if not any(coeffs):
                break
        return CycElt(ctx, coeffs)

    def unit_part(self):
        # type: () -> Tuple[int, CycElt]
        """Split into (k, u) with self = pi^k * u and u a unit."""
        valuation = self.valuation()
        if valuation is None:
            raise exception.NonUnitError(None)
        k = int(valuation * self.ctx.e)
        return k, self.div_pi(k)

    def exact_div(self, other):
        # type: (Any) -> CycElt
        """Exact quotient, satisfying other * result == self.

        Raises:
            NotDivisibleError: If the valuation of other exceeds ours.
        """
        other = self._coerce(other)
        if other is NotImplemented:
            raise TypeError('cannot divide by {!r}'.format(other))
        denominator = other.valuation()
        if denominator is None:
            raise exception.NotDivisibleError(self.valuation(), None)
        if self.is_zero():
            return self
        numerator = self.valuation()
        if numerator < denominator:
            raise exception.NotDivisibleError(numerator, denominator)
        k = int(denominator * self.ctx.e)
        if not k:
            return self * other.inverse()
        return self.div_pi(k) * other.div_pi(k).inverse()

    def div_int(self, value):
        # type: (int) -> CycElt
        """Exact division by a nonzero integer.

        Raises:
            NotDivisibleError: If any coefficient lacks the p-part of value.
        """
        ctx = self.ctx
        if not value:
            raise ZeroDivisionError('division by zero')
        power = vp(ctx.p, value)
        unit = abs(value) // ctx.p ** power
        coeffs = self.coeffs
        if power:
            divisor = ctx.p ** power
            if any(c % divisor for c in coeffs):
                raise exception.NotDivisibleError(self.valuation(), Fraction(power))
            coeffs = [c // divisor for c in coeffs]
        factor = int(mod_inverse(unit, ctx.modulus))
        if value < 0:
            factor = -factor
        return CycElt(ctx, [c * factor for c in coeffs])

    def lift(self, ctx):
        # type: (PrecisionContext) -> CycElt
        """Canonical lift to a context of higher precision."""
        return CycElt(ctx, self.coeffs)

    def reduce(self, ctx):
        # type: (PrecisionContext) -> CycElt
        """Reduce to a context of lower precision."""
        return CycElt(ctx, self.coeffs)

    def to_json(self):
        # type: () -> List[int]
        return list(self.coeffs)

    @classmethod
    def from_json(cls, ctx, data):
        # type: (PrecisionContext, Sequence[int]) -> CycElt
        if len(data) != ctx.e:
            raise ValueError('expected {} coefficients, got {}'.format(ctx.e, len(data)))
        return cls(ctx, data)


def zeta_power(ctx, alpha):
    # type: (PrecisionContext, Any) -> CycElt
    """Get the root of unity zeta^alpha for alpha in Z[1/p], taken mod 1.

    Raises:
        InsufficientLevelError: If the denominator exceeds p^n.

    Example:
        >>> ctx = make_context(5, 1, 4)
        >>> zeta_power(ctx, Fraction(1, 5)) == 1 + ctx.pi
        True
    """
    alpha = parse_fraction(alpha) % 1
    denominator = alpha.denominator
    if denominator == 1:
        return ctx.one
    power = vp(ctx.p, denominator)
    if ctx.p ** power != denominator:
        raise ValueError('exponent {} does not have a p-power denominator'.format(alpha))
    if power > ctx.n:
        raise exception.InsufficientLevelError(denominator, ctx.n)
    return ctx.zeta(alpha.numerator * (ctx.level // denominator))


def epsilon_alpha(ctx, alpha):
    # type: (PrecisionContext, Any) -> CycElt
    """Get 1 - zeta^{-alpha}.

    Raises:
        EpsilonUndefinedError: If alpha is an integer.
    """
    alpha = parse_fraction(alpha)
    if alpha.denominator == 1:
        raise exception.EpsilonUndefinedError()
    return 1 - zeta_power(ctx, -alpha)
