# pylint: disable=consider-using-f-string, useless-object-inheritance
"""The truncated local period ring R^+<rho Y_1, ..., rho Y_d>.

A `PeriodElt` stores lattice coordinates relative to its scale rho, in
one of two bases:

    monomial: coefficient c at m means c * prod (rho Y_i)^(m_i)
    falling:  coefficient c at m means c * prod rho^(m_i) F_(m_i)(Y_i)

Both bases span the same lattice, and the change of basis is given by
Stirling numbers, so conversion is exact. Gamma is applied in the
falling basis and Theta in the monomial basis; both never raise the
Y-degree, so a truncated element stays truncated.

With `rho=None` the scale is 1 and the element is an ordinary
polynomial in Y with Laurent coefficients.
"""

__all__ = ['RhoValue', 'PeriodElt', 'falling_factorial', 'unitriangular_pair',
           'basis_convert', 'gamma_act_period', 'higgs_theta', 'binomial_power',
           'log_gamma_equals_ddY', 'multidegrees', 'parse_rho', 'rho_sample']

import itertools
import logging
import math
import numbers
import re
from fractions import Fraction

from sympy import Matrix, Poly, Symbol, binomial, factorial, ff, prod
from sympy.functions.combinatorial.numbers import stirling

from . import exception
from .cyclotomic import CycElt
from .series import tail_bound
from .toric import LaurentElt, PerfLaurentElt
from .type_hints import TYPE_CHECKING
from .utils import fraction_to_json, vp, vp_factorial

if TYPE_CHECKING:
    from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union
    from .cyclotomic import PrecisionContext
    Degree = Tuple[int, ...]


logger = logging.getLogger(__name__)

BASES = ('monomial', 'falling')

Y = Symbol('Y')


def falling_factorial(n):
    # type: (int) -> Poly
    """Get F_n(Y) = Y(Y-1)...(Y-n+1) as an integer polynomial.

    Example:
        >>> falling_factorial(3).all_coeffs()
        [1, -3, 2, 0]
    """
    if n < 0:
        raise ValueError('falling factorial needs n >= 0')
    return Poly(prod([Y - i for i in range(n)]), Y, domain='ZZ')


def unitriangular_pair(size, eps=None):
    # type: (int, Any) -> Tuple[Matrix, Matrix]
    """Get the mutually inverse unitriangular matrices X and Y.

    X has (i+1)*eps on the superdiagonal and Y has (-eps)^(j-i) j!/i!
    above the diagonal. With eps = rho these are the matrices of gamma
    and gamma^-1 on the falling basis.
    """
    if eps is None:
        eps = Symbol('epsilon')
    first = Matrix.eye(size)
    for i in range(size - 1):
        first[i, i + 1] = (i + 1) * eps
    second = Matrix(size, size, lambda i, j: (-eps) ** (j - i) * factorial(j) / factorial(i) if j >= i else 0)
    return first, second


def multidegrees(d, G):
    # type: (int, int) -> List[Degree]
    """All Y-multidegrees of total degree at most G, ordered by total degree."""
    degrees = [m for m in itertools.product(range(G + 1), repeat=d) if sum(m) <= G]
    return sorted(degrees, key=lambda m: (sum(m), m))


class RhoValue(object):
    """Scale of a period lattice, of valuation at least 1/(p-1).

    Attributes:
        elt: The ring element rho.
        tag: "rho_k" if the valuation is exactly 1/(p-1), else "strict".
        descriptor: Optional text it was parsed from.
    """

    def __init__(self, elt, descriptor=None):
        # type: (CycElt, Optional[str]) -> None
        valuation = elt.valuation()
        if valuation is None or valuation < elt.ctx.r:
            raise exception.ConfigError(
                'rho must have valuation at least {}, got {}'.format(elt.ctx.r, valuation)
            )
        self.elt = elt
        self.valuation = valuation
        self.tag = 'rho_k' if valuation == elt.ctx.r else 'strict'
        self.descriptor = descriptor

    @classmethod
    def rho_k(cls, ctx):
        # type: (PrecisionContext) -> RhoValue
        return cls(ctx.rho_k, 'rho_k')

    def __repr__(self):
        # type: () -> str
        return 'RhoValue({}, valuation={})'.format(self.descriptor or self.elt, self.valuation)

    def __eq__(self, other):
        # type: (Any) -> bool
        if not isinstance(other, RhoValue):
            return NotImplemented
        return self.elt == other.elt

    def __ne__(self, other):
        # type: (Any) -> bool
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __hash__(self):
        # type: () -> int
        return hash(self.elt)

    def lift(self, ctx):
        # type: (PrecisionContext) -> RhoValue
        return RhoValue(self.elt.lift(ctx), self.descriptor)

    def reduce(self, ctx):
        # type: (PrecisionContext) -> RhoValue
        return RhoValue(self.elt.reduce(ctx), self.descriptor)

    def to_json(self):
        # type: () -> Dict[str, Any]
        return {'descriptor': self.descriptor, 'elt': self.elt.to_json(),
                'valuation': fraction_to_json(self.valuation), 'tag': self.tag}


def parse_rho(ctx, text):
    # type: (PrecisionContext, str) -> RhoValue
    """Parse a product such as "rho_k", "rho_k*pi^2" or "p*rho_k".

    Factors are rho_k, pi, p, each optionally raised to a power with ^.
    """
    factors = {'rho_k': ctx.rho_k, 'pi': ctx.pi, 'p': ctx.p_elt}
    value = ctx.one
    for part in text.replace(' ', '').split('*'):
        match = re.match(r'^(rho_k|pi|p)(?:\^(\d+))?$', part)
        if match is None:
            raise exception.ConfigError('invalid rho factor {!r} in {!r}'.format(part, text))
        value = value * factors[match.group(1)] ** int(match.group(2) or 1)
    return RhoValue(value, text)


def rho_sample(ctx):
    # type: (PrecisionContext) -> List[RhoValue]
    """Default finite sample standing in for the overconvergent colimit."""
    sample = []
    for text in ('rho_k', 'rho_k*pi', 'rho_k*pi^2', 'p*rho_k'):
        rho = parse_rho(ctx, text)
        if rho.valuation < ctx.N:
            sample.append(rho)
    return sample


def _coeff(ctx, value):
    # type: (PrecisionContext, Any) -> PerfLaurentElt
    if isinstance(value, PerfLaurentElt):
        return value
    return LaurentElt.constant(ctx, value)


def _rho_powers(scale, size):
    # type: (CycElt, int) -> List[CycElt]
    powers = [scale.one_like()]
    for _ in range(size):
        powers.append(powers[-1] * scale)
    return powers


class PeriodElt(object):
    """Truncated period ring element in lattice coordinates."""

    __slots__ = ('ctx', 'rho', 'coeffs', 'basis', 'twist', 'overflow')

    def __init__(self, ctx, rho=None, coeffs=None, basis='monomial', twist=0, overflow=False):
        # type: (PrecisionContext, Optional[RhoValue], Optional[Dict[Degree, Any]], str, int, bool) -> None
        if basis not in BASES:
            raise ValueError('unknown basis {!r}'.format(basis))
        self.ctx = ctx
        self.rho = rho
        self.basis = basis
        self.twist = twist
        terms = {}
        for degree, value in (coeffs or {}).items():
            degree = tuple(degree)
            if len(degree) != ctx.d or sum(degree) > ctx.G or min(degree) < 0:
                raise ValueError('invalid Y-degree {}'.format(degree))
            value = _coeff(ctx, value)
            overflow = overflow or value.overflow
            if not value.is_zero():
                terms[degree] = value
        self.coeffs = terms
        self.overflow = overflow

    @classmethod
    def polynomial(cls, ctx, coeffs):
        # type: (PrecisionContext, Dict[Degree, Any]) -> PeriodElt
        """Build an ordinary polynomial in Y (scale 1, monomial basis)."""
        return cls(ctx, None, coeffs)

    @classmethod
    def from_plain(cls, ctx, rho, coeffs):
        # type: (PrecisionContext, Optional[RhoValue], Dict[Degree, Any]) -> PeriodElt
        """Convert plain Y-monomial coefficients into lattice coordinates.

        Raises:
            NotDivisibleError: If the element is not in the rho-lattice.
        """
        scale = ctx.one if rho is None else rho.elt
        powers = _rho_powers(scale, ctx.G)
        return cls(ctx, rho, {m: _coeff(ctx, c).exact_div(powers[sum(m)]) for m, c in coeffs.items()})

    @property
    def scale(self):
        # type: () -> CycElt
        return self.ctx.one if self.rho is None else self.rho.elt

    def _with(self, coeffs, basis=None, twist=None, overflow=False):
        # type: (Dict[Degree, PerfLaurentElt], Optional[str], Optional[int], bool) -> PeriodElt
        return PeriodElt(self.ctx, self.rho, coeffs, basis or self.basis,
                         self.twist if twist is None else twist, self.overflow or overflow)

    def __repr__(self):
        # type: () -> str
        parts = ['{}:{}'.format(m, c) for m, c in sorted(self.coeffs.items())]
        return 'PeriodElt({}, {{{}}})'.format(self.basis, ', '.join(parts))

    def _check(self, other):
        # type: (PeriodElt) -> None
        if other.ctx != self.ctx or other.rho != self.rho:
            raise ValueError('period elements have different lattices')

    def __eq__(self, other):
        # type: (Any) -> bool
        if not isinstance(other, PeriodElt):
            return NotImplemented
        self._check(other)
        return self.coeffs == other.to_basis(self.basis).coeffs

    def __ne__(self, other):
        # type: (Any) -> bool
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    __hash__ = None  # type: ignore

    def __neg__(self):
        # type: () -> PeriodElt
        return self._with({m: -c for m, c in self.coeffs.items()})

    def __add__(self, other):
        # type: (Any) -> PeriodElt
        if not isinstance(other, PeriodElt):
            other = PeriodElt(self.ctx, self.rho, {(0,) * self.ctx.d: other}, self.basis)
        self._check(other)
        other = other.to_basis(self.basis)
        coeffs = dict(self.coeffs)
        for m, c in other.coeffs.items():
            coeffs[m] = coeffs[m] + c if m in coeffs else c
        return self._with(coeffs, overflow=other.overflow)
    __radd__ = __add__

    def __sub__(self, other):
        # type: (Any) -> PeriodElt
        return self + (-other)

    def __rsub__(self, other):
        # type: (Any) -> PeriodElt
        return (-self) + other

    def __mul__(self, other):
        # type: (Any) -> PeriodElt
        if isinstance(other, (PerfLaurentElt, CycElt, numbers.Integral)):
            return self._with({m: c * other for m, c in self.coeffs.items()})
        if not isinstance(other, PeriodElt):
            return NotImplemented
        self._check(other)
        right = other.to_basis(self.basis)
        table = _product_table(self.scale, self.ctx.G, self.basis)
        overflow = False
        coeffs = {}  # type: Dict[Degree, PerfLaurentElt]
        for ma, ca in self.coeffs.items():
            for mb, cb in right.coeffs.items():
                value = ca * cb
                if value.is_zero():
                    continue
                for parts in itertools.product(*[table[a][b] for a, b in zip(ma, mb)]):
                    degree = tuple(c for c, _ in parts)
                    if sum(degree) > self.ctx.G:
                        overflow = True
                        continue
                    term = value
                    for _, factor in parts:
                        if factor is not None:
                            term = term * factor
                    coeffs[degree] = coeffs[degree] + term if degree in coeffs else term
        return PeriodElt(self.ctx, self.rho, coeffs, self.basis, self.twist + other.twist,
                         self.overflow or other.overflow or overflow)

    def __rmul__(self, other):
        # type: (Any) -> PeriodElt
        if isinstance(other, (PerfLaurentElt, CycElt, numbers.Integral)):
            return self.__mul__(other)
        return NotImplemented

    def is_zero(self):
        # type: () -> bool
        return not self.coeffs

    def zero_like(self):
        # type: () -> PeriodElt
        return PeriodElt(self.ctx, self.rho, basis=self.basis)

    def one_like(self):
        # type: () -> PeriodElt
        return PeriodElt(self.ctx, self.rho, {(0,) * self.ctx.d: 1}, self.basis)

    def valuation(self):
        # type: () -> Optional[Fraction]
        """Minimum valuation of the lattice coordinates."""
        values = [c.valuation() for c in self.coeffs.values()]
        values = [v for v in values if v is not None]
        return min(values) if values else None

    def degree(self):
        # type: () -> int
        """Total Y-degree, -1 for zero."""
        return max([sum(m) for m in self.coeffs] or [-1])

    def coefficient(self, degree):
        # type: (Sequence[int]) -> PerfLaurentElt
        return self.coeffs.get(tuple(degree), LaurentElt(self.ctx))

    def truncate(self, max_degree):
        # type: (int) -> PeriodElt
        """Drop lattice coordinates of total degree above max_degree."""
        return self._with({m: c for m, c in self.coeffs.items() if sum(m) <= max_degree})

    def map_coefficients(self, func):
        # type: (Any) -> PeriodElt
        return self._with({m: func(c) for m, c in self.coeffs.items()})

    def div_int(self, value):
        # type: (int) -> PeriodElt
        return self.map_coefficients(lambda c: c.div_int(value))

    def lift(self, ctx):
        # type: (PrecisionContext) -> PeriodElt
        rho = None if self.rho is None else self.rho.lift(ctx)
        return PeriodElt(ctx, rho, {m: c.lift(ctx) for m, c in self.coeffs.items()},
                         self.basis, self.twist, self.overflow)

    def reduce(self, ctx):
        # type: (PrecisionContext) -> PeriodElt
        rho = None if self.rho is None else self.rho.reduce(ctx)
        return PeriodElt(ctx, rho, {m: c.reduce(ctx) for m, c in self.coeffs.items()},
                         self.basis, self.twist, self.overflow)

    def to_plain(self):
        # type: () -> Dict[Degree, PerfLaurentElt]
        """Ordinary Y-monomial coefficients."""
        powers = _rho_powers(self.scale, self.ctx.G)
        return {m: c * powers[sum(m)] for m, c in self.to_basis('monomial').coeffs.items()}

    def to_basis(self, basis):
        # type: (str) -> PeriodElt
        """Convert between the monomial and falling bases."""
        if basis not in BASES:
            raise ValueError('unknown basis {!r}'.format(basis))
        if basis == self.basis or not self.coeffs:
            return self if basis == self.basis else self._with({}, basis)
        table = _conversion_table(self.scale, self.ctx.G, basis)
        coeffs = dict(self.coeffs)
        for i in range(self.ctx.d):
            converted = {}  # type: Dict[Degree, PerfLaurentElt]
            for m, c in coeffs.items():
                for target, factor in table[m[i]]:
                    degree = m[:i] + (target,) + m[i + 1:]
                    value = c * factor
                    converted[degree] = converted[degree] + value if degree in converted else value
            coeffs = converted
        return self._with(coeffs, basis)

    def gamma_act(self, i, k=1):
        # type: (int, int) -> PeriodElt
        """Apply gamma_i^k: Y_i -> Y_i + k together with the coefficient action."""
        falling = self.to_basis('falling')
        powers = _rho_powers(self.scale, self.ctx.G)
        coeffs = {}  # type: Dict[Degree, PerfLaurentElt]
        for m, c in falling.coeffs.items():
            c = c.gamma_act(i, k)
            top = m[i]
            for j in range(top + 1):
                factor = int(binomial(top, j) * ff(k, top - j))
                if not factor:
                    continue
                degree = m[:i] + (j,) + m[i + 1:]
                value = c * (powers[top - j] * factor)
                coeffs[degree] = coeffs[degree] + value if degree in coeffs else value
        return falling._with(coeffs).to_basis(self.basis)

    def derivative(self, i):
        # type: (int) -> PeriodElt
        """Apply d/dY_i; the result is twisted once."""
        monomial = self.to_basis('monomial')
        scale = self.scale
        coeffs = {}
        for m, c in monomial.coeffs.items():
            if m[i]:
                degree = m[:i] + (m[i] - 1,) + m[i + 1:]
                coeffs[degree] = c * (scale * m[i])
        return monomial._with(coeffs, twist=self.twist + 1).to_basis(self.basis)

    def to_json(self):
        # type: () -> Dict[str, Any]
        return {
            'basis': self.basis,
            'rho': None if self.rho is None else self.rho.elt.to_json(),
            'coeffs': {','.join(map(str, m)): c.to_json() for m, c in sorted(self.coeffs.items())},
        }

    @classmethod
    def from_json(cls, ctx, data):
        # type: (PrecisionContext, Dict[str, Any]) -> PeriodElt
        rho = None if data['rho'] is None else RhoValue(CycElt.from_json(ctx, data['rho']))
        coeffs = {tuple(int(x) for x in k.split(',')): PerfLaurentElt.from_json(ctx, v)
                  for k, v in data['coeffs'].items()}
        return cls(ctx, rho, coeffs, data['basis'])


_TABLES = {}  # type: Dict[Tuple[Any, int, str], List[List[Tuple[int, CycElt]]]]


def _conversion_table(scale, G, basis):
    # type: (CycElt, int, str) -> List[List[Tuple[int, CycElt]]]
    """Per-variable change of basis, indexed by source degree.

    falling -> monomial: rho^n F_n = sum_k s(n, k) rho^(n-k) (rho Y)^k
    monomial -> falling: (rho Y)^k = sum_j S(k, j) rho^(k-j) rho^j F_j
    """
    key = (scale.ctx.key, scale.coeffs, G, basis)
    if key not in _TABLES:
        powers = _rho_powers(scale, G)
        kind = 1 if basis == 'monomial' else 2
        table = []
        for source in range(G + 1):
            row = []
            for target in range(source + 1):
                if kind == 1:
                    number = int(stirling(source, target, kind=1, signed=True))
                else:
                    number = int(stirling(source, target, kind=2))
                if number:
                    row.append((target, powers[source - target] * number))
            table.append(row)
        _TABLES[key] = table
    return _TABLES[key]


_PRODUCTS = {}  # type: Dict[Tuple[Any, ...], List[List[List[Tuple[int, Optional[CycElt]]]]]]


def _product_table(scale, G, basis):
    # type: (CycElt, int, str) -> List[List[List[Tuple[int, Optional[CycElt]]]]]
    """Per-variable products of basis elements, as (degree, factor) lists.

    monomial: (rho Y)^a (rho Y)^b = (rho Y)^(a+b)
    falling:  rho^a F_a rho^b F_b = sum_k C(a,k) C(b,k) k! rho^k rho^(a+b-k) F_(a+b-k)
    A factor of None stands for 1.
    """
    key = (scale.ctx.key, scale.coeffs, G, basis)
    if key not in _PRODUCTS:
        powers = _rho_powers(scale, G)
        table = []
        for a in range(G + 1):
            row = []
            for b in range(G + 1):
                if basis == 'monomial':
                    row.append([(a + b, None)])
                    continue
                terms = []
                for k in range(min(a, b) + 1):
                    number = int(binomial(a, k) * binomial(b, k) * factorial(k))
                    terms.append((a + b - k, None if not k and number == 1 else powers[k] * number))
                row.append(terms)
            table.append(row)
        _PRODUCTS[key] = table
    return _PRODUCTS[key]


def basis_convert(x, basis):
    # type: (PeriodElt, str) -> PeriodElt
    return x.to_basis(basis)


def gamma_act_period(i, k, x):
    # type: (int, int, PeriodElt) -> PeriodElt
    if not 0 <= i < x.ctx.d:
        raise ValueError('generator index {} out of range'.format(i))
    return x.gamma_act(i, k)


def higgs_theta(x):
    # type: (PeriodElt) -> Tuple[PeriodElt, ...]
    """Get (dx/dY_1, ..., dx/dY_d)."""
    return tuple(x.derivative(i) for i in range(x.ctx.d))


def binomial_power(ctx, z, rho=None, index=0):
    # type: (PrecisionContext, CycElt, Optional[RhoValue], int) -> PeriodElt
    """Get (1 + z)^(Y_index) = sum z^n/n! F_n(Y), in the falling basis.

    Raises:
        DivergentExponentError: If v(z) <= 1/(p-1).
        NotDivisibleError: If the series leaves the rho-lattice.
    """
    z = ctx.elt(z)
    bound = tail_bound(ctx, 'binomial', z.valuation())
    top = ctx.G if rho is not None else min(ctx.G, bound.cutoff - 1)
    scale_valuation = Fraction(0) if rho is None else rho.valuation
    loss = max(vp_loss(ctx.p, n, scale_valuation) for n in range(top + 1))
    work = ctx.with_precision(ctx.N + loss)
    lifted = z.lift(work)
    scale = work.one if rho is None else rho.elt.lift(work)
    coeffs = {}
    power = work.one
    scale_power = work.one
    for n in range(top + 1):
        if n:
            power = power * lifted
            scale_power = scale_power * scale
        term = power.div_int(math.factorial(n)).exact_div(scale_power)
        degree = tuple(n if i == index else 0 for i in range(ctx.d))
        coeffs[degree] = term.reduce(ctx)
    return PeriodElt(ctx, rho, coeffs, 'falling')


def vp_loss(p, n, scale_valuation):
    # type: (int, int, Fraction) -> int
    """Whole units of precision lost dividing by n! * rho^n."""
    return int(math.ceil(vp_factorial(p, n) + n * scale_valuation))


def log_gamma_equals_ddY(i, x):
    # type: (int, PeriodElt) -> Tuple[PeriodElt, PeriodElt]
    """Get (log gamma_i (x), dx/dY_i) for the caller to compare.

    Raises:
        NotNilpotentError: If a coefficient has a non-integral monomial.
    """
    ctx = x.ctx
    for c in x.coeffs.values():
        for exponent in c.exponents():
            if any(e.denominator != 1 for e in exponent):
                raise exception.NotNilpotentError(exponent)
    top = max([m[i] for m in x.coeffs] or [0])
    guard = max([vp(ctx.p, k) for k in range(1, top + 1)] or [0])
    work = ctx.with_precision(ctx.N + guard)
    term = x.lift(work).to_basis('falling')
    total = term.zero_like()
    for k in range(1, top + 1):
        term = term.gamma_act(i) - term
        part = term.div_int(k)
        total = total + part if k % 2 else total - part
    log = total.reduce(ctx).to_basis(x.basis)
    log = PeriodElt(ctx, x.rho, log.coeffs, x.basis, x.twist + 1)
    return log, x.derivative(i)
