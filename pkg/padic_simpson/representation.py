# pylint: disable=consider-using-f-string, useless-object-inheritance
"""Small semilinear representations of Gamma = Z_p^d.

Module elements are row vectors over the base ring. The generator
gamma_i acts by

    v -> gamma_i(v) * A_i

where gamma_i(v) applies the coefficient action entrywise. Commutativity
of Gamma then reads gamma_i(A_j) A_i = gamma_j(A_i) A_j, which over the
chart (where Gamma fixes the coefficients) is plain commutativity.

Example:
    >>> ctx = make_context(3, 1, 6, D=1, G=3, a=1)
    >>> rep = make_rep(ctx, 'chart', [[[1 + ctx.pi ** 3]]])
    >>> group_cohomology(rep).free_ranks()
    [0, 0]
"""

__all__ = ['SmallRep', 'make_rep', 'trivial_rep', 'act', 'base_change', 'tensor', 'dual',
           'group_cohomology', 'flat_module', 'random_constant', 'random_rep']

import itertools
import logging
from fractions import Fraction

import numpy as np

from . import exception
from . import matrix as mx
from .homological import FlatModule, KoszulComplex, koszul_cohomology
from .period import PeriodElt, multidegrees
from .series import exp_matrix
from .toric import LaurentElt, PerfLaurentElt, as_base, box_exponents
from .type_hints import TYPE_CHECKING
from .utils import at_least, fraction_to_json, parse_fraction

if TYPE_CHECKING:
    from typing import Any, Dict, List, Optional, Sequence, Tuple
    from .cyclotomic import CycElt, PrecisionContext
    from .period import RhoValue


logger = logging.getLogger(__name__)

BASES = ('chart', 'perfectoid')


class SmallRep(object):
    """Representation given by its generator matrices.

    The constructor does not validate; use `make_rep` for that.

    Attributes:
        base: "chart" or "perfectoid".
        mats: The matrices A_0 ... A_(d-1) as object arrays.
        a: Smallness certificate.
    """

    def __init__(self, ctx, base, mats, a=None):
        # type: (PrecisionContext, str, Sequence[Any], Optional[Any]) -> None
        if base not in BASES:
            raise ValueError('unknown base {!r}'.format(base))
        self.ctx = ctx
        self.base = base
        self.mats = [_convert(ctx, base, mat) for mat in mats]
        self.a = ctx.a if a is None else parse_fraction(a)

    def __repr__(self):
        # type: () -> str
        return 'SmallRep(base={}, l={}, d={}, a={})'.format(self.base, self.l, self.d, self.a)

    def __eq__(self, other):
        # type: (Any) -> bool
        if not isinstance(other, SmallRep):
            return NotImplemented
        return (self.base == other.base and self.d == other.d
                and all(mx.is_equal(x, y) for x, y in zip(self.mats, other.mats)))

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
        return self.mats[0].shape[0] if self.mats else 0

    @property
    def d(self):
        # type: () -> int
        return len(self.mats)

    def smallness_valuation(self):
        # type: () -> Optional[Fraction]
        """Minimum valuation of A_i - I; None if every A_i is the identity."""
        values = [mx.valuation(mat - mx.identity_like(mat)) for mat in self.mats]
        values = [v for v in values if v is not None]
        return min(values) if values else None

    def inverse_mats(self):
        # type: () -> List[np.ndarray]
        return [mx.inverse(mat) for mat in self.mats]

    def step(self, i, vector, inverse=False):
        # type: (int, Sequence[PerfLaurentElt], bool) -> List[Any]
        """Apply gamma_i (or its inverse) to a row vector."""
        if not inverse:
            return mx.row_times([x.gamma_act(i, 1) for x in vector], self.mats[i])
        mat = mx.map_entries(lambda x: x.gamma_act(i, -1), mx.inverse(self.mats[i]))
        return mx.row_times([x.gamma_act(i, -1) for x in vector], mat)

    def to_json(self):
        # type: () -> Dict[str, Any]
        return {
            'base': self.base,
            'l': self.l,
            'd': self.d,
            'a': fraction_to_json(self.a),
            'mats': [[[x.to_json() for x in row] for row in mat] for mat in self.mats],
        }

    @classmethod
    def from_json(cls, ctx, data, validate=True):
        # type: (PrecisionContext, Dict[str, Any], bool) -> SmallRep
        base_cls = LaurentElt if data['base'] == 'chart' else PerfLaurentElt
        mats = [[[base_cls.from_json(ctx, x) for x in row] for row in mat] for mat in data['mats']]
        a = parse_fraction(data['a'])
        if validate:
            return make_rep(ctx, data['base'], mats, a)
        return cls(ctx, data['base'], mats, a)


def _convert(ctx, base, mat):
    # type: (PrecisionContext, str, Any) -> np.ndarray
    if isinstance(mat, np.ndarray):
        return mx.map_entries(lambda x: as_base(ctx, x, base), mat)
    return mx.matrix(mat, lambda x: as_base(ctx, x, base))


def make_rep(ctx, base, mats, a=None):
    # type: (PrecisionContext, str, Sequence[Any], Optional[Any]) -> SmallRep
    """Build a representation, checking the cocycle condition and smallness.

    Raises:
        CocycleViolationError: If gamma_i(A_j) A_i != gamma_j(A_i) A_j.
        NotSmallError: If some A_i - I has valuation below a + 1/(p-1).
    """
    rep = SmallRep(ctx, base, mats, a)
    if len(rep.mats) != ctx.d:
        raise ValueError('expected {} matrices, got {}'.format(ctx.d, len(rep.mats)))
    shapes = set(mat.shape for mat in rep.mats)
    if len(shapes) != 1 or any(rows != cols for rows, cols in shapes):
        raise ValueError('matrices must be square and of equal size')

    for i, j in itertools.combinations(range(rep.d), 2):
        A, B = rep.mats[i], rep.mats[j]
        left = mx.map_entries(lambda x: x.gamma_act(i), B).dot(A)
        right = mx.map_entries(lambda x: x.gamma_act(j), A).dot(B)
        if not mx.is_equal(left, right):
            raise exception.CocycleViolationError(i, j)

    required = rep.a + ctx.r
    for i, mat in enumerate(rep.mats):
        valuation = mx.valuation(mat - mx.identity_like(mat))
        if not at_least(valuation, required):
            raise exception.NotSmallError(i, valuation, required)
    return rep


def trivial_rep(ctx, l=1, base='chart', a=None):  # pylint: disable=invalid-name
    # type: (PrecisionContext, int, str, Optional[Any]) -> SmallRep
    ident = mx.identity(ctx.zero, ctx.one, l)
    return make_rep(ctx, base, [ident] * ctx.d, a)


def act(rep, g, vector):
    # type: (SmallRep, Sequence[int], Sequence[Any]) -> List[Any]
    """Apply prod gamma_i^(g_i) to a row vector."""
    if len(g) != rep.d:
        raise ValueError('group element needs {} components'.format(rep.d))
    vector = [as_base(rep.ctx, x, rep.base) for x in vector]
    for i, power in enumerate(g):
        for _ in range(abs(power)):
            vector = rep.step(i, vector, inverse=power < 0)
    return vector


def base_change(rep):
    # type: (SmallRep) -> SmallRep
    """Extend scalars from the chart to the perfectoid ring."""
    if rep.base != 'chart':
        raise ValueError('base change needs a chart representation')
    return SmallRep(rep.ctx, 'perfectoid', rep.mats, rep.a)


def tensor(first, second):
    # type: (SmallRep, SmallRep) -> SmallRep
    if first.base != second.base or first.ctx != second.ctx:
        raise ValueError('tensor product needs representations over the same base')
    mats = [mx.kron(x, y) for x, y in zip(first.mats, second.mats)]
    return SmallRep(first.ctx, first.base, mats, min(first.a, second.a))


def dual(rep):
    # type: (SmallRep) -> SmallRep
    """Contragredient representation, with matrices A^-T."""
    return SmallRep(rep.ctx, rep.base, [mx.inverse(mat).T.copy() for mat in rep.mats], rep.a)


def _vector_coordinates(ctx, value):
    # type: (PrecisionContext, Sequence[PerfLaurentElt]) -> Tuple[Dict[Tuple[Any, ...], CycElt], bool]
    coords = {}
    overflow = False
    for s, entry in enumerate(value):
        overflow = overflow or entry.overflow
        for k, c in entry.terms.items():
            coords[(s, k)] = c
    return coords, overflow


def _period_coordinates(ctx, value, basis):
    # type: (PrecisionContext, Sequence[PeriodElt], str) -> Tuple[Dict[Tuple[Any, ...], CycElt], bool]
    coords = {}
    overflow = False
    for s, entry in enumerate(value):
        entry = entry.to_basis(basis)
        overflow = overflow or entry.overflow
        for m, laurent in entry.coeffs.items():
            for k, c in laurent.terms.items():
                coords[(s, k, m)] = c
    return coords, overflow


def flat_module(ctx, l, base, rho=None, coset=None, period=False, basis='falling'):  # pylint: disable=invalid-name
    # type: (PrecisionContext, int, str, Optional[RhoValue], Optional[Sequence[int]], bool, str) -> FlatModule
    """Flatten (base box)^l, optionally tensored with the period lattice.

    Parameters:
        coset: Keep only exponents congruent to this scaled vector mod
            p^n (the perfectoid box splits along these cosets).
        period: Tensor with R<rho Y>; labels of total Y-degree G are
            boundary.
        basis: Period basis the coordinates are read in. Gamma lowers
            degree in the falling basis and Theta in the monomial one.
    """
    cls = LaurentElt if base == 'chart' else PerfLaurentElt
    exponents = box_exponents(ctx, integral=base == 'chart', coset=coset)

    if not period:
        labels = [(s, k) for s in range(l) for k in exponents]

        def element(label):
            vector = [cls(ctx) for _ in range(l)]
            vector[label[0]] = cls(ctx, {label[1]: ctx.one})
            return vector

        return FlatModule(ctx, labels, element, lambda v: _vector_coordinates(ctx, v))

    degrees = multidegrees(ctx.d, ctx.G)
    labels = [(s, k, m) for s in range(l) for k in exponents for m in degrees]
    boundary = [label for label in labels if sum(label[2]) == ctx.G]

    def period_element(label):
        vector = [PeriodElt(ctx, rho, basis=basis) for _ in range(l)]
        s, k, m = label
        vector[s] = PeriodElt(ctx, rho, {m: cls(ctx, {k: ctx.one})}, basis)
        return vector

    return FlatModule(ctx, labels, period_element, lambda v: _period_coordinates(ctx, v, basis), boundary)


def group_cohomology(rep, rho=None, period=False, coset=None):
    # type: (SmallRep, Optional[RhoValue], bool, Optional[Sequence[int]]) -> Any
    """Koszul cohomology of the operators gamma_i - 1.

    Parameters:
        rho: Lattice scale of the period coefficients.
        period: Use coefficients in the period lattice at rho instead of
            the plain base ring.
        coset: Restrict a perfectoid base to one exponent coset.
    """
    ctx = rep.ctx
    module = flat_module(ctx, rep.l, rep.base, rho, coset, period)
    operators = []
    for i in range(rep.d):
        def shift(vector, i=i):
            image = rep.step(i, vector)
            return [x - y for x, y in zip(image, vector)]
        operators.append(module.operator(shift))
    report = koszul_cohomology(KoszulComplex(module, operators))
    logger.info('Group cohomology (%s, period=%s): free ranks %s',
                rep.base, period, report.free_ranks())
    return report


def random_constant(ctx, rng, l):  # pylint: disable=invalid-name
    # type: (PrecisionContext, np.random.Generator, int) -> np.ndarray
    """Random l x l matrix of constants with pi-adic digits drawn from rng."""
    digits = rng.integers(0, ctx.p, size=(l, l, ctx.e))
    result = np.empty((l, l), dtype=object)
    for i in range(l):
        for j in range(l):
            result[i, j] = ctx.elt([int(x) for x in digits[i, j]])
    return result


def random_thetas(ctx, rng, l, valuation_index=None):  # pylint: disable=invalid-name
    # type: (PrecisionContext, np.random.Generator, int, Optional[int]) -> List[np.ndarray]
    """Commuting matrices pi^k * q_i(C) for random integer polynomials q_i."""
    index = ctx.smallness_index if valuation_index is None else valuation_index
    base = random_constant(ctx, rng, l)
    ident = mx.identity(ctx.zero, ctx.one, l)
    powers = [ident, base, base.dot(base)]
    scale = ctx.pi ** index
    thetas = []
    for _ in range(ctx.d):
        coeffs = rng.integers(-2, 3, size=3)
        theta = sum((powers[k] * int(c) for k, c in enumerate(coeffs)), mx.zeros(ctx.zero, l))
        theta = theta * scale
        thetas.append(mx.map_entries(lambda x: LaurentElt.constant(ctx, x), theta))
    return thetas


def random_rep(ctx, rng, l=1, a=None):  # pylint: disable=invalid-name
    # type: (PrecisionContext, np.random.Generator, int, Optional[Any]) -> SmallRep
    """Random small chart representation A_i = exp(-theta_i)."""
    mats = [exp_matrix(-theta, ctx)[0] for theta in random_thetas(ctx, rng, l)]
    return make_rep(ctx, 'chart', mats, a)
