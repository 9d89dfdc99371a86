# pylint: disable=consider-using-f-string, useless-object-inheritance
"""Exact linear algebra over O/p^N and Koszul cohomology.

The ring O/p^N is a chain ring with ideals (pi^j), so every matrix has a
Smith normal form with divisors pi^j. Cohomology is computed exactly as
ker / im and reported as a free rank (summands O/p^N) and a multiset of
torsion valuations, one per cyclic summand O/pi^k.

Truncated ring modules are flattened to coordinate modules through
`FlatModule`. Operators are stored as sparse columns and split into
connected blocks before any Smith form is taken.
"""

__all__ = ['SmithForm', 'smith_normal_form', 'kernel_basis', 'SparseOperator', 'FlatModule',
           'KoszulComplex', 'DegreeReport', 'CohomologyReport', 'homology', 'koszul_cohomology', 'kunneth',
           'divisor_valuations']

import itertools
import logging
from collections import Counter
from fractions import Fraction

import numpy as np

from . import exception
from . import matrix as mx
from .type_hints import TYPE_CHECKING
from .utils import fraction_from_json, fraction_to_json

if TYPE_CHECKING:
    from typing import Any, Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Set, Tuple
    from .cyclotomic import CycElt, PrecisionContext


logger = logging.getLogger(__name__)

MAX_CACHED_BLOCKS = 4096


class SmithForm(object):  # pylint: disable=too-few-public-methods
    """Result of `smith_normal_form`, satisfying U * M * V = diag.

    Attributes:
        divisors: Valuations of the diagonal, ascending, with None for
            zero divisors at the end.
        U: Invertible row transform, if tracked.
        V: Invertible column transform, if tracked.
        V_inverse: Inverse of V, if tracked.
        diagonal: The matrix U * M * V.
        coercions: Entries that cancelled to exact zero during
            elimination.
    """

    def __init__(self, divisors, U, V, diagonal, coercions, V_inverse=None):
        # type: (List[Optional[Fraction]], Optional[np.ndarray], Optional[np.ndarray], np.ndarray, int, Optional[np.ndarray]) -> None
        self.divisors = divisors
        self.U = U
        self.V = V
        self.diagonal = diagonal
        self.coercions = coercions
        self.V_inverse = V_inverse

    def __repr__(self):
        # type: () -> str
        return 'SmithForm(divisors={})'.format([str(v) for v in self.divisors])

    def rank(self, below=None):
        # type: (Optional[Fraction]) -> int
        """Count nonzero divisors, or those of valuation below a threshold."""
        values = [v for v in self.divisors if v is not None]
        if below is not None:
            values = [v for v in values if v < below]
        return len(values)

    def verify(self, mat):
        # type: (np.ndarray) -> bool
        return mx.is_equal(self.U.dot(mat).dot(self.V), self.diagonal)


def smith_normal_form(mat, ctx=None, left=True, right=True, inverse=False):
    # type: (np.ndarray, Optional[PrecisionContext], bool, bool, bool) -> SmithForm
    """Diagonalise a matrix over O/p^N by unimodular row and column operations.

    The pivot is an entry of minimal valuation (first in row-major order)
    and is normalised to exactly pi^k, so the diagonal is a list of
    powers of pi in ascending order.

    Parameters:
        left: Track the row transform U.
        right: Track the column transform V.
        inverse: Track the inverse of V.

    Example:
        >>> ctx = make_context(3, 1, 6, a=1)
        >>> smith_normal_form(matrix([[ctx.p_elt, 0], [0, ctx.pi]], ctx.elt)).divisors
        [Fraction(1, 2), Fraction(1, 1)]
    """
    if ctx is None:
        if not mat.size:
            raise ValueError('a context is needed for empty matrices')
        ctx = mat.flat[0].ctx
    rows, cols = mat.shape
    work = mat.copy()
    U = mx.identity(ctx.zero, ctx.one, rows) if left else None
    V = mx.identity(ctx.zero, ctx.one, cols) if right else None
    V_inverse = mx.identity(ctx.zero, ctx.one, cols) if inverse else None
    divisors = []  # type: List[Optional[Fraction]]
    coercions = 0

    for t in range(min(rows, cols)):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                value = work[i, j].valuation()
                if value is not None and (best is None or value < best[0]):
                    best = (value, i, j)
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        valuation, i, j = best
        if i != t:
            work[[t, i]] = work[[i, t]]
            if U is not None:
                U[[t, i]] = U[[i, t]]
        if j != t:
            work[:, [t, j]] = work[:, [j, t]]
            if V is not None:
                V[:, [t, j]] = V[:, [j, t]]
            if V_inverse is not None:
                V_inverse[[t, j]] = V_inverse[[j, t]]

        k, unit = work[t, t].unit_part()
        scale = unit.inverse()
        work[t] = work[t] * scale
        if U is not None:
            U[t] = U[t] * scale

        for i in range(t + 1, rows):
            if work[i, t].is_zero():
                continue
            factor = work[i, t].div_pi(k)
            for j in range(t + 1, cols):
                old = work[i, j]
                step = factor * work[t, j]
                work[i, j] = old - step
                if not old.is_zero() and not step.is_zero() and work[i, j].is_zero():
                    coercions += 1
            work[i, t] = ctx.zero
            if U is not None:
                U[i] = U[i] - factor * U[t]

        for j in range(t + 1, cols):
            if work[t, j].is_zero():
                continue
            factor = work[t, j].div_pi(k)
            work[t, j] = ctx.zero
            if V is not None:
                V[:, j] = V[:, j] - factor * V[:, t]
            if V_inverse is not None:
                V_inverse[t] = V_inverse[t] + factor * V_inverse[j]

        divisors.append(valuation)

    divisors.extend([None] * (min(rows, cols) - len(divisors)))
    if coercions:
        logger.debug('Smith form of %dx%d block: %d precision coercions', rows, cols, coercions)
    return SmithForm(divisors, U, V, work, coercions, V_inverse)


def kernel_basis(mat, ctx=None):
    # type: (np.ndarray, Optional[PrecisionContext]) -> np.ndarray
    """Columns spanning the free part of the kernel of a matrix."""
    smith = smith_normal_form(mat, ctx, left=False)
    return smith.V[:, smith.rank():]


class SparseOperator(object):
    """Linear map between coordinate modules, stored by columns.

    `columns[j]` maps row indices to the nonzero entries of column j.
    """

    __slots__ = ('ctx', 'shape', 'columns')

    def __init__(self, ctx, shape, columns=None):
        # type: (PrecisionContext, Tuple[int, int], Optional[Dict[int, Dict[int, CycElt]]]) -> None
        self.ctx = ctx
        self.shape = tuple(shape)
        self.columns = {}  # type: Dict[int, Dict[int, CycElt]]
        for j, column in (columns or {}).items():
            column = {i: v for i, v in column.items() if not v.is_zero()}
            if column:
                self.columns[j] = column

    @classmethod
    def from_dense(cls, mat, ctx=None):
        # type: (np.ndarray, Optional[PrecisionContext]) -> SparseOperator
        ctx = ctx or mat.flat[0].ctx
        columns = {}
        for (i, j), value in np.ndenumerate(mat):
            if not value.is_zero():
                columns.setdefault(j, {})[i] = value
        return cls(ctx, mat.shape, columns)

    @classmethod
    def identity(cls, ctx, size):
        # type: (PrecisionContext, int) -> SparseOperator
        return cls(ctx, (size, size), {i: {i: ctx.one} for i in range(size)})

    def __repr__(self):
        # type: () -> str
        entries = sum(len(c) for c in self.columns.values())
        return 'SparseOperator({}x{}, {} entries)'.format(self.shape[0], self.shape[1], entries)

    def dense(self, rows=None, cols=None):
        # type: (Optional[Sequence[int]], Optional[Sequence[int]]) -> np.ndarray
        """Dense submatrix on the given row and column indices."""
        rows = list(range(self.shape[0])) if rows is None else list(rows)
        cols = list(range(self.shape[1])) if cols is None else list(cols)
        row_pos = {r: n for n, r in enumerate(rows)}
        result = mx.zeros(self.ctx.zero, len(rows), len(cols))
        for n, j in enumerate(cols):
            for i, value in self.columns.get(j, {}).items():
                if i in row_pos:
                    result[row_pos[i], n] = value
        return result

    def entry(self, i, j):
        # type: (int, int) -> CycElt
        return self.columns.get(j, {}).get(i, self.ctx.zero)

    def restrict(self, rows=None, cols=None):
        # type: (Optional[Iterable[int]], Optional[Iterable[int]]) -> SparseOperator
        """Zero out everything outside the given rows and columns."""
        rows = None if rows is None else set(rows)
        cols = None if cols is None else set(cols)
        columns = {}
        for j, column in self.columns.items():
            if cols is not None and j not in cols:
                continue
            columns[j] = {i: v for i, v in column.items() if rows is None or i in rows}
        return SparseOperator(self.ctx, self.shape, columns)

    def compose(self, other):
        # type: (SparseOperator) -> SparseOperator
        """Get self * other."""
        if self.shape[1] != other.shape[0]:
            raise ValueError('shape mismatch {} * {}'.format(self.shape, other.shape))
        columns = {}
        for j, column in other.columns.items():
            result = {}  # type: Dict[int, CycElt]
            for k, value in column.items():
                for i, entry in self.columns.get(k, {}).items():
                    term = entry * value
                    result[i] = result[i] + term if i in result else term
            columns[j] = result
        return SparseOperator(self.ctx, (self.shape[0], other.shape[1]), columns)

    def __add__(self, other):
        # type: (SparseOperator) -> SparseOperator
        if self.shape != other.shape:
            raise ValueError('shape mismatch {} + {}'.format(self.shape, other.shape))
        columns = {j: dict(c) for j, c in self.columns.items()}
        for j, column in other.columns.items():
            target = columns.setdefault(j, {})
            for i, value in column.items():
                target[i] = target[i] + value if i in target else value
        return SparseOperator(self.ctx, self.shape, columns)

    def __neg__(self):
        # type: () -> SparseOperator
        return SparseOperator(self.ctx, self.shape,
                              {j: {i: -v for i, v in c.items()} for j, c in self.columns.items()})

    def __sub__(self, other):
        # type: (SparseOperator) -> SparseOperator
        return self + (-other)

    def is_zero(self):
        # type: () -> bool
        return not self.columns

    def __eq__(self, other):
        # type: (Any) -> bool
        if not isinstance(other, SparseOperator):
            return NotImplemented
        return self.shape == other.shape and (self - other).is_zero()

    def __ne__(self, other):
        # type: (Any) -> bool
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    __hash__ = None  # type: ignore

    def blocks(self):
        # type: () -> List[Tuple[List[int], List[int]]]
        """Connected components of the nonzero pattern as (rows, cols)."""
        parent = {}  # type: Dict[Tuple[str, int], Tuple[str, int]]

        def find(node):
            while parent[node] != node:
                parent[node] = parent[parent[node]]
                node = parent[node]
            return node

        for j, column in self.columns.items():
            col_node = ('c', j)
            parent.setdefault(col_node, col_node)
            for i in column:
                row_node = ('r', i)
                parent.setdefault(row_node, row_node)
                a, b = find(col_node), find(row_node)
                if a != b:
                    parent[a] = b

        groups = {}  # type: Dict[Tuple[str, int], Tuple[List[int], List[int]]]
        for node in parent:
            rows, cols = groups.setdefault(find(node), ([], []))
            (rows if node[0] == 'r' else cols).append(node[1])
        return sorted((sorted(r), sorted(c)) for r, c in groups.values())

    @classmethod
    def stack(cls, ops, rows=None):
        # type: (Sequence[SparseOperator], Optional[Sequence[int]]) -> SparseOperator
        """Stack operators vertically, keeping only the given rows of each."""
        rows = list(range(ops[0].shape[0])) if rows is None else list(rows)
        height = len(rows)
        position = {r: n for n, r in enumerate(rows)}
        columns = {}  # type: Dict[int, Dict[int, CycElt]]
        for block, op in enumerate(ops):
            for j, column in op.columns.items():
                target = columns.setdefault(j, {})
                for i, value in column.items():
                    if i in position:
                        target[block * height + position[i]] = value
        return cls(ops[0].ctx, (height * len(ops), ops[0].shape[1]), columns)

    def apply(self, vector):
        # type: (Sequence[CycElt]) -> List[CycElt]
        result = [self.ctx.zero] * self.shape[0]
        for j, column in self.columns.items():
            if vector[j].is_zero():
                continue
            for i, value in column.items():
                result[i] = result[i] + value * vector[j]
        return result

    def kernel(self):
        # type: () -> np.ndarray
        """Free kernel basis, one column per vector, solved block by block."""
        ctx = self.ctx
        vectors = []
        used = set()  # type: Set[int]
        for rows, cols in self.blocks():
            used.update(cols)
            basis = _block_kernel(self.dense(rows, cols))
            for n in range(basis.shape[1]):
                vector = [ctx.zero] * self.shape[1]
                for position, j in enumerate(cols):
                    vector[j] = basis[position, n]
                vectors.append(vector)
        for j in range(self.shape[1]):
            if j not in used:
                vector = [ctx.zero] * self.shape[1]
                vector[j] = ctx.one
                vectors.append(vector)
        if not vectors:
            return np.empty((self.shape[1], 0), dtype=object)
        return mx.matrix(vectors).T.copy()


_BLOCK_CACHE = {}  # type: Dict[Tuple[Any, ...], Tuple[Tuple[Optional[Fraction], ...], int]]
_KERNEL_CACHE = {}  # type: Dict[Tuple[Any, ...], np.ndarray]


def _block_key(block):
    # type: (np.ndarray) -> Tuple[Any, ...]
    return (block.flat[0].ctx.key, block.shape, tuple(value.coeffs for value in block.flat))


def _block_kernel(block):
    # type: (np.ndarray) -> np.ndarray
    key = _block_key(block)
    if key not in _KERNEL_CACHE:
        if len(_KERNEL_CACHE) > MAX_CACHED_BLOCKS:
            _KERNEL_CACHE.clear()
        _KERNEL_CACHE[key] = kernel_basis(block)
    return _KERNEL_CACHE[key]


def _block_divisors(block):
    # type: (np.ndarray) -> Tuple[Tuple[Optional[Fraction], ...], int]
    key = _block_key(block)
    if key not in _BLOCK_CACHE:
        if len(_BLOCK_CACHE) > MAX_CACHED_BLOCKS:
            _BLOCK_CACHE.clear()
        smith = smith_normal_form(block, left=False, right=False)
        _BLOCK_CACHE[key] = (tuple(smith.divisors), smith.coercions)
    return _BLOCK_CACHE[key]


def divisor_valuations(op):
    # type: (SparseOperator) -> Tuple[List[Fraction], int]
    """Nonzero elementary divisors of an operator and the coercion count."""
    values = []  # type: List[Fraction]
    coercions = 0
    for rows, cols in op.blocks():
        divisors, count = _block_divisors(op.dense(rows, cols))
        values.extend(v for v in divisors if v is not None)
        coercions += count
    return sorted(values), coercions


class FlatModule(object):
    """Bijection between a truncated module and coordinates over O/p^N.

    Parameters:
        labels: Basis descriptors, one per coordinate.
        element: Build the module element of a basis label.
        coordinates: Split an element into `({label: CycElt}, overflow)`.
        boundary: Labels adjacent to the truncation cutoff.
    """

    def __init__(self, ctx, labels, element=None, coordinates=None, boundary=()):
        # type: (PrecisionContext, Sequence[Hashable], Optional[Callable], Optional[Callable], Iterable[Hashable]) -> None
        self.ctx = ctx
        self.labels = list(labels)
        self.index = {label: i for i, label in enumerate(self.labels)}
        if len(self.index) != len(self.labels):
            raise ValueError('duplicate module labels')
        self.element = element
        self.coordinates = coordinates
        self.boundary = set(label for label in boundary if label in self.index)

    @classmethod
    def free(cls, ctx, rank):
        # type: (PrecisionContext, int) -> FlatModule
        """Plain coordinate module O^rank, with no boundary."""
        return cls(ctx, range(rank))

    def __repr__(self):
        # type: () -> str
        return 'FlatModule(rank={}, boundary={})'.format(self.rank, len(self.boundary))

    @property
    def rank(self):
        # type: () -> int
        return len(self.labels)

    def stable_indices(self):
        # type: () -> List[int]
        return [i for i, label in enumerate(self.labels) if label not in self.boundary]

    def flatten(self, value):
        # type: (Any) -> List[CycElt]
        """Get the coordinate vector of a module element.

        Raises:
            ValueError: If the element has a coordinate outside the module.
        """
        coords, _ = self.coordinates(value)
        result = [self.ctx.zero] * self.rank
        for label, entry in coords.items():
            if label not in self.index:
                if entry.is_zero():
                    continue
                raise ValueError('coordinate {!r} is outside the module'.format(label))
            result[self.index[label]] = entry
        return result

    def operator(self, func):
        # type: (Callable[[Any], Any]) -> SparseOperator
        """Matrix of a structured endomorphism, applied to unit vectors.

        Sources whose image overflows the truncation become boundary.
        """
        columns = {}
        for j, label in enumerate(self.labels):
            coords, overflow = self.coordinates(func(self.element(label)))
            column = {}
            for target, value in coords.items():
                if value.is_zero():
                    continue
                if target not in self.index:
                    overflow = True
                    continue
                column[self.index[target]] = value
            if overflow:
                self.boundary.add(label)
            columns[j] = column
        return SparseOperator(self.ctx, (self.rank, self.rank), columns)


def _subsets(d, q):
    # type: (int, int) -> List[Tuple[int, ...]]
    return list(itertools.combinations(range(d), q))


class KoszulComplex(object):
    """Koszul complex M -> M^d -> ... -> wedge^d M^d of commuting operators.

    Degree q has basis e_I * m for |I| = q, and
    d(e_I * m) = sum_{i not in I} (-1)^#{k in I, k < i} e_(I+i) * T_i m.

    Raises:
        NotKoszulError: If two operators do not commute.
    """

    def __init__(self, module, operators):
        # type: (FlatModule, Sequence[SparseOperator]) -> None
        self.module = module
        self.operators = list(operators)
        self.d = len(self.operators)
        for i, j in itertools.combinations(range(self.d), 2):
            left = self.operators[i].compose(self.operators[j])
            right = self.operators[j].compose(self.operators[i])
            if left != right:
                raise exception.NotKoszulError(i, j)
        self.terms = [_subsets(self.d, q) for q in range(self.d + 1)]
        self.differentials = [self._differential(q) for q in range(self.d)]
        for q in range(self.d - 1):
            if not self.differentials[q + 1].compose(self.differentials[q]).is_zero():
                raise RuntimeError('Koszul differential does not square to zero in degree {}'.format(q))

    def __repr__(self):
        # type: () -> str
        return 'KoszulComplex(d={}, {!r})'.format(self.d, self.module)

    def dimension(self, q):
        # type: (int) -> int
        return len(self.terms[q]) * self.module.rank

    def stable_indices(self, q):
        # type: (int) -> List[int]
        """Coordinates of degree q whose module label is stable."""
        stable = self.module.stable_indices()
        rank = self.module.rank
        return [n * rank + i for n in range(len(self.terms[q])) for i in stable]

    def _differential(self, q):
        # type: (int) -> SparseOperator
        rank = self.module.rank
        target = {subset: n for n, subset in enumerate(self.terms[q + 1])}
        columns = {}  # type: Dict[int, Dict[int, CycElt]]
        for n, subset in enumerate(self.terms[q]):
            for i in range(self.d):
                if i in subset:
                    continue
                sign = -1 if sum(1 for k in subset if k < i) % 2 else 1
                offset = target[tuple(sorted(subset + (i,)))] * rank
                for j, column in self.operators[i].columns.items():
                    entries = columns.setdefault(n * rank + j, {})
                    for row, value in column.items():
                        value = value if sign > 0 else -value
                        row = offset + row
                        entries[row] = entries[row] + value if row in entries else value
        return SparseOperator(self.module.ctx, (self.dimension(q + 1), self.dimension(q)), columns)


class DegreeReport(object):
    """Cohomology in one degree.

    Attributes:
        free_rank: Rank of the free part over O.
        stable_free_rank: Free rank measured on stable coordinates.
        torsion: Sorted (valuation, stable) pairs, one per cyclic summand O/pi^k
            reported as k/e.
        coercions: Precision coercions seen while computing the divisors.
        twist: Tate twist label carried for bookkeeping.
    """

    def __init__(self, q, free_rank, torsion, stable_free_rank=None, coercions=0, twist=0):
        # type: (int, int, Iterable[Tuple[Fraction, bool]], Optional[int], int, int) -> None
        self.q = q
        self.free_rank = free_rank
        self.stable_free_rank = free_rank if stable_free_rank is None else stable_free_rank
        self.torsion = sorted(torsion)
        self.coercions = coercions
        self.twist = twist

    def __repr__(self):
        # type: () -> str
        return 'DegreeReport(q={}, free_rank={}, torsion={})'.format(
            self.q, self.free_rank, [str(v) for v, _ in self.torsion])

    def __eq__(self, other):
        # type: (Any) -> bool
        if not isinstance(other, DegreeReport):
            return NotImplemented
        return (self.q, self.free_rank, self.stable_free_rank, self.torsion) == \
            (other.q, other.free_rank, other.stable_free_rank, other.torsion)

    def __ne__(self, other):
        # type: (Any) -> bool
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    __hash__ = None  # type: ignore

    def torsion_values(self, stable_only=False):
        # type: (bool) -> List[Fraction]
        return [v for v, stable in self.torsion if stable or not stable_only]

    def to_json(self):
        # type: () -> Dict[str, Any]
        return {
            'free_rank': self.free_rank,
            'stable_free_rank': self.stable_free_rank,
            'torsion': [fraction_to_json(v) for v, _ in self.torsion],
            'stable': [stable for _, stable in self.torsion],
            'coercions': self.coercions,
            'twist': self.twist,
        }

    @classmethod
    def from_json(cls, q, data):
        # type: (int, Dict[str, Any]) -> DegreeReport
        torsion = [(fraction_from_json(v), s) for v, s in zip(data['torsion'], data['stable'])]
        return cls(q, data['free_rank'], torsion, data['stable_free_rank'],
                   data['coercions'], data.get('twist', 0))


class CohomologyReport(object):
    """Per-degree cohomology of a complex over O/p^N."""

    def __init__(self, degrees):
        # type: (Sequence[DegreeReport]) -> None
        self.degrees = list(degrees)

    def __getitem__(self, q):
        # type: (int) -> DegreeReport
        return self.degrees[q]

    def __len__(self):
        # type: () -> int
        return len(self.degrees)

    def __iter__(self):
        return iter(self.degrees)

    def __repr__(self):
        # type: () -> str
        return 'CohomologyReport({!r})'.format(self.degrees)

    def __eq__(self, other):
        # type: (Any) -> bool
        if not isinstance(other, CohomologyReport):
            return NotImplemented
        return self.degrees == other.degrees

    def __ne__(self, other):
        # type: (Any) -> bool
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    __hash__ = None  # type: ignore

    def free_ranks(self, stable=False):
        # type: (bool) -> List[int]
        return [r.stable_free_rank if stable else r.free_rank for r in self.degrees]

    @property
    def coercions(self):
        # type: () -> int
        return sum(r.coercions for r in self.degrees)

    def to_json(self):
        # type: () -> Dict[str, Any]
        return {str(r.q): r.to_json() for r in self.degrees}

    @classmethod
    def from_json(cls, data):
        # type: (Dict[str, Any]) -> CohomologyReport
        return cls([DegreeReport.from_json(int(q), data[q]) for q in sorted(data, key=int)])


def _flag_stable(torsion, stable_torsion):
    # type: (List[Fraction], List[Fraction]) -> List[Tuple[Fraction, bool]]
    """Pair each torsion divisor with whether it is matched on stable coordinates."""
    available = Counter(stable_torsion)
    result = []
    for value in torsion:
        if available[value]:
            available[value] -= 1
            result.append((value, True))
        else:
            result.append((value, False))
    return result


_HOMOLOGY_CACHE = {}  # type: Dict[Tuple[Any, ...], Tuple[int, Tuple[Fraction, ...], int]]


def _summands(divisors, size):
    # type: (Sequence[Optional[Fraction]], int) -> Tuple[int, List[Fraction]]
    """Split the cokernel of a diagonal with `size` rows into free and torsion parts."""
    values = [v for v in divisors if v is not None]
    return size - len(values), [v for v in values if v > 0]


def _component_homology(outgoing, incoming, size):
    # type: (Optional[np.ndarray], Optional[np.ndarray], int) -> Tuple[int, List[Fraction], int]
    """Exact homology of C' -> O^size -> C'' on one connected component.

    The kernel of `outgoing` is a sum of O/pi^k on Smith generators
    pi^(Ne-k) V_j plus free generators V_j. The incoming image is
    written in those generators and the quotient is read off a second
    Smith form of the presentation [diag(pi^k) | image].
    """
    if outgoing is None and incoming is None:
        return size, [], 0
    if incoming is None:
        divisors, count = _block_divisors(outgoing)
        return _summands(divisors, size) + (count,)
    if outgoing is None:
        divisors, count = _block_divisors(incoming)
        return _summands(divisors, size) + (count,)

    key = (_block_key(outgoing), _block_key(incoming))
    if key in _HOMOLOGY_CACHE:
        free, torsion, count = _HOMOLOGY_CACHE[key]
        return free, list(torsion), count

    ctx = outgoing.flat[0].ctx
    length = ctx.N * ctx.e
    smith = smith_normal_form(outgoing, ctx, left=False, right=False, inverse=True)
    image = smith.V_inverse.dot(incoming)
    torsion_rows = []  # type: List[Tuple[int, int]]
    free_rows = []  # type: List[int]
    for j in range(size):
        valuation = smith.divisors[j] if j < len(smith.divisors) else None
        if valuation is None:
            free_rows.append(j)
        elif valuation > 0:
            torsion_rows.append((j, int(valuation * ctx.e)))

    rows = len(torsion_rows) + len(free_rows)
    if not rows:
        result = (0, [], smith.coercions)  # type: Tuple[int, List[Fraction], int]
    else:
        relations = len(torsion_rows)
        presentation = mx.zeros(ctx.zero, rows, relations + image.shape[1])
        for n, (j, k) in enumerate(torsion_rows):
            presentation[n, n] = ctx.pi ** k
            for col in range(image.shape[1]):
                presentation[n, relations + col] = image[j, col].div_pi(length - k)
        for n, j in enumerate(free_rows, relations):
            for col in range(image.shape[1]):
                presentation[n, relations + col] = image[j, col]
        divisors, count = _block_divisors(presentation)
        result = _summands(divisors, rows) + (smith.coercions + count,)

    if len(_HOMOLOGY_CACHE) > MAX_CACHED_BLOCKS:
        _HOMOLOGY_CACHE.clear()
    _HOMOLOGY_CACHE[key] = (result[0], tuple(result[1]), result[2])
    return result


def _components(coordinates, outgoing, incoming):
    # type: (Iterable[int], Optional[SparseOperator], Optional[SparseOperator]) -> List[Tuple[List[int], List[int], List[int]]]
    """Group coordinates linked by either differential.

    Returns:
        (coordinates, outgoing rows, incoming columns) per group.
    """
    parent = {c: c for c in coordinates}

    def find(node):
        while parent[node] != node:
            parent[node] = parent[parent[node]]
            node = parent[node]
        return node

    def union(nodes):
        root = find(nodes[0])
        for node in nodes[1:]:
            other = find(node)
            if other != root:
                parent[other] = root

    out_blocks = outgoing.blocks() if outgoing is not None else []
    in_blocks = incoming.blocks() if incoming is not None else []
    for _, cols in out_blocks:
        union(cols)
    for rows, _ in in_blocks:
        union(rows)

    groups = {}  # type: Dict[int, Tuple[List[int], List[int], List[int]]]
    for node in parent:
        groups.setdefault(find(node), ([], [], []))[0].append(node)
    for rows, cols in out_blocks:
        groups[find(cols[0])][1].extend(rows)
    for rows, cols in in_blocks:
        groups[find(rows[0])][2].extend(cols)
    return [(sorted(a), sorted(b), sorted(c)) for a, b, c in groups.values()]


def homology(coordinates, outgoing=None, incoming=None):
    # type: (Iterable[int], Optional[SparseOperator], Optional[SparseOperator]) -> Tuple[int, List[Fraction], int]
    """Exact homology of `incoming` followed by `outgoing` at the given coordinates.

    Both operators must vanish outside the coordinates on the shared
    side and compose to zero.

    Returns:
        Free rank, sorted torsion valuations and the precision coercions.
        A summand O/pi^k is reported as valuation k/e.
    """
    free = 0
    torsion = []  # type: List[Fraction]
    coercions = 0
    for coords, out_rows, in_cols in _components(coordinates, outgoing, incoming):
        block_out = outgoing.dense(out_rows, coords) if out_rows else None
        block_in = incoming.dense(coords, in_cols) if in_cols else None
        part_free, part_torsion, count = _component_homology(block_out, block_in, len(coords))
        free += part_free
        torsion.extend(part_torsion)
        coercions += count
    return free, sorted(torsion), coercions


def koszul_cohomology(complex_, twists=None):
    # type: (KoszulComplex, Optional[Sequence[int]]) -> CohomologyReport
    """Exact cohomology ker d_q / im d_(q-1) of a Koszul complex.

    The stable part is the homology of the subcomplex on stable
    coordinates of degree q, fed by the columns of d_(q-1) that land
    there. Torsion summands seen there are flagged stable.
    """
    d = complex_.d
    degrees = []
    for q in range(d + 1):
        dimension = complex_.dimension(q)
        outgoing = complex_.differentials[q] if q < d else None
        incoming = complex_.differentials[q - 1] if q else None
        free, torsion, count = homology(range(dimension), outgoing, incoming)

        stable = complex_.stable_indices(q)
        if len(stable) == dimension:
            stable_free, stable_torsion = free, torsion
        else:
            stable_set = set(stable)
            stable_out = outgoing.restrict(cols=stable_set) if outgoing is not None else None
            stable_in = None
            if incoming is not None:
                landing = [j for j, column in incoming.columns.items() if stable_set.issuperset(column)]
                stable_in = incoming.restrict(cols=landing)
            stable_free, stable_torsion, _ = homology(stable, stable_out, stable_in)

        twist = twists[q] if twists is not None else 0
        degrees.append(DegreeReport(q, free, _flag_stable(torsion, stable_torsion), stable_free, count, twist))
        logger.debug('H^%d: free rank %d (stable %d), %d torsion summands',
                     q, free, stable_free, len(torsion))
    return CohomologyReport(degrees)


def _lifted_torsion(report):
    # type: (CohomologyReport) -> List[List[Fraction]]
    """Torsion of the complex over O whose reduction mod p^N has this cohomology.

    Reducing mod p^N copies each summand O/pi^k of H^(q+1) into H^q,
    so peel the copies off from the top degree down.
    """
    lifted = [[] for _ in range(len(report))]  # type: List[List[Fraction]]
    for q in reversed(range(len(report))):
        remaining = Counter(report[q].torsion_values())
        if q + 1 < len(report):
            remaining.subtract(lifted[q + 1])
        lifted[q] = sorted(remaining.elements())
    return lifted


def kunneth(first, second):
    # type: (CohomologyReport, CohomologyReport) -> CohomologyReport
    """Predict the cohomology of a tensor product of complexes.

    Over the DVR, H^n gets the tensor terms of H^i and H^j for i + j = n,
    where O/a * O/b = O/min(a, b), plus Tor(H^i, H^j) for i + j = n + 1.
    Both reports are lifted to the DVR first and the prediction is
    reduced back mod p^N.
    """
    first_torsion = _lifted_torsion(first)
    second_torsion = _lifted_torsion(second)
    top = len(first) + len(second) - 1
    free_ranks = []
    lifted = []  # type: List[List[Fraction]]
    for n in range(top):
        free = 0
        torsion = []  # type: List[Fraction]
        for i in range(len(first)):
            j = n - i
            if 0 <= j < len(second):
                a, b = first_torsion[i], second_torsion[j]
                free += first[i].free_rank * second[j].free_rank
                torsion.extend(v for v in a for _ in range(second[j].free_rank))
                torsion.extend(v for v in b for _ in range(first[i].free_rank))
                torsion.extend(min(x, y) for x in a for y in b)
            j = n + 1 - i
            if 0 <= j < len(second):
                torsion.extend(min(x, y) for x in first_torsion[i] for y in second_torsion[j])
        free_ranks.append(free)
        lifted.append(torsion)

    degrees = []
    for n in range(top):
        torsion = lifted[n] + (lifted[n + 1] if n + 1 < top else [])
        degrees.append(DegreeReport(n, free_ranks[n], [(v, True) for v in torsion]))
    return CohomologyReport(degrees)
