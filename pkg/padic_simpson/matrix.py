"""Matrices of ring elements as numpy object arrays.

All ring element classes share the protocol used here: arithmetic
operators, `is_zero()`, `valuation()`, `zero_like()`, `one_like()`,
`lift(ctx)`, `reduce(ctx)`, `div_int(n)` and `exact_div(x)`.
"""

__all__ = ['matrix', 'zeros', 'identity', 'identity_like', 'map_entries', 'valuation',
           'is_equal', 'is_zero', 'defect', 'inverse', 'power', 'commute', 'overflowed',
           'kron', 'row_times']

import numpy as np

from .type_hints import TYPE_CHECKING
from .utils import min_valuation

if TYPE_CHECKING:
    from fractions import Fraction
    from typing import Any, Callable, Iterable, Optional


def matrix(rows, convert=None):
    # type: (Iterable[Iterable[Any]], Optional[Callable[[Any], Any]]) -> np.ndarray
    """Build a 2D object array, optionally converting every entry."""
    rows = [list(row) for row in rows]
    result = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=object)
    for i, row in enumerate(rows):
        for j, value in enumerate(row):
            result[i, j] = convert(value) if convert is not None else value
    return result


def zeros(zero, rows, cols=None):
    # type: (Any, int, Optional[int]) -> np.ndarray
    result = np.empty((rows, rows if cols is None else cols), dtype=object)
    result.fill(zero)
    return result


def identity(zero, one, size):
    # type: (Any, Any, int) -> np.ndarray
    result = zeros(zero, size)
    for i in range(size):
        result[i, i] = one
    return result


def identity_like(mat):
    # type: (np.ndarray) -> np.ndarray
    """Identity matrix over the ring of a square matrix."""
    sample = mat.flat[0]
    return identity(sample.zero_like(), sample.one_like(), mat.shape[0])


def map_entries(func, mat):
    # type: (Callable[[Any], Any], np.ndarray) -> np.ndarray
    result = np.empty(mat.shape, dtype=object)
    for index, value in np.ndenumerate(mat):
        result[index] = func(value)
    return result


def valuation(mat):
    # type: (np.ndarray) -> Optional[Fraction]
    """Minimum entry valuation, None if every entry vanishes."""
    return min_valuation(value.valuation() for value in mat.flat)


def is_zero(mat):
    # type: (np.ndarray) -> bool
    return all(value.is_zero() for value in mat.flat)


def is_equal(left, right):
    # type: (np.ndarray, np.ndarray) -> bool
    if left.shape != right.shape:
        return False
    return all(x == y for x, y in zip(left.flat, right.flat))


def defect(left, right):
    # type: (np.ndarray, np.ndarray) -> Optional[Fraction]
    """Valuation of the difference; None means exactly equal."""
    return valuation(left - right)


def overflowed(mat):
    # type: (np.ndarray) -> bool
    """Check if any Laurent entry dropped terms outside the box."""
    return any(getattr(value, 'overflow', False) for value in mat.flat)


def power(mat, exponent):
    # type: (np.ndarray, int) -> np.ndarray
    result = identity_like(mat)
    for _ in range(exponent):
        result = result.dot(mat)
    return result


def commute(left, right):
    # type: (np.ndarray, np.ndarray) -> bool
    return is_equal(left.dot(right), right.dot(left))


def inverse(mat):
    # type: (np.ndarray) -> np.ndarray
    """Inverse of a matrix congruent to the identity modulo pi.

    Sums the Neumann series of I - mat, which terminates once the powers
    vanish at the working precision.
    """
    ident = identity_like(mat)
    step = ident - mat
    if step.size and valuation(step) is not None and valuation(step) <= 0:
        raise ValueError('matrix is not congruent to the identity')
    result = ident
    term = ident
    while True:
        term = term.dot(step)
        if is_zero(term):
            return result
        result = result + term


def kron(left, right):
    # type: (np.ndarray, np.ndarray) -> np.ndarray
    """Kronecker product, entry (i*r + k, j*s + m) = left[i, j] * right[k, m]."""
    rows, cols = right.shape
    result = np.empty((left.shape[0] * rows, left.shape[1] * cols), dtype=object)
    for (i, j), a in np.ndenumerate(left):
        for (k, m), b in np.ndenumerate(right):
            result[i * rows + k, j * cols + m] = a * b
    return result


def row_times(vector, mat):
    # type: (Iterable[Any], np.ndarray) -> list
    """Row vector times matrix for entries that only know + and *."""
    vector = list(vector)
    result = []
    for j in range(mat.shape[1]):
        total = None
        for i, value in enumerate(vector):
            term = value * mat[i, j]
            total = term if total is None else total + term
        result.append(total)
    return result
