# pylint: disable=consider-using-f-string, useless-object-inheritance
"""General purpose functions."""

import logging
import os
from fractions import Fraction
from functools import wraps

from sympy import multiplicity
from sympy.ntheory import digits

from .type_hints import TYPE_CHECKING

if TYPE_CHECKING:
    from typing import Any, Callable, Iterable, List, Optional


logger = logging.getLogger(__name__)


class NotSet(object):  # pylint: disable=too-few-public-methods
    """Create a sentinel object for when a value isn't given."""


NOT_SET = NotSet()


def clone_instance(func):
    # type: (Callable) -> Callable
    """To avoid modifying the current instance, create a new one.
    Requires the class to have a `copy` method.
    """
    @wraps(func)
    def wrapper(self, *args, **kwargs):
        # type: (Any, *Any, **Any) -> Any
        return func(self.copy(), *args, **kwargs)
    return wrapper


def env_int(name, default):
    # type: (str, int) -> int
    """Read a positive integer override from the environment.
    Invalid or empty values fall back to the default.
    """
    try:
        value = int(os.environ.get(name, 0)) or None
    except ValueError:
        logger.warning('Ignoring invalid value for %s: %r', name, os.environ[name])
        value = None
    if value is None or value < 0:
        return default
    return value


def vp(p, n):
    # type: (int, int) -> int
    """p-adic valuation of a nonzero integer."""
    if not n:
        raise ValueError('valuation of zero is undefined')
    return int(multiplicity(p, abs(n)))


def vp_factorial(p, n):
    # type: (int, int) -> int
    """Valuation of n! by Legendre's formula.

    Example:
        >>> vp_factorial(5, 25)
        6
    """
    if n < 2:
        return 0
    return (n - sum(digits(n, p)[1:])) // (p - 1)


def min_valuation(values):
    # type: (Iterable[Optional[Fraction]]) -> Optional[Fraction]
    """Minimum of valuations where None stands for "at least N"."""
    result = None
    for value in values:
        if value is not None and (result is None or value < result):
            result = value
    return result


def at_least(valuation, bound):
    # type: (Optional[Fraction], Fraction) -> bool
    """Check a valuation (None meaning zero at this precision) against a bound."""
    return valuation is None or valuation >= bound


def parse_fraction(value):
    # type: (Any) -> Fraction
    """Parse "num/den", an integer, or a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (list, tuple)):
        return Fraction(int(value[0]), int(value[1]))
    return Fraction(str(value).strip())


def fraction_to_json(value):
    # type: (Optional[Fraction]) -> Optional[List[int]]
    """Serialise a valuation as [num, den]."""
    if value is None:
        return None
    value = Fraction(value)
    return [value.numerator, value.denominator]


def fraction_from_json(value):
    # type: (Optional[List[int]]) -> Optional[Fraction]
    """Read a valuation written by `fraction_to_json`."""
    if value is None:
        return None
    return Fraction(value[0], value[1])


def exponent_to_str(exponent):
    # type: (Iterable[Fraction]) -> str
    """Format an exponent vector as "a1/b1,...,ad/bd".

    Example:
        >>> exponent_to_str((Fraction(1, 5), Fraction(-2)))
        '1/5,-2/1'
    """
    return ','.join('{}/{}'.format(e.numerator, e.denominator) for e in map(Fraction, exponent))


def exponent_from_str(value):
    # type: (str) -> tuple
    """Parse an exponent vector written by `exponent_to_str`."""
    return tuple(Fraction(part) for part in value.split(','))
