# pylint: disable=super-with-arguments
"""Custom exceptions.

Every error carries the witness that triggered it as attributes, so
callers (and experiment reports) can record it without parsing the
message.
"""

from .type_hints import TYPE_CHECKING

if TYPE_CHECKING:
    from fractions import Fraction
    from typing import Any, List, Optional, Tuple


class Error(Exception):
    """Base class for all padic_simpson exceptions."""


class ConfigError(Error):
    """Raise an error if truncation or experiment parameters are invalid."""


class SmallnessHypothesisError(ConfigError):
    """Raise an error if the smallness exponent is not above 1/(p-1)."""

    def __init__(self, a, r):
        # type: (Fraction, Fraction) -> None
        self.a = a
        self.r = r
        super(SmallnessHypothesisError, self).__init__(
            'smallness hypothesis violated: a={} is not greater than {}'.format(a, r)
        )


class UnboundContextError(Error):
    """Raise an error if attempting to execute an experiment with no context."""

    def __init__(self):
        # type: () -> None
        super(UnboundContextError, self).__init__('experiment has no context bound to it')


class PrecisionError(Error):
    """Base class for errors caused by the finite p-adic precision."""


class NonUnitError(PrecisionError):
    """Raise an error when inverting an element of positive valuation."""

    def __init__(self, valuation):
        # type: (Optional[Fraction]) -> None
        self.valuation = valuation
        super(NonUnitError, self).__init__(
            'non-unit: element has valuation {}'.format('>= N' if valuation is None else valuation)
        )


class NotDivisibleError(PrecisionError):
    """Raise an error if an exact division is not possible."""

    def __init__(self, valuation, required):
        # type: (Optional[Fraction], Optional[Fraction]) -> None
        self.valuation = valuation
        self.required = required
        super(NotDivisibleError, self).__init__(
            'not divisible: valuation {} is below the required {}'.format(valuation, required)
        )


class PrecisionExhaustedError(PrecisionError):
    """Raise an error if a series needs more terms than allowed."""

    def __init__(self, kind, cutoff, limit):
        # type: (str, int, int) -> None
        self.kind = kind
        self.cutoff = cutoff
        self.limit = limit
        super(PrecisionExhaustedError, self).__init__(
            'precision exhausted: {} series needs {} terms (limit {})'.format(kind, cutoff, limit)
        )


class InsufficientLevelError(Error):
    """Raise an error if a root of unity is not available at the tower level."""

    def __init__(self, denominator, level):
        # type: (int, int) -> None
        self.denominator = denominator
        self.level = level
        super(InsufficientLevelError, self).__init__(
            'insufficient tower level: denominator {} needs more than level {}'.format(denominator, level)
        )


class EpsilonUndefinedError(Error):
    """Raise an error if epsilon is requested at an integral exponent."""

    def __init__(self):
        # type: () -> None
        super(EpsilonUndefinedError, self).__init__('epsilon undefined at zero')


class NotInComplementError(Error):
    """Raise an error if a monomial is fixed by the generator being inverted."""

    def __init__(self, index, exponent):
        # type: (int, Tuple[Fraction, ...]) -> None
        self.index = index
        self.exponent = exponent
        super(NotInComplementError, self).__init__(
            'not in complement: monomial {} is fixed by generator {}'.format(
                ','.join(map(str, exponent)), index,
            )
        )


class DivergentExponentError(Error):
    """Raise an error if an exponential type series does not converge."""

    def __init__(self, valuation, bound):
        # type: (Optional[Fraction], Fraction) -> None
        self.valuation = valuation
        self.bound = bound
        super(DivergentExponentError, self).__init__(
            'divergent exponent: valuation {} must exceed {}'.format(valuation, bound)
        )


class NotNilpotentError(Error):
    """Raise an error if the log series of a generator does not terminate."""

    def __init__(self, exponent):
        # type: (Tuple[Fraction, ...]) -> None
        self.exponent = exponent
        super(NotNilpotentError, self).__init__(
            'log series not nilpotent here: coefficient monomial {}'.format(
                ','.join(map(str, exponent)),
            )
        )


class NotKoszulError(Error):
    """Raise an error if the operators of a Koszul complex do not commute."""

    def __init__(self, i, j):
        # type: (int, int) -> None
        self.i = i
        self.j = j
        super(NotKoszulError, self).__init__(
            'not a Koszul datum: operators {} and {} do not commute'.format(i, j)
        )


class CocycleViolationError(Error):
    """Raise an error if representation matrices break the cocycle condition."""

    def __init__(self, i, j):
        # type: (int, int) -> None
        self.i = i
        self.j = j
        super(CocycleViolationError, self).__init__(
            'cocycle violation between generators {} and {}'.format(i, j)
        )


class NotSmallError(Error):
    """Raise an error if a matrix is not close enough to its target."""

    def __init__(self, index, valuation, required):
        # type: (int, Optional[Fraction], Fraction) -> None
        self.index = index
        self.valuation = valuation
        self.required = required
        super(NotSmallError, self).__init__(
            'not a-small: matrix {} has valuation {} (need {})'.format(index, valuation, required)
        )


class NotFlatError(Error):
    """Raise an error if Higgs field components do not commute."""

    def __init__(self, i, j):
        # type: (int, int) -> None
        self.i = i
        self.j = j
        super(NotFlatError, self).__init__(
            'not flat: theta {} and theta {} do not commute'.format(i, j)
        )


class RhoTooLargeError(Error):
    """Raise an error if the period lattice is too coarse for the representation."""

    def __init__(self, valuation, bound):
        # type: (Fraction, Fraction) -> None
        self.valuation = valuation
        self.bound = bound
        super(RhoTooLargeError, self).__init__(
            'rho too large for smallness: valuation {} must be below {}'.format(valuation, bound)
        )


class HypothesisCheckError(Error):
    """Raise an error if an input fails the hypotheses of the descent."""

    def __init__(self, name, observed, required):
        # type: (str, Optional[Fraction], Fraction) -> None
        self.name = name
        self.observed = observed
        self.required = required
        super(HypothesisCheckError, self).__init__(
            'hypothesis check failure: {} has valuation {} (need {})'.format(name, observed, required)
        )


class ContractionFailure(Error):
    """Raise an error if an iteration stops gaining valuation."""

    def __init__(self, trace):
        # type: (List[Any]) -> None
        self.trace = trace
        super(ContractionFailure, self).__init__(
            'contraction failure after {} steps'.format(len(trace))
        )
