"""Exact finite-precision p-adic Simpson correspondence.
Supports small Gamma-representations over a toric tower and small Higgs
modules over its base chart, the functors between them, their
cohomology, and the descent of cocycles from the perfectoid ring.

Everything is computed modulo p^N in Z_p[zeta_{p^n}], with Laurent
exponents and period degrees truncated by a `PrecisionContext`.
"""

__all__ = ['exception', 'make_context', 'context_from_json', 'make_rep', 'trivial_rep', 'make_higgs',
           'zero_higgs', 'higgs_to_rep', 'rep_to_higgs', 'group_cohomology', 'higgs_cohomology',
           'cohomology_compare', 'decomplete_rep', 'experiment']

__version__ = '1.0.0'

from . import exception
from .cyclotomic import context_from_json, make_context
from .decompletion import decomplete_rep
from .experiment import Experiment
from .higgs import higgs_cohomology, make_higgs, zero_higgs
from .representation import group_cohomology, make_rep, trivial_rep
from .simpson import cohomology_compare, higgs_to_rep, rep_to_higgs


def experiment(suite):
    # type: (str) -> Experiment
    """Generate a verification experiment.

    Raises:
        ConfigError: If the suite is unknown.

    Example:
        >>> stmt = experiment('roundtrip').where(p=5, n=2, N=10, d=2).rank(2).trials(20).seed(42)
        >>> str(stmt)
        'roundtrip p=5 n=2 N=10 d=2 l=2 trials=20 seed=42'

        >>> stmt.execute().passed
        True
    """
    return Experiment(suite)
