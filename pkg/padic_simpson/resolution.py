# pylint: disable=consider-using-f-string
"""Cohomology of the period lattices with trivial coefficients.

On R<rho Y> the operator d/dY sends (rho Y)^(i+1) to (i+1) rho (rho Y)^i.
Normalised by rho_k, the cokernel in degree i is killed by an element of
valuation v_p(i+1) + v(rho) - 1/(p-1). Shrinking rho towards rho_k
shrinks this torsion, and the map between two lattices kills it after a
bounded power of p.
"""

__all__ = ['trivial_higgs_report', 'trivial_rep_report', 'expected_torsion', 'torsion_bound',
           'transition_exponent', 'truncated_transition_exponent', 'resolution_report']

import logging
import math
from fractions import Fraction

from . import representation as rep_mod
from .homological import FlatModule, KoszulComplex, koszul_cohomology
from .period import PeriodElt, RhoValue, multidegrees, rho_sample
from .type_hints import TYPE_CHECKING
from .utils import fraction_to_json, vp, vp_factorial

if TYPE_CHECKING:
    from typing import Any, Dict, List, Optional, Sequence
    from .cyclotomic import PrecisionContext
    from .homological import CohomologyReport


logger = logging.getLogger(__name__)


def _lattice_module(ctx, rho):
    # type: (PrecisionContext, RhoValue) -> FlatModule
    """R<rho Y> with constant coefficients, in monomial lattice coordinates."""
    degrees = multidegrees(ctx.d, ctx.G)
    origin = (0,) * ctx.d

    def element(m):
        return PeriodElt(ctx, rho, {m: ctx.one})

    def coordinates(x):
        x = x.to_basis('monomial')
        return {m: c.terms.get(origin, ctx.zero) for m, c in x.coeffs.items()}, x.overflow

    return FlatModule(ctx, degrees, element, coordinates, [m for m in degrees if sum(m) == ctx.G])


def trivial_higgs_report(ctx, rho):
    # type: (PrecisionContext, RhoValue) -> CohomologyReport
    """Koszul cohomology of (rho / rho_k) d/dY_i on the truncated lattice."""
    module = _lattice_module(ctx, rho)
    operators = []
    for i in range(ctx.d):
        def derivative(x, i=i):
            return x.derivative(i).map_coefficients(lambda c: c.exact_div(ctx.rho_k))
        operators.append(module.operator(derivative))
    report = koszul_cohomology(KoszulComplex(module, operators), twists=[-q for q in range(ctx.d + 1)])
    logger.info('Trivial Higgs complex at %r: free ranks %s', rho, report.free_ranks(stable=True))
    return report


def trivial_rep_report(ctx, rho=None):
    # type: (PrecisionContext, Optional[RhoValue]) -> Dict[str, Any]
    """Group cohomology of the trivial rank-1 representation with period coefficients.

    H0 is free on the chart monomials and, for d = 1, the stable H1
    divisors are v((i+1) rho) for i < G, once per chart monomial.
    """
    rho = rho or RhoValue.rho_k(ctx)
    rep = rep_mod.trivial_rep(ctx)
    report = rep_mod.group_cohomology(rep, rho, period=True)
    chart_rank = rep_mod.flat_module(ctx, 1, 'chart').rank
    h0_ok = report[0].stable_free_rank == chart_rank
    stable = sorted(report[1].torsion_values(stable_only=True))
    expected = None  # type: Optional[List[Fraction]]
    if ctx.d == 1:
        expected = sorted(vp(ctx.p, i + 1) + rho.valuation for i in range(ctx.G) for _ in range(chart_rank))
    h1_ok = expected is None or stable == expected
    return {
        'rho': rho.descriptor,
        'h0_free_rank': report[0].stable_free_rank,
        'chart_rank': chart_rank,
        'h1_torsion': [fraction_to_json(v) for v in stable],
        'expected_h1_torsion': None if expected is None else [fraction_to_json(v) for v in expected],
        'passed': h0_ok and h1_ok,
    }


def expected_torsion(ctx, rho):
    # type: (PrecisionContext, RhoValue) -> List[Fraction]
    """Stable H1 torsion of the trivial Higgs complex for d = 1."""
    values = [vp(ctx.p, i + 1) + rho.valuation - ctx.r for i in range(ctx.G)]
    return sorted(v for v in values if v > 0)


def torsion_bound(ctx, rho):
    # type: (PrecisionContext, RhoValue) -> Fraction
    return rho.valuation - ctx.r + vp_factorial(ctx.p, ctx.G)


def _transition(p, delta, indices):
    # type: (int, Fraction, Any) -> Fraction
    best = Fraction(0)
    for i in indices:
        best = max(best, vp(p, i + 1) - i * delta)
    return best


def transition_exponent(rho_from, rho_to):
    # type: (RhoValue, RhoValue) -> Fraction
    """Least N >= 0 with N + i (v(rho_from) - v(rho_to)) >= v_p(i + 1) for all i.

    Raises:
        ValueError: If rho_from does not have the larger valuation.
    """
    delta = rho_from.valuation - rho_to.valuation
    if delta <= 0:
        raise ValueError('transition needs v(rho_from) > v(rho_to), got difference {}'.format(delta))
    p = rho_from.elt.ctx.p
    best = Fraction(0)
    i = 0
    # log_p(i+1) - i*delta bounds the terms and decreases once i+1 > 1/(delta ln p)
    while True:
        best = max(best, vp(p, i + 1) - i * delta)
        if i + 1 > 1 / (float(delta) * math.log(p)) and math.log(i + 1, p) - i * delta <= best:
            return best
        i += 1


def truncated_transition_exponent(ctx, rho_from, rho_to):
    # type: (PrecisionContext, RhoValue, RhoValue) -> Fraction
    """The same exponent seen on the truncated lattices, degrees below G."""
    delta = rho_from.valuation - rho_to.valuation
    if delta <= 0:
        raise ValueError('transition needs v(rho_from) > v(rho_to), got difference {}'.format(delta))
    return _transition(ctx.p, delta, range(ctx.G))


def resolution_report(ctx, sample=None):
    # type: (PrecisionContext, Optional[Sequence[RhoValue]]) -> Dict[str, Any]
    """Check torsion bounds, the shrinking trend and transition exponents over a rho sample."""
    sample = sorted(sample or rho_sample(ctx), key=lambda rho: rho.valuation)
    entries = []
    passed = True
    largest = []  # type: List[Fraction]
    for rho in sample:
        report = trivial_higgs_report(ctx, rho)
        torsion = sorted(v for q in range(1, ctx.d + 1) for v in report[q].torsion_values(stable_only=True))
        bound = torsion_bound(ctx, rho)
        bound_ok = all(v <= bound for v in torsion)
        expected = expected_torsion(ctx, rho) if ctx.d == 1 else None
        expected_ok = expected is None or sorted(report[1].torsion_values(stable_only=True)) == expected
        h0_ok = report[0].stable_free_rank == 1
        passed = passed and bound_ok and expected_ok and h0_ok
        largest.append(max(torsion) if torsion else Fraction(0))
        entries.append({
            'rho': rho.descriptor,
            'valuation': fraction_to_json(rho.valuation),
            'torsion': [fraction_to_json(v) for v in torsion],
            'bound': fraction_to_json(bound),
            'bound_ok': bound_ok,
            'expected': None if expected is None else [fraction_to_json(v) for v in expected],
            'expected_ok': expected_ok,
            'h0_ok': h0_ok,
        })

    trend_ok = all(x <= y for x, y in zip(largest, largest[1:]))
    transitions = []
    for rho_to, rho_from in zip(sample, sample[1:]):
        if rho_from.valuation == rho_to.valuation:
            continue
        full = transition_exponent(rho_from, rho_to)
        truncated = truncated_transition_exponent(ctx, rho_from, rho_to)
        transitions.append({
            'from': rho_from.descriptor,
            'to': rho_to.descriptor,
            'exponent': fraction_to_json(full),
            'truncated_exponent': fraction_to_json(truncated),
            'ok': truncated <= full,
        })
    passed = passed and trend_ok and all(t['ok'] for t in transitions)
    return {'entries': entries, 'trend_ok': trend_ok, 'transitions': transitions, 'passed': passed}
