# pylint: disable=consider-using-f-string, useless-object-inheritance
"""Descent of small cocycles from the perfectoid ring to the chart.

Every Laurent element splits into its integral-exponent part and its
complement. Gamma_i acts on a complement monomial T^beta by the root of
unity zeta^(beta_i), so (gamma_i - 1) is inverted on it by dividing by
zeta^(beta_i) - 1, whose valuation is at most 1/(p-1). The descent
conjugates a cocycle f by 1 + h, with h solving the linearised equation
for the complement part of f, until no complement part is left:

    f'(gamma) = gamma(1 + h) f(gamma) (1 + h)^-1

Example:
    >>> ctx = make_context(3, 1, 4, D=1, G=2, a=1)
    >>> rep = base_change(trivial_rep(ctx))
    >>> decomplete_rep(rep).trace
    []
"""

__all__ = ['DescentState', 'complement_split', 'complement_valuation', 'solve_pi_coboundary',
           'coboundary', 'descend_cocycle', 'conjugation_defect', 'decomplete_rep', 'verify_smallness_upgrade',
           'complement_cohomology_bound', 'coset_representatives', 'conjugate', 'random_conjugator',
           'max_iterations']

import itertools
import logging
import math
from fractions import Fraction

from . import exception
from . import matrix as mx
from . import representation as rep_mod
from .homological import SparseOperator, divisor_valuations
from .toric import PerfLaurentElt, as_base, split_integral
from .type_hints import TYPE_CHECKING
from .utils import at_least, env_int, fraction_from_json, fraction_to_json, min_valuation

if TYPE_CHECKING:
    from typing import Any, Dict, List, Optional, Sequence, Tuple
    import numpy as np
    from .cyclotomic import CycElt, PrecisionContext
    from .representation import SmallRep


logger = logging.getLogger(__name__)

DEFAULT_MAX_ITERATIONS = 64


def max_iterations():
    # type: () -> int
    """Iteration cap, overridable by SIMPSON_MAX_ITERATIONS."""
    return env_int('SIMPSON_MAX_ITERATIONS', DEFAULT_MAX_ITERATIONS)


class DescentState(object):
    """Conjugated cocycle, the accumulated conjugator, and the trace.

    Attributes:
        mats: Current matrices f_t(gamma_i) over the perfectoid ring.
        conjugator: h_t with f_t(gamma) = gamma(h_t) f_0(gamma) h_t^-1.
        trace: One `(step, complement_valuation, increment_valuation)`
            tuple per iteration; None stands for zero.
    """

    def __init__(self, ctx, mats, conjugator, a, trace=None):
        # type: (PrecisionContext, List[np.ndarray], np.ndarray, Fraction, Optional[List[Tuple[int, Optional[Fraction], Optional[Fraction]]]]) -> None
        self.ctx = ctx
        self.mats = mats
        self.conjugator = conjugator
        self.a = a
        self.trace = trace or []

    def __repr__(self):
        # type: () -> str
        return 'DescentState(steps={}, complement={})'.format(len(self.trace), self.complement_valuation())

    def complement_valuation(self):
        # type: () -> Optional[Fraction]
        return complement_valuation(self.mats)

    def is_descended(self):
        # type: () -> bool
        return all(all(split_integral(x)[1].is_zero() for x in mat.flat) for mat in self.mats)

    def rep(self):
        # type: () -> SmallRep
        """The descended cocycle as a validated chart representation.

        Raises:
            ValueError: If a complement part is left.
        """
        if not self.is_descended():
            raise ValueError('the cocycle still has a complement part')
        mats = [mx.map_entries(lambda x: as_base(self.ctx, x, 'chart'), mat) for mat in self.mats]
        return rep_mod.make_rep(self.ctx, 'chart', mats, self.a)

    def trace_to_json(self):
        # type: () -> List[Dict[str, Any]]
        return [{'step': step,
                 'complement_valuation': fraction_to_json(nu),
                 'increment_valuation': fraction_to_json(inc)}
                for step, nu, inc in self.trace]

    @staticmethod
    def trace_from_json(data):
        # type: (List[Dict[str, Any]]) -> List[Tuple[int, Optional[Fraction], Optional[Fraction]]]
        return [(item['step'], fraction_from_json(item['complement_valuation']),
                 fraction_from_json(item['increment_valuation'])) for item in data]


def complement_split(mat):
    # type: (np.ndarray) -> Tuple[np.ndarray, np.ndarray]
    """Split a matrix entrywise into integral and complement parts."""
    integral = mx.map_entries(lambda x: split_integral(x)[0], mat)
    complement = mx.map_entries(lambda x: split_integral(x)[1], mat)
    return integral, complement


def complement_valuation(mats):
    # type: (Sequence[np.ndarray]) -> Optional[Fraction]
    return min_valuation(mx.valuation(complement_split(mat)[1]) for mat in mats)


def _pivot(ctx, exponent):
    # type: (PrecisionContext, Tuple[int, ...]) -> Optional[int]
    """Generator whose eigenvalue on T^exponent has the least valuation."""
    best = None
    best_value = None
    for i, k in enumerate(exponent):
        j = k % ctx.level
        if not j:
            continue
        value = (ctx.zeta(j) - 1).valuation()
        if best_value is None or value < best_value:
            best, best_value = i, value
    return best


def _monomial_solve(ctx, cochain):
    # type: (PrecisionContext, Sequence[Sequence[PerfLaurentElt]]) -> List[PerfLaurentElt]
    """Solve (gamma_i - 1) g = cochain_i monomial by monomial.

    Each monomial is solved along its pivot generator only; the cocycle
    condition makes the other components agree up to higher order.

    Raises:
        NotInComplementError: If a monomial is fixed by every generator.
    """
    size = len(cochain[0])
    result = []
    for s in range(size):
        exponents = set()
        for component in cochain:
            exponents.update(component[s].terms)
        terms = {}  # type: Dict[Tuple[int, ...], CycElt]
        for exponent in exponents:
            i = _pivot(ctx, exponent)
            if i is None:
                raise exception.NotInComplementError(0, tuple(Fraction(k, ctx.level) for k in exponent))
            coeff = cochain[i][s].terms.get(exponent)
            if coeff is None:
                continue
            terms[exponent] = coeff.exact_div(ctx.zeta(exponent[i]) - 1)
        result.append(PerfLaurentElt(ctx, terms))
    return result


def coboundary(g, twist):
    # type: (Sequence[PerfLaurentElt], Sequence[np.ndarray]) -> List[List[PerfLaurentElt]]
    """Get (dg)_i = gamma_i(g) L_i - g for a 0-cochain g."""
    result = []
    for i, mat in enumerate(twist):
        image = mx.row_times([x.gamma_act(i) for x in g], mat)
        result.append([x - y for x, y in zip(image, g)])
    return result


def _cochain_valuation(cochain):
    # type: (Sequence[Sequence[PerfLaurentElt]]) -> Optional[Fraction]
    return min_valuation(x.valuation() for component in cochain for x in component)


def solve_pi_coboundary(f, twist=None, ctx=None):
    # type: (Sequence[Sequence[Any]], Optional[Sequence[np.ndarray]], Optional[PrecisionContext]) -> List[PerfLaurentElt]
    """Find a 0-cochain g with dg = rho_k f for a complement 1-cocycle f.

    Parameters:
        f: One row vector per generator, supported on non-integral
            monomials.
        twist: Matrices L_i of the coefficient representation; the
            identity if omitted.

    Raises:
        NotInComplementError: If f has an integral monomial.
        ContractionFailure: If the residual stops gaining valuation.
    """
    ctx = ctx or f[0][0].ctx
    f = [[as_base(ctx, x, 'perfectoid') for x in component] for component in f]
    size = len(f[0])
    if twist is None:
        twist = [mx.identity(PerfLaurentElt(ctx), PerfLaurentElt.constant(ctx, 1), size)] * ctx.d
    for component in f:
        for x in component:
            if not split_integral(x)[0].is_zero():
                integral = split_integral(x)[0].exponents()[0]
                raise exception.NotInComplementError(0, integral)

    target = [[x * ctx.rho_k for x in component] for component in f]
    g = [PerfLaurentElt(ctx) for _ in range(size)]
    residual = target
    trace = []  # type: List[Tuple[int, Optional[Fraction], Optional[Fraction]]]
    previous = None
    for step in range(max_iterations()):
        value = _cochain_valuation(residual)
        if value is None:
            logger.debug('Coboundary solved in %d steps', step)
            return g
        if previous is not None and value <= previous:
            raise exception.ContractionFailure(trace)
        increment = _monomial_solve(ctx, residual)
        trace.append((step, value, min_valuation(x.valuation() for x in increment)))
        g = [x + y for x, y in zip(g, increment)]
        dg = coboundary(g, twist)
        residual = [[x - y for x, y in zip(t, d)] for t, d in zip(target, dg)]
        previous = value
    raise exception.ContractionFailure(trace)


def _check_hypotheses(ctx, mats, margin):
    # type: (PrecisionContext, Sequence[np.ndarray], Fraction) -> None
    """Raise HypothesisCheckError unless v(f - 1) >= margin + r and v(f_bar) >= margin + 2r."""
    closeness = min_valuation(mx.valuation(mat - mx.identity_like(mat)) for mat in mats)
    if not at_least(closeness, margin + ctx.r):
        raise exception.HypothesisCheckError('f - 1', closeness, margin + ctx.r)
    complement = complement_valuation(mats)
    if not at_least(complement, margin + 2 * ctx.r):
        raise exception.HypothesisCheckError('complement part', complement, margin + 2 * ctx.r)


def descend_cocycle(rep, margin):
    # type: (SmallRep, Any) -> DescentState
    """Conjugate a perfectoid cocycle until it takes values over the chart.

    Parameters:
        margin: log_p of the contraction factor; each step must raise the
            complement valuation by at least this much.

    Raises:
        HypothesisCheckError: If f is not close enough to 1.
        ContractionFailure: If the complement valuation stops growing or
            the iteration bound is reached.
    """
    ctx = rep.ctx
    margin = Fraction(margin)
    if margin <= 0:
        raise ValueError('margin must be positive, got {}'.format(margin))
    mats = [mx.map_entries(lambda x: as_base(ctx, x, 'perfectoid'), mat) for mat in rep.mats]
    _check_hypotheses(ctx, mats, margin)

    ident = mx.identity_like(mats[0])
    state = DescentState(ctx, mats, ident, rep.a)
    limit = min(int(math.ceil(ctx.N / margin)), max_iterations())
    l = rep.l  # pylint: disable=invalid-name

    for step in range(limit + 1):
        complements = [complement_split(mat)[1] for mat in state.mats]
        value = min_valuation(mx.valuation(c) for c in complements)
        if value is None:
            logger.info('Descent finished after %d steps', step)
            return state
        if state.trace and value <= state.trace[-1][1]:
            state.trace.append((step, value, None))
            raise exception.ContractionFailure(state.trace)
        if step == limit:
            break

        cochain = [[-x for x in c.flat] for c in complements]
        entries = _monomial_solve(ctx, cochain)
        increment = mx.matrix([entries[s * l:(s + 1) * l] for s in range(l)])
        state.trace.append((step, value, mx.valuation(increment)))
        logger.info('Descent step %d: complement valuation %s', step, value)

        unit = ident + increment
        inverse = mx.inverse(unit)
        state.mats = [mx.map_entries(lambda x: x.gamma_act(i), unit).dot(mat).dot(inverse)
                      for i, mat in enumerate(state.mats)]
        state.conjugator = unit.dot(state.conjugator)
        if any(mx.overflowed(mat) for mat in state.mats):
            logger.warning('Descent step %d dropped terms outside the truncation box', step)

    raise exception.ContractionFailure(state.trace)


def conjugation_defect(rep, state):
    # type: (SmallRep, DescentState) -> Optional[Fraction]
    """Valuation of gamma(h) f_0 h^-1 - f_t; None means exact."""
    h = state.conjugator
    inverse = mx.inverse(h)
    values = []
    for i, (original, current) in enumerate(zip(rep.mats, state.mats)):
        original = mx.map_entries(lambda x: as_base(rep.ctx, x, 'perfectoid'), original)
        expected = mx.map_entries(lambda x: x.gamma_act(i), h).dot(original).dot(inverse)
        values.append(mx.defect(expected, current))
    return min_valuation(values)


def decomplete_rep(rep, a=None):
    # type: (SmallRep, Optional[Any]) -> DescentState
    """Descend a perfectoid representation with margin a - 1/(p-1).

    The result state gives the chart representation through `rep()`.
    """
    a = rep.a if a is None else Fraction(a)
    return descend_cocycle(rep, a - rep.ctx.r)


def verify_smallness_upgrade(rep, a=None):
    # type: (SmallRep, Optional[Any]) -> Dict[str, Any]
    """Check that a chart representation is (a + 1/(p-1))-trivial.

    The direct check reads the matrices; the H0 check counts the free
    rank of the invariants of M / p^(a+r) by Smith form.
    """
    ctx = rep.ctx
    a = rep.a if a is None else Fraction(a)
    bound = a + ctx.r
    direct = all(at_least(mx.valuation(mat - mx.identity_like(mat)), bound) for mat in rep.mats)

    module = rep_mod.flat_module(ctx, rep.l, rep.base)
    ops = []
    for i in range(rep.d):
        def shift(vector, i=i):
            return [x - y for x, y in zip(rep.step(i, vector), vector)]
        ops.append(module.operator(shift))
    divisors, _ = divisor_valuations(SparseOperator.stack(ops))
    h0_free_rank = module.rank - len([v for v in divisors if v < bound])
    matches = h0_free_rank == module.rank
    return {
        'direct_check': direct,
        'h0_free_rank': h0_free_rank,
        'expected_rank': module.rank,
        'h0_free_rank_matches_l': matches,
        'passed': direct and matches,
    }


def coset_representatives(ctx):
    # type: (PrecisionContext) -> List[Tuple[int, ...]]
    """One non-integral exponent coset per pattern of v(zeta^(beta_i) - 1).

    The valuation only depends on v_p(beta_i), so coordinates run over
    0 and p^s for s < n.
    """
    values = [0] + [ctx.p ** s for s in range(ctx.n)]
    return [coset for coset in itertools.product(values, repeat=ctx.d) if any(coset)]


def complement_cohomology_bound(rep):
    # type: (SmallRep) -> Dict[str, Any]
    """Largest torsion in the cohomology of the non-integral exponent cosets.

    On the coset of beta the operator gamma_i - 1 is (zeta^(beta_i) - 1)
    times a unit, so the torsion is bounded by the least such valuation.
    One coset is scanned per valuation pattern.
    """
    ctx = rep.ctx
    if rep.base == 'chart':
        rep = rep_mod.base_change(rep)
    cosets = []
    passed = True
    for coset in coset_representatives(ctx):
        bound = min((ctx.zeta(j) - 1).valuation() for j in coset if j)
        report = rep_mod.group_cohomology(rep, coset=coset)
        values = [v for degree in report for v in degree.torsion_values()]
        largest = max(values) if values else None
        free = sum(report.free_ranks())
        ok = free == 0 and (largest is None or largest <= bound)
        passed = passed and ok
        cosets.append({
            'coset': [fraction_to_json(Fraction(j, ctx.level)) for j in coset],
            'free_rank': free,
            'max_torsion': fraction_to_json(largest),
            'bound': fraction_to_json(bound),
            'ok': ok,
        })
    return {'cosets': cosets, 'r': fraction_to_json(ctx.r), 'passed': passed}


def conjugate(rep, unit):
    # type: (SmallRep, np.ndarray) -> SmallRep
    """Change basis by a perfectoid matrix U: A_i -> gamma_i(U) A_i U^-1."""
    ctx = rep.ctx
    unit = mx.map_entries(lambda x: as_base(ctx, x, 'perfectoid'), unit)
    inverse = mx.inverse(unit)
    mats = []
    for i, mat in enumerate(rep.mats):
        mat = mx.map_entries(lambda x: as_base(ctx, x, 'perfectoid'), mat)
        mats.append(mx.map_entries(lambda x: x.gamma_act(i), unit).dot(mat).dot(inverse))
    return rep_mod.SmallRep(ctx, 'perfectoid', mats, rep.a)


def random_conjugator(ctx, rng, l, valuation_index):  # pylint: disable=invalid-name
    # type: (PrecisionContext, np.random.Generator, int, int) -> np.ndarray
    """Random U = I + pi^k T^beta C with C a matrix of integer units.

    One beta in {-1, 1}^d / p^n is shared by every entry, so powers of U
    stay on the line through beta and only leave the truncation box after
    D p^n factors.
    """
    scale = ctx.pi ** valuation_index
    exponent = tuple(int(rng.choice([-1, 1])) for _ in range(ctx.d))
    result = mx.identity(PerfLaurentElt(ctx), PerfLaurentElt.constant(ctx, 1), l)
    for s in range(l):
        for t in range(l):
            coeff = int(rng.integers(1, ctx.p))
            result[s, t] = result[s, t] + PerfLaurentElt(ctx, {exponent: scale * coeff})
    return result
