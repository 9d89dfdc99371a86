# pylint: disable=consider-using-f-string, useless-object-inheritance
"""The local correspondence between small representations and small
Higgs modules, and the oracles that check it.

    higgs_to_rep: A_i = exp(-theta_i)
    rep_to_higgs: theta_i = -log(A_i)

The Gamma-invariant basis of M tensor R<rho Y> is prod_i A_i^(-Y_i),
where (I + Z)^(Y_i) = sum_n Z^n/n! F_n(Y_i) is summed in the falling
basis. Invariant elements are the rows of that matrix.
"""

__all__ = ['higgs_to_rep', 'rep_to_higgs', 'matrix_binomial_power', 'invariant_basis',
           'invariant_basis_inverse', 'invariance_defect', 'inverse_defect', 'invariants_bruteforce',
           'span_check', 'invariant_span_check', 'horizontal_sections', 'section_span_check',
           'section_gamma_check', 'log_derivative_check', 'roundtrip_check', 'cohomology_compare',
           'functoriality_check']

import logging
import math
from fractions import Fraction

import numpy as np

from . import exception
from . import higgs as higgs_mod
from . import matrix as mx
from . import representation as rep_mod
from .homological import SparseOperator, divisor_valuations
from .period import PeriodElt, RhoValue, vp_loss
from .series import exp_matrix, log_matrix, max_terms, tail_bound
from .toric import LaurentElt
from .type_hints import TYPE_CHECKING
from .utils import fraction_to_json, min_valuation, vp_factorial

if TYPE_CHECKING:
    from typing import Any, Dict, List, Optional, Sequence, Tuple
    from .cyclotomic import PrecisionContext
    from .higgs import SmallHiggs
    from .homological import FlatModule
    from .representation import SmallRep


logger = logging.getLogger(__name__)


def higgs_to_rep(higgs):
    # type: (SmallHiggs) -> SmallRep
    """Representation with A_i = exp(-theta_i), certificate unchanged.

    Raises:
        PrecisionExhaustedError: If the series needs too many terms.
    """
    ctx = higgs.ctx
    mats = []
    for theta in higgs.thetas:
        mat, bound = exp_matrix(-theta, ctx)
        logger.debug('exp(-theta): %r', bound)
        mats.append(mat)
    rep = rep_mod.make_rep(ctx, 'chart', mats, higgs.a)
    logger.info('Higgs module of rank %d mapped to a representation', higgs.l)
    return rep


def rep_to_higgs(rep):
    # type: (SmallRep) -> SmallHiggs
    """Higgs module with theta_i = -log(A_i), certificate unchanged."""
    if rep.base != 'chart':
        raise ValueError('only chart representations have a Higgs partner')
    ctx = rep.ctx
    thetas = []
    for mat in rep.mats:
        log, bound = log_matrix(mat, ctx)
        logger.debug('log(A): %r', bound)
        thetas.append(-log)
    higgs = higgs_mod.make_higgs(ctx, thetas, rep.a)
    logger.info('Representation of rank %d mapped to a Higgs module', rep.l)
    return higgs


def _lattice_loss(ctx, rho, top):
    # type: (PrecisionContext, Optional[RhoValue], int) -> int
    scale = Fraction(0) if rho is None else rho.valuation
    return max(vp_loss(ctx.p, n, scale) for n in range(top + 1))


def _lattice_series(Z, i, rho, top, basis):
    # type: (np.ndarray, int, Optional[RhoValue], int, str) -> np.ndarray
    """Matrix of period elements with coordinate Z^n / (n! rho^n) at Y_i-degree n."""
    ctx = Z.flat[0].ctx
    l = Z.shape[0]  # pylint: disable=invalid-name
    work = ctx.with_precision(ctx.N + _lattice_loss(ctx, rho, top))
    lifted = mx.map_entries(lambda x: x.lift(work), Z)
    scale = work.one if rho is None else rho.elt.lift(work)

    entries = [[{} for _ in range(l)] for _ in range(l)]  # type: List[List[Dict[Tuple[int, ...], Any]]]
    power = mx.identity_like(lifted)
    scale_power = work.one
    for n in range(top + 1):
        if n:
            power = power.dot(lifted)
            scale_power = scale_power * scale
        factorial = math.factorial(n)
        degree = tuple(n if k == i else 0 for k in range(ctx.d))
        for (s, t), value in np.ndenumerate(power):
            entries[s][t][degree] = value.div_int(factorial).exact_div(scale_power).reduce(ctx)

    rho_ctx = None if rho is None else rho.reduce(ctx)
    return mx.matrix([[PeriodElt(ctx, rho_ctx, entries[s][t], basis) for t in range(l)]
                      for s in range(l)])


def matrix_binomial_power(Z, i, rho=None):
    # type: (np.ndarray, int, Optional[RhoValue]) -> np.ndarray
    """Get (I + Z)^(Y_i) as a matrix of falling-basis period elements.

    The lattice coordinate of degree n is Z^n / (n! rho^n), computed on
    the canonical lift of Z at raised precision.

    Raises:
        DivergentExponentError: If v(Z) <= 1/(p-1).
        NotDivisibleError: If a coordinate leaves the rho-lattice.
    """
    ctx = Z.flat[0].ctx
    bound = tail_bound(ctx, 'binomial', mx.valuation(Z))
    top = ctx.G if rho is not None else min(ctx.G, bound.cutoff - 1)
    return _lattice_series(Z, i, rho, top, 'falling')


def _lift_rep(rep, work):
    # type: (SmallRep, PrecisionContext) -> List[np.ndarray]
    return [mx.map_entries(lambda x: x.lift(work), mat) for mat in rep.mats]


def _series_product(factors):
    # type: (Sequence[np.ndarray]) -> np.ndarray
    result = factors[0]
    for factor in factors[1:]:
        result = result.dot(factor)
    return result


def _checked_rho(rep, rho):
    # type: (SmallRep, Optional[RhoValue]) -> RhoValue
    if rep.base != 'chart':
        raise ValueError('the invariant basis is built for chart representations')
    rho = rho or RhoValue.rho_k(rep.ctx)
    if rho.valuation >= rep.a:
        raise exception.RhoTooLargeError(rho.valuation, rep.a)
    return rho


def invariant_basis(rep, rho=None):
    # type: (SmallRep, Optional[RhoValue]) -> np.ndarray
    """Matrix prod_i A_i^(-Y_i) whose rows are Gamma-invariant.

    Raises:
        RhoTooLargeError: If v(rho) >= a.
    """
    ctx = rep.ctx
    rho = _checked_rho(rep, rho)
    work = ctx.with_precision(ctx.N + _lattice_loss(ctx, rho, ctx.G))
    factors = []
    for i, mat in enumerate(_lift_rep(rep, work)):
        inverse = mx.inverse(mat)
        factors.append(matrix_binomial_power(inverse - mx.identity_like(inverse), i, rho.lift(work)))
    result = mx.map_entries(lambda x: x.reduce(ctx), _series_product(factors))
    logger.info('Invariant basis of rank %d at %r', rep.l, rho)
    return result


def invariant_basis_inverse(rep, rho=None):
    # type: (SmallRep, Optional[RhoValue]) -> np.ndarray
    """Matrix prod_i A_i^(Y_i), the exact inverse of `invariant_basis`."""
    ctx = rep.ctx
    rho = _checked_rho(rep, rho)
    work = ctx.with_precision(ctx.N + _lattice_loss(ctx, rho, ctx.G))
    factors = []
    for i, mat in enumerate(_lift_rep(rep, work)):
        factors.append(matrix_binomial_power(mat - mx.identity_like(mat), i, rho.lift(work)))
    return mx.map_entries(lambda x: x.reduce(ctx), _series_product(factors))


def _stable(x, ctx):
    # type: (PeriodElt, PrecisionContext) -> PeriodElt
    return x.to_basis('falling').truncate(ctx.G - 1)


def invariance_defect(rep, basis):
    # type: (SmallRep, np.ndarray) -> Optional[Fraction]
    """Valuation of gamma_i(H) A_i - H below the top degree, over all i."""
    ctx = rep.ctx
    values = []
    for i, mat in enumerate(rep.mats):
        image = mx.map_entries(lambda x: x.gamma_act(i), basis).dot(mat)
        diff = mx.map_entries(lambda x: _stable(x, ctx), image - basis)
        values.append(mx.valuation(diff))
    return min_valuation(values)


def inverse_defect(basis, inverse):
    # type: (np.ndarray, np.ndarray) -> Optional[Fraction]
    """Valuation of basis * inverse - I; None means an exact inverse."""
    product = basis.dot(inverse)
    return mx.defect(product, mx.identity_like(product))


def _invariant_system(rep, rho):
    # type: (SmallRep, Optional[RhoValue]) -> Tuple[SparseOperator, FlatModule]
    """Stacked gamma_i - 1 on M tensor R<rho Y>, equations below the top degree."""
    module = rep_mod.flat_module(rep.ctx, rep.l, rep.base, rho, period=True)
    ops = []
    for i in range(rep.d):
        def shift(vector, i=i):
            image = rep.step(i, vector)
            return [x - y for x, y in zip(image, vector)]
        ops.append(module.operator(shift))
    return SparseOperator.stack(ops, module.stable_indices()), module


def _section_system(higgs, rho):
    # type: (SmallHiggs, Optional[RhoValue]) -> Tuple[SparseOperator, FlatModule]
    """Stacked Theta_i = theta_i + d/dY_i, read in monomial coordinates."""
    module = rep_mod.flat_module(higgs.ctx, higgs.l, 'chart', rho, period=True, basis='monomial')
    ops = []
    for i, theta in enumerate(higgs.thetas):
        def field(vector, i=i, theta=theta):
            image = mx.row_times(vector, theta)
            return [x + y.derivative(i) for x, y in zip(image, vector)]
        ops.append(module.operator(field))
    return SparseOperator.stack(ops, module.stable_indices()), module


def invariants_bruteforce(rep, rho=None):
    # type: (SmallRep, Optional[RhoValue]) -> Tuple[np.ndarray, FlatModule]
    """Kernel of the stacked gamma_i - 1 on M tensor R<rho Y>, by Smith form.

    Equations are kept on Y-degrees below G only, since the top degree
    depends on the truncated tail.

    Returns:
        The free kernel basis as columns and the flattened module.
    """
    rho = _checked_rho(rep, rho)
    op, module = _invariant_system(rep, rho)
    return op.kernel(), module


def _rows_to_vectors(module, mat):
    # type: (FlatModule, np.ndarray) -> List[List[Any]]
    """Flatten every row of mat times every chart monomial of the module."""
    ctx = module.ctx
    vectors = []
    exponents = sorted(set(label[1] for label in module.labels))
    for row in mat:
        for k in exponents:
            monomial = LaurentElt(ctx, {k: ctx.one})
            vectors.append(module.flatten([x * monomial for x in row]))
    return vectors


def span_check(op, module, vectors):
    # type: (SparseOperator, FlatModule, List[List[Any]]) -> Dict[str, Any]
    """Check that vectors form a basis of the free kernel of op.

    The vectors must be killed by op, be unimodular as a family, and be
    as many as the free kernel rank.
    """
    ctx = module.ctx
    in_kernel = all(all(x.is_zero() for x in op.apply(vector)) for vector in vectors)
    kernel_rank = op.kernel().shape[1]
    divisors = []  # type: List[Fraction]
    if vectors:
        divisors, _ = divisor_valuations(SparseOperator.from_dense(mx.matrix(vectors), ctx))
    unimodular = len(divisors) == len(vectors) and all(v == 0 for v in divisors)
    return {
        'vectors': len(vectors),
        'kernel_rank': kernel_rank,
        'in_kernel': in_kernel,
        'unimodular': unimodular,
        'equal': in_kernel and unimodular and kernel_rank == len(vectors),
    }


def invariant_span_check(rep, rho=None):
    # type: (SmallRep, Optional[RhoValue]) -> Dict[str, Any]
    """Compare `invariant_basis` with the brute-force invariants."""
    rho = _checked_rho(rep, rho)
    op, module = _invariant_system(rep, rho)
    basis = invariant_basis(rep, rho)
    result = span_check(op, module, _rows_to_vectors(module, basis))
    result['inverse_defect'] = fraction_to_json(inverse_defect(basis, invariant_basis_inverse(rep, rho)))
    result['invariance_defect'] = fraction_to_json(invariance_defect(rep, basis))
    result['passed'] = (result['equal'] and result['inverse_defect'] is None
                        and result['invariance_defect'] is None)
    return result


def horizontal_sections(higgs, rho=None, mode='closed_form'):
    # type: (SmallHiggs, Optional[RhoValue], str) -> Any
    """Sections killed by Theta = theta tensor 1 + 1 tensor d/dY.

    Parameters:
        mode: "closed_form" gives the rows of prod_i exp(-theta_i Y_i) in
            the monomial basis; "bruteforce" gives the free kernel columns
            of the stacked Theta_i with the flattened module.
    """
    rho = rho or RhoValue.rho_k(higgs.ctx)
    if mode == 'closed_form':
        factors = [_lattice_series(-theta, i, rho, higgs.ctx.G, 'monomial')
                   for i, theta in enumerate(higgs.thetas)]
        return _series_product(factors)
    if mode != 'bruteforce':
        raise ValueError('unknown mode {!r}'.format(mode))
    op, module = _section_system(higgs, rho)
    return op.kernel(), module


def section_span_check(higgs, rho=None):
    # type: (SmallHiggs, Optional[RhoValue]) -> Dict[str, Any]
    """Compare the closed-form horizontal sections with the brute-force kernel."""
    rho = rho or RhoValue.rho_k(higgs.ctx)
    op, module = _section_system(higgs, rho)
    result = span_check(op, module, _rows_to_vectors(module, horizontal_sections(higgs, rho)))
    result['passed'] = result['equal']
    return result


def section_gamma_check(higgs, rho=None):
    # type: (SmallHiggs, Optional[RhoValue]) -> Dict[str, Any]
    """Check that gamma_i acts on the horizontal sections through exp(-theta_i).

    The sections prod_i exp(-theta_i Y_i) = prod_i A_i^(Y_i) are built
    in the falling basis, where gamma is exact below the top degree.
    """
    ctx = higgs.ctx
    rho = rho or RhoValue.rho_k(ctx)
    rep = higgs_to_rep(higgs)
    sections = invariant_basis_inverse(rep, rho)
    defects = []
    for i, mat in enumerate(rep.mats):
        image = mx.map_entries(lambda x: x.gamma_act(i), sections)
        expected = mat.dot(sections)
        diff = mx.map_entries(lambda x: _stable(x, ctx), image - expected)
        defects.append(mx.valuation(diff))
    defect = min_valuation(defects)
    return {'defect': fraction_to_json(defect), 'passed': defect is None or defect >= ctx.N - 2}


def log_derivative_check(rep, rho=None):
    # type: (SmallRep, Optional[RhoValue]) -> Dict[str, Any]
    """Check d/dY_j H = -log(A_j) H for H = prod_i A_i^(-Y_i).

    H is truncated in the falling basis, so the comparison in monomial
    coordinates is certified only up to the tail of the binomial series.
    """
    ctx = rep.ctx
    rho = rho or RhoValue.rho_k(ctx)
    basis = invariant_basis(rep, rho)
    monomial = mx.map_entries(lambda x: x.to_basis('monomial'), basis)
    tolerance = _tail_tolerance(rep, rho)
    defects = []
    for j, mat in enumerate(rep.mats):
        log, _ = log_matrix(mat, ctx)
        left = mx.map_entries(lambda x: x.derivative(j).truncate(ctx.G - 1), monomial)
        right = mx.map_entries(lambda x: x.truncate(ctx.G - 1), (-log).dot(monomial))
        defects.append(mx.valuation(left - right))
    defect = min_valuation(defects)
    passed = defect is None or defect >= min(tolerance, ctx.N)
    return {'defect': fraction_to_json(defect), 'tolerance': fraction_to_json(tolerance), 'passed': passed}


def _tail_tolerance(rep, rho):
    # type: (SmallRep, RhoValue) -> Fraction
    """Lower bound for the valuation of the dropped falling-basis tail."""
    ctx = rep.ctx
    small = rep.smallness_valuation()
    if small is None:
        return Fraction(ctx.N)
    tolerance = Fraction(ctx.N)
    for n in range(ctx.G + 1, ctx.G + 1 + max_terms()):
        value = n * (small - rho.valuation) - vp_factorial(ctx.p, n)
        tolerance = min(tolerance, value)
        if n * (small - rho.valuation - ctx.r) >= ctx.N:
            break
    return tolerance


def roundtrip_check(rep=None, higgs=None):
    # type: (Optional[SmallRep], Optional[SmallHiggs]) -> Dict[str, Any]
    """Defects of exp after log and log after exp; None means exact."""
    result = {}  # type: Dict[str, Any]
    defects = []
    if rep is not None:
        back = higgs_to_rep(rep_to_higgs(rep))
        defect = min_valuation(mx.defect(x, y) for x, y in zip(back.mats, rep.mats))
        result['rep_defect'] = fraction_to_json(defect)
        defects.append(defect)
    if higgs is not None:
        back = rep_to_higgs(higgs_to_rep(higgs))
        defect = min_valuation(mx.defect(x, y) for x, y in zip(back.thetas, higgs.thetas))
        result['higgs_defect'] = fraction_to_json(defect)
        defects.append(defect)
    ctx = (rep or higgs).ctx
    worst = min_valuation(defects)
    result['max_defect_valuation'] = fraction_to_json(worst)
    result['passed'] = worst is None or worst >= ctx.N - 2
    return result


def cohomology_compare(rep, instance_id=None, rho=None):
    # type: (SmallRep, Optional[Any], Optional[RhoValue]) -> Dict[str, Any]
    """Compare Gamma-cohomology of M with the Higgs cohomology of its partner.

    On the chart both complexes are isomorphic, since A_i - I = -theta_i U_i
    with U_i invertible and commuting. After base change the non-integral
    monomials add torsion of valuation at most 1/(p-1).

    The complex of M with period coefficients at rho is reported next to
    them; it is computed over the chart and does not gate the result.
    """
    ctx = rep.ctx
    rho = _checked_rho(rep, rho)
    higgs = rep_to_higgs(rep)
    chart = rep_mod.group_cohomology(rep)
    perfectoid = rep_mod.group_cohomology(rep_mod.base_change(rep))
    higgs_report = higgs_mod.higgs_cohomology(higgs)
    period = rep_mod.group_cohomology(rep, rho, period=True)

    degrees = []
    passed = True
    for q in range(rep.d + 1):
        rep_free = chart[q].stable_free_rank
        higgs_free = higgs_report[q].stable_free_rank
        perf_free = perfectoid[q].stable_free_rank
        extra = sorted(perfectoid[q].torsion_values(stable_only=True))
        for value in chart[q].torsion_values(stable_only=True):
            if value in extra:
                extra.remove(value)
        torsion_ok = all(value <= ctx.r for value in extra)
        rep_torsion = sorted(chart[q].torsion_values(stable_only=True))
        higgs_torsion = sorted(higgs_report[q].torsion_values(stable_only=True))
        torsion_match = rep_torsion == higgs_torsion
        ok = rep_free == higgs_free == perf_free and torsion_ok and torsion_match
        passed = passed and ok
        degrees.append({
            'q': q,
            'rep_free': rep_free,
            'higgs_free': higgs_free,
            'perfectoid_free': perf_free,
            'rep_torsion': [fraction_to_json(v) for v in rep_torsion],
            'higgs_torsion': [fraction_to_json(v) for v in higgs_torsion],
            'extra_torsion': [fraction_to_json(v) for v in extra],
            'period_free': period[q].stable_free_rank,
            'period_torsion': [fraction_to_json(v) for v in sorted(period[q].torsion_values(stable_only=True))],
            'torsion_match': torsion_match,
            'torsion_bound_ok': torsion_ok,
        })
    roundtrip = roundtrip_check(rep=rep)
    logger.info('Cohomology comparison: %s', 'agree' if passed else 'mismatch')
    return {
        'instance_id': instance_id,
        'rho': rho.descriptor,
        'degrees': degrees,
        'roundtrip_max_defect_valuation': roundtrip['max_defect_valuation'],
        'passed': passed,
    }


def functoriality_check(first, second):
    # type: (SmallRep, SmallRep) -> Dict[str, Any]
    """Compare the functors with tensor products and duals."""
    ctx = first.ctx
    h1, h2 = rep_to_higgs(first), rep_to_higgs(second)
    tensor_defect = min_valuation(
        mx.defect(x, y) for x, y in zip(rep_to_higgs(rep_mod.tensor(first, second)).thetas,
                                        higgs_mod.tensor(h1, h2).thetas))
    dual_defect = min_valuation(
        mx.defect(x, y) for x, y in zip(rep_to_higgs(rep_mod.dual(first)).thetas, higgs_mod.dual(h1).thetas))
    exp_defect = min_valuation(
        mx.defect(x, y) for x, y in zip(higgs_to_rep(higgs_mod.tensor(h1, h2)).mats,
                                        rep_mod.tensor(first, second).mats))
    defects = [tensor_defect, dual_defect, exp_defect]
    worst = min_valuation(defects)
    return {
        'tensor_defect': fraction_to_json(tensor_defect),
        'dual_defect': fraction_to_json(dual_defect),
        'exp_tensor_defect': fraction_to_json(exp_defect),
        'max_defect_valuation': fraction_to_json(worst),
        'passed': worst is None or worst >= ctx.N - 2,
    }
