# pylint: disable=consider-using-f-string, useless-object-inheritance, super-with-arguments
"""Seeded verification experiments.
An experiment is built up with chained calls, each returning a modified
copy, and only does work once executed.

Examples:
    >>> from padic_simpson import experiment, make_context
    >>> report = (
    ...     experiment('roundtrip')
    ...     .where(p=5, n=2, N=10, d=2)
    ...     .rank(2)
    ...     .trials(20)
    ...     .seed(42)
    ...     .execute()
    ... )
    >>> report.passed
    True

    >>> ctx = make_context(3, 1, 6, D=1, G=3, a=1)
    >>> experiment('identities').options(context=ctx).execute().summary
    {'passed': 1, 'failed': 0, 'warnings': 0}
"""

__all__ = ['SUITES', 'REPORT_SCHEMA', 'INSTANCE_SCHEMA', 'ContextInstance', 'Experiment',
           'Report', 'register', 'load_instance']

import glob
import json
import logging
import math
import os
import time
from fractions import Fraction

import numpy as np
from sympy import Poly, eye

from . import decompletion
from . import exception
from . import higgs as higgs_mod
from . import representation as rep_mod
from . import resolution
from . import simpson
from .cyclotomic import context_from_json, make_context, zeta_power
from .period import (PeriodElt, RhoValue, Y, falling_factorial, log_gamma_equals_ddY, multidegrees, parse_rho,
                     unitriangular_pair)
from .type_hints import TYPE_CHECKING
from .utils import NotSet, NOT_SET, at_least, clone_instance, fraction_from_json, fraction_to_json, parse_fraction

if TYPE_CHECKING:
    from typing import Any, Callable, Dict, List, Optional, Tuple, Union
    from .cyclotomic import PrecisionContext

    TrialOutcome = Tuple[Dict[str, bool], Dict[str, Any], List[str]]


logger = logging.getLogger(__name__)

REPORT_SCHEMA = 'padic-simpson/report/1'

INSTANCE_SCHEMA = 'padic-simpson/instance/1'

CONTEXT_KEYS = ('p', 'n', 'N', 'D', 'G', 'd', 'a')

SUITES = {}  # type: Dict[str, Callable[[Experiment, PrecisionContext, np.random.Generator, int], TrialOutcome]]


def register(name):
    # type: (str) -> Callable
    """Add a suite function to the registry."""
    def decorator(func):
        # type: (Callable) -> Callable
        SUITES[name] = func
        return func
    return decorator


def _write_json(path, data):
    # type: (str, Dict[str, Any]) -> None
    directory = os.path.dirname(path)
    if directory and not os.path.isdir(directory):
        os.makedirs(directory)
    with open(path, 'w') as handle:
        json.dump(data, handle, indent=2, sort_keys=True)
        handle.write('\n')


def load_instance(path):
    # type: (str) -> Tuple[PrecisionContext, rep_mod.SmallRep, higgs_mod.SmallHiggs]
    """Read an instance file written by `Experiment.gen`.

    Raises:
        ConfigError: If the file has an unknown schema.
    """
    with open(path) as handle:
        data = json.load(handle)
    if data.get('schema') != INSTANCE_SCHEMA:
        raise exception.ConfigError('{} is not an instance file (schema {!r})'.format(path, data.get('schema')))
    ctx = context_from_json(data['context'])
    return ctx, rep_mod.SmallRep.from_json(ctx, data['rep']), higgs_mod.SmallHiggs.from_json(ctx, data['higgs'])


class Report(object):
    """Outcome of an executed experiment.

    Attributes:
        config: The experiment configuration.
        trials: One record per trial, ordered by trial index.
        timing: Wall clock seconds, excluded from the payload.
    """

    def __init__(self, config, trials, timing):
        # type: (Dict[str, Any], List[Dict[str, Any]], Dict[str, Any]) -> None
        self.config = config
        self.trials = trials
        self.timing = timing

    def __repr__(self):
        # type: () -> str
        return 'Report({}, {})'.format(self.config['suite'], self.summary)

    @property
    def summary(self):
        # type: () -> Dict[str, int]
        statuses = [trial['status'] for trial in self.trials]
        return {
            'passed': statuses.count('pass'),
            'failed': statuses.count('fail'),
            'warnings': statuses.count('warning'),
        }

    @property
    def passed(self):
        # type: () -> bool
        return not self.summary['failed']

    def payload(self):
        # type: () -> Dict[str, Any]
        """Everything but the timing, identical for identical seeds."""
        return {
            'schema': REPORT_SCHEMA,
            'config': self.config,
            'trials': self.trials,
            'summary': self.summary,
            'passed': self.passed,
        }

    def to_json(self):
        # type: () -> Dict[str, Any]
        data = self.payload()
        data['timing'] = self.timing
        return data

    def write(self, path):
        # type: (str) -> None
        _write_json(path, self.to_json())
        logger.info('Report written to %s', path)

    def table(self):
        # type: () -> str
        """Plaintext summary with one row per trial."""
        lines = ['{:>5}  {:<7}  {}'.format('trial', 'status', 'failed checks')]
        for trial in self.trials:
            failed = sorted(name for name, ok in trial['checks'].items() if not ok)
            lines.append('{:>5}  {:<7}  {}'.format(trial['trial'], trial['status'], ', '.join(failed) or '-'))
        summary = self.summary
        lines.append('{}: {} passed, {} failed, {} warnings'.format(
            self.config['suite'], summary['passed'], summary['failed'], summary['warnings'],
        ))
        return '\n'.join(lines)


class ContextInstance(object):
    """Base class to hold the suite and the precision context."""

    def __init__(self, suite):
        # type: (str) -> None
        self._suite = suite
        self._context = None  # type: Optional[PrecisionContext]

    def copy(self):
        # type: () -> ContextInstance
        # pylint: disable=protected-access
        """Create a new copy of the class."""
        new = type(self)(suite=self._suite)
        new._context = self._context
        return new

    @clone_instance
    def options(self, context=NOT_SET):
        # type: (Union[PrecisionContext, NotSet, None]) -> ContextInstance
        """Set new experiment options.

        Parameters:
            context: Prebuilt precision context.
        """
        if not isinstance(context, NotSet):
            self._context = context
        return self

    def execute(self, context=None):
        # type: (Optional[PrecisionContext]) -> Any
        """Run against the bound or given context."""
        raise NotImplementedError('{} does not run on its own'.format(type(self).__name__))

    def _get_context(self, context=None):
        # type: (Optional[PrecisionContext]) -> PrecisionContext
        """Return the context or raise an UnboundContextError."""
        if context is not None:
            return context
        if self._context is not None:
            return self._context
        raise exception.UnboundContextError


class Experiment(ContextInstance):
    """Construct a verification experiment.

    Example:
        >>> stmt = experiment('descent').where(p=3, n=1, N=4, D=1, G=2, a=1).trials(2)
        >>> str(stmt)
        'descent p=3 n=1 N=4 D=1 G=2 a=1 l=1 trials=2 seed=0'
    """

    def __init__(self, suite):
        # type: (str) -> None
        if suite not in SUITES:
            raise exception.ConfigError('unknown suite {!r}, expected one of {}'.format(
                suite, ', '.join(sorted(SUITES))))
        super(Experiment, self).__init__(suite=suite)
        self._params = {}  # type: Dict[str, Any]
        self._rank = 1
        self._trials = 1
        self._seed = 0
        self._rho = []  # type: List[str]
        self._output = None  # type: Optional[str]
        self._instances = None  # type: Optional[str]
        self._trivial = False
        self._descent_a = None  # type: Optional[Fraction]
        self._conjugator = None  # type: Optional[int]

    def __str__(self):
        # type: () -> str
        parts = [self._suite]
        parts.extend('{}={}'.format(key, self._params[key]) for key in CONTEXT_KEYS if key in self._params)
        parts += ['l={}'.format(self._rank), 'trials={}'.format(self._trials), 'seed={}'.format(self._seed)]
        if self._rho:
            parts.append('rho={}'.format(','.join(self._rho)))
        return ' '.join(parts)

    def copy(self):
        # type: () -> Experiment
        # pylint: disable=protected-access
        """Create a new copy of the class."""
        new = super(Experiment, self).copy()
        if TYPE_CHECKING:
            assert isinstance(new, Experiment)

        new._params = dict(self._params)
        new._rank = self._rank
        new._trials = self._trials
        new._seed = self._seed
        new._rho = list(self._rho)
        new._output = self._output
        new._instances = self._instances
        new._trivial = self._trivial
        new._descent_a = self._descent_a
        new._conjugator = self._conjugator
        return new

    @clone_instance
    def where(self, **kwargs):
        # type: (**Any) -> Experiment
        """Set truncation parameters of the context."""
        for key, value in kwargs.items():
            if key not in CONTEXT_KEYS:
                raise exception.ConfigError('unknown context parameter {!r}'.format(key))
            if value is not None:
                self._params[key] = parse_fraction(value) if key == 'a' else int(value)
        return self

    @clone_instance
    def rank(self, value):
        # type: (int) -> Experiment
        """Rank of the generated instances."""
        if value < 1:
            raise exception.ConfigError('rank must be positive, got {}'.format(value))
        self._rank = value
        return self

    @clone_instance
    def trials(self, value):
        # type: (int) -> Experiment
        if value < 1:
            raise exception.ConfigError('trial count must be positive, got {}'.format(value))
        self._trials = value
        return self

    @clone_instance
    def seed(self, value):
        # type: (int) -> Experiment
        if value < 0:
            raise exception.ConfigError('seed must be non-negative, got {}'.format(value))
        self._seed = value
        return self

    @clone_instance
    def rho(self, *descriptors):
        # type: (*str) -> Experiment
        """Add period lattice scales, such as "rho_k*pi"."""
        self._rho.extend(map(str, filter(bool, descriptors)))
        return self

    @clone_instance
    def output(self, path):
        # type: (Optional[str]) -> Experiment
        """Write the report here when run."""
        self._output = path
        return self

    @clone_instance
    def instances(self, directory):
        # type: (Optional[str]) -> Experiment
        """Read roundtrip instances from a directory written by `gen`."""
        self._instances = directory
        return self

    @clone_instance
    def trivial(self, value=True):
        # type: (bool) -> Experiment
        """Generate trivial instances instead of random ones."""
        self._trivial = value
        return self

    @clone_instance
    def descent(self, a=NOT_SET, conjugator=NOT_SET):
        # type: (Any, Any) -> Experiment
        """Set descent options.

        Parameters:
            a: Smallness exponent the descent margin is computed from.
            conjugator: Power of pi in the random conjugator, by
                default the smallness index of the context.
        """
        if not isinstance(a, NotSet):
            self._descent_a = None if a is None else parse_fraction(a)
        if not isinstance(conjugator, NotSet):
            self._conjugator = conjugator
        return self

    def _get_context(self, context=None):
        # type: (Optional[PrecisionContext]) -> PrecisionContext
        """Return the bound context with any `where` overrides applied."""
        if context is None and self._context is None and self._params:
            return make_context(**self._params)
        context = super(Experiment, self)._get_context(context)
        if self._params:
            params = dict(zip(CONTEXT_KEYS, context.key))
            params.update(self._params)
            context = make_context(**params)
        return context

    def config(self, context=None):
        # type: (Optional[PrecisionContext]) -> Dict[str, Any]
        """Configuration embedded in every report."""
        ctx = self._get_context(context)
        return {
            'suite': self._suite,
            'context': ctx.to_json(),
            'rank': self._rank,
            'trials': self._trials,
            'seed': self._seed,
            'rho': list(self._rho),
            'instances': self._instances,
            'trivial': self._trivial,
            'descent': {'a': fraction_to_json(self._descent_a), 'conjugator': self._conjugator},
        }

    def rng(self, trial):
        # type: (int) -> np.random.Generator
        """Generator seeded by (seed, trial) only."""
        return np.random.default_rng([self._seed, trial])

    def rho_values(self, ctx):
        # type: (PrecisionContext) -> List[RhoValue]
        return [parse_rho(ctx, text) for text in self._rho]

    def _instance_files(self):
        # type: () -> List[str]
        files = sorted(glob.glob(os.path.join(self._instances, 'instance-*.json')))
        if not files:
            raise exception.ConfigError('no instance files in {}'.format(self._instances))
        return files

    def instance(self, ctx, trial):
        # type: (PrecisionContext, int) -> Tuple[rep_mod.SmallRep, higgs_mod.SmallHiggs]
        """Representation and Higgs module for a trial.

        Raises:
            ConfigError: If an instance file has a different context.
        """
        if self._instances is not None:
            file_ctx, rep, higgs = load_instance(self._instance_files()[trial])
            if file_ctx != ctx:
                raise exception.ConfigError('instance context {!r} does not match {!r}'.format(file_ctx, ctx))
            return rep, higgs
        if self._trivial:
            rep = rep_mod.trivial_rep(ctx, self._rank)
            return rep, simpson.rep_to_higgs(rep)
        rng = self.rng(trial)
        return rep_mod.random_rep(ctx, rng, self._rank), higgs_mod.random_higgs(ctx, rng, self._rank)

    def execute(self, context=None):
        # type: (Optional[PrecisionContext]) -> Report
        """Run every trial of the suite.

        Raises:
            UnboundContextError: If no context or parameters were given.
            ConfigError: If the configuration is invalid.
        """
        ctx = self._get_context(context)
        config = self.config(ctx)
        count = self._trials
        if self._instances is not None:
            count = len(self._instance_files())
            config['trials'] = count

        suite = SUITES[self._suite]
        records = []
        durations = []
        start = time.time()
        for trial in range(count):
            trial_start = time.time()
            try:
                checks, values, warnings = suite(self, ctx, self.rng(trial), trial)
            except exception.ConfigError:
                raise
            except exception.Error as error:
                logger.warning('Trial %d raised %s', trial, error)
                checks = {'completed': False}
                values = {'error': {'type': type(error).__name__, 'message': str(error)}}
                warnings = []
            if not all(checks.values()):
                status = 'fail'
            elif warnings:
                status = 'warning'
            else:
                status = 'pass'
            records.append({'trial': trial, 'status': status, 'checks': checks,
                            'values': values, 'warnings': warnings})
            durations.append(time.time() - trial_start)
            logger.info('Trial %d of %s: %s', trial, self._suite, status)

        timing = {'total_seconds': time.time() - start, 'trial_seconds': durations}
        return Report(config, records, timing)

    def run(self, context=None):
        # type: (Optional[PrecisionContext]) -> Report
        """Execute and write the report if an output path is set."""
        report = self.execute(context)
        if self._output:
            report.write(self._output)
        return report

    def gen(self, directory=None, context=None):
        # type: (Optional[str], Optional[PrecisionContext]) -> List[str]
        """Write one instance file per trial and return the paths.

        Raises:
            ConfigError: If no directory is given.
        """
        directory = directory or self._output
        if not directory:
            raise exception.ConfigError('gen needs an output directory')
        ctx = self._get_context(context)
        paths = []
        for trial in range(self._trials):
            if self._trivial:
                rep = rep_mod.trivial_rep(ctx, self._rank)
            else:
                rep = rep_mod.random_rep(ctx, self.rng(trial), self._rank)
            data = {
                'schema': INSTANCE_SCHEMA,
                'context': ctx.to_json(),
                'trial': trial,
                'seed': self._seed,
                'rep': rep.to_json(),
                'higgs': simpson.rep_to_higgs(rep).to_json(),
            }
            path = os.path.join(directory, 'instance-{:04d}.json'.format(trial))
            _write_json(path, data)
            paths.append(path)
        logger.info('Wrote %d instances to %s', len(paths), directory)
        return paths


def _trial_checks(results):
    # type: (Dict[str, Dict[str, Any]]) -> Dict[str, bool]
    return {name: bool(result['passed']) for name, result in results.items()}


@register('identities')
def identities_suite(experiment, ctx, rng, trial):  # pylint: disable=unused-argument
    # type: (Experiment, PrecisionContext, np.random.Generator, int) -> TrialOutcome
    """Exact identities of the falling factorials, the X/Y pair and the roots of unity."""
    checks = {}
    values = {}  # type: Dict[str, Any]

    shift = Poly(Y + 1, Y)
    bad = [n for n in range(1, 21)
           if falling_factorial(n).compose(shift) - falling_factorial(n) != falling_factorial(n - 1) * n]
    checks['falling_factorial_difference'] = not bad
    values['falling_factorial_failures'] = bad

    first, second = unitriangular_pair(16)
    checks['unitriangular_inverse'] = (first * second).expand() == eye(16) and (second * first).expand() == eye(16)

    level = ctx.level
    pairs = [(int(x), int(y)) for x, y in rng.integers(-level, level, size=(8, 2))]

    def zeta(j):
        return zeta_power(ctx, Fraction(j, level))
    checks['zeta_homomorphism'] = all(zeta(x) * zeta(y) == zeta(x + y) for x, y in pairs)
    values['zeta_exponents'] = [[x, y] for x, y in pairs]

    rho = RhoValue.rho_k(ctx)
    degrees = multidegrees(ctx.d, ctx.G)
    constants = rep_mod.random_constant(ctx, rng, len(degrees))[0]
    element = PeriodElt(ctx, rho, dict(zip(degrees, constants)))
    checks['basis_conversion'] = element.to_basis('falling').to_basis('monomial').coeffs == element.coeffs
    checks['gamma_inverse'] = all(element.gamma_act(i, 1).gamma_act(i, -1) == element for i in range(ctx.d))

    log_ok = True
    for k in range(1, ctx.G + 1):
        power = PeriodElt.polynomial(ctx, {(k,) + (0,) * (ctx.d - 1): 1})
        log, derivative = log_gamma_equals_ddY(0, power)
        log_ok = log_ok and log == derivative
    checks['log_gamma_is_derivative'] = log_ok
    return checks, values, []


def _roundtrip_rhos(experiment, ctx):
    # type: (Experiment, PrecisionContext) -> Tuple[List[RhoValue], List[str]]
    rhos = experiment.rho_values(ctx) or [RhoValue.rho_k(ctx)]
    kept = [rho for rho in rhos if rho.valuation < ctx.a]
    warnings = ['skipped rho {} with valuation {} >= a'.format(rho.descriptor, rho.valuation)
                for rho in rhos if rho.valuation >= ctx.a]
    return kept, warnings


@register('roundtrip')
def roundtrip_suite(experiment, ctx, rng, trial):  # pylint: disable=unused-argument
    # type: (Experiment, PrecisionContext, np.random.Generator, int) -> TrialOutcome
    """Functor round trips, the invariant basis and horizontal sections."""
    rep, higgs = experiment.instance(ctx, trial)
    rhos, warnings = _roundtrip_rhos(experiment, ctx)
    results = {'roundtrip': simpson.roundtrip_check(rep=rep, higgs=higgs)}
    for rho in rhos:
        suffix = '' if rho.tag == 'rho_k' and len(rhos) == 1 else '[{}]'.format(rho.descriptor)
        results['invariant_span' + suffix] = simpson.invariant_span_check(rep, rho)
        results['section_span' + suffix] = simpson.section_span_check(higgs, rho)
        results['section_gamma' + suffix] = simpson.section_gamma_check(higgs, rho)
        results['log_derivative' + suffix] = simpson.log_derivative_check(rep, rho)
    values = {
        'max_defect_valuation': results['roundtrip']['max_defect_valuation'],
        'rep_defect': results['roundtrip'].get('rep_defect'),
        'higgs_defect': results['roundtrip'].get('higgs_defect'),
    }
    for name, result in results.items():
        if 'defect' in result and name != 'roundtrip':
            values[name + '_defect'] = result['defect']
    return _trial_checks(results), values, warnings


@register('cohomology')
def cohomology_suite(experiment, ctx, rng, trial):
    # type: (Experiment, PrecisionContext, np.random.Generator, int) -> TrialOutcome
    """Group against Higgs cohomology, plus the trivial and complement checks on trial 0."""
    rep = rep_mod.random_rep(ctx, rng, experiment._rank)  # pylint: disable=protected-access
    compare = simpson.cohomology_compare(rep, instance_id=trial)
    checks = {
        'free_ranks_agree': all(q['rep_free'] == q['higgs_free'] == q['perfectoid_free'] for q in compare['degrees']),
        'torsion_match': all(q['torsion_match'] for q in compare['degrees']),
        'torsion_bound': all(q['torsion_bound_ok'] for q in compare['degrees']),
        'roundtrip': at_least(fraction_from_json(compare['roundtrip_max_defect_valuation']), ctx.N - 2),
    }
    values = {'comparison': compare}  # type: Dict[str, Any]
    if not trial:
        trivial = resolution.trivial_rep_report(ctx)
        complement = decompletion.complement_cohomology_bound(rep)
        checks['trivial_rep'] = trivial['passed']
        checks['complement_bound'] = complement['passed']
        values['trivial_rep'] = trivial
        values['complement'] = complement
    return checks, values, []


@register('resolution')
def resolution_suite(experiment, ctx, rng, trial):  # pylint: disable=unused-argument
    # type: (Experiment, PrecisionContext, np.random.Generator, int) -> TrialOutcome
    """Torsion of the trivial complexes across the rho sample."""
    sample = experiment.rho_values(ctx) or None
    report = resolution.resolution_report(ctx, sample)
    checks = {
        'torsion': all(entry['bound_ok'] and entry['expected_ok'] and entry['h0_ok'] for entry in report['entries']),
        'trend': report['trend_ok'],
        'transitions': all(item['ok'] for item in report['transitions']),
    }
    return checks, {'resolution': report}, []


@register('descent')
def descent_suite(experiment, ctx, rng, trial):  # pylint: disable=unused-argument, protected-access
    # type: (Experiment, PrecisionContext, np.random.Generator, int) -> TrialOutcome
    """Conjugate a chart representation by a random perfectoid unit and descend it back."""
    chart = rep_mod.random_rep(ctx, rng, experiment._rank)
    index = ctx.smallness_index if experiment._conjugator is None else experiment._conjugator
    unit = decompletion.random_conjugator(ctx, rng, experiment._rank, index)
    perfectoid = decompletion.conjugate(chart, unit)
    a = ctx.a if experiment._descent_a is None else experiment._descent_a

    try:
        state = decompletion.decomplete_rep(perfectoid, a)
    except exception.HypothesisCheckError as error:
        values = {'hypothesis_check_failure': {
            'name': error.name,
            'observed': fraction_to_json(error.observed),
            'required': fraction_to_json(error.required),
        }}
        return {'hypotheses_reported': True}, values, [str(error)]
    except exception.ContractionFailure as error:
        values = {'contraction_failure': {'steps': len(error.trace)}}
        return {'contracted': False}, values, []

    margin = a - ctx.r
    steps = [nu for _, nu, _ in state.trace]
    checks = {
        'descended': state.is_descended(),
        'iterations': len(state.trace) <= int(math.ceil(ctx.N / margin)),
        'monotone': all(x < y for x, y in zip(steps, steps[1:])),
        'conjugation': at_least(decompletion.conjugation_defect(perfectoid, state), ctx.N - 2),
    }
    values = {'trace': state.trace_to_json(), 'conjugator_valuation_index': index}  # type: Dict[str, Any]
    if checks['descended']:
        upgrade = decompletion.verify_smallness_upgrade(state.rep(), a)
        checks['smallness_upgrade'] = upgrade['passed']
        values['smallness_upgrade'] = upgrade
    return checks, values, []


@register('functoriality')
def functoriality_suite(experiment, ctx, rng, trial):  # pylint: disable=unused-argument
    # type: (Experiment, PrecisionContext, np.random.Generator, int) -> TrialOutcome
    """Tensor products and duals against the functors."""
    first = rep_mod.random_rep(ctx, rng, experiment._rank)  # pylint: disable=protected-access
    second = rep_mod.random_rep(ctx, rng, 1)
    result = simpson.functoriality_check(first, second)
    return {'functoriality': result['passed']}, result, []
