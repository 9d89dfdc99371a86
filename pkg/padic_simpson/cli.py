# pylint: disable=consider-using-f-string
"""Command line entry point.

Example:
    $ simpson roundtrip --p 5 --n 2 --N 10 --d 2 --l 2 --trials 20 --seed 42 --out report.json
    $ simpson gen --l 1 --trivial --out instances
    $ simpson roundtrip --instances instances
"""

import argparse
import logging
import sys

from . import exception
from .experiment import SUITES, Experiment
from .type_hints import TYPE_CHECKING

if TYPE_CHECKING:
    from typing import List, Optional


logger = logging.getLogger(__name__)


def parse_args(argv=None):
    # type: (Optional[List[str]]) -> argparse.Namespace
    parser = argparse.ArgumentParser(prog='simpson', description='Run p-adic Simpson verification suites.')
    parser.add_argument('suite', choices=sorted(SUITES) + ['gen'],
                        help='Suite to run, or "gen" to write instance files.')
    parser.add_argument('--p', type=int, default=5, help='Odd prime (default: 5)')
    parser.add_argument('--n', type=int, default=2, help='Cyclotomic level (default: 2)')
    parser.add_argument('--N', type=int, default=10, help='Coefficient precision p^N (default: 10)')
    parser.add_argument('--D', type=int, default=2, help='Laurent exponent bound (default: 2)')
    parser.add_argument('--G', type=int, default=6, help='Y-degree bound (default: 6)')
    parser.add_argument('--d', type=int, default=1, help='Number of variables (default: 1)')
    parser.add_argument('--a', default='1/2', help='Smallness exponent as num/den (default: 1/2)')
    parser.add_argument('--l', type=int, default=1, help='Rank of generated instances (default: 1)')
    parser.add_argument('--trials', type=int, default=1)
    parser.add_argument('--seed', type=int, default=0)
    parser.add_argument('--rho', nargs='*', default=[],
                        help='Period lattice scales such as rho_k, rho_k*pi^2 or p*rho_k.')
    parser.add_argument('--out', default=None,
                        help='Report file, or the instance directory for gen.')
    parser.add_argument('--instances', default=None,
                        help='Directory of instance files to use for roundtrip.')
    parser.add_argument('--trivial', action='store_true', help='Use trivial instances.')
    parser.add_argument('--descent-a', default=None,
                        help='Smallness exponent for the descent margin (default: --a).')
    parser.add_argument('--conjugator-valuation', type=int, default=None,
                        help='Power of pi in the descent conjugator (default: smallness index).')
    parser.add_argument('--verbose', action='store_true', help='Log progress.')
    parser.add_argument('--debug', action='store_true', help='Log everything.')
    return parser.parse_args(argv)


def build(args):
    # type: (argparse.Namespace) -> Experiment
    """Turn parsed arguments into an experiment."""
    suite = 'roundtrip' if args.suite == 'gen' else args.suite
    return (
        Experiment(suite)
        .where(p=args.p, n=args.n, N=args.N, D=args.D, G=args.G, d=args.d, a=args.a)
        .rank(args.l)
        .trials(args.trials)
        .seed(args.seed)
        .rho(*args.rho)
        .output(args.out)
        .instances(args.instances)
        .trivial(args.trivial)
        .descent(a=args.descent_a, conjugator=args.conjugator_valuation)
    )


def main(argv=None):
    # type: (Optional[List[str]]) -> int
    """Run a suite; 0 on success, 1 on a failed check, 2 on a config error."""
    args = parse_args(argv)
    if args.debug:
        level = logging.DEBUG
    elif args.verbose:
        level = logging.INFO
    else:
        level = logging.WARNING
    logging.basicConfig(level=level, format='%(asctime)s %(name)s %(levelname)s: %(message)s')

    try:
        stmt = build(args)
        if args.suite == 'gen':
            paths = stmt.gen()
            print('wrote {} instance files to {}'.format(len(paths), args.out))
            return 0
        report = stmt.run()
    except exception.ConfigError as error:
        logger.error('%s', error)
        print('[error] {}'.format(error), file=sys.stderr)
        return 2

    print(report.table())
    return 0 if report.passed else 1


if __name__ == '__main__':
    sys.exit(main())
