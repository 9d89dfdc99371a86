import json
import os
import shutil
import tempfile
import unittest
import sys

sys.path.insert(0, os.path.normpath(os.path.dirname(__file__)).rsplit(os.path.sep, 1)[0])
from padic_simpson import exception, experiment
from padic_simpson.cli import main
from padic_simpson.cyclotomic import make_context
from padic_simpson.experiment import REPORT_SCHEMA, ContextInstance, Experiment, load_instance


SMALL = dict(p=3, n=1, N=6, D=1, G=3, a=1)

DESCENT = dict(p=3, n=1, N=4, D=1, G=2, a=1)

SMALL_ARGS = ['--p', '3', '--n', '1', '--N', '6', '--D', '1', '--G', '3', '--a', '1']

DESCENT_ARGS = ['--p', '3', '--n', '1', '--N', '4', '--D', '1', '--G', '2', '--a', '1']


class TestBuilder(unittest.TestCase):

    def test_str(self):
        stmt = experiment('descent').where(**DESCENT).trials(2)
        self.assertEqual(str(stmt), 'descent p=3 n=1 N=4 D=1 G=2 a=1 l=1 trials=2 seed=0')
        self.assertEqual(str(stmt.rho('rho_k', 'rho_k*pi')),
                         'descent p=3 n=1 N=4 D=1 G=2 a=1 l=1 trials=2 seed=0 rho=rho_k,rho_k*pi')

    def test_copy_on_write(self):
        base = experiment('roundtrip')
        changed = base.where(p=3).rank(2).seed(5)
        self.assertEqual(str(base), 'roundtrip l=1 trials=1 seed=0')
        self.assertEqual(str(changed), 'roundtrip p=3 l=2 trials=1 seed=5')

    def test_unknown_suite(self):
        with self.assertRaises(exception.ConfigError):
            experiment('monodromy')

    def test_invalid_values(self):
        stmt = experiment('roundtrip')
        with self.assertRaises(exception.ConfigError):
            stmt.where(q=3)
        with self.assertRaises(exception.ConfigError):
            stmt.rank(0)
        with self.assertRaises(exception.ConfigError):
            stmt.trials(0)
        with self.assertRaises(exception.ConfigError):
            stmt.seed(-1)

    def test_unbound(self):
        with self.assertRaises(exception.UnboundContextError):
            experiment('identities').execute()

    def test_base_execute(self):
        with self.assertRaises(NotImplementedError):
            ContextInstance('identities').execute(make_context(**SMALL))

    def test_context_overrides(self):
        ctx = make_context(**SMALL)
        stmt = experiment('identities').options(context=ctx)
        self.assertEqual(stmt.config()['context']['N'], 6)
        self.assertEqual(stmt.where(N=8).config()['context']['N'], 8)
        self.assertEqual(stmt.config(make_context(**DESCENT))['context']['N'], 4)

    def test_invalid_context(self):
        with self.assertRaises(exception.SmallnessHypothesisError):
            experiment('identities').where(p=3, a='1/2').execute()


class TestExecute(unittest.TestCase):

    def test_identities(self):
        report = experiment('identities').options(context=make_context(**SMALL)).execute()
        self.assertTrue(report.passed)
        self.assertEqual(report.summary, {'passed': 1, 'failed': 0, 'warnings': 0})
        self.assertIn('identities: 1 passed', report.table())

    def test_deterministic_payload(self):
        stmt = experiment('descent').where(**DESCENT).trials(2).seed(3)
        first = stmt.execute()
        second = stmt.execute()
        self.assertEqual(json.dumps(first.payload(), sort_keys=True), json.dumps(second.payload(), sort_keys=True))
        self.assertTrue(first.passed)
        self.assertNotIn('timing', first.payload())
        self.assertIn('timing', first.to_json())

    def test_descent_negative_control(self):
        report = experiment('descent').where(**DESCENT).descent(conjugator=1).execute()
        self.assertTrue(report.passed)
        self.assertEqual(report.summary['warnings'], 1)
        failure = report.trials[0]['values']['hypothesis_check_failure']
        self.assertEqual(failure['name'], 'complement part')
        self.assertEqual(failure['required'], [3, 2])

    def test_roundtrip_skips_large_rho(self):
        stmt = experiment('roundtrip').where(**SMALL).trivial().rho('rho_k', 'p*rho_k')
        report = stmt.execute()
        self.assertTrue(report.passed)
        self.assertEqual(report.trials[0]['status'], 'warning')
        self.assertIn('invariant_span', report.trials[0]['checks'])
        self.assertEqual(len(report.trials[0]['warnings']), 1)

    def test_resolution(self):
        report = experiment('resolution').where(p=5, n=1, N=6, D=1, G=4).execute()
        self.assertTrue(report.passed)


class TestFiles(unittest.TestCase):

    def setUp(self):
        self.directory = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.directory)

    def test_gen_is_reproducible(self):
        stmt = experiment('roundtrip').where(**SMALL).trials(2).seed(9)
        first = stmt.gen(os.path.join(self.directory, 'first'))
        second = stmt.gen(os.path.join(self.directory, 'second'))
        self.assertEqual([os.path.basename(path) for path in first], ['instance-0000.json', 'instance-0001.json'])
        for x, y in zip(first, second):
            with open(x, 'rb') as left, open(y, 'rb') as right:
                self.assertEqual(left.read(), right.read())

        ctx, rep, higgs = load_instance(first[0])
        self.assertEqual(ctx, make_context(**SMALL))
        self.assertEqual(rep.l, 1)
        self.assertEqual(higgs.d, 1)

    def test_gen_needs_directory(self):
        with self.assertRaises(exception.ConfigError):
            experiment('roundtrip').where(**SMALL).gen()

    def test_instances(self):
        directory = os.path.join(self.directory, 'instances')
        experiment('roundtrip').where(**SMALL).trivial().trials(2).gen(directory)
        report = experiment('roundtrip').where(**SMALL).instances(directory).execute()
        self.assertEqual(report.config['trials'], 2)
        self.assertEqual(len(report.trials), 2)
        self.assertTrue(report.passed)

        with self.assertRaises(exception.ConfigError):
            experiment('roundtrip').where(**dict(SMALL, N=7)).instances(directory).execute()
        with self.assertRaises(exception.ConfigError):
            experiment('roundtrip').where(**SMALL).instances(self.directory).execute()

    def test_report_file(self):
        path = os.path.join(self.directory, 'reports', 'identities.json')
        experiment('identities').where(**SMALL).output(path).run()
        with open(path) as handle:
            data = json.load(handle)
        self.assertEqual(data['schema'], REPORT_SCHEMA)
        self.assertTrue(data['passed'])
        with self.assertRaises(exception.ConfigError):
            load_instance(path)


class TestCommandLine(unittest.TestCase):

    def setUp(self):
        self.directory = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.directory)

    def test_success(self):
        path = os.path.join(self.directory, 'report.json')
        self.assertEqual(main(['identities'] + SMALL_ARGS + ['--out', path]), 0)
        self.assertTrue(os.path.exists(path))

    def test_config_error(self):
        self.assertEqual(main(['roundtrip', '--p', '3']), 2)
        self.assertEqual(main(['gen'] + SMALL_ARGS), 2)

    def test_gen(self):
        directory = os.path.join(self.directory, 'instances')
        self.assertEqual(main(['gen'] + SMALL_ARGS + ['--trivial', '--trials', '2', '--out', directory]), 0)
        self.assertEqual(sorted(os.listdir(directory)), ['instance-0000.json', 'instance-0001.json'])

    def test_descent_warning_exit(self):
        self.assertEqual(main(['descent'] + DESCENT_ARGS + ['--conjugator-valuation', '1']), 0)

    def test_builder(self):
        self.assertIsInstance(experiment('functoriality'), Experiment)


if __name__ == '__main__':
    unittest.main()
