import json
import tempfile
from io import StringIO
from pathlib import Path

from django.conf import settings
from django.core.exceptions import ValidationError
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import TestCase

from .config import RunConfig
from .models import AnalysisRun

FILLED_CIRCLE = '0 ; 0\n1 ; 0\n2 ; 0\n0 1 ; 1\n1 2 ; 1\n0 2 ; 1\n0 1 2 ; 2\n'


class RunCommandTestCase(TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)
        self.out = self.dir / 'out'

    def tearDown(self):
        self.tmp.cleanup()

    def write(self, name, text):
        path = self.dir / name
        path.write_text(text)
        return str(path)

    def call(self, *args, **kwargs):
        stdout, stderr = StringIO(), StringIO()
        call_command(*args, '--output-dir', str(self.out), stdout=stdout, stderr=stderr, **kwargs)
        return stdout.getvalue(), stderr.getvalue()


class BarcodeCommandTests(RunCommandTestCase):

    def test_two_points(self):
        path = self.write('pts.csv', '0,0\n1,0\n')
        stdout, _ = self.call('barcode', path)
        diagram = json.loads((self.out / 'pts.diagram.json').read_text())
        self.assertEqual(diagram['0'], [[0.0, 1.0], [0.0, 'inf']])
        self.assertTrue((self.out / 'pts.barcode.svg').exists())
        self.assertIn('Wrote', stdout)
        run = AnalysisRun.objects.get()
        self.assertEqual(run.command, 'barcode')
        self.assertEqual(run.status, 'completed')
        self.assertEqual(run.summary, {'pts': {'0': 2}})

    def test_radius_convention_halves_values(self):
        path = self.write('pts.csv', '0,0\n1,0\n')
        self.call('barcode', path, '--convention', 'radius')
        diagram = json.loads((self.out / 'pts.diagram.json').read_text())
        self.assertEqual(diagram['0'], [[0.0, 0.5], [0.0, 'inf']])

    def test_empty_input_is_recorded_as_failed(self):
        path = self.write('empty.csv', '')
        with self.assertRaises(CommandError):
            self.call('barcode', path)
        run = AnalysisRun.objects.get()
        self.assertEqual(run.status, 'failed')
        self.assertIn('error', run.summary)

    def test_no_record(self):
        path = self.write('pts.csv', '0,0\n1,0\n')
        self.call('barcode', path, '--no-record')
        self.assertFalse(AnalysisRun.objects.exists())


class ValidateCommandTests(RunCommandTestCase):

    def test_missing_face(self):
        path = self.write('bad.txt', '0 ; 0\n0 1 ; 1\n')
        _, stderr = self.call('validate', path)
        self.assertIn('missing_face', stderr)
        self.assertIn('line 2', stderr)
        with self.assertRaises(CommandError):
            self.call('validate', path, '--strict')

    def test_valid_file(self):
        path = self.write('circle.txt', FILLED_CIRCLE)
        _, stderr = self.call('validate', path, '--strict')
        self.assertEqual(stderr, '')


class LedgerCommandTests(RunCommandTestCase):

    def test_writes_ledger(self):
        path = self.write('circle.txt', FILLED_CIRCLE)
        self.call('ledger', path)
        self.assertIn('"bars"', (self.out / 'circle.ledger.json').read_text())


class DistancesCommandTests(RunCommandTestCase):

    def test_identical_inputs(self):
        a = self.write('a.txt', FILLED_CIRCLE)
        b = self.write('b.txt', FILLED_CIRCLE)
        self.call('distances', a, b)
        report = json.loads((self.out / 'a-b.bounds.json').read_text())
        lower = report['fields']['2']['lower']
        self.assertTrue(lower)
        for bound in lower.values():
            self.assertEqual(bound['value'], 0.0)

    def test_default_fields_follow_the_prime_set(self):
        a = self.write('a.txt', FILLED_CIRCLE)
        b = self.write('b.txt', FILLED_CIRCLE)
        self.call('distances', a, b)
        report = json.loads((self.out / 'a-b.bounds.json').read_text())
        self.assertEqual(set(report['fields']), {'2', '3', '0'})
        self.assertIn('steenrod', report['fields']['2']['lower'])
        self.assertNotIn('steenrod', report['fields']['3']['lower'])
        self.assertNotIn('steenrod', report['fields']['0']['lower'])
        combined = report['combined']
        self.assertEqual(combined['P']['value'], 0.0)
        self.assertEqual(combined['P']['certificate']['primes'], [2, 3, 0])
        self.assertEqual(combined['P_upper']['kind'], 'upper')
        self.assertEqual(combined['pinfty_qinfty_upper']['certificate']['primes'], [2, 3])

    def test_odd_field_skips_squares(self):
        a = self.write('a.txt', FILLED_CIRCLE)
        b = self.write('b.txt', FILLED_CIRCLE)
        self.call('distances', a, b, '--characteristic', '3')
        report = json.loads((self.out / 'a-b.bounds.json').read_text())
        self.assertEqual(set(report['fields']['3']['lower']), {'grvect', 'cup', 'ainfty', 'combined'})

    def test_several_fields_are_combined(self):
        a = self.write('a.txt', FILLED_CIRCLE)
        b = self.write('b.txt', FILLED_CIRCLE)
        self.call('distances', a, b, '--characteristic', '2', '--characteristic', '3',
                  '--structures', 'cup')
        report = json.loads((self.out / 'a-b.bounds.json').read_text())
        self.assertEqual(set(report['fields']), {'2', '3'})
        self.assertIn('combined', report)

    def test_odd_steenrod(self):
        a = self.write('a.txt', FILLED_CIRCLE)
        b = self.write('b.txt', FILLED_CIRCLE)
        with self.assertRaisesMessage(CommandError, 'unsupported: odd-p Steenrod action'):
            self.call('distances', a, b, '--characteristic', '3', '--structures', 'steenrod')


class StabilityCommandTests(RunCommandTestCase):

    def test_jittered_copy(self):
        path = self.write('pts.csv', '0,0\n1,0\n0,1\n1,1\n')
        self.call('stability', path, '--jitter', '0.01', '--max-dim', '1')
        report = json.loads((self.out / 'pts.stability.json').read_text())
        self.assertTrue(report['passed'])
        self.assertLessEqual(report['distortion'], 0.02 + 1e-12)

    def test_needs_a_second_cloud(self):
        path = self.write('pts.csv', '0,0\n1,0\n')
        with self.assertRaises(CommandError):
            self.call('stability', path)


class AnalysisRunTests(TestCase):

    def test_runs_are_append_only(self):
        run = AnalysisRun.record('barcode', 'completed', {}, {'pts': {'0': 1}})
        run.summary = {}
        with self.assertRaises(ValidationError):
            run.save()


class RunConfigTests(TestCase):

    def test_defaults_from_settings(self):
        config = RunConfig(command='barcode')
        self.assertEqual(config.characteristics, [2])
        self.assertEqual(config.convention, 'diameter')
        self.assertEqual(config.as_dict()['max_scale'], 'inf')

    def test_arity_out_of_range(self):
        with self.assertRaises(ValidationError) as ctx:
            RunConfig(command='ledger', max_arity=9)
        self.assertEqual(ctx.exception.code, 'arity')

    def test_unknown_convention(self):
        with self.assertRaises(ValidationError) as ctx:
            RunConfig(command='barcode', convention='volume')
        self.assertEqual(ctx.exception.code, 'parse')

    def test_input_kind_from_suffix(self):
        config = RunConfig(command='barcode')
        self.assertEqual(config.input_kind('x.csv'), 'cloud')
        self.assertEqual(config.input_kind('x.txt'), 'filtration')

    def test_prime_set_defaults(self):
        config = RunConfig.from_options('distances', {}, prime_set=True)
        self.assertEqual(config.characteristics, [2, 3, 0])
        self.assertEqual(config.field.characteristic, 2)
        with self.settings(PCS_PRIME_SET=[2, 0]):
            self.assertEqual(RunConfig.from_options('distances', {}, prime_set=True).characteristics, [2, 0])
        explicit = RunConfig.from_options('distances', {'characteristic': [5]}, prime_set=True)
        self.assertEqual(explicit.characteristics, [5])

    def test_explicit_zero_seed(self):
        self.assertEqual(RunConfig.from_options('barcode', {'seed': 0}).seed, 0)
        self.assertEqual(RunConfig.from_options('barcode', {}).seed, settings.PCS_DEFAULT_SEED)
