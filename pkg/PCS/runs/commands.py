import json
import logging

import numpy as np
from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError

from .config import CONVENTION_CHOICES, INPUT_KIND_CHOICES, RunConfig
from .models import AnalysisRun

logger = logging.getLogger(__name__)


class RunCommand(BaseCommand):
    """
    Base for the PCS commands: shared options, validation errors turned
    into CommandError, and one AnalysisRun row per invocation.
    Subclasses implement compute(config, options) -> (summary, outputs).
    """
    name = ''
    uses_prime_set = False

    def add_arguments(self, parser):
        parser.add_argument('--characteristic', type=int, action='append',
                            help='Field characteristic, a prime or 0; repeat for several fields')
        parser.add_argument('--kind', choices=[k for k, _ in INPUT_KIND_CHOICES],
                            help='Input kind; .csv files default to clouds, the rest to filtrations')
        parser.add_argument('--max-dim', type=int, default=2)
        parser.add_argument('--max-scale', type=float, default=float('inf'))
        parser.add_argument('--max-arity', type=int)
        parser.add_argument('--convention', choices=[c for c, _ in CONVENTION_CHOICES])
        parser.add_argument('--output-dir')
        parser.add_argument('--seed', type=int)
        parser.add_argument('--no-record', action='store_true', help='Do not store an AnalysisRun row')

    def inputs(self, options):
        return options.get('inputs') or []

    def compute(self, config, options):
        raise NotImplementedError

    def handle(self, *args, **options):
        record = not options.get('no_record')
        try:
            config = RunConfig.from_options(self.name, options, self.inputs(options),
                                            prime_set=self.uses_prime_set)
            summary, outputs = self.compute(config, options)
        except ValidationError as exc:
            message = '; '.join(exc.messages)
            logger.error('%s failed: %s', self.name, message)
            if record:
                AnalysisRun.record(self.name, 'failed', self._arguments(options), {'error': message})
            raise CommandError(message) from exc
        except OSError as exc:
            if record:
                AnalysisRun.record(self.name, 'failed', self._arguments(options), {'error': str(exc)})
            raise CommandError(str(exc)) from exc
        if record:
            AnalysisRun.record(self.name, 'completed', config.as_dict(), summary, outputs)
        for path in outputs:
            self.stdout.write(f'Wrote {path}')
        self.stdout.write(json.dumps(summary, sort_keys=True, default=str))

    def rng(self, config):
        return np.random.default_rng(config.seed)

    def _arguments(self, options):
        keep = ('inputs', 'characteristic', 'kind', 'max_dim', 'max_scale', 'max_arity',
                'convention', 'output_dir', 'seed')
        arguments = {k: options.get(k) for k in keep}
        if arguments['max_scale'] == float('inf'):
            arguments['max_scale'] = 'inf'
        return json.loads(json.dumps(arguments, default=str))
