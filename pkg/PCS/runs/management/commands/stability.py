from django.core.exceptions import ValidationError

from runs.commands import RunCommand
from runs.pipeline import run_stability


class Command(RunCommand):
    help = 'Compare every lower bound between two Rips filtrations with a correspondence distortion'
    name = 'stability'

    def add_arguments(self, parser):
        parser.add_argument('inputs', nargs='+', help='A point cloud, optionally a second one')
        parser.add_argument('--jitter', type=float, help='Compare with a copy moved by at most this much')
        parser.add_argument('--correspondence', help='CSV of index pairs; defaults to the identity')
        super().add_arguments(parser)

    def compute(self, config, options):
        if len(config.inputs) > 2:
            raise ValidationError('At most two clouds.', code='parse')
        if len(config.inputs) == 1 and options['jitter'] is None:
            raise ValidationError('Give a second cloud or --jitter.', code='empty_input')
        summary, outputs = run_stability(config, options['jitter'], options['correspondence'],
                                         self.rng(config))
        if not summary['passed']:
            self.stderr.write(f"Stability violated by {', '.join(summary['violations'])}")
        return summary, outputs
