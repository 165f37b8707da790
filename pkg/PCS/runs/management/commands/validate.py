from django.core.exceptions import ValidationError

from runs.commands import RunCommand
from runs.pipeline import run_validate


class Command(RunCommand):
    help = 'Check filtration files against the finite filtered data conditions'
    name = 'validate'

    def add_arguments(self, parser):
        parser.add_argument('inputs', nargs='+', help='Filtration files')
        parser.add_argument('--strict', action='store_true', help='Fail when any file is invalid')
        super().add_arguments(parser)

    def compute(self, config, options):
        summary = run_validate(config)
        for path, result in summary.items():
            for violation in result['violations']:
                lines = ', '.join(str(n) for n in violation['lines'])
                self.stderr.write(f"{path}: condition {violation['condition']} "
                                  f"({violation['code']}) {violation['message']}"
                                  + (f' [line {lines}]' if lines else ''))
        if options['strict'] and not all(result['valid'] for result in summary.values()):
            raise ValidationError('Invalid filtration data.', code='monotonicity')
        return summary, []
