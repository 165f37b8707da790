from django.core.exceptions import ValidationError

from distances.bounds import STRUCTURE_CHOICES, STRUCTURE_STEENROD
from runs.commands import RunCommand
from runs.pipeline import run_distances

DEFAULT_STRUCTURES = ['cup', 'ainfty', 'steenrod', 'combined']


class Command(RunCommand):
    help = 'Lower and upper bounds on the refined interleaving distances between two inputs'
    name = 'distances'
    # Without --characteristic every prime of PCS_PRIME_SET and 0 is used
    uses_prime_set = True

    def add_arguments(self, parser):
        parser.add_argument('inputs', nargs=2, help='Two point clouds or filtration files')
        parser.add_argument('--structures', nargs='+', choices=[s for s, _ in STRUCTURE_CHOICES],
                            help=f"Default: {' '.join(DEFAULT_STRUCTURES)}")
        super().add_arguments(parser)

    def compute(self, config, options):
        structures = options.get('structures') or DEFAULT_STRUCTURES
        requested = options.get('structures') or []
        if STRUCTURE_STEENROD in requested and all(f.characteristic != 2 for f in config.fields):
            raise ValidationError('unsupported: odd-p Steenrod action', code='unsupported')
        return run_distances(config, structures)
