from runs.commands import RunCommand
from runs.pipeline import run_barcode


class Command(RunCommand):
    help = 'Write the persistence diagram (JSON) and barcode (SVG) of each input'
    name = 'barcode'

    def add_arguments(self, parser):
        parser.add_argument('inputs', nargs='+', help='Point cloud (.csv, .json) or filtration file')
        super().add_arguments(parser)

    def compute(self, config, options):
        return run_barcode(config)
