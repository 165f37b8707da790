from runs.commands import RunCommand
from runs.pipeline import run_ledger


class Command(RunCommand):
    help = 'Write the product ledger (cup, m_n, Sq^k in bar coordinates) of each input'
    name = 'ledger'

    def add_arguments(self, parser):
        parser.add_argument('inputs', nargs='+', help='Point cloud (.csv, .json) or filtration file')
        super().add_arguments(parser)

    def compute(self, config, options):
        return run_ledger(config)
