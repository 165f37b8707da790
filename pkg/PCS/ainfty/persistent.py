import logging

from django.core.exceptions import ValidationError

from chains.cochains import CochainComplex
from chains.sparse import SparseMatrix

from .transfer import AInftyMorphism, default_max_arity, transfer_ainfty

logger = logging.getLogger(__name__)


class PersistentAInfty:
    """
    Transferred structures at each critical value of a filtration.

    stage_maps[j] is the restriction H^(j+1) -> H^j, the composite
    p_j o (restriction of cochains) o i_(j+1).
    """

    def __init__(self, times, snapshots, stage_maps, contractions=None):
        self.times = list(times)
        self.snapshots = list(snapshots)
        self.stage_maps = list(stage_maps)
        self.contractions = list(contractions or [])

    def __len__(self):
        return len(self.snapshots)

    def __repr__(self):
        return f'PersistentAInfty({len(self.snapshots)} snapshots)'

    @property
    def field(self):
        return self.snapshots[0].field if self.snapshots else None

    def snapshot_index(self, t):
        j = None
        for k, value in enumerate(self.times):
            if value <= t:
                j = k
        return j

    def span_map(self, i, j):
        """Composite restriction H^j -> H^i for i <= j."""
        if i > j:
            raise ValidationError('Restrictions run from later to earlier stages.', code='basis_mismatch')
        basis = self.snapshots[j].basis
        result = SparseMatrix.identity(self.snapshots[j].field, basis)
        for k in range(j - 1, i - 1, -1):
            result = self.stage_maps[k] @ result
        return result

    def stage_morphism(self, j):
        """The stage map j as an A-infinity morphism with a single linear component."""
        return AInftyMorphism.from_linear_map(self.snapshots[j + 1], self.snapshots[j], self.stage_maps[j])


def attach_cup_products(ptd):
    """Dual transfer data with the cup product of each stage attached."""
    dual = ptd if ptd.dual else ptd.dualize()
    for t, stage in zip(dual.times, dual.stages):
        cochains = CochainComplex(dual.complex, t, dual.field)
        stage.product = cochains.cup
        stage.unit = cochains.unit()
        stage.cochains = cochains
    return dual


def persistent_ainfty(ptd, max_arity=None):
    """Transfer the cup product at every stage and record the restriction maps."""
    max_arity = default_max_arity() if max_arity is None else max_arity
    dual = attach_cup_products(ptd)
    snapshots = [transfer_ainfty(stage, max_arity) for stage in dual.stages]
    stage_maps = [dual.induced_map(j) for j in range(len(dual.stages) - 1)]
    logger.info('Persistent A-infinity structure: %d snapshots, arity %d', len(snapshots), max_arity)
    return PersistentAInfty(dual.times, snapshots, stage_maps, dual.stages)


def constant_persistent_ainfty(contraction, max_arity=None, time=0.0):
    """A single-stage structure from a contracted model."""
    return PersistentAInfty([time], [transfer_ainfty(contraction, max_arity)], [], [contraction])
