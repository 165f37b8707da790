import json
import logging
import math
from dataclasses import dataclass, field as dataclass_field

from django.conf import settings

from chains.fields import Field
from complexes.builders import build_rips
from complexes.clouds import Correspondence, distortion

from .bounds import hierarchy_lower_bounds
from .ledger import ledger_from_complex

logger = logging.getLogger(__name__)


@dataclass
class StabilityReport:
    distortion: float
    bounds: dict = dataclass_field(default_factory=dict)
    violations: list = dataclass_field(default_factory=list)
    inconclusive: list = dataclass_field(default_factory=list)

    @property
    def passed(self):
        return not self.violations

    def to_json(self, indent=None):
        return json.dumps({
            'distortion': self.distortion,
            'bounds': {k: 'inf' if math.isinf(v) else v for k, v in self.bounds.items()},
            'violations': self.violations,
            'inconclusive': self.inconclusive,
            'passed': self.passed,
        }, indent=indent, sort_keys=True)


def stability_check(x, y, corr=None, max_dim=2, field=None, max_arity=2):
    """
    Every lower bound between the Rips filtrations of two clouds against
    the distortion of a correspondence, which dominates twice the
    Gromov-Hausdorff distance.
    """
    field = field or Field.default()
    corr = corr or Correspondence.identity(len(x))
    corr.validate(len(x), len(y))
    dis = distortion(corr, x, y)
    lx = ledger_from_complex(build_rips(x, max_dim=max_dim), field, max_arity, name='X')
    ly = ledger_from_complex(build_rips(y, max_dim=max_dim), field, max_arity, name='Y')
    bounds = hierarchy_lower_bounds(lx, ly)
    tolerance = getattr(settings, 'PCS_TOLERANCE', 1e-9)
    report = StabilityReport(dis)
    for name, bound in bounds.items():
        report.bounds[name] = bound.value
        if bound.inconclusive:
            report.inconclusive.append(name)
        if bound.value > dis + tolerance:
            report.violations.append(name)
    if report.violations:
        logger.error('Stability violated by %s: bounds %s, distortion %s',
                     report.violations, report.bounds, dis)
    else:
        logger.info('Stability holds: bounds %s <= distortion %s', report.bounds, dis)
    return report
