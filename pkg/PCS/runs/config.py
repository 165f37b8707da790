import math
from dataclasses import asdict, dataclass, field as dataclass_field
from pathlib import Path

from django.conf import settings
from django.core.exceptions import ValidationError

from ainfty.transfer import MAX_ARITY, MIN_ARITY
from chains.fields import Field

DIAMETER = 'diameter'
RADIUS = 'radius'
CONVENTION_CHOICES = [
    (DIAMETER, 'Rips scale is the simplex diameter'),
    (RADIUS, 'Rips scale is half the simplex diameter'),
]

CLOUD = 'cloud'
FILTRATION = 'filtration'
INPUT_KIND_CHOICES = [
    (CLOUD, 'Point cloud (CSV or JSON rows)'),
    (FILTRATION, 'Filtration file (text or JSON)'),
]


def prime_set_characteristics():
    """PCS_PRIME_SET followed by characteristic 0, without repeats."""
    primes = list(getattr(settings, 'PCS_PRIME_SET', [2, 3])) + [0]
    return list(dict.fromkeys(primes))


@dataclass
class RunConfig:
    """Options shared by the commands, filled from settings where not given."""
    command: str
    inputs: list = dataclass_field(default_factory=list)
    characteristics: list = dataclass_field(default_factory=list)
    kind: str = ''
    max_dim: int = 2
    max_scale: float = math.inf
    max_arity: int = 0
    convention: str = ''
    output_dir: str = ''
    tolerance: float = 0.0
    seed: int = None

    def __post_init__(self):
        if not self.characteristics:
            self.characteristics = [getattr(settings, 'PCS_FIELD_CHARACTERISTIC', 2)]
        self.max_arity = self.max_arity or getattr(settings, 'PCS_MAX_ARITY', 3)
        self.convention = self.convention or getattr(settings, 'PCS_CONVENTION', DIAMETER)
        self.output_dir = str(self.output_dir or getattr(settings, 'PCS_OUTPUT_DIR', 'output'))
        self.tolerance = self.tolerance or getattr(settings, 'PCS_TOLERANCE', 1e-9)
        if self.seed is None:
            self.seed = getattr(settings, 'PCS_DEFAULT_SEED', 20240601)
        self.inputs = [str(p) for p in self.inputs]
        self.validate()

    @classmethod
    def from_options(cls, command, options, inputs=(), prime_set=False):
        characteristics = list(options.get('characteristic') or [])
        if not characteristics and prime_set:
            characteristics = prime_set_characteristics()
        return cls(
            command=command,
            inputs=list(inputs),
            characteristics=characteristics,
            kind=options.get('kind') or '',
            max_dim=options.get('max_dim', 2),
            max_scale=options.get('max_scale', math.inf),
            max_arity=options.get('max_arity') or 0,
            convention=options.get('convention') or '',
            output_dir=options.get('output_dir') or '',
            seed=options.get('seed'),
        )

    def validate(self):
        self.fields = [Field(p) for p in self.characteristics]
        if not MIN_ARITY <= self.max_arity <= MAX_ARITY:
            raise ValidationError('max_arity must lie in %(low)s..%(high)s.', code='arity',
                                  params={'low': MIN_ARITY, 'high': MAX_ARITY})
        if self.convention not in dict(CONVENTION_CHOICES):
            raise ValidationError('Unknown convention %(c)r.', code='parse', params={'c': self.convention})
        if self.kind and self.kind not in dict(INPUT_KIND_CHOICES):
            raise ValidationError('Unknown input kind %(k)r.', code='parse', params={'k': self.kind})
        if self.max_dim < 0:
            raise ValidationError('max_dim must be nonnegative.', code='dimension_cap')

    @property
    def field(self):
        return self.fields[0]

    def input_kind(self, path):
        if self.kind:
            return self.kind
        return CLOUD if Path(path).suffix.lower() == '.csv' else FILTRATION

    @property
    def output_path(self):
        path = Path(self.output_dir)
        path.mkdir(parents=True, exist_ok=True)
        return path

    def as_dict(self):
        data = asdict(self)
        data['max_scale'] = 'inf' if math.isinf(self.max_scale) else self.max_scale
        return data
