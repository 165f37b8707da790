import logging
import math
from dataclasses import dataclass, field
from itertools import combinations

from django.core.exceptions import ValidationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class Simplex:
    """A simplex of a filtration: sorted vertex ids, entry value, position in the total order."""
    order_index: int
    vertices: tuple
    value: float

    @property
    def dimension(self):
        return len(self.vertices) - 1

    def faces(self):
        """Codimension-one faces, in the order of the removed vertex."""
        if len(self.vertices) <= 1:
            return []
        return [self.vertices[:k] + self.vertices[k + 1:] for k in range(len(self.vertices))]


def filtration_key(vertices, value):
    return (value, len(vertices), tuple(vertices))


class FilteredComplex:
    """
    Finite filtered simplicial complex.

    Simplices are held in their total order (orderIndex). The constructor
    does not validate; builders and importers call validate_ffdata.
    """

    def __init__(self, simplices, dimension_cap=None, truncated=False):
        self.simplices = tuple(sorted(simplices, key=lambda s: s.order_index))
        top = max((s.dimension for s in self.simplices), default=0)
        self.dimension_cap = top if dimension_cap is None else int(dimension_cap)
        # True when simplices above dimension_cap were left out
        self.truncated = truncated
        self._by_vertices = {}
        for s in self.simplices:
            self._by_vertices.setdefault(s.vertices, s)

    @classmethod
    def from_records(cls, records, dimension_cap=None, keep_order=False, truncated=False):
        """
        Build from (vertices, value) records.
        By default the order is (value, dimension, lexicographic vertices);
        keep_order uses the record order instead.
        """
        records = [(tuple(v), float(value)) for v, value in records]
        if not keep_order:
            records.sort(key=lambda r: filtration_key(*r))
        simplices = [Simplex(k, vertices, value) for k, (vertices, value) in enumerate(records)]
        return cls(simplices, dimension_cap, truncated)

    def __len__(self):
        return len(self.simplices)

    def __iter__(self):
        return iter(self.simplices)

    def __repr__(self):
        return f'FilteredComplex({len(self.simplices)} simplices, dim {self.dimension})'

    def __eq__(self, other):
        if not isinstance(other, FilteredComplex):
            return NotImplemented
        return self.simplices == other.simplices and self.dimension_cap == other.dimension_cap

    @property
    def dimension(self):
        return max((s.dimension for s in self.simplices), default=-1)

    @property
    def reliable_degree(self):
        """Highest degree whose homology is exact; the top degree is cut off when truncated."""
        return self.dimension_cap - 1 if self.truncated else self.dimension

    @property
    def critical_values(self):
        """Sorted distinct filtration values."""
        return sorted({s.value for s in self.simplices})

    def snapshot_times(self):
        """Midpoints between consecutive critical values, and one point past the last."""
        values = self.critical_values
        if not values:
            return []
        times = [(a + b) / 2 for a, b in zip(values, values[1:])]
        span = values[-1] - values[0]
        times.append(values[-1] + (span if span > 0 else 1.0))
        return times

    def get(self, vertices):
        return self._by_vertices.get(tuple(vertices))

    def stage(self, t):
        """Simplices alive at time t, in order."""
        return [s for s in self.simplices if s.value <= t]

    def simplices_of_dimension(self, k):
        return [s for s in self.simplices if s.dimension == k]

    def scaled(self, factor):
        return FilteredComplex(
            [Simplex(s.order_index, s.vertices, s.value * factor) for s in self.simplices],
            self.dimension_cap, self.truncated,
        )

    def euler_characteristic(self, t=math.inf):
        return sum((-1) ** s.dimension for s in self.stage(t))


def closure(facets):
    """All faces of the given vertex lists, as sorted tuples."""
    out = set()
    for facet in facets:
        facet = tuple(sorted(facet))
        for k in range(1, len(facet) + 1):
            out.update(combinations(facet, k))
    return out


@dataclass
class Violation:
    condition: int
    code: str
    message: str
    simplices: list = field(default_factory=list)


@dataclass
class ValidationReport:
    """Violations of the four finite-filtered-data conditions; empty means valid."""
    violations: list = field(default_factory=list)

    def __bool__(self):
        return bool(self.violations)

    def __len__(self):
        return len(self.violations)

    def add(self, condition, code, message, simplices=()):
        self.violations.append(Violation(condition, code, message, list(simplices)))

    @property
    def is_valid(self):
        return not self.violations

    def conditions(self):
        return sorted({v.condition for v in self.violations})

    def raise_first(self):
        if self.violations:
            first = self.violations[0]
            raise ValidationError(first.message, code=first.code)


def validate_ffdata(cx):
    """
    Check the finite-filtered-data conditions:
      1. every simplex is a well formed, listed once, finite complex per stage;
      2. faces are present and enter no later than their cofacets;
      3. finitely many stages (all values finite);
      4. the order refines face order and filtration order.
    """
    report = ValidationReport()
    seen = {}
    for s in cx.simplices:
        v = s.vertices
        if not v or list(v) != sorted(set(v)):
            report.add(1, 'parse', f'malformed vertex list {list(v)}', [s])
            continue
        if s.dimension > cx.dimension_cap:
            report.add(1, 'dimension_cap',
                       f'simplex {list(v)} exceeds dimension cap {cx.dimension_cap}', [s])
        if v in seen:
            report.add(1, 'duplicate_simplex', f'duplicate simplex {list(v)}', [seen[v], s])
            continue
        seen[v] = s
        if not math.isfinite(s.value):
            report.add(3, 'monotonicity', f'non-finite value {s.value} on {list(v)}', [s])

    for s in cx.simplices:
        if seen.get(s.vertices) is not s:
            continue
        for face in s.faces():
            f = seen.get(face)
            if f is None:
                report.add(2, 'missing_face', f'missing face {list(face)} of {list(s.vertices)}', [s])
            elif f.value > s.value:
                report.add(2, 'monotonicity',
                           f'face {list(face)} enters at {f.value} after {list(s.vertices)} at {s.value}',
                           [f, s])
            elif f.order_index >= s.order_index:
                report.add(4, 'monotonicity',
                           f'face {list(face)} is ordered after {list(s.vertices)}', [f, s])

    indices = [s.order_index for s in cx.simplices]
    if len(set(indices)) != len(indices):
        report.add(4, 'monotonicity', 'order indices repeat')
    ordered = list(cx.simplices)
    for earlier, later in zip(ordered, ordered[1:]):
        if earlier.value > later.value:
            report.add(4, 'monotonicity',
                       f'{list(later.vertices)} at {later.value} is ordered after '
                       f'{list(earlier.vertices)} at {earlier.value}', [earlier, later])
    if report:
        logger.debug('validate_ffdata: %d violation(s)', len(report))
    return report
