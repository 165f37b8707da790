"""
Barcodes by left-to-right column reduction.

A finite bar [birth, death) keeps the reduced column of its killing
simplex as representative cycle; an infinite bar keeps the column of
the reduction matrix V. At every time the live representatives form a
basis of homology compatible with the inclusions.
"""
import json
import logging
import math
from dataclasses import dataclass, field as dataclass_field

from django.conf import settings

from chains.cochains import boundary_of
from chains.fields import Field
from chains.sparse import axpy

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Bar:
    id: object
    degree: int
    birth: float
    death: float = math.inf
    representative: dict = dataclass_field(default=None, compare=False, hash=False, repr=False)

    @property
    def length(self):
        return self.death - self.birth

    @property
    def is_essential(self):
        return math.isinf(self.death)

    def alive_at(self, t, tolerance=0.0):
        return self.birth <= t + tolerance and t < self.death

    def alive_on(self, start, end, tolerance=0.0):
        """Alive on the whole window [start, end]."""
        return self.birth <= start + tolerance and self.death > end + tolerance

    def as_pair(self):
        return [self.birth, 'inf' if self.is_essential else self.death]


class Barcode:
    """Bars per degree; bar ids are unique across degrees."""

    def __init__(self, bars, field=None, max_degree=None):
        self.bars = sorted(bars, key=lambda b: (b.degree, b.birth, b.death, str(b.id)))
        self.field = field
        self.max_degree = max_degree
        self._by_id = {b.id: b for b in self.bars}

    def __len__(self):
        return len(self.bars)

    def __iter__(self):
        return iter(self.bars)

    def __repr__(self):
        return f'Barcode({dict(self.counts())})'

    def __getitem__(self, bar_id):
        return self._by_id[bar_id]

    def __contains__(self, bar_id):
        return bar_id in self._by_id

    @property
    def degrees(self):
        found = {b.degree for b in self.bars}
        if self.max_degree is not None:
            found |= set(range(self.max_degree + 1))
        return sorted(found)

    def counts(self):
        out = {}
        for b in self.bars:
            out[b.degree] = out.get(b.degree, 0) + 1
        return out

    def in_degree(self, k):
        return [b for b in self.bars if b.degree == k]

    def pairs(self, k):
        return [(b.birth, b.death) for b in self.in_degree(k)]

    def alive(self, t, degree=None):
        return [b for b in self.bars if b.alive_at(t) and (degree is None or b.degree == degree)]

    def betti(self, t):
        out = {}
        for b in self.alive(t):
            out[b.degree] = out.get(b.degree, 0) + 1
        return out

    def endpoints(self):
        values = set()
        for b in self.bars:
            values.add(b.birth)
            if not b.is_essential:
                values.add(b.death)
        return sorted(values)

    def truncated(self, max_degree):
        return Barcode([b for b in self.bars if b.degree <= max_degree], self.field, max_degree)

    def shifted(self, delta):
        return Barcode([Bar(b.id, b.degree, b.birth + delta, b.death + delta, b.representative)
                        for b in self.bars], self.field, self.max_degree)

    def to_diagram(self):
        """{degree: [[birth, death or "inf"], ...]} with string keys."""
        return {str(k): [b.as_pair() for b in self.in_degree(k)] for k in self.degrees}

    def to_json(self, indent=None):
        return json.dumps(self.to_diagram(), indent=indent, sort_keys=True)


def parse_diagram(data, field=None):
    """Inverse of Barcode.to_diagram; ids are 'degree:position'."""
    if isinstance(data, str):
        data = json.loads(data)
    bars = []
    for key, rows in data.items():
        k = int(key)
        for n, (birth, death) in enumerate(rows):
            death = math.inf if death in ('inf', None) else float(death)
            bars.append(Bar(f'{k}:{n}', k, float(birth), death))
    return Barcode(bars, field)


def compute_barcode(cx, field=None, max_degree=None):
    """
    Persistence barcode of a filtered complex over `field`, dropping bars
    of zero length. Bar ids are the orderIndex of the birth simplex.
    """
    field = field or Field.default()
    max_degree = cx.reliable_degree if max_degree is None else max_degree
    simplices = {s.order_index: s for s in cx.simplices}
    index = {s.vertices: s.order_index for s in cx.simplices}
    reduced = {}
    transform = {}
    pivots = {}
    for s in cx.simplices:
        column = {index[f]: c for f, c in boundary_of(s.vertices, field).items()}
        v = {s.order_index: field.one}
        while column:
            low = max(column)
            other = pivots.get(low)
            if other is None:
                pivots[low] = s.order_index
                break
            factor = field.neg(field.div(column[low], reduced[other][low]))
            axpy(field, column, reduced[other], factor)
            axpy(field, v, transform[other], factor)
        reduced[s.order_index] = column
        transform[s.order_index] = v

    bars = []
    for j, column in reduced.items():
        if column:
            birth = simplices[max(column)]
            death = simplices[j]
            if birth.value < death.value and birth.dimension <= max_degree:
                bars.append(Bar(birth.order_index, birth.dimension, birth.value, death.value, column))
        elif j not in pivots:
            birth = simplices[j]
            if birth.dimension <= max_degree:
                bars.append(Bar(j, birth.dimension, birth.value, math.inf, transform[j]))
    barcode = Barcode(bars, field, max_degree)
    logger.info('Barcode over %s: %s', field, barcode.counts())
    return barcode


def barcode_svg(barcode, width=640, band=18, title=None):
    """One band per degree, bars sorted by birth; infinite bars run to the right edge."""
    finite = [e for e in barcode.endpoints()]
    low = min(finite, default=0.0)
    high = max(finite, default=1.0)
    if high <= low:
        high = low + 1.0
    span = high - low
    right = high + 0.1 * span
    margin = 40

    def x(value):
        value = right if math.isinf(value) else value
        return margin + (value - low) / (right - low) * (width - 2 * margin)

    rows = []
    y = 30
    colours = ['#1f77b4', '#d62728', '#2ca02c', '#9467bd', '#ff7f0e']
    for k in barcode.degrees:
        bars = sorted(barcode.in_degree(k), key=lambda b: (b.birth, b.death))
        rows.append(f'<text x="4" y="{y + 12}" font-size="12">H{k}</text>')
        for b in bars:
            rows.append(
                f'<line x1="{x(b.birth):.2f}" y1="{y + 6}" x2="{x(b.death):.2f}" y2="{y + 6}" '
                f'stroke="{colours[k % len(colours)]}" stroke-width="4"/>'
            )
            y += 8
        y += band
    height = y + 30
    axis = (f'<line x1="{margin}" y1="{height - 20}" x2="{width - margin}" y2="{height - 20}" stroke="black"/>'
            f'<text x="{margin}" y="{height - 5}" font-size="10">{low:g}</text>'
            f'<text x="{x(high):.2f}" y="{height - 5}" font-size="10">{high:g}</text>')
    heading = f'<title>{title}</title>' if title else ''
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">'
            f'{heading}{"".join(rows)}{axis}</svg>\n')


def tolerance():
    return getattr(settings, 'PCS_TOLERANCE', 1e-9)
