"""
Product ledgers: cup products, higher operations and Steenrod squares
written in bar coordinates, snapshot by snapshot.

At a snapshot the bars alive there give a basis of homology through
their representative cycles; the cohomology basis dual to it is the one
the ledger uses. With Q[b][u] = <i(e_u), z_b> the class of bar b has
coordinates Q^-1 e_b in the critical basis, and Q maps results back.
"""
import json
import logging
import math

from django.conf import settings
from django.core.exceptions import ValidationError

from ainfty.persistent import persistent_ainfty
from chains.fields import Field
from chains.sparse import SparseMatrix, clean
from contraction.incremental import persistent_transfer_data
from steenrod.squares import persistent_steenrod

from .barcodes import Bar, Barcode, compute_barcode

logger = logging.getLogger(__name__)

CUP = 'cup'


def op_name(n):
    return CUP if n == 2 else f'm{n}'


def square_name(k):
    return f'sq{k}'


def op_arity(op):
    if op == CUP:
        return 2
    if op.startswith('m'):
        return int(op[1:])
    return 1


class ProductLedger:
    """
    entries[op][inputs][j] is the expansion {bar id: coefficient} of the
    operation on the input bars at snapshot j. Entries exist only where
    every input is alive and the value is nonzero.
    """

    def __init__(self, field, barcode, times, entries=None, name=''):
        self.field = field
        self.barcode = barcode
        self.times = list(times)
        self.entries = entries or {}
        self.name = name

    def __repr__(self):
        counts = {op: len(table) for op, table in sorted(self.entries.items())}
        return f'ProductLedger({self.name or "unnamed"}, {len(self.times)} snapshots, {counts})'

    def ops(self):
        return sorted(op for op, table in self.entries.items() if table)

    def snapshot_index(self, t, tolerance=None):
        tolerance = getattr(settings, 'PCS_TOLERANCE', 1e-9) if tolerance is None else tolerance
        j = None
        for k, value in enumerate(self.times):
            if value <= t + tolerance:
                j = k
        return j

    def record(self, op, inputs, j, expansion):
        if expansion:
            self.entries.setdefault(op, {}).setdefault(tuple(inputs), {})[j] = dict(expansion)

    def value_at(self, op, inputs, j):
        if j is None:
            return {}
        return self.entries.get(op, {}).get(tuple(inputs), {}).get(j, {})

    def value(self, op, inputs, t):
        return self.value_at(op, inputs, self.snapshot_index(t))

    def lower_products_vanish(self, inputs, j):
        """
        For m_n with n >= 3: every m_k (2 <= k < n) on consecutive inputs
        vanishes at j, and so do the cup products that carry the first
        input on the left or the last input on the right.
        """
        n = len(inputs)
        for k in range(2, n):
            for start in range(0, n - k + 1):
                if self.value_at(op_name(k), inputs[start:start + k], j):
                    return False
        first, last = inputs[0], inputs[-1]
        for key, values in self.entries.get(CUP, {}).items():
            if j in values and (key[0] == first or key[1] == last):
                return False
        return True

    def to_json(self):
        def label(x):
            return x if isinstance(x, (int, str)) else str(x)

        return json.dumps({
            'name': self.name,
            'field': self.field.characteristic,
            'times': self.times,
            'bars': [
                {'id': label(b.id), 'degree': b.degree, 'interval': b.as_pair()}
                for b in self.barcode
            ],
            'entries': {
                op: [
                    {'inputs': [label(x) for x in inputs], 'snapshot': j, 'time': self.times[j],
                     'value': {str(label(c)): self.field.to_json(v) for c, v in sorted(
                         expansion.items(), key=lambda item: str(item[0]))}}
                    for inputs, values in sorted(table.items(), key=lambda item: str(item[0]))
                    for j, expansion in sorted(values.items())
                ]
                for op, table in sorted(self.entries.items())
            },
        }, sort_keys=True)


def _bar_change_of_basis(contraction, bars, max_degree):
    """Q (rows: bars, cols: critical cells) and its inverse at one snapshot."""
    field = contraction.field
    critical = [u for u in contraction.basis() if contraction.degree(u) <= max_degree]
    if len(critical) != len(bars):
        raise ValidationError(
            'Snapshot has %(c)s classes but %(b)s live bars.', code='basis_mismatch',
            params={'c': len(critical), 'b': len(bars)},
        )
    # I* = p^T on the cochain side, so <I*(e_u), z> is (p_chain z)_u
    columns = {}
    for u in critical:
        cocycle = contraction.i.column(u)
        column = {}
        for bar in bars:
            value = field.zero
            for cell, coefficient in bar.representative.items():
                if cell in cocycle:
                    value = field.add(value, field.mul(coefficient, cocycle[cell]))
            if value != 0:
                column[bar.id] = value
        if column:
            columns[u] = column
    ids = [bar.id for bar in bars]
    q = SparseMatrix(field, ids, critical, columns)
    return q, q.inverse()


def build_ledger(pa, barcode, sq=None, name=''):
    """
    Ledger of a persistent A-infinity structure (and optional Steenrod
    action) in the bar basis of `barcode`. Degree-0 inputs are left out.
    """
    if pa.field != barcode.field:
        raise ValidationError('Barcode and structure live over different fields.', code='field_mismatch')
    field = pa.field
    max_degree = barcode.max_degree if barcode.max_degree is not None else math.inf
    ledger = ProductLedger(field, barcode, pa.times, name=name)
    for j, (t, structure, contraction) in enumerate(zip(pa.times, pa.snapshots, pa.contractions)):
        bars = [b for b in barcode.alive(t) if b.degree <= max_degree]
        q, q_inverse = _bar_change_of_basis(contraction, bars, max_degree)
        coordinates = {b.id: q_inverse.column(b.id) for b in bars}
        positive = [b.id for b in bars if b.degree > 0]
        degree = {b.id: b.degree for b in bars}

        def to_bars(vector, q=q):
            return clean(field, q.apply({u: x for u, x in vector.items() if u in q.cols}))

        for n in range(2, structure.max_arity + 1):
            for inputs in _tuples(positive, n):
                if sum(degree[b] for b in inputs) + 2 - n > max_degree:
                    continue
                value = structure.evaluate(n, [coordinates[b] for b in inputs])
                ledger.record(op_name(n), inputs, j, to_bars(value))
        if sq is not None:
            for k in sorted(sq.squares[j]):
                if k == 0:
                    continue
                matrix = sq.sq(j, k)
                for b in positive:
                    if degree[b] < k or degree[b] + k > max_degree:
                        continue
                    ledger.record(square_name(k), (b,), j, to_bars(matrix.apply(coordinates[b])))
    logger.info('Built %r', ledger)
    return ledger


def ledger_from_complex(cx, field=None, max_arity=None, steenrod=None, name=''):
    """
    Barcode, persistent transfer and ledger of one filtration. Steenrod
    squares are added in characteristic 2 unless `steenrod` is False.
    """
    field = field or Field.default()
    barcode = compute_barcode(cx, field)
    pa = persistent_ainfty(persistent_transfer_data(cx, field), max_arity)
    if steenrod is None:
        steenrod = field.characteristic == 2
    sq = persistent_steenrod(pa) if steenrod else None
    return build_ledger(pa, barcode, sq, name=name)


def _tuples(labels, n):
    if n == 0:
        yield ()
        return
    for first in labels:
        for rest in _tuples(labels, n - 1):
            yield (first,) + rest


def ledger_from_structure(structure, lifespans, noise=(), unit_bar=True, name=''):
    """
    Ledger of a constant structure on classes with prescribed lifespans.

    `lifespans` maps each positive-degree basis label of the structure to
    (birth, death), or is one pair used for all of them. `noise` adds
    (degree, birth, death) bars carrying no products.
    """
    field = structure.field
    positive = [b for b in structure.basis if structure.degree(b) > 0]
    if not isinstance(lifespans, dict):
        lifespans = {b: lifespans for b in positive}
    bars = [Bar(b, structure.degree(b), float(lifespans[b][0]), float(lifespans[b][1])) for b in positive]
    if unit_bar:
        bars.extend(Bar(b, 0, 0.0) for b in structure.basis_in_degree(0))
    bars.extend(Bar(f'noise{k}', degree, float(birth), float(death))
                for k, (degree, birth, death) in enumerate(noise))
    barcode = Barcode(bars, field)
    times = sorted({0.0} | set(barcode.endpoints()))
    ledger = ProductLedger(field, barcode, times, name=name)
    for j, t in enumerate(times):
        alive = {b.id for b in barcode.alive(t)}
        live_inputs = [b for b in positive if b in alive]
        for n in range(2, structure.max_arity + 1):
            for inputs in _tuples(live_inputs, n):
                value = {c: v for c, v in structure.m(*inputs).items() if c in alive}
                ledger.record(op_name(n), inputs, j, value)
    logger.info('Built %r', ledger)
    return ledger
