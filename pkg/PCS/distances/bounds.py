"""
Certified bounds for the refined interleaving distances.

Lower bounds search the finite grid of candidate values for the first
epsilon at which an epsilon-matching of the barcodes respects the
operations recorded in both ledgers. Upper bounds come from trivial
interleavings, whose positive-degree maps are all zero.
"""
import json
import logging
import math
from dataclasses import dataclass, field as dataclass_field

from django.conf import settings
from django.core.exceptions import ValidationError

from chains.fields import Field
from chains.sparse import SparseMatrix

from .bottleneck import DIAGONAL, bottleneck, diagonal_cost, matching_at, pair_cost
from .ledger import CUP

logger = logging.getLogger(__name__)

LOWER = 'lower'
UPPER = 'upper'
KIND_CHOICES = [
    (LOWER, 'Lower bound'),
    (UPPER, 'Upper bound'),
]

GRVECT = 'grvect'
AS = 'as'
AINFTY = 'ainfty'
A2AS = 'a2as'
TWO_INFTY = '2infty'
PINFTY_QINFTY = 'pinfty_qinfty'
P_DISTANCE = 'P'
DISTANCE_CHOICES = [
    (GRVECT, 'd_grVect'),
    (AS, 'd_As'),
    (AINFTY, 'd_Ainfty'),
    (A2AS, 'd_A2-As'),
    (TWO_INFTY, 'd_2infty'),
    (PINFTY_QINFTY, 'd_pinfty_qinfty'),
    (P_DISTANCE, 'd_P'),
]

STRUCTURE_GRVECT = 'grvect'
STRUCTURE_CUP = 'cup'
STRUCTURE_AINFTY = 'ainfty'
STRUCTURE_STEENROD = 'steenrod'
STRUCTURE_COMBINED = 'combined'
STRUCTURE_CHOICES = [
    (STRUCTURE_GRVECT, 'Graded vector spaces'),
    (STRUCTURE_CUP, 'Cup product'),
    (STRUCTURE_AINFTY, 'A-infinity operations'),
    (STRUCTURE_STEENROD, 'Cup product and Steenrod squares'),
    (STRUCTURE_COMBINED, 'Everything recorded'),
]
STRUCTURE_DISTANCE = {
    STRUCTURE_GRVECT: GRVECT,
    STRUCTURE_CUP: AS,
    STRUCTURE_AINFTY: AINFTY,
    STRUCTURE_STEENROD: A2AS,
    STRUCTURE_COMBINED: TWO_INFTY,
}


@dataclass
class DistanceBound:
    kind: str
    distance: str
    value: float
    certificate: dict = dataclass_field(default_factory=dict)
    inconclusive: bool = False

    def as_dict(self):
        return {
            'kind': self.kind,
            'distance': self.distance,
            'value': 'inf' if math.isinf(self.value) else self.value,
            'inconclusive': self.inconclusive,
            'certificate': self.certificate,
        }

    def to_json(self, indent=None):
        return json.dumps(self.as_dict(), indent=indent, sort_keys=True, default=str)


def _tolerance():
    return getattr(settings, 'PCS_TOLERANCE', 1e-9)


def candidate_grid(*barcodes):
    """0 and every |e1 - e2| / 2, |e1 - e2| over finite endpoints of the barcodes."""
    endpoints = sorted({e for bc in barcodes for e in bc.endpoints()})
    grid = {0.0}
    for k, a in enumerate(endpoints):
        for b in endpoints[k + 1:]:
            grid.add((b - a) / 2)
            grid.add(b - a)
    return sorted(grid)


def _allowed(op, structure):
    if structure == STRUCTURE_GRVECT:
        return False
    if op == CUP:
        return True
    if structure == STRUCTURE_COMBINED:
        return True
    if structure == STRUCTURE_AINFTY:
        return op.startswith('m')
    if structure == STRUCTURE_STEENROD:
        return op.startswith('sq')
    return False


@dataclass
class _Constraint:
    side: int
    op: str
    inputs: tuple
    time: float
    partner_time: float
    outputs: tuple

    def describe(self, ledger):
        return {
            'side': 'X' if self.side == 0 else 'Y',
            'ledger': ledger.name,
            'op': self.op,
            'inputs': [str(b) for b in self.inputs],
            'window': [self.time, 2 * self.partner_time - self.time],
            'outputs': [str(c) for c in self.outputs],
        }


def _constraints(ledger, side, structure, epsilon, tolerance):
    """Operation values that survive a whole window [t, t + 2 epsilon] on one side."""
    out = []
    for op, table in ledger.entries.items():
        if not _allowed(op, structure):
            continue
        higher = op != CUP and op.startswith('m')
        for inputs, values in table.items():
            bars = [ledger.barcode[b] for b in inputs]
            for j, expansion in values.items():
                t = ledger.times[j]
                end = t + 2 * epsilon
                if not all(b.alive_on(t, end, tolerance) for b in bars):
                    continue
                k = ledger.snapshot_index(end, tolerance)
                later = ledger.value_at(op, inputs, k)
                outputs = tuple(
                    c for c in expansion
                    if c in later and ledger.barcode[c].alive_on(t, end, tolerance)
                )
                if not outputs:
                    continue
                if higher and not (ledger.lower_products_vanish(inputs, j)
                                   and ledger.lower_products_vanish(inputs, k)):
                    continue
                out.append(_Constraint(side, op, tuple(inputs), t, t + epsilon, outputs))
    return out


class _BudgetExceeded(Exception):
    pass


class _Search:
    """Backtracking for one epsilon over the bars that carry constraints."""

    def __init__(self, ledgers, structure, epsilon, tolerance, budget):
        self.ledgers = ledgers
        self.epsilon = epsilon
        self.tolerance = tolerance
        self.budget = budget
        self.nodes = 0
        self.constraints = (_constraints(ledgers[0], 0, structure, epsilon, tolerance)
                            + _constraints(ledgers[1], 1, structure, epsilon, tolerance))
        self.by_bar = ({}, {})
        for c in self.constraints:
            for b in set(c.inputs) | set(c.outputs):
                self.by_bar[c.side].setdefault(b, []).append(c)
        self.partner = ({}, {})
        self.violated = None

    def _order(self):
        order = []
        for side in (0, 1):
            barcode = self.ledgers[side].barcode
            bars = sorted((barcode[b] for b in self.by_bar[side]), key=lambda b: (-b.length, str(b.id)))
            order.extend((side, b) for b in bars)
        return order

    def _candidates(self, side, bar):
        other = self.ledgers[1 - side].barcode
        limit = self.epsilon + self.tolerance
        found = []
        for candidate in other.in_degree(bar.degree):
            if candidate.id in self.partner[1 - side]:
                continue
            cost = pair_cost((bar.birth, bar.death), (candidate.birth, candidate.death))
            if cost <= limit:
                found.append((cost, str(candidate.id), candidate.id))
        found.sort()
        options = [c for _, _, c in found]
        if diagonal_cost((bar.birth, bar.death)) <= limit:
            options.append(DIAGONAL)
        return options

    def _assign(self, side, bar_id, partner):
        self.partner[side][bar_id] = partner
        if partner != DIAGONAL:
            self.partner[1 - side][partner] = bar_id

    def _unassign(self, side, bar_id):
        partner = self.partner[side].pop(bar_id)
        if partner != DIAGONAL:
            self.partner[1 - side].pop(partner, None)

    def _status(self, c):
        """True satisfied, False violated, None undetermined."""
        mine, theirs = self.partner[c.side], self.ledgers[1 - c.side]
        partners = []
        for b in c.inputs:
            if b not in mine:
                return None
            if mine[b] == DIAGONAL:
                return True
            partners.append(mine[b])
        k = theirs.snapshot_index(c.partner_time, self.tolerance)
        if c.op != CUP and c.op.startswith('m') and not theirs.lower_products_vanish(tuple(partners), k):
            return True
        value = theirs.value_at(c.op, tuple(partners), k)
        if not value:
            return False
        pending = False
        for output in c.outputs:
            if output not in mine:
                pending = True
            elif mine[output] != DIAGONAL and mine[output] in value:
                return True
        return None if pending else False

    def _consistent(self, side, bar_id, partner):
        touched = list(self.by_bar[side].get(bar_id, []))
        if partner != DIAGONAL:
            touched += self.by_bar[1 - side].get(partner, [])
        for c in touched:
            if self._status(c) is False:
                self.violated = c
                return False
        return True

    def _complete(self):
        """Plain matching on whatever the backtracking left free."""
        bx, by = self.ledgers[0].barcode, self.ledgers[1].barcode
        for degree in sorted(set(bx.degrees) | set(by.degrees)):
            xs = [b for b in bx.in_degree(degree) if b.id not in self.partner[0]]
            ys = [b for b in by.in_degree(degree) if b.id not in self.partner[1]]
            if matching_at(xs, ys, self.epsilon, self.tolerance) is None:
                return False
        return True

    def run(self):
        order = self._order()

        def descend(k):
            self.nodes += 1
            if self.nodes > self.budget:
                raise _BudgetExceeded
            if k == len(order):
                return self._complete()
            side, bar = order[k]
            if bar.id in self.partner[side]:
                return descend(k + 1)
            for partner in self._candidates(side, bar):
                self._assign(side, bar.id, partner)
                if self._consistent(side, bar.id, partner) and descend(k + 1):
                    return True
                self._unassign(side, bar.id)
            return False

        return descend(0)

    def matching(self):
        return sorted(([str(x), str(y)] for x, y in self.partner[0].items()), key=str)


def structured_lower_bound(lx, ly, structure=STRUCTURE_CUP, floor=0.0):
    """
    The first grid value (from `floor` on) at which a structure-compatible
    epsilon-matching exists. The certificate records, for each rejected
    value, the constraint that could not be met.
    """
    if lx.field != ly.field:
        raise ValidationError('Ledgers live over different fields.', code='field_mismatch')
    if structure not in dict(STRUCTURE_CHOICES):
        raise ValidationError('Unknown structure %(s)r.', code='unsupported', params={'s': structure})
    if structure == STRUCTURE_STEENROD and lx.field.characteristic != 2:
        raise ValidationError('unsupported: odd-p Steenrod action', code='unsupported')
    tolerance = _tolerance()
    budget = getattr(settings, 'PCS_SEARCH_NODE_BUDGET', 200000)
    distance = STRUCTURE_DISTANCE[structure]
    transcript = []
    for epsilon in candidate_grid(lx.barcode, ly.barcode):
        if epsilon < floor - tolerance:
            continue
        search = _Search((lx, ly), structure, epsilon, tolerance, budget)
        try:
            feasible = search.run()
        except _BudgetExceeded:
            logger.warning('%s search inconclusive at %s after %d nodes', distance, epsilon, search.nodes)
            return DistanceBound(LOWER, distance, epsilon, {
                'structure': structure, 'floor': floor, 'rejected': transcript,
                'reason': 'node budget exceeded', 'nodes': search.nodes,
            }, inconclusive=True)
        if feasible:
            logger.info('%s lower bound %s (%s vs %s)', distance, epsilon, lx.name, ly.name)
            return DistanceBound(LOWER, distance, epsilon, {
                'structure': structure, 'floor': floor, 'rejected': transcript,
                'matching': search.matching(),
            })
        reason = {'epsilon': epsilon, 'nodes': search.nodes}
        if search.violated is not None:
            side = search.violated.side
            reason['constraint'] = search.violated.describe((lx, ly)[side])
        else:
            reason['constraint'] = 'no epsilon-matching of the barcodes'
        transcript.append(reason)
        logger.debug('%s infeasible at %s', distance, epsilon)
    return DistanceBound(LOWER, distance, math.inf, {
        'structure': structure, 'floor': floor, 'rejected': transcript,
        'reason': 'no epsilon-matching on the grid',
    })


def hierarchy_lower_bounds(lx, ly):
    """
    Lower bounds for the nested distances, each search starting where its
    predecessor stopped: grVect <= As <= {A-infinity, A2-As} <= 2-infinity.
    A2-As needs characteristic 2 and is left out otherwise.
    """
    bounds = {GRVECT: structured_lower_bound(lx, ly, STRUCTURE_GRVECT)}
    bounds[AS] = structured_lower_bound(lx, ly, STRUCTURE_CUP, bounds[GRVECT].value)
    bounds[AINFTY] = structured_lower_bound(lx, ly, STRUCTURE_AINFTY, bounds[AS].value)
    floor = bounds[AINFTY].value
    if lx.field.characteristic == 2:
        bounds[A2AS] = structured_lower_bound(lx, ly, STRUCTURE_STEENROD, bounds[AS].value)
        floor = max(floor, bounds[A2AS].value)
    bounds[TWO_INFTY] = structured_lower_bound(lx, ly, STRUCTURE_COMBINED, floor)
    return bounds


class PersistenceModuleView:
    """
    A persistence module through its structure maps.

    structure_map(s, t) for s <= t is the map between the stages at s and
    t in the module's own direction: forward for a barcode, the
    restriction F(t) -> F(s) for a cohomology module (contravariant).
    """

    def __init__(self, times, stage_map, degrees, field, barcode=None, contravariant=False, offset=0.0):
        self.times = list(times)
        self._stage_map = stage_map
        self.degrees = degrees
        self.field = field
        self.barcode = barcode
        self.contravariant = contravariant
        self.offset = offset

    @classmethod
    def from_barcode(cls, barcode):
        field = barcode.field or Field.default()

        def stage_map(s, t):
            source = [b.id for b in barcode.alive(s)]
            target = [b.id for b in barcode.alive(t)]
            kept = set(target)
            columns = {b: {b: field.one} for b in source if b in kept}
            return SparseMatrix(field, target, source, columns)

        degrees = {b.id: b.degree for b in barcode}
        return cls(barcode.endpoints(), stage_map, degrees, field, barcode)

    @classmethod
    def from_persistent(cls, pa, barcode=None):
        degrees = {}
        for snapshot in pa.snapshots:
            degrees.update(snapshot.degrees)

        def stage_map(s, t):
            i, j = pa.snapshot_index(s), pa.snapshot_index(t)
            if i is None or j is None:
                source = pa.snapshots[j].basis if j is not None else ()
                target = pa.snapshots[i].basis if i is not None else ()
                return SparseMatrix.zeros(pa.field, target, source)
            return pa.span_map(i, j)

        return cls(pa.times, stage_map, degrees, pa.field, barcode, contravariant=True)

    def structure_map(self, s, t):
        if s > t:
            raise ValidationError('Structure maps run from s to t with s <= t.', code='basis_mismatch')
        return self._stage_map(s + self.offset, t + self.offset)

    def shift(self, epsilon):
        """F[epsilon], with F[epsilon](t) = F(t + epsilon)."""
        return PersistenceModuleView(
            [t - epsilon for t in self.times], self._stage_map, self.degrees, self.field,
            self.barcode, self.contravariant, self.offset + epsilon,
        )

    def eta(self, epsilon, t):
        """The component at t of the natural map between F and F[epsilon]."""
        return self.structure_map(t, t + epsilon)

    def shift_is_functorial(self, epsilon, delta, t):
        """eta_(epsilon+delta) = eta_delta[epsilon] o eta_epsilon at time t."""
        total = self.eta(epsilon + delta, t)
        first = self.eta(epsilon, t)
        second = self.shift(epsilon).eta(delta, t)
        composite = first @ second if self.contravariant else second @ first
        return total == composite

    def span_is_zero(self, width, positive_only=True):
        """Every structure map across `width` vanishes (in positive degrees)."""
        for t in self.times:
            matrix = self.structure_map(t, t + width)
            for col, vector in matrix.columns.items():
                if positive_only and self.degrees.get(col, 0) == 0:
                    continue
                if vector:
                    return False
        return True


def trivial_upper_bound(mx, my):
    """
    Smallest grid epsilon at which the zero maps in positive degrees and
    an epsilon-matching in degree 0 form an interleaving.
    """
    if mx.barcode is None or my.barcode is None:
        raise ValidationError('Upper bounds need the barcodes of both modules.', code='basis_mismatch')
    tolerance = _tolerance()
    xs, ys = mx.barcode.in_degree(0), my.barcode.in_degree(0)
    for epsilon in candidate_grid(mx.barcode, my.barcode):
        width = 2 * epsilon + tolerance
        if not (mx.span_is_zero(width) and my.span_is_zero(width)):
            continue
        matching = matching_at(xs, ys, epsilon, tolerance)
        if matching is None:
            continue
        witness = [
            [str(xs[i].id) if i != DIAGONAL else DIAGONAL,
             str(ys[j].id) if j != DIAGONAL else DIAGONAL]
            for i, j in matching
        ]
        logger.info('Trivial interleaving at %s', epsilon)
        return DistanceBound(UPPER, TWO_INFTY, epsilon, {
            'interleaving': 'zero in positive degrees', 'degree0_matching': witness,
        })
    return DistanceBound(UPPER, TWO_INFTY, math.inf, {'interleaving': 'no certificate'})


def combined_distances(bounds_by_prime, upper_by_prime=None):
    """
    {prime: {distance: DistanceBound}} -> d_(p infty, q infty) over the
    first two primes and d_P over all of them; both are maxima of the
    per-prime 2-infinity bounds, and d_P only sees the primes given.

    With {prime: upper DistanceBound} the upper bounds are combined by
    max as well and returned under '<distance>_upper'.
    """
    if not bounds_by_prime:
        raise ValidationError('The prime set is empty.', code='empty_prime_set')
    primes = list(bounds_by_prime)
    pair = primes[:2]
    values = {p: bounds_by_prime[p][TWO_INFTY].value for p in primes}
    combined = _combine(LOWER, values, pair)
    if upper_by_prime:
        missing = [p for p in primes if p not in upper_by_prime]
        if missing:
            raise ValidationError('No upper bound for primes %(p)s.', code='field_mismatch',
                                  params={'p': missing})
        uppers = _combine(UPPER, {p: upper_by_prime[p].value for p in primes}, pair)
        combined.update({f'{name}_{UPPER}': bound for name, bound in uppers.items()})
    return combined


def _combine(kind, values, pair):
    def listed(primes):
        return {str(p): 'inf' if math.isinf(values[p]) else values[p] for p in primes}

    return {
        PINFTY_QINFTY: DistanceBound(kind, PINFTY_QINFTY, max(values[p] for p in pair), {
            'primes': pair, 'per_prime': listed(pair),
        }),
        P_DISTANCE: DistanceBound(kind, P_DISTANCE, max(values.values()), {
            'primes': list(values), 'per_prime': listed(values),
            'under_approximation': True,
        }),
    }


def d_grvect_bound(bx, by):
    """Degree-wise bottleneck maximum as a lower bound report."""
    degrees = sorted(set(bx.degrees) | set(by.degrees))
    values = {k: bottleneck(bx.in_degree(k), by.in_degree(k)) for k in degrees}
    return DistanceBound(LOWER, GRVECT, max(values.values(), default=0.0),
                         {'per_degree': {str(k): v for k, v in values.items()}})
