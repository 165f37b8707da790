"""
Incremental contraction of a based complex onto its (co)homology.

Cells are added in order. With convention ip - id = dh + hd, a new
cell c with y = p(dc):
  y == 0: c is critical, i(c) = c + h(dc), p(c) = c, h(c) = 0;
  y != 0: the smallest critical cell u in y dies. With lambda = y_u and
          w = c + h(dc), every cell a with mu = p(a)_u != 0 gets
          p(a) -= (mu / lambda) y and h(a) -= (mu / lambda) w.
"""
import json
import logging

from chains.fields import Field
from chains.sparse import SparseMatrix, axpy
from complexes.filtration import validate_ffdata

from .based import BasedComplex

logger = logging.getLogger(__name__)


class Contraction:
    """
    Transfer data (A, H, i, p, h) on a based complex.

    `critical` is the basis of H (a subset of the cells); i, p, h are
    SparseMatrices labelled by cells and critical cells. A dual
    contraction carries the transposed maps and differential.
    """
    IDENTITY_NAMES = ['ip - id = dh + hd', 'pi = id', 'hi = 0', 'ph = 0', 'hh = 0']

    def __init__(self, complex, critical, i, p, h, dual=False):
        self.complex = complex
        self.critical = tuple(critical)
        self.i = i
        self.p = p
        self.h = h
        self.dual = dual
        # Set when the complex carries a product (cochain algebras, dg models)
        self.product = None
        self.unit = None
        self.cochains = None
        self._d = None

    def __repr__(self):
        kind = 'cochain' if self.dual else 'chain'
        return f'Contraction({kind}, {len(self.complex)} cells -> {len(self.critical)} classes)'

    @property
    def field(self):
        return self.complex.field

    @property
    def d(self):
        if self._d is None:
            d = self.complex.differential_matrix()
            self._d = d.transpose() if self.dual else d
        return self._d

    def degree(self, label):
        return self.complex.degrees[label]

    def basis(self, k=None):
        """Critical cells, optionally of one degree."""
        if k is None:
            return list(self.critical)
        return [c for c in self.critical if self.complex.degrees[c] == k]

    def ranks(self):
        out = {}
        for c in self.critical:
            k = self.complex.degrees[c]
            out[k] = out.get(k, 0) + 1
        return out

    def check_identities(self):
        """Names of the contraction identities that fail; empty when all hold."""
        field = self.field
        cells = self.complex.cells
        identity_a = SparseMatrix.identity(field, cells)
        identity_h = SparseMatrix.identity(field, self.critical)
        failed = []
        if self.i @ self.p - identity_a != self.d @ self.h + self.h @ self.d:
            failed.append(self.IDENTITY_NAMES[0])
        if self.p @ self.i != identity_h:
            failed.append(self.IDENTITY_NAMES[1])
        if not (self.h @ self.i).is_zero():
            failed.append(self.IDENTITY_NAMES[2])
        if not (self.p @ self.h).is_zero():
            failed.append(self.IDENTITY_NAMES[3])
        if not (self.h @ self.h).is_zero():
            failed.append(self.IDENTITY_NAMES[4])
        if failed:
            logger.warning('Contraction identities failed: %s', ', '.join(failed))
        return failed

    def dualize(self):
        """Apply Hom(-, k): transpose every map. Dualizing twice is the identity."""
        return Contraction(self.complex, self.critical, self.p.transpose(), self.i.transpose(),
                           self.h.transpose(), dual=not self.dual)

    def representative(self, label):
        """i applied to a basis class."""
        return self.i.column(label)

    def to_json(self):
        return json.dumps({
            'dual': self.dual,
            'critical': list(self.critical),
            'i': json.loads(self.i.to_json()),
            'p': json.loads(self.p.to_json()),
            'h': json.loads(self.h.to_json()),
        }, sort_keys=True)


class IncrementalContractor:
    """Runs the cell-by-cell loop and snapshots the state on request."""

    def __init__(self, complex):
        self.complex = complex
        self.field = complex.field
        self.position = {c: k for k, c in enumerate(complex.cells)}
        self.processed = 0
        self.critical = []
        self.p = {}
        self.h = {}
        self.i = {}
        # critical cell -> cells whose p-image mentions it
        self.carriers = {}

    def _set_p(self, cell, vector):
        for u in self.p.get(cell, {}):
            if u not in vector:
                self.carriers[u].discard(cell)
        for u in vector:
            self.carriers.setdefault(u, set()).add(cell)
        self.p[cell] = vector

    def _apply_h(self, vector):
        out = {}
        for cell, value in vector.items():
            axpy(self.field, out, self.h.get(cell, {}), value)
        return out

    def _apply_p(self, vector):
        out = {}
        for cell, value in vector.items():
            axpy(self.field, out, self.p.get(cell, {}), value)
        return out

    def step(self):
        field = self.field
        c = self.complex.cells[self.processed]
        self.processed += 1
        boundary = self.complex.d(c)
        y = self._apply_p(boundary)
        w = {c: field.one}
        axpy(field, w, self._apply_h(boundary))
        if not y:
            self.critical.append(c)
            self.i[c] = w
            self._set_p(c, {c: field.one})
            self.h[c] = {}
            return c, None
        u = min(y, key=self.position.__getitem__)
        lam = y[u]
        for a in list(self.carriers.get(u, ())):
            ratio = field.neg(field.div(self.p[a][u], lam))
            new_p = dict(self.p[a])
            axpy(field, new_p, y, ratio)
            self._set_p(a, new_p)
            h_a = dict(self.h.get(a, {}))
            axpy(field, h_a, w, ratio)
            self.h[a] = h_a
        self._set_p(c, {})
        self.h[c] = {}
        self.critical.remove(u)
        del self.i[u]
        self.carriers.pop(u, None)
        return c, u

    def run_until(self, n):
        while self.processed < n:
            self.step()

    def snapshot(self):
        """Contraction of the cells processed so far."""
        field = self.field
        complex = self.complex.prefix(self.processed)
        critical = sorted(self.critical, key=self.position.__getitem__)
        cells = complex.cells
        i = SparseMatrix(field, cells, critical, self.i)
        p = SparseMatrix(field, critical, cells, {a: v for a, v in self.p.items() if v})
        h = SparseMatrix(field, cells, cells, {a: v for a, v in self.h.items() if v})
        return Contraction(complex, critical, i, p, h)


def incremental_contraction(complex):
    """Contraction of a whole based complex."""
    contractor = IncrementalContractor(complex)
    contractor.run_until(len(complex))
    return contractor.snapshot()


class PersistentTransferData:
    """
    Contractions at every critical value of a filtration, with the
    inclusion chain maps between consecutive stages (restrictions when dual).
    """

    def __init__(self, complex, field, times, stages, dual=False):
        self.complex = complex
        self.field = field
        self.times = list(times)
        self.stages = list(stages)
        self.dual = dual

    def __len__(self):
        return len(self.stages)

    def __repr__(self):
        return f'PersistentTransferData({len(self.stages)} stages, dual={self.dual})'

    def stage_at(self, t):
        """Contraction in force at time t (the last critical value <= t)."""
        j = self.stage_index(t)
        return None if j is None else self.stages[j]

    def stage_index(self, t):
        j = None
        for k, value in enumerate(self.times):
            if value <= t:
                j = k
        return j

    def stage_map(self, j):
        """Inclusion A_j -> A_(j+1); its transpose (restriction) for the dual data."""
        source = self.stages[j].complex.cells
        target = self.stages[j + 1].complex.cells
        inclusion = SparseMatrix(self.field, target, source, {c: {c: self.field.one} for c in source})
        return inclusion.transpose() if self.dual else inclusion

    def induced_map(self, j):
        """The map H_j -> H_(j+1) (or H^(j+1) -> H^j when dual) induced by the stage map."""
        if self.dual:
            return self.stages[j].p @ self.stage_map(j) @ self.stages[j + 1].i
        return self.stages[j + 1].p @ self.stage_map(j) @ self.stages[j].i

    def structure_map_defect(self, j):
        """
        Failure of i to commute with the stage maps:
        chains:   incl o i_j - i_(j+1) o p_(j+1) o incl o i_j
        cochains: p_j o restr - p_j o restr o i_(j+1) o p_(j+1)
        A nonzero defect means no persistent inclusion (projection) exists
        for this choice of transfer data.
        """
        if self.dual:
            restrict = self.stage_map(j)
            direct = self.stages[j].p @ restrict
            return direct - direct @ self.stages[j + 1].i @ self.stages[j + 1].p
        include = self.stage_map(j) @ self.stages[j].i
        return include - self.stages[j + 1].i @ self.stages[j + 1].p @ include

    def dualize(self):
        return PersistentTransferData(self.complex, self.field, self.times,
                                      [stage.dualize() for stage in self.stages], not self.dual)


def persistent_transfer_data(cx, field=None):
    """Run the incremental contraction along a filtration, snapshotting each critical value."""
    field = field or Field.default()
    report = validate_ffdata(cx)
    if report:
        report.raise_first()
    complex = BasedComplex.from_filtered_complex(cx, field)
    contractor = IncrementalContractor(complex)
    times = cx.critical_values
    stages = []
    position = 0
    for t in times:
        while position < len(cx.simplices) and cx.simplices[position].value <= t:
            position += 1
        contractor.run_until(position)
        stages.append(contractor.snapshot())
        logger.debug('Stage %s: %d cells, ranks %s', t, position, stages[-1].ranks())
    logger.info('Contracted %d simplices over %d stages (%s)', len(cx), len(stages), field)
    return PersistentTransferData(cx, field, times, stages)


def dualize(ptd):
    return ptd.dualize()


def check_all_identities(ptd):
    """{stage index: failed identity names} for the stages that fail."""
    failures = {}
    for j, stage in enumerate(ptd.stages):
        failed = stage.check_identities()
        if failed:
            failures[j] = failed
    if failures:
        logger.warning('Contraction identities failed at stages %s', sorted(failures))
    return failures
