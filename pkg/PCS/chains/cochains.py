import logging
import math
from itertools import combinations

from django.core.exceptions import ValidationError

from .fields import Field
from .sparse import SparseMatrix, axpy, clean

logger = logging.getLogger(__name__)


def boundary_of(vertices, field):
    """Signed faces of an ordered simplex: sum_j (-1)^j [v_0 .. v_j-hat .. v_k]."""
    if len(vertices) <= 1:
        return {}
    return {vertices[:j] + vertices[j + 1:]: field.sign(j) for j in range(len(vertices))}


def boundary_matrices(cx, stage=math.inf, field=None):
    """
    Boundary matrices d_k: C_k -> C_(k-1) of the simplices alive at `stage`.
    Rows and columns are labelled by orderIndex.
    """
    field = field or Field.default()
    alive = cx.stage(stage)
    index = {s.vertices: s.order_index for s in alive}
    by_degree = {}
    for s in alive:
        by_degree.setdefault(s.dimension, []).append(s)
    top = max(by_degree, default=-1)
    matrices = {}
    for k in range(0, top + 1):
        cols = [s.order_index for s in by_degree.get(k, [])]
        rows = [s.order_index for s in by_degree.get(k - 1, [])]
        columns = {}
        for s in by_degree.get(k, []):
            if k > 0:
                columns[s.order_index] = {index[f]: c for f, c in boundary_of(s.vertices, field).items()}
        matrices[k] = SparseMatrix(field, rows, cols, columns)
    return matrices


def betti_numbers(cx, stage=math.inf, field=None):
    """Ranks of homology by plain Gaussian elimination; {degree: rank}."""
    field = field or Field.default()
    matrices = boundary_matrices(cx, stage, field)
    ranks = {k: m.rank() for k, m in matrices.items()}
    return {
        k: len(m.cols) - ranks[k] - ranks.get(k + 1, 0)
        for k, m in matrices.items()
    }


class CochainComplex:
    """
    Simplicial cochains of one stage of a filtered complex.

    A cochain is a dict {orderIndex: coefficient}; its value on any
    simplex missing from the dict is zero.
    """

    def __init__(self, cx, stage=math.inf, field=None):
        self.complex = cx
        self.stage = stage
        self.field = field or Field.default()
        self.simplices = {s.order_index: s for s in cx.stage(stage)}
        self.index = {s.vertices: s.order_index for s in self.simplices.values()}
        self.cofacets = {k: [] for k in self.simplices}
        for s in self.simplices.values():
            for j, face in enumerate(s.faces()):
                self.cofacets[self.index[face]].append((s.order_index, j))

    def __repr__(self):
        return f'CochainComplex({len(self.simplices)} simplices at {self.stage}, {self.field})'

    @property
    def top_degree(self):
        return max((s.dimension for s in self.simplices.values()), default=-1)

    def basis(self, k):
        return [i for i, s in self.simplices.items() if s.dimension == k]

    def degree_of(self, index):
        return self.simplices[index].dimension

    def cochain_degree(self, u):
        """Common degree of the support; None for the zero cochain."""
        degrees = set()
        for index in u:
            if index not in self.simplices:
                raise ValidationError('Cochain is supported on simplex %(index)s outside the stage.',
                                      code='degree_mismatch', params={'index': index})
            degrees.add(self.simplices[index].dimension)
        if len(degrees) > 1:
            raise ValidationError('Cochain mixes degrees %(degrees)s.', code='degree_mismatch',
                                  params={'degrees': sorted(degrees)})
        return degrees.pop() if degrees else None

    def cochain(self, values):
        """Cochain from {vertex tuple: coefficient}."""
        out = {}
        for vertices, value in values.items():
            vertices = tuple(sorted(vertices))
            if vertices not in self.index:
                raise ValidationError('Simplex %(v)s is not alive at this stage.',
                                      code='degree_mismatch', params={'v': list(vertices)})
            out[self.index[vertices]] = value
        return clean(self.field, out)

    def unit(self):
        """The constant-1 cochain in degree 0."""
        return {i: self.field.one for i in self.basis(0)}

    def evaluate(self, u, vertices):
        index = self.index.get(tuple(vertices))
        return u.get(index, self.field.zero) if index is not None else self.field.zero

    def coboundary(self, u):
        """(du)(t) = sum_j (-1)^j u(d_j t)."""
        out = {}
        for index, value in u.items():
            for coface, j in self.cofacets[index]:
                axpy(self.field, out, {coface: self.field.sign(j)}, value)
        return out

    def coboundary_matrix(self, k):
        rows = self.basis(k + 1)
        cols = self.basis(k)
        return SparseMatrix(self.field, rows, cols, {c: self.coboundary({c: self.field.one}) for c in cols})

    def cup(self, u, v):
        """Alexander-Whitney product: (u v)(s) = u(front p-face) * v(back q-face)."""
        if not u or not v:
            return {}
        p = self.cochain_degree(u)
        self.cochain_degree(v)
        field = self.field
        out = {}
        for a, x in u.items():
            front = self.simplices[a].vertices
            for b, y in v.items():
                back = self.simplices[b].vertices
                if front[-1] != back[0]:
                    continue
                target = self.index.get(front + back[1:])
                if target is None:
                    continue
                value = field.add(out.get(target, field.zero), field.mul(x, y))
                if value == 0:
                    out.pop(target, None)
                else:
                    out[target] = value
        logger.debug('cup of degree %s: %d terms', p, len(out))
        return out

    def cup_i(self, u, v, i):
        """
        Steenrod's cup-i product over F2. On s = [0..n], n = p + q - i,
        sum over 0 <= j_0 < .. < j_i <= n of
        u(0..j_0, j_1..j_2, ..) * v(j_0..j_1, j_2..j_3, ..).
        """
        if self.field.characteristic != 2:
            raise ValidationError('cup-i products are only defined here over F2.',
                                  code='odd_characteristic')
        if i < 0:
            raise ValidationError('cup-i needs i >= 0.', code='degree_mismatch')
        if i == 0:
            return self.cup(u, v)
        if not u or not v:
            return {}
        p = self.cochain_degree(u)
        q = self.cochain_degree(v)
        n = p + q - i
        if n < 0:
            return {}
        out = {}
        for index, s in self.simplices.items():
            if s.dimension != n:
                continue
            total = 0
            for cuts in combinations(range(n + 1), i + 1):
                bounds = (0,) + cuts + (n,)
                even, odd = set(), set()
                for block in range(len(bounds) - 1):
                    span = range(bounds[block], bounds[block + 1] + 1)
                    (even if block % 2 == 0 else odd).update(span)
                if len(even) != p + 1 or len(odd) != q + 1:
                    continue
                x = u.get(self.index[tuple(s.vertices[k] for k in sorted(even))], 0)
                if not x:
                    continue
                y = v.get(self.index[tuple(s.vertices[k] for k in sorted(odd))], 0)
                total ^= x & y
            if total:
                out[index] = 1
        return out

    def add(self, u, v, scalar=1):
        return axpy(self.field, dict(u), v, scalar)

    def random_cochain(self, k, rng):
        return clean(self.field, {i: self.field.random_element(rng) for i in self.basis(k)})
