"""
Finite dg-algebra models.

Each model exposes a cell basis with degrees, a differential, a bilinear
product on sparse vectors and its unit, and can be contracted onto its
cohomology with the incremental algorithm.
"""
import logging
from itertools import combinations

import networkx as nx
from django.core.exceptions import ValidationError

from chains.fields import Field
from chains.sparse import axpy, clean
from contraction.based import BasedComplex
from contraction.incremental import incremental_contraction

logger = logging.getLogger(__name__)


class DGAlgebra:
    """Base class: subclasses fill basis, degrees, _d and _mul."""
    name = 'dg-algebra'

    def __init__(self, field):
        self.field = field
        self.basis = ()
        self.degrees = {}

    def __repr__(self):
        return f'{type(self).__name__}({self.name!r}, dim {len(self.basis)}, {self.field})'

    def _d(self, label):
        return {}

    def _mul(self, left, right):
        raise NotImplementedError

    def unit(self):
        raise NotImplementedError

    def d(self, vector):
        out = {}
        for label, value in vector.items():
            axpy(self.field, out, self._d(label), value)
        return out

    def product(self, u, v):
        out = {}
        for a, x in u.items():
            for b, y in v.items():
                axpy(self.field, out, self._mul(a, b), self.field.mul(x, y))
        return out

    def based_complex(self):
        """The basis in a topological order of the differential, lowest degree first."""
        graph = nx.DiGraph()
        graph.add_nodes_from(self.basis)
        for label in self.basis:
            for other in self._d(label):
                graph.add_edge(other, label)
        rank = {label: k for k, label in enumerate(self.basis)}
        order = list(nx.lexicographical_topological_sort(
            graph, key=lambda label: (self.degrees[label], rank[label])))
        differential = {label: self._d(label) for label in order if self._d(label)}
        return BasedComplex(self.field, order, dict(self.degrees), differential)

    def contract(self):
        """Contraction of the model onto its cohomology, with the product attached."""
        contraction = incremental_contraction(self.based_complex())
        contraction.product = self.product
        contraction.unit = self.unit()
        logger.debug('%s: cohomology ranks %s', self.name, contraction.ranks())
        return contraction


def contract_algebra(algebra):
    return algebra.contract()


class ExteriorModel(DGAlgebra):
    """
    Exterior algebra on degree-one generators, optionally divided by the
    monomial ideal generated by forbidden pairs. The differential is given
    on generators as {generator: {(g, g'): coefficient}} and extended by
    the Leibniz rule; the ideal must be closed under it.
    Basis labels are tuples of generators in generator order; () is the unit.
    """

    def __init__(self, field, generators, differential=None, forbidden=(), name='exterior'):
        super().__init__(field)
        self.name = name
        self.generators = tuple(generators)
        self.rank = {g: k for k, g in enumerate(self.generators)}
        self.forbidden = {frozenset(pair) for pair in forbidden}
        monomials = []
        for size in range(len(self.generators) + 1):
            for subset in combinations(self.generators, size):
                if self._allowed(subset):
                    monomials.append(subset)
        self.basis = tuple(monomials)
        self.degrees = {m: len(m) for m in self.basis}
        self.generator_differential = {}
        for g, image in (differential or {}).items():
            vector = {}
            for word, coefficient in image.items():
                axpy(field, vector, self._word(word), coefficient)
            self.generator_differential[g] = vector
        self._d_cache = {}
        for m in self.basis:
            if self.d(self._d(m)):
                raise ValidationError('Differential of %(name)s does not square to zero.',
                                      code='monotonicity', params={'name': name})

    def _allowed(self, monomial):
        return not any(frozenset(pair) in self.forbidden for pair in combinations(monomial, 2))

    def _word(self, word):
        """A word of generators as a signed basis vector (zero if it repeats or is forbidden)."""
        if len(set(word)) != len(word):
            return {}
        ranks = [self.rank[g] for g in word]
        inversions = sum(1 for a, b in combinations(ranks, 2) if a > b)
        monomial = tuple(sorted(word, key=self.rank.__getitem__))
        if not self._allowed(monomial):
            return {}
        return {monomial: self.field.sign(inversions)}

    def _mul(self, left, right):
        return self._word(left + right)

    def _d(self, label):
        if label not in self._d_cache:
            out = {}
            for j, g in enumerate(label):
                image = self.generator_differential.get(g)
                if not image:
                    continue
                # d passes the j degree-one generators before g
                prefix = {label[:j]: self.field.one}
                suffix = {label[j + 1:]: self.field.one}
                term = self.product(self.product(prefix, image), suffix)
                axpy(self.field, out, term, self.field.sign(j))
            self._d_cache[label] = out
        return self._d_cache[label]

    def unit(self):
        return {(): self.field.one}

    def element(self, text):
        """'xz' -> basis vector of the monomial x z (generators named by single letters)."""
        return self._word(tuple(text)) if text != '1' else self.unit()


class SquareZeroAlgebra(DGAlgebra):
    """
    Unit plus positive-degree classes whose products all vanish; zero
    differential. Models cohomology with trivial products (wedges of
    spheres, unlinked circles).
    """

    def __init__(self, field, degrees, name='square-zero'):
        super().__init__(field)
        self.name = name
        self.basis = ('1',) + tuple(degrees)
        self.degrees = {'1': 0, **{label: int(k) for label, k in degrees.items()}}
        if any(k <= 0 for label, k in self.degrees.items() if label != '1'):
            raise ValidationError('Square-zero classes need positive degree.', code='degree_mismatch')

    def _mul(self, left, right):
        if left == '1':
            return {right: self.field.one}
        if right == '1':
            return {left: self.field.one}
        return {}

    def unit(self):
        return {'1': self.field.one}


class SimplicialCochainAlgebra(DGAlgebra):
    """Cochains of one stage of a filtration with the cup product."""

    def __init__(self, cochains):
        super().__init__(cochains.field)
        self.name = 'simplicial cochains'
        self.cochains = cochains
        self.basis = tuple(sorted(cochains.simplices))
        self.degrees = {i: cochains.degree_of(i) for i in self.basis}

    def product(self, u, v):
        return self.cochains.cup(u, v)

    def d(self, vector):
        return self.cochains.coboundary(vector)

    def unit(self):
        return self.cochains.unit()

    def contract(self):
        """Dual of the chain contraction; the coboundary points to later cells."""
        cx = self.cochains.complex
        complex = BasedComplex.from_filtered_complex(cx, self.field, self.cochains.stage)
        contraction = incremental_contraction(complex).dualize()
        contraction.product = self.product
        contraction.unit = self.unit()
        return contraction


# Named models

def heisenberg_model(field=None):
    """Lambda(x, y, z) with dz = xy: cochains of the Heisenberg nilmanifold."""
    field = field or Field.default()
    return ExteriorModel(field, 'xyz', {'z': {('x', 'y'): 1}}, name='heisenberg')


def borromean_model(field=None):
    """
    Lambda(a, b, c, u, v) with du = ab, dv = bc, divided by the monomials
    ac, au, bu, bv, cv, uv. Cohomology has ranks 1, 3, 2 with vanishing
    products, and the triple product of a, b, c is the class of -(uc + av).
    """
    field = field or Field.default()
    return ExteriorModel(
        field, 'abcuv', {'u': {('a', 'b'): 1}, 'v': {('b', 'c'): 1}},
        forbidden=[('a', 'c'), ('a', 'u'), ('b', 'u'), ('b', 'v'), ('c', 'v'), ('u', 'v')],
        name='borromean',
    )


def torus_model(field=None):
    """Lambda(a, b) with zero differential: the cohomology of the torus."""
    field = field or Field.default()
    return ExteriorModel(field, 'ab', name='torus')


def square_zero_algebra(ranks, field=None, name='square-zero'):
    """Square-zero algebra with ranks {degree: count} in positive degrees."""
    field = field or Field.default()
    degrees = {}
    for k in sorted(ranks):
        for n in range(ranks[k]):
            degrees[f'e{k}_{n}'] = k
    return SquareZeroAlgebra(field, degrees, name=name)


def trivial_link_model(field=None):
    """Three unlinked circles: same ranks as the borromean model, no higher products."""
    return square_zero_algebra({1: 3, 2: 2}, field, name='trivial-link')


def wedge_model(field=None):
    """Two circles and a sphere: the ranks of the torus, trivial products."""
    return square_zero_algebra({1: 2, 2: 1}, field, name='wedge')


MODEL_CHOICES = [
    ('heisenberg', 'Heisenberg nilmanifold'),
    ('borromean', 'Borromean-type model'),
    ('trivial-link', 'Trivial link'),
    ('torus', 'Torus'),
    ('wedge', 'Wedge of two circles and a sphere'),
]

MODELS = {
    'heisenberg': heisenberg_model,
    'borromean': borromean_model,
    'trivial-link': trivial_link_model,
    'torus': torus_model,
    'wedge': wedge_model,
}


def model(name, field=None):
    if name not in MODELS:
        raise ValidationError('Unknown model %(name)r.', code='parse', params={'name': name})
    return MODELS[name](field)


def check_leibniz(algebra, left, right):
    """d(xy) - (dx y + (-1)^|x| x dy) for basis labels; zero when the rule holds."""
    field = algebra.field
    x = {left: field.one}
    y = {right: field.one}
    lhs = algebra.d(algebra.product(x, y))
    rhs = algebra.product(algebra.d(x), y)
    axpy(field, rhs, algebra.product(x, algebra.d(y)), field.sign(algebra.degrees[left]))
    axpy(field, lhs, rhs, field.neg(field.one))
    return clean(field, lhs)
