"""
Homotopy transfer of a dg-algebra product to A-infinity operations on
cohomology, and the Stasheff relations.

With I = i, P = p and h from a contraction (ip - id = dh + hd):
    H(x) = I(x),  H(x_1..x_k) = h(theta(x_1..x_k)) for k >= 2,
    theta(x_1..x_n) = sum over s + t = n of
        (-1)^(s(t+1) + (1-t)(|x_1|+..+|x_s|)) H(x_1..x_s) * H(x_s+1..x_n),
    m_n = P o theta.
"""
import json
import logging
from itertools import product as cartesian

from django.conf import settings
from django.core.exceptions import ValidationError

from chains.sparse import axpy, clean

logger = logging.getLogger(__name__)

MIN_ARITY = 2
MAX_ARITY = 5


def _check_arity(max_arity):
    if not MIN_ARITY <= max_arity <= MAX_ARITY:
        raise ValidationError('Arity must lie in %(low)s..%(high)s, got %(n)s.', code='arity',
                              params={'low': MIN_ARITY, 'high': MAX_ARITY, 'n': max_arity})


def default_max_arity():
    value = getattr(settings, 'PCS_MAX_ARITY', 3)
    _check_arity(value)
    return value


class AInftyStructure:
    """
    Graded basis of H with multilinear operations.

    ops[n] maps a tuple of basis labels to the sparse expansion of
    m_n on it; absent tuples evaluate to zero. m_1 is zero.
    """

    def __init__(self, field, basis, degrees, ops, max_arity, unit=None):
        self.field = field
        self.basis = tuple(basis)
        self.degrees = dict(degrees)
        self.ops = {n: dict(table) for n, table in ops.items()}
        self.ops.setdefault(1, {})
        self.max_arity = max_arity
        self._unit = dict(unit or {})

    def __repr__(self):
        counts = {n: len(t) for n, t in sorted(self.ops.items()) if n > 1}
        return f'AInftyStructure(dim {len(self.basis)}, nonzero entries {counts}, {self.field})'

    def degree(self, label):
        return self.degrees[label]

    def basis_in_degree(self, k):
        return [b for b in self.basis if self.degrees[b] == k]

    def unit(self):
        """The unit class; for cochains, the sum of the degree-0 basis."""
        if self._unit:
            return dict(self._unit)
        return {b: self.field.one for b in self.basis_in_degree(0)}

    def m(self, *labels):
        n = len(labels)
        if n > self.max_arity:
            raise ValidationError('m_%(n)s is beyond the computed arity %(max)s.', code='arity',
                                  params={'n': n, 'max': self.max_arity})
        return dict(self.ops.get(n, {}).get(tuple(labels), {}))

    def evaluate(self, n, vectors):
        """m_n on arbitrary vectors, by multilinearity."""
        field = self.field
        table = self.ops.get(n, {})
        out = {}
        if not table:
            return out
        for labels in cartesian(*[list(v.items()) for v in vectors]):
            key = tuple(label for label, _ in labels)
            image = table.get(key)
            if not image:
                continue
            coefficient = field.one
            for _, value in labels:
                coefficient = field.mul(coefficient, value)
            axpy(field, out, image, coefficient)
        return out

    def nonzero(self, n):
        return sorted(self.ops.get(n, {}).items(), key=lambda item: repr(item[0]))

    def to_json(self):
        def label(x):
            return ''.join(x) or '1' if isinstance(x, tuple) else x

        return json.dumps({
            'field': self.field.characteristic,
            'max_arity': self.max_arity,
            'basis': [{'label': label(b), 'degree': self.degrees[b]} for b in self.basis],
            'ops': {
                str(n): [
                    {'inputs': [label(x) for x in key],
                     'output': {str(label(k)): self.field.to_json(v) for k, v in image.items()}}
                    for key, image in self.nonzero(n)
                ]
                for n in sorted(self.ops) if n > 1
            },
        }, sort_keys=True)


def transfer_ainfty(contraction, max_arity=None, product=None):
    """
    Transferred A-infinity structure on the cohomology of a contracted
    dg-algebra. Tuples whose output degree lies outside the graded range
    of H are skipped.
    """
    max_arity = default_max_arity() if max_arity is None else max_arity
    _check_arity(max_arity)
    product = product or contraction.product
    if product is None:
        raise ValidationError('The contraction carries no product.', code='basis_mismatch')
    field = contraction.field
    basis = contraction.basis()
    degrees = {b: contraction.degree(b) for b in basis}
    present = set(degrees.values())
    theta = {}
    lifted = {}

    def lift(key):
        if key not in lifted:
            if len(key) == 1:
                lifted[key] = dict(contraction.i.column(key[0]))
            else:
                lifted[key] = contraction.h.apply(compute(key))
        return lifted[key]

    def compute(key):
        if key not in theta:
            n = len(key)
            out = {}
            for s in range(1, n):
                t = n - s
                left = lift(key[:s])
                if not left:
                    continue
                right = lift(key[s:])
                if not right:
                    continue
                moved = sum(degrees[x] for x in key[:s])
                sign = field.sign(s * (t + 1) + (1 - t) * moved)
                axpy(field, out, product(left, right), sign)
            theta[key] = out
        return theta[key]

    ops = {1: {}}
    for n in range(2, max_arity + 1):
        table = {}
        for key in cartesian(basis, repeat=n):
            if sum(degrees[x] for x in key) + 2 - n not in present:
                continue
            value = clean(field, contraction.p.apply(compute(key)))
            if value:
                table[key] = value
        ops[n] = table
        logger.debug('m_%d: %d nonzero entries', n, len(table))
    unit = contraction.p.apply(contraction.unit) if contraction.unit else None
    structure = AInftyStructure(field, basis, degrees, ops, max_arity, unit)
    logger.info('Transferred %r', structure)
    return structure


def _rel_terms(a, key):
    """Sum over p + q + r = n of the Stasheff terms on one basis tuple."""
    field = a.field
    n = len(key)
    out = {}
    for q in range(2, n):
        for p in range(0, n - q + 1):
            r = n - p - q
            inner = a.ops.get(q, {}).get(key[p:p + q])
            if not inner:
                continue
            koszul = (2 - q) * sum(a.degrees[x] for x in key[:p])
            sign = field.sign(p + q * r + koszul)
            args = [{x: field.one} for x in key[:p]] + [inner] + [{x: field.one} for x in key[p + q:]]
            axpy(field, out, a.evaluate(p + r + 1, args), sign)
    return out


def check_stasheff(a, n):
    """
    Violations of the Stasheff relation rel_n as (tuple, residue) pairs;
    empty when the relation holds on every basis tuple. With m_1 = 0,
    rel_n only involves arities below n, so n may reach max_arity + 1.
    """
    if n > a.max_arity + 1 or a.ops.get(1):
        raise ValidationError('rel_%(n)s needs operations beyond arity %(max)s.', code='arity',
                              params={'n': n, 'max': a.max_arity})
    violations = []
    if n < 3:
        return violations
    for key in cartesian(a.basis, repeat=n):
        residue = clean(a.field, _rel_terms(a, key))
        if residue:
            violations.append((key, residue))
    if violations:
        logger.debug('rel_%d fails on %d tuples', n, len(violations))
    return violations


def massey_products(a, classes):
    """m_n on a tuple of basis classes, expanded in the basis of H."""
    classes = tuple(classes)
    if not 1 <= len(classes) <= a.max_arity:
        raise ValidationError('Arity %(n)s is outside 1..%(max)s.', code='arity',
                              params={'n': len(classes), 'max': a.max_arity})
    for label in classes:
        if label not in a.degrees:
            raise ValidationError('Unknown class %(label)r.', code='basis_mismatch',
                                  params={'label': label})
    return a.m(*classes)


class AInftyMorphism:
    """
    Components f_n: H^(x n) -> H' of degree 1 - n, as tables like the
    operations of AInftyStructure. A linear stage map is the case f_n = 0
    for n >= 2.
    """

    def __init__(self, source, target, components):
        self.source = source
        self.target = target
        self.components = {n: dict(t) for n, t in components.items()}

    @classmethod
    def from_linear_map(cls, source, target, matrix):
        table = {(b,): dict(matrix.column(b)) for b in source.basis if matrix.column(b)}
        return cls(source, target, {1: table})

    def evaluate(self, n, vectors):
        field = self.source.field
        table = self.components.get(n, {})
        out = {}
        for labels in cartesian(*[list(v.items()) for v in vectors]):
            image = table.get(tuple(label for label, _ in labels))
            if not image:
                continue
            coefficient = field.one
            for _, value in labels:
                coefficient = field.mul(coefficient, value)
            axpy(field, out, image, coefficient)
        return out

    def check(self, n):
        """
        Residue of the morphism relation of arity n on every basis tuple:
        sum (-1)^(p+qr) f(id^p m_q id^r) - sum (-1)^e m'_k(f_i1 .. f_ik).
        """
        a, b = self.source, self.target
        field = a.field
        violations = []
        for key in cartesian(a.basis, repeat=n):
            lhs = {}
            for q in range(2, n + 1):
                for p in range(0, n - q + 1):
                    r = n - p - q
                    inner = a.ops.get(q, {}).get(key[p:p + q])
                    if not inner:
                        continue
                    koszul = (2 - q) * sum(a.degrees[x] for x in key[:p])
                    args = ([{x: field.one} for x in key[:p]] + [inner]
                            + [{x: field.one} for x in key[p + q:]])
                    axpy(field, lhs, self.evaluate(p + r + 1, args), field.sign(p + q * r + koszul))
            rhs = {}
            for parts in _compositions(n):
                k = len(parts)
                if k == 1:
                    # m'_1 vanishes
                    continue
                sign_exponent = sum((k - u - 1) * (i - 1) for u, i in enumerate(parts))
                pieces = []
                start = 0
                for i in parts:
                    block = key[start:start + i]
                    sign_exponent += (1 - i) * sum(a.degrees[x] for x in key[:start])
                    pieces.append(self.evaluate(i, [{x: field.one} for x in block]))
                    start += i
                if any(not piece for piece in pieces):
                    continue
                axpy(field, rhs, b.evaluate(k, pieces), field.sign(sign_exponent))
            axpy(field, lhs, rhs, field.neg(field.one))
            residue = clean(field, lhs)
            if residue:
                violations.append((key, residue))
        return violations


def _compositions(n):
    """Ordered tuples of positive integers summing to n."""
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in _compositions(n - first):
            yield (first,) + rest
