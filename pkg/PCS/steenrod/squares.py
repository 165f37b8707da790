"""
Mod-2 Steenrod squares on persistent cohomology.

For a class of degree n with representative u = i(x),
Sq^k(x) = p(u cup_(n-k) u) for 0 <= k <= n and zero for k > n.
"""
import json
import logging
from math import comb

from django.core.exceptions import ValidationError

from chains.sparse import SparseMatrix, clean

logger = logging.getLogger(__name__)


def _require_f2(field):
    if field.characteristic != 2:
        raise ValidationError('unsupported: odd-p Steenrod action', code='unsupported')


def square_cochain(u, k, cochains):
    """Sq^k on a degree-n cocycle at the cochain level: u cup_(n-k) u."""
    _require_f2(cochains.field)
    n = cochains.cochain_degree(u)
    if n is None or k > n:
        return {}
    if k < 0:
        raise ValidationError('Sq^k needs k >= 0.', code='degree_mismatch')
    return cochains.cup_i(u, u, n - k)


def steenrod_squares(contraction, k_max=None):
    """
    {k: matrix of Sq^k on the basis of H} for one dual contraction with its
    cochains attached. k_max defaults to the top degree of H.
    """
    cochains = contraction.cochains
    if cochains is None:
        raise ValidationError('Steenrod squares need simplicial cochains.', code='basis_mismatch')
    _require_f2(contraction.field)
    field = contraction.field
    basis = contraction.basis()
    top = max((contraction.degree(b) for b in basis), default=0)
    k_max = top if k_max is None else k_max
    squares = {}
    for k in range(0, k_max + 1):
        columns = {}
        for b in basis:
            n = contraction.degree(b)
            if k > n:
                continue
            if k == 0:
                columns[b] = {b: field.one}
                continue
            u = contraction.i.column(b)
            columns[b] = clean(field, contraction.p.apply(square_cochain(u, k, cochains)))
        squares[k] = SparseMatrix(field, basis, basis, columns)
    return squares


class SteenrodAction:
    """Sq^k matrices per snapshot, with the restriction maps between snapshots."""

    def __init__(self, times, squares, stage_maps, degrees):
        self.times = list(times)
        self.squares = list(squares)
        self.stage_maps = list(stage_maps)
        self.degrees = list(degrees)

    def __len__(self):
        return len(self.squares)

    def __repr__(self):
        return f'SteenrodAction({len(self.squares)} snapshots)'

    def sq(self, j, k):
        """Sq^k at snapshot j; zero beyond the computed range."""
        computed = self.squares[j]
        if k in computed:
            return computed[k]
        any_matrix = computed[0]
        return SparseMatrix.zeros(any_matrix.field, any_matrix.rows, any_matrix.cols)

    def apply(self, j, k, vector):
        return self.sq(j, k).apply(vector)

    def naturality_defects(self):
        """(snapshot j, k) where R_j o Sq^k != Sq^k o R_j."""
        defects = []
        for j, restriction in enumerate(self.stage_maps):
            for k in sorted(set(self.squares[j]) | set(self.squares[j + 1])):
                if restriction @ self.sq(j + 1, k) != self.sq(j, k) @ restriction:
                    defects.append((j, k))
        if defects:
            logger.warning('Steenrod squares fail naturality at %s', defects)
        return defects

    def to_json(self):
        return json.dumps({
            'snapshots': [
                {'time': t, 'squares': {str(k): json.loads(m.to_json()) for k, m in sorted(sq.items())}}
                for t, sq in zip(self.times, self.squares)
            ],
        }, sort_keys=True)


def persistent_steenrod(pa, k_max=None):
    """Steenrod action over every snapshot of a persistent A-infinity structure."""
    if pa.field is not None:
        _require_f2(pa.field)
    squares = [steenrod_squares(contraction, k_max) for contraction in pa.contractions]
    degrees = [snapshot.degrees for snapshot in pa.snapshots]
    action = SteenrodAction(pa.times, squares, pa.stage_maps, degrees)
    logger.info('Steenrod action on %d snapshots', len(squares))
    return action


def adem_coefficients(h, k):
    """[(coefficient mod 2, (h + k - i, i))] for Sq^h Sq^k with 0 < h < 2k."""
    return [
        (comb(k - i - 1, h - 2 * i) % 2, (h + k - i, i))
        for i in range(0, h // 2 + 1)
    ]


def check_adem(action, h, k):
    """
    Snapshots where Sq^h Sq^k differs from
    sum_i binom(k-i-1, h-2i) Sq^(h+k-i) Sq^i; empty when the relation holds.
    """
    if not 0 < h < 2 * k:
        raise ValidationError('The Adem relation needs 0 < h < 2k.', code='degree_mismatch',
                              params={'h': h, 'k': k})
    violations = []
    for j in range(len(action)):
        lhs = action.sq(j, h) @ action.sq(j, k)
        rhs = SparseMatrix.zeros(lhs.field, lhs.rows, lhs.cols)
        for coefficient, (a, b) in adem_coefficients(h, k):
            if coefficient:
                rhs = rhs + action.sq(j, a) @ action.sq(j, b)
        if lhs != rhs:
            violations.append((j, lhs - rhs))
    return violations


def adem_relation(h, k, prime=2, bockstein=False):
    """
    Symbolic Adem relation as a list of (coefficient, word).

    p = 2, 0 < h < 2k: words (h + k - i, i) meaning Sq^(h+k-i) Sq^i.
    p odd, a < p b: words ('P', a + b - i, 'P', i).
    p odd with bockstein, a <= p b: words mixing 'b' (the Bockstein) and 'P'.
    Zero coefficients are dropped.
    """
    if prime == 2:
        if not 0 < h < 2 * k:
            raise ValidationError('The Adem relation needs 0 < h < 2k.', code='degree_mismatch')
        return [(c, word) for c, word in adem_coefficients(h, k) if c]
    a, b, p = h, k, prime
    terms = []
    if not bockstein:
        if not 0 < a < p * b:
            raise ValidationError('The Adem relation needs 0 < a < p b.', code='degree_mismatch')
        for i in range(0, a // p + 1):
            c = (-1) ** (a + i) * _binom((p - 1) * (b - i) - 1, a - p * i)
            if c % p:
                terms.append((c % p, ('P', a + b - i, 'P', i)))
        return terms
    if not 0 < a <= p * b:
        raise ValidationError('The Adem relation needs 0 < a <= p b.', code='degree_mismatch')
    for i in range(0, a // p + 1):
        c = (-1) ** (a + i) * _binom((p - 1) * (b - i), a - p * i)
        if c % p:
            terms.append((c % p, ('b', 'P', a + b - i, 'P', i)))
    for i in range(0, (a - 1) // p + 1):
        c = (-1) ** (a + i + 1) * _binom((p - 1) * (b - i) - 1, a - p * i - 1)
        if c % p:
            terms.append((c % p, ('P', a + b - i, 'b', 'P', i)))
    return terms


def _binom(n, r):
    if n < 0 or r < 0 or r > n:
        return 0
    return comb(n, r)
