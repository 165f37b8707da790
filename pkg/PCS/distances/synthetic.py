"""
Pairs of ledgers whose refined distances are known in closed form.

The torus and Borromean pairs attach constant transferred structures to
prescribed lifespans in place of large point clouds; the suspension
pairs are honest filtrations, a triangulation at 0 coned off at 1.
"""
import logging
from itertools import combinations

from django.core.exceptions import ValidationError

from ainfty.algebras import borromean_model, contract_algebra, torus_model, trivial_link_model, wedge_model
from ainfty.transfer import transfer_ainfty
from chains.fields import Field
from complexes.filtration import FilteredComplex, closure
from complexes.samples import octahedron, suspended_projective_plane

from .ledger import ledger_from_complex, ledger_from_structure

logger = logging.getLogger(__name__)


def _structure(algebra, max_arity):
    return transfer_ainfty(contract_algebra(algebra), max_arity)


def torus_vs_wedge(alpha=0.1, field=None, max_arity=3):
    """
    Torus classes alive on [alpha, 1 - alpha) against the wedge of two
    circles and a sphere, shifted by alpha / 2; one short noise bar each.
    """
    field = field or Field.default()
    shift = alpha / 2
    x = ledger_from_structure(
        _structure(torus_model(field), max_arity), (alpha, 1 - alpha),
        noise=[(1, 0.5 - alpha, 0.5 + alpha)], name='torus',
    )
    y = ledger_from_structure(
        _structure(wedge_model(field), max_arity), (alpha + shift, 1 - alpha + shift),
        noise=[(1, 0.5 - alpha + shift, 0.5 + alpha + shift)], name='wedge',
    )
    return x, y


def borromean_vs_trivial(ell=0.5, alpha=0.05, field=None, max_arity=3):
    """Borromean-type classes on [alpha, ell) against the trivial link shifted by alpha / 2."""
    field = field or Field.default()
    shift = alpha / 2
    x = ledger_from_structure(_structure(borromean_model(field), max_arity), (alpha, ell), name='borromean')
    y = ledger_from_structure(_structure(trivial_link_model(field), max_arity),
                              (alpha + shift, ell + shift), name='trivial-link')
    return x, y


def coned_off(facets, cone_value=1.0):
    """The closure of the facets at 0, then its cone on a new vertex at cone_value."""
    simplices = closure(facets)
    apex = max(v for s in simplices for v in s) + 1
    records = [(s, 0.0) for s in simplices]
    records.append(((apex,), cone_value))
    records.extend((s + (apex,), cone_value) for s in simplices)
    return FilteredComplex.from_records(records)


def sphere_wedge_facets():
    """Octahedral 2-sphere and the boundary of a 4-simplex sharing vertex 5."""
    return octahedron() + list(combinations(range(5, 10), 4))


def suspension_pair(target='wedge', field=None, max_arity=2):
    """
    Suspended projective plane against the wedge of a 2- and a 3-sphere
    (same mod-2 cohomology, trivial Sq^1) or against a point.
    """
    field = field or Field.default()
    x = ledger_from_complex(coned_off(suspended_projective_plane()), field, max_arity,
                            name='suspended-projective-plane')
    if target == 'wedge':
        other = coned_off(sphere_wedge_facets())
    else:
        other = FilteredComplex.from_records([((0,), 0.0)])
    y = ledger_from_complex(other, field, max_arity, name=target)
    logger.info('Suspension pair over %s: %r / %r', field, x, y)
    return x, y


PAIR_CHOICES = [
    ('torus-wedge', 'Torus against a wedge of spheres'),
    ('borromean-trivial', 'Borromean rings against the trivial link'),
    ('suspension-wedge', 'Suspended projective plane against a wedge of spheres'),
    ('suspension-ball', 'Suspended projective plane against a point'),
]


def synthetic_pair(name, field=None):
    if name == 'torus-wedge':
        return torus_vs_wedge(field=field)
    if name == 'borromean-trivial':
        return borromean_vs_trivial(field=field)
    if name == 'suspension-wedge':
        return suspension_pair('wedge', field)
    if name == 'suspension-ball':
        return suspension_pair('ball', field)
    raise ValidationError('Unknown synthetic pair %(name)r.', code='parse', params={'name': name})
