import numpy as np
from django.conf import settings
from django.core.exceptions import ValidationError
from django.test import SimpleTestCase

from chains.fields import Field
from chains.sparse import clean
from complexes.filtration import FilteredComplex
from complexes.samples import random_filtered_complex, triangulation
from contraction.incremental import persistent_transfer_data

from .algebras import (
    ExteriorModel, borromean_model, check_leibniz, heisenberg_model, model, square_zero_algebra,
    torus_model, trivial_link_model,
)
from .persistent import constant_persistent_ainfty, persistent_ainfty
from .transfer import check_stasheff, massey_products, transfer_ainfty

F2 = Field(2)
F3 = Field(3)


class ModelTests(SimpleTestCase):

    def test_heisenberg_basis(self):
        algebra = heisenberg_model(F2)
        self.assertEqual(len(algebra.basis), 8)
        self.assertEqual(algebra.d(algebra.element('z')), {('x', 'y'): 1})

    def test_exterior_signs(self):
        algebra = torus_model(F3)
        self.assertEqual(algebra.product(algebra.element('b'), algebra.element('a')), {('a', 'b'): 2})
        self.assertEqual(algebra.product(algebra.element('a'), algebra.element('a')), {})

    def test_leibniz_rule(self):
        for algebra in (heisenberg_model(F3), borromean_model(F3), borromean_model(F2)):
            for left in algebra.basis:
                for right in algebra.basis:
                    self.assertEqual(check_leibniz(algebra, left, right), {})

    def test_differential_must_square_to_zero(self):
        with self.assertRaises(ValidationError):
            ExteriorModel(F3, 'vwxyz', {'w': {('x', 'y'): 1}, 'y': {('z', 'v'): 1}})

    def test_cohomology_ranks(self):
        self.assertEqual(heisenberg_model(F2).contract().ranks(), {0: 1, 1: 2, 2: 2, 3: 1})
        self.assertEqual(borromean_model(F3).contract().ranks(), {0: 1, 1: 3, 2: 2})
        self.assertEqual(trivial_link_model(F3).contract().ranks(), {0: 1, 1: 3, 2: 2})

    def test_square_zero_needs_positive_degrees(self):
        with self.assertRaises(ValidationError):
            square_zero_algebra({0: 1}, F2)

    def test_unknown_model(self):
        with self.assertRaises(ValidationError) as ctx:
            model('klein-bottle', F2)
        self.assertEqual(ctx.exception.code, 'parse')


class TransferTests(SimpleTestCase):

    def test_heisenberg_triple_product(self):
        a = transfer_ainfty(heisenberg_model(F2).contract(), max_arity=3)
        self.assertEqual(a.m(('x',), ('y',)), {})
        self.assertEqual(a.m(('x',), ('x',), ('y',)), {('x', 'z'): 1})

    def test_borromean_triple_product(self):
        a = transfer_ainfty(borromean_model(F3).contract(), max_arity=3)
        for x in a.basis_in_degree(1):
            for y in a.basis_in_degree(1):
                self.assertEqual(a.m(x, y), {})
        self.assertTrue(massey_products(a, [('a',), ('b',), ('c',)]))

    def test_trivial_link_has_no_higher_products(self):
        a = transfer_ainfty(trivial_link_model(F3).contract(), max_arity=4)
        self.assertEqual(a.ops[3], {})
        self.assertEqual(a.ops[4], {})

    def test_stasheff_relations(self):
        for algebra in (heisenberg_model(F2), borromean_model(F2), torus_model(F2)):
            a = transfer_ainfty(algebra.contract(), max_arity=3)
            for n in (3, 4):
                self.assertEqual(check_stasheff(a, n), [], msg=f'{algebra.name} rel_{n}')

    def test_associativity_over_odd_characteristic(self):
        for algebra in (heisenberg_model(F3), borromean_model(F3)):
            a = transfer_ainfty(algebra.contract(), max_arity=2)
            self.assertEqual(check_stasheff(a, 3), [])

    def test_tampered_product_is_flagged(self):
        a = transfer_ainfty(torus_model(F2).contract(), max_arity=2)
        a.ops[2][((), ('a',))] = {('b',): 1}
        violations = check_stasheff(a, 3)
        self.assertIn(((), ('a',), ('b',)), [key for key, _ in violations])

    def test_unitality(self):
        for algebra in (heisenberg_model(F2), borromean_model(F2)):
            a = transfer_ainfty(algebra.contract(), max_arity=3)
            self.assertEqual(a.unit(), {(): 1})
            for x in a.basis:
                self.assertEqual(a.m((), x), {x: 1})
                self.assertEqual(a.m(x, ()), {x: 1})
            self.assertFalse([key for key in a.ops[3] if () in key])

    def test_arity_limits(self):
        contraction = torus_model(F2).contract()
        with self.assertRaises(ValidationError) as ctx:
            transfer_ainfty(contraction, max_arity=6)
        self.assertEqual(ctx.exception.code, 'arity')
        a = transfer_ainfty(contraction, max_arity=2)
        with self.assertRaises(ValidationError):
            a.m(('a',), ('a',), ('a',))
        with self.assertRaises(ValidationError):
            check_stasheff(a, 4)
        with self.assertRaises(ValidationError):
            massey_products(a, [('q',), ('a',)])

    def test_to_json_labels(self):
        a = transfer_ainfty(torus_model(F2).contract(), max_arity=2)
        self.assertIn('"ab"', a.to_json())


class PersistentTests(SimpleTestCase):

    def test_torus_cup_product(self):
        pa = persistent_ainfty(persistent_transfer_data(triangulation('torus'), F2), max_arity=2)
        self.assertEqual(len(pa), 1)
        a = pa.snapshots[0]
        products = [(key, value) for key, value in a.nonzero(2)
                    if all(a.degree(x) == 1 for x in key)]
        self.assertTrue(products)

    def test_projective_plane_square(self):
        pa = persistent_ainfty(persistent_transfer_data(triangulation('projective-plane'), F2), max_arity=2)
        a = pa.snapshots[0]
        (x,) = a.basis_in_degree(1)
        self.assertEqual(list(a.m(x, x).values()), [1])

    def test_restrictions_respect_products(self):
        rng = np.random.default_rng(settings.PCS_DEFAULT_SEED + 30)
        for _ in range(8):
            ptd = persistent_transfer_data(random_filtered_complex(rng, max_simplices=25), F2)
            pa = persistent_ainfty(ptd, max_arity=2)
            for j in range(len(pa) - 1):
                self.assertEqual(pa.stage_morphism(j).check(2), [])

    def test_stasheff_on_random_filtrations(self):
        rng = np.random.default_rng(settings.PCS_DEFAULT_SEED + 31)
        for _ in range(60):
            ptd = persistent_transfer_data(random_filtered_complex(rng, max_simplices=25), F2)
            for a in persistent_ainfty(ptd, max_arity=3).snapshots:
                self.assertEqual(check_stasheff(a, 3), [])
                self.assertEqual(check_stasheff(a, 4), [])

    def test_m2_is_the_projected_cup_product(self):
        rng = np.random.default_rng(settings.PCS_DEFAULT_SEED + 32)
        for field in (F2, F3):
            for _ in range(15):
                ptd = persistent_transfer_data(random_filtered_complex(rng, max_simplices=25), field)
                pa = persistent_ainfty(ptd, max_arity=2)
                for a, stage in zip(pa.snapshots, pa.contractions):
                    positive = [x for x in a.basis if a.degree(x) > 0]
                    for x in positive:
                        for y in positive:
                            cup = stage.product(stage.i.column(x), stage.i.column(y))
                            expected = clean(stage.field, stage.p.apply(cup))
                            self.assertEqual(a.m(x, y), expected)

    def test_span_map(self):
        cx = FilteredComplex.from_records([((0,), 0.0), ((1,), 0.0), ((0, 1), 1.0)])
        pa = persistent_ainfty(persistent_transfer_data(cx, F2), max_arity=2)
        self.assertEqual(pa.times, [0.0, 1.0])
        self.assertEqual(pa.span_map(0, 1).to_dense(), [[1], [1]])
        self.assertEqual(pa.snapshot_index(0.5), 0)
        with self.assertRaises(ValidationError):
            pa.span_map(1, 0)

    def test_constant_structure(self):
        pa = constant_persistent_ainfty(heisenberg_model(F2).contract(), max_arity=3)
        self.assertEqual(pa.times, [0.0])
        self.assertEqual(pa.field, F2)
