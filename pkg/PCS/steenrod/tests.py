import numpy as np
from django.conf import settings
from django.core.exceptions import ValidationError
from django.test import SimpleTestCase

from ainfty.persistent import attach_cup_products, persistent_ainfty
from chains.cochains import CochainComplex
from chains.fields import Field
from chains.sparse import clean
from complexes.samples import random_filtered_complex, triangulation
from contraction.incremental import persistent_transfer_data

from .squares import adem_relation, check_adem, persistent_steenrod, square_cochain, steenrod_squares

F2 = Field(2)


def squares_of(name, field=F2):
    dual = attach_cup_products(persistent_transfer_data(triangulation(name), field))
    return dual.stages[-1], steenrod_squares(dual.stages[-1])


class SquareTests(SimpleTestCase):

    def test_projective_plane(self):
        contraction, sq = squares_of('projective-plane')
        (x,) = contraction.basis(1)
        (top,) = contraction.basis(2)
        self.assertEqual(sq[1].apply({x: 1}), {top: 1})
        self.assertEqual(sq[0].apply({x: 1}), {x: 1})

    def test_torus_has_trivial_sq1(self):
        _, sq = squares_of('torus')
        self.assertTrue(sq[1].is_zero())

    def test_suspended_projective_plane(self):
        contraction, sq = squares_of('suspended-projective-plane')
        (x,) = contraction.basis(2)
        (top,) = contraction.basis(3)
        self.assertEqual(sq[1].apply({x: 1}), {top: 1})
        self.assertEqual(sq[2].apply({x: 1}), {})

    def test_squares_do_not_depend_on_the_representative(self):
        rng = np.random.default_rng(settings.PCS_DEFAULT_SEED + 42)
        for name in ('projective-plane', 'torus', 'suspended-projective-plane'):
            contraction, sq = squares_of(name)
            cochains = contraction.cochains
            for x in contraction.basis():
                n = contraction.degree(x)
                for k in range(1, n + 1):
                    expected = clean(F2, sq[k].apply({x: 1}))
                    for _ in range(4):
                        shift = cochains.coboundary(cochains.random_cochain(n - 1, rng))
                        u = cochains.add(contraction.i.column(x), shift)
                        got = clean(F2, contraction.p.apply(square_cochain(u, k, cochains)))
                        self.assertEqual(got, expected, msg=f'{name} Sq^{k}')

    def test_top_square_is_the_cup_square(self):
        cochains = CochainComplex(triangulation('projective-plane'), field=F2)
        rng = np.random.default_rng(settings.PCS_DEFAULT_SEED + 40)
        u = cochains.random_cochain(1, rng)
        self.assertEqual(square_cochain(u, 1, cochains), cochains.cup(u, u))
        self.assertEqual(square_cochain(u, 2, cochains), {})

    def test_odd_characteristic(self):
        cochains = CochainComplex(triangulation('projective-plane'), field=Field(3))
        with self.assertRaises(ValidationError) as ctx:
            square_cochain(cochains.cochain({(0, 1): 1}), 1, cochains)
        self.assertEqual(ctx.exception.code, 'unsupported')
        pa = persistent_ainfty(persistent_transfer_data(triangulation('torus'), Field(3)), max_arity=2)
        with self.assertRaises(ValidationError) as ctx:
            persistent_steenrod(pa)
        self.assertEqual(ctx.exception.messages, ['unsupported: odd-p Steenrod action'])


class PersistentSteenrodTests(SimpleTestCase):

    def setUp(self):
        self.rng = np.random.default_rng(settings.PCS_DEFAULT_SEED + 41)

    def actions(self, count):
        for _ in range(count):
            ptd = persistent_transfer_data(random_filtered_complex(self.rng, max_simplices=30), F2)
            yield persistent_steenrod(persistent_ainfty(ptd, max_arity=2))

    def test_adem_relations(self):
        for action in self.actions(50):
            self.assertEqual(check_adem(action, 1, 1), [])
            self.assertEqual(check_adem(action, 1, 2), [])

    def test_naturality(self):
        for action in self.actions(50):
            self.assertEqual(action.naturality_defects(), [])

    def test_squares_beyond_range_vanish(self):
        pa = persistent_ainfty(persistent_transfer_data(triangulation('projective-plane'), F2), max_arity=2)
        action = persistent_steenrod(pa)
        self.assertTrue(action.sq(0, 5).is_zero())
        self.assertIn('"snapshots"', action.to_json())

    def test_adem_needs_admissible_pair(self):
        action = next(self.actions(1))
        with self.assertRaises(ValidationError):
            check_adem(action, 2, 1)


class AdemRelationTests(SimpleTestCase):

    def test_mod_two(self):
        self.assertEqual(adem_relation(1, 1), [])
        self.assertEqual(adem_relation(1, 2), [(1, (3, 0))])
        self.assertEqual(adem_relation(2, 2), [(1, (3, 1))])
        self.assertEqual(adem_relation(3, 2), [])

    def test_odd_prime(self):
        self.assertEqual(adem_relation(1, 1, prime=3), [(2, ('P', 2, 'P', 0))])
        with self.assertRaises(ValidationError):
            adem_relation(3, 1, prime=3)

    def test_odd_prime_with_bockstein(self):
        terms = adem_relation(1, 1, prime=3, bockstein=True)
        self.assertTrue(terms)
        self.assertTrue(all(word[0] in ('b', 'P') for _, word in terms))
