from fractions import Fraction

import numpy as np
from django.conf import settings
from django.core.exceptions import ImproperlyConfigured, ValidationError
from django.test import SimpleTestCase, override_settings

from complexes.samples import random_filtered_complex, triangulation

from .cochains import CochainComplex, betti_numbers, boundary_matrices
from .fields import Field, is_prime
from .sparse import SparseMatrix, axpy, clean


class FieldTests(SimpleTestCase):
    """Prime fields and the rationals"""

    def test_is_prime(self):
        self.assertEqual([n for n in range(12) if is_prime(n)], [2, 3, 5, 7, 11])

    def test_arithmetic_mod_three(self):
        f = Field(3)
        self.assertEqual(f.add(2, 2), 1)
        self.assertEqual(f.neg(1), 2)
        self.assertEqual(f.inverse(2), 2)
        self.assertEqual(f.div(1, 2), 2)
        self.assertEqual(f.sign(3), 2)
        self.assertEqual(list(f.elements()), [0, 1, 2])

    def test_rationals(self):
        q = Field(0)
        self.assertTrue(q.is_rational)
        self.assertEqual(q.div(1, 3), Fraction(1, 3))
        self.assertEqual(q.to_json(Fraction(1, 2)), '1/2')
        self.assertEqual(q.to_json(Fraction(4, 2)), 2)

    def test_zero_has_no_inverse(self):
        with self.assertRaises(ZeroDivisionError):
            Field(5).inverse(0)

    def test_rejects_composite_characteristic(self):
        with self.assertRaises(ValidationError) as ctx:
            Field(4)
        self.assertEqual(ctx.exception.code, 'field_mismatch')

    @override_settings(PCS_FIELD_CHARACTERISTIC=6)
    def test_misconfigured_default(self):
        with self.assertRaises(ImproperlyConfigured):
            Field.default()

    @override_settings(PCS_FIELD_CHARACTERISTIC=3)
    def test_default_from_settings(self):
        self.assertEqual(Field.default(), Field(3))


class SparseMatrixTests(SimpleTestCase):

    def setUp(self):
        self.field = Field(3)
        self.rng = np.random.default_rng(settings.PCS_DEFAULT_SEED + 1)

    def test_axpy_drops_zeros(self):
        target = {'a': 1, 'b': 2}
        axpy(self.field, target, {'a': 2, 'c': 1})
        self.assertEqual(target, {'b': 2, 'c': 1})
        self.assertEqual(clean(self.field, {'a': 3, 'b': 4}), {'b': 1})

    def test_product_and_transpose(self):
        a = SparseMatrix.from_dense(self.field, ['r0', 'r1'], ['c0', 'c1'], [[1, 2], [0, 1]])
        b = SparseMatrix.from_dense(self.field, ['c0', 'c1'], ['d0'], [[1], [1]])
        product = a @ b
        self.assertEqual(product.to_dense(), [[0], [1]])
        self.assertEqual(a.T.T, a)
        self.assertEqual((a @ b).T, b.T @ a.T)

    def test_mismatched_product(self):
        a = SparseMatrix.identity(self.field, ['x'])
        b = SparseMatrix.identity(self.field, ['y'])
        with self.assertRaises(ValidationError) as ctx:
            a @ b
        self.assertEqual(ctx.exception.code, 'basis_mismatch')

    def test_field_mismatch(self):
        with self.assertRaises(ValidationError) as ctx:
            SparseMatrix.identity(Field(2), ['x']) + SparseMatrix.identity(Field(3), ['x'])
        self.assertEqual(ctx.exception.code, 'field_mismatch')

    def test_inverse_of_random_unitriangular(self):
        labels = list(range(6))
        for _ in range(10):
            dense = [[0] * 6 for _ in labels]
            for i in labels:
                dense[i][i] = int(self.rng.integers(1, 3))
                for j in range(i + 1, 6):
                    dense[i][j] = int(self.rng.integers(0, 3))
            m = SparseMatrix.from_dense(self.field, labels, labels, dense)
            # scramble the column order so pivots are not on the diagonal
            order = [int(k) for k in self.rng.permutation(6)]
            m = m.restrict(cols=order)
            self.assertEqual(m @ m.inverse(), SparseMatrix.identity(self.field, labels))

    def test_singular_matrix(self):
        m = SparseMatrix.from_dense(self.field, [0, 1], [0, 1], [[1, 2], [2, 1]])
        with self.assertRaises(ValidationError):
            m.inverse()

    def test_rank(self):
        m = SparseMatrix.from_dense(Field(2), [0, 1, 2], [0, 1, 2], [[1, 1, 0], [0, 1, 1], [1, 0, 1]])
        self.assertEqual(m.rank(), 2)
        self.assertEqual(SparseMatrix.from_dense(Field(3), [0, 1, 2], [0, 1, 2],
                                                 [[1, 1, 0], [0, 1, 1], [1, 0, 1]]).rank(), 3)


class BettiNumberTests(SimpleTestCase):

    def test_torus(self):
        self.assertEqual(betti_numbers(triangulation('torus'), field=Field(2)), {0: 1, 1: 2, 2: 1})

    def test_projective_plane_depends_on_field(self):
        rp2 = triangulation('projective-plane')
        self.assertEqual(betti_numbers(rp2, field=Field(2)), {0: 1, 1: 1, 2: 1})
        self.assertEqual(betti_numbers(rp2, field=Field(3)), {0: 1, 1: 0, 2: 0})
        self.assertEqual(betti_numbers(rp2, field=Field(0)), {0: 1, 1: 0, 2: 0})

    def test_boundary_squares_to_zero(self):
        rng = np.random.default_rng(settings.PCS_DEFAULT_SEED + 2)
        for field in (Field(2), Field(3)):
            for _ in range(20):
                cx = random_filtered_complex(rng)
                d = boundary_matrices(cx, field=field)
                for k in range(2, max(d) + 1):
                    self.assertTrue((d[k - 1] @ d[k]).is_zero())


class CochainTests(SimpleTestCase):

    def setUp(self):
        self.rng = np.random.default_rng(settings.PCS_DEFAULT_SEED + 3)

    def test_coboundary_squares_to_zero(self):
        for _ in range(20):
            cochains = CochainComplex(random_filtered_complex(self.rng), field=Field(3))
            for k in range(0, cochains.top_degree - 1):
                u = cochains.random_cochain(k, self.rng)
                self.assertEqual(clean(cochains.field, cochains.coboundary(cochains.coboundary(u))), {})

    def test_cup_leibniz_rule(self):
        for _ in range(20):
            cochains = CochainComplex(random_filtered_complex(self.rng), field=Field(3))
            field = cochains.field
            for p in range(0, 2):
                for q in range(0, 2):
                    u = cochains.random_cochain(p, self.rng)
                    v = cochains.random_cochain(q, self.rng)
                    lhs = cochains.coboundary(cochains.cup(u, v))
                    rhs = cochains.cup(cochains.coboundary(u), v)
                    axpy(field, rhs, cochains.cup(u, cochains.coboundary(v)), field.sign(p))
                    self.assertEqual(clean(field, lhs), clean(field, rhs))

    def test_cup_i_coboundary_formula(self):
        """d(u cup_i v) = du cup_i v + u cup_i dv + u cup_(i-1) v + v cup_(i-1) u over F2."""
        for _ in range(15):
            cochains = CochainComplex(random_filtered_complex(self.rng), field=Field(2))
            d = cochains.coboundary
            for p, q, i in [(1, 1, 1), (1, 2, 1), (2, 1, 1), (2, 2, 1), (2, 2, 2)]:
                u = cochains.random_cochain(p, self.rng)
                v = cochains.random_cochain(q, self.rng)
                lhs = d(cochains.cup_i(u, v, i))
                rhs = {}
                for term in (cochains.cup_i(d(u), v, i), cochains.cup_i(u, d(v), i),
                             cochains.cup_i(u, v, i - 1), cochains.cup_i(v, u, i - 1)):
                    axpy(cochains.field, rhs, term)
                self.assertEqual(clean(cochains.field, lhs), clean(cochains.field, rhs))

    def test_cup_i_needs_characteristic_two(self):
        cochains = CochainComplex(triangulation('filled-triangle'), field=Field(3))
        u = cochains.cochain({(0, 1): 1})
        with self.assertRaises(ValidationError) as ctx:
            cochains.cup_i(u, u, 1)
        self.assertEqual(ctx.exception.code, 'odd_characteristic')

    def test_unit_is_a_two_sided_identity(self):
        cochains = CochainComplex(triangulation('torus'), field=Field(2))
        u = cochains.random_cochain(1, self.rng)
        self.assertEqual(cochains.cup(cochains.unit(), u), u)
        self.assertEqual(cochains.cup(u, cochains.unit()), u)

    def test_mixed_degrees_are_rejected(self):
        cochains = CochainComplex(triangulation('filled-triangle'), field=Field(2))
        with self.assertRaises(ValidationError) as ctx:
            cochains.cochain_degree(cochains.cochain({(0,): 1, (0, 1): 1}))
        self.assertEqual(ctx.exception.code, 'degree_mismatch')

    def test_simplex_outside_stage(self):
        cochains = CochainComplex(triangulation('three-cycle'), field=Field(2))
        with self.assertRaises(ValidationError):
            cochains.cochain({(0, 1, 2): 1})
