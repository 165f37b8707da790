import numpy as np
from django.conf import settings
from django.core.exceptions import ValidationError
from django.test import SimpleTestCase

from chains.cochains import betti_numbers
from chains.fields import Field
from complexes.filtration import FilteredComplex
from complexes.samples import random_filtered_complex, triangulation

from .based import BasedComplex
from .incremental import (
    IncrementalContractor, check_all_identities, incremental_contraction, persistent_transfer_data,
)


def two_points():
    return FilteredComplex.from_records([((0,), 0.0), ((1,), 0.0), ((0, 1), 1.0)])


class BasedComplexTests(SimpleTestCase):

    def test_differential_must_reach_earlier_cells(self):
        with self.assertRaises(ValidationError) as ctx:
            BasedComplex(Field(2), ['x', 'y'], {'x': 0, 'y': 1}, {'x': {'y': 1}})
        self.assertEqual(ctx.exception.code, 'monotonicity')

    def test_repeated_cells(self):
        with self.assertRaises(ValidationError):
            BasedComplex(Field(2), ['x', 'x'], {'x': 0})

    def test_prefix(self):
        complex = BasedComplex.from_filtered_complex(two_points(), Field(3))
        self.assertEqual(len(complex), 3)
        self.assertEqual(complex.prefix(2).cells, (0, 1))
        self.assertEqual(complex.d(2), {1: 1, 0: 2})


class ContractionTests(SimpleTestCase):

    def test_two_points(self):
        contraction = incremental_contraction(BasedComplex.from_filtered_complex(two_points(), Field(2)))
        self.assertEqual(contraction.critical, (1,))
        self.assertEqual(contraction.ranks(), {0: 1})
        self.assertEqual(contraction.check_identities(), [])

    def test_degree_raising_model(self):
        complex = BasedComplex(Field(3), ['x', 'y', 'z'], {'x': 1, 'y': 1, 'z': 2}, {'z': {'x': 1}})
        contraction = incremental_contraction(complex)
        self.assertEqual(contraction.critical, ('y',))
        self.assertEqual(contraction.check_identities(), [])

    def test_triangulations(self):
        for name, field, ranks in [
            ('torus', Field(2), {0: 1, 1: 2, 2: 1}),
            ('projective-plane', Field(2), {0: 1, 1: 1, 2: 1}),
            ('projective-plane', Field(3), {0: 1}),
            ('octahedron', Field(0), {0: 1, 2: 1}),
        ]:
            with self.subTest(name=name, field=field):
                complex = BasedComplex.from_filtered_complex(triangulation(name), field)
                contraction = incremental_contraction(complex)
                self.assertEqual(contraction.ranks(), ranks)
                self.assertEqual(contraction.check_identities(), [])
                self.assertEqual(contraction.dualize().check_identities(), [])

    def test_dualizing_twice(self):
        contraction = incremental_contraction(
            BasedComplex.from_filtered_complex(triangulation('torus'), Field(3)))
        twice = contraction.dualize().dualize()
        self.assertFalse(twice.dual)
        self.assertEqual(twice.i, contraction.i)
        self.assertEqual(twice.p, contraction.p)
        self.assertEqual(twice.h, contraction.h)

    def test_representatives_are_cycles(self):
        contraction = incremental_contraction(
            BasedComplex.from_filtered_complex(triangulation('projective-plane'), Field(2)))
        d = contraction.d
        for label in contraction.basis():
            self.assertEqual(d.apply(contraction.representative(label)), {})


class PersistentTransferDataTests(SimpleTestCase):

    def setUp(self):
        self.rng = np.random.default_rng(settings.PCS_DEFAULT_SEED + 20)

    def test_identities_on_random_filtrations(self):
        for field in (Field(2), Field(3), Field(0)):
            for _ in range(200):
                cx = random_filtered_complex(self.rng)
                ptd = persistent_transfer_data(cx, field)
                self.assertEqual(check_all_identities(ptd), {})
                self.assertEqual(check_all_identities(ptd.dualize()), {})
                for t, stage in zip(ptd.times, ptd.stages):
                    betti = {k: v for k, v in betti_numbers(cx, t, field).items() if v}
                    self.assertEqual(stage.ranks(), betti)

    def test_surviving_classes_keep_their_representative(self):
        for _ in range(200):
            ptd = persistent_transfer_data(random_filtered_complex(self.rng), Field(3))
            for before, after in zip(ptd.stages, ptd.stages[1:]):
                for label in set(before.critical) & set(after.critical):
                    self.assertEqual(after.i.column(label), before.i.column(label))

    def test_stage_lookup(self):
        ptd = persistent_transfer_data(two_points(), Field(2))
        self.assertEqual(ptd.times, [0.0, 1.0])
        self.assertIsNone(ptd.stage_at(-1.0))
        self.assertEqual(ptd.stage_index(0.5), 0)
        self.assertIs(ptd.stage_at(7.0), ptd.stages[1])

    def test_two_points_induced_map(self):
        ptd = persistent_transfer_data(two_points(), Field(2))
        self.assertEqual(ptd.induced_map(0).to_dense(), [[1, 1]])
        cochains = ptd.dualize()
        self.assertEqual(cochains.induced_map(0).to_dense(), [[1], [1]])

    def test_two_points_have_no_persistent_inclusion(self):
        ptd = persistent_transfer_data(two_points(), Field(2))
        self.assertFalse(ptd.structure_map_defect(0).is_zero())

    def test_invalid_filtration(self):
        cx = FilteredComplex.from_records([((0, 1), 0.0)])
        with self.assertRaises(ValidationError) as ctx:
            persistent_transfer_data(cx, Field(2))
        self.assertEqual(ctx.exception.code, 'missing_face')

    def test_contractor_reports_deaths(self):
        contractor = IncrementalContractor(BasedComplex.from_filtered_complex(two_points(), Field(2)))
        self.assertEqual(contractor.step(), (0, None))
        self.assertEqual(contractor.step(), (1, None))
        self.assertEqual(contractor.step(), (2, 0))
