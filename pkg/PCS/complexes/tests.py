import math
import tempfile
from pathlib import Path

import numpy as np
from django.conf import settings
from django.core.exceptions import ValidationError
from django.test import SimpleTestCase

from .builders import build_cech, build_rips, minimum_enclosing_ball
from .clouds import Correspondence, Metric, PointCloud, distortion, gromov_hausdorff_upper_bound, load_point_cloud
from .filtration import FilteredComplex, Simplex, closure, validate_ffdata
from .io import export_filtration, import_filtration, read_filtration_records
from .samples import circle_cloud, jitter, random_filtered_complex, triangulation


class FilteredComplexTests(SimpleTestCase):

    def test_default_order(self):
        cx = FilteredComplex.from_records([((0, 1), 1.0), ((1,), 0.0), ((0,), 0.0)])
        self.assertEqual([s.vertices for s in cx], [(0,), (1,), (0, 1)])
        self.assertEqual(cx.critical_values, [0.0, 1.0])
        self.assertEqual(len(cx.stage(0.5)), 2)

    def test_snapshot_times_lie_between_critical_values(self):
        cx = FilteredComplex.from_records([((0,), 0.0), ((1,), 0.0), ((0, 1), 2.0)])
        self.assertEqual(cx.snapshot_times(), [1.0, 4.0])

    def test_faces(self):
        s = Simplex(0, (0, 1, 2), 0.0)
        self.assertEqual(s.faces(), [(1, 2), (0, 2), (0, 1)])
        self.assertEqual(Simplex(0, (4,), 0.0).faces(), [])

    def test_scaled(self):
        cx = triangulation('three-cycle').scaled(3.0)
        self.assertTrue(all(s.value == 0.0 for s in cx))
        cx = FilteredComplex.from_records([((0,), 1.0)]).scaled(0.5)
        self.assertEqual(cx.simplices[0].value, 0.5)

    def test_euler_characteristic(self):
        self.assertEqual(triangulation('torus').euler_characteristic(), 0)
        self.assertEqual(triangulation('projective-plane').euler_characteristic(), 1)
        self.assertEqual(triangulation('octahedron').euler_characteristic(), 2)

    def test_random_complexes_are_valid(self):
        rng = np.random.default_rng(settings.PCS_DEFAULT_SEED + 10)
        for _ in range(30):
            self.assertTrue(validate_ffdata(random_filtered_complex(rng)).is_valid)


class ValidationTests(SimpleTestCase):

    def records(self, rows):
        return FilteredComplex.from_records(rows, keep_order=True)

    def test_missing_face(self):
        report = validate_ffdata(self.records([((0,), 0.0), ((0, 1), 1.0)]))
        self.assertEqual(report.conditions(), [2])
        self.assertEqual(report.violations[0].code, 'missing_face')

    def test_face_enters_late(self):
        report = validate_ffdata(self.records([((0,), 0.0), ((1,), 2.0), ((0, 1), 1.0)]))
        self.assertIn('monotonicity', [v.code for v in report.violations])
        self.assertIn(2, report.conditions())

    def test_duplicate_simplex(self):
        report = validate_ffdata(self.records([((0,), 0.0), ((0,), 0.0)]))
        self.assertEqual(report.violations[0].code, 'duplicate_simplex')

    def test_non_finite_value(self):
        report = validate_ffdata(self.records([((0,), math.inf)]))
        self.assertEqual(report.conditions(), [3])

    def test_order_does_not_refine_faces(self):
        report = validate_ffdata(self.records([((0,), 0.0), ((0, 1), 0.0), ((1,), 0.0)]))
        self.assertIn(4, report.conditions())

    def test_dimension_cap(self):
        cx = FilteredComplex.from_records(((s, 0.0) for s in closure([(0, 1, 2)])), dimension_cap=1)
        report = validate_ffdata(cx)
        self.assertEqual([v.code for v in report.violations], ['dimension_cap'])

    def test_raise_first(self):
        report = validate_ffdata(self.records([((0, 1), 0.0)]))
        with self.assertRaises(ValidationError) as ctx:
            report.raise_first()
        self.assertEqual(ctx.exception.code, 'missing_face')


class CloudTests(SimpleTestCase):

    def test_empty_cloud(self):
        with self.assertRaises(ValidationError) as ctx:
            PointCloud([])
        self.assertEqual(ctx.exception.code, 'empty_input')

    def test_ragged_points(self):
        with self.assertRaises(ValidationError) as ctx:
            PointCloud([[0.0, 1.0], [2.0]])
        self.assertEqual(ctx.exception.code, 'dimension_mismatch')

    def test_explicit_metric_must_be_symmetric(self):
        with self.assertRaises(ValidationError) as ctx:
            Metric(Metric.EXPLICIT, [[0, 1], [2, 0]])
        self.assertEqual(ctx.exception.code, 'asymmetric_matrix')

    def test_chebyshev(self):
        cloud = PointCloud([[0.0, 0.0], [1.0, 3.0]])
        self.assertEqual(Metric(Metric.CHEBYSHEV).distance_matrix(cloud)[0, 1], 3.0)

    def test_distortion_of_a_translate_is_zero(self):
        cloud = circle_cloud(8)
        corr = Correspondence.identity(8)
        self.assertAlmostEqual(distortion(corr, cloud, cloud.translated([5.0, -1.0])), 0.0)

    def test_distortion_of_jitter_is_bounded(self):
        rng = np.random.default_rng(settings.PCS_DEFAULT_SEED + 11)
        cloud = circle_cloud(10)
        moved = jitter(cloud, 0.05, rng)
        value = distortion(Correspondence.identity(10), cloud, moved)
        self.assertLessEqual(value, 0.1 + 1e-12)
        self.assertAlmostEqual(gromov_hausdorff_upper_bound(Correspondence.identity(10), cloud, moved),
                               value / 2)

    def test_correspondence_must_be_surjective(self):
        with self.assertRaises(ValidationError) as ctx:
            distortion(Correspondence([(0, 0)]), PointCloud([[0.0], [1.0]]), PointCloud([[0.0]]))
        self.assertEqual(ctx.exception.code, 'not_surjective')
        self.assertEqual(Correspondence([(0, 1)]).transpose(), Correspondence([(1, 0)]))

    def test_load_point_cloud(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'pts.csv'
            path.write_text('# two points\n0,0\n1,0\n')
            self.assertEqual(len(load_point_cloud(path)), 2)
            path.write_text('0,0\n1,x\n')
            with self.assertRaises(ValidationError) as ctx:
                load_point_cloud(path)
            self.assertEqual(ctx.exception.code, 'parse')
            path.write_text('')
            with self.assertRaises(ValidationError) as ctx:
                load_point_cloud(path)
            self.assertEqual(ctx.exception.code, 'empty_input')


class BuilderTests(SimpleTestCase):

    def test_rips_of_two_points(self):
        cx = build_rips(PointCloud([[0.0], [1.0]]), max_dim=1)
        self.assertEqual([(s.vertices, s.value) for s in cx], [((0,), 0.0), ((1,), 0.0), ((0, 1), 1.0)])

    def test_rips_scale_cutoff(self):
        cx = build_rips(PointCloud([[0.0], [1.0], [3.0]]), max_dim=2, max_scale=1.5)
        self.assertEqual([s.vertices for s in cx.simplices_of_dimension(1)], [(0, 1)])

    def test_rips_truncation_flag(self):
        square = PointCloud([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
        cx = build_rips(square, max_dim=1)
        self.assertTrue(cx.truncated)
        self.assertEqual(cx.reliable_degree, 0)
        self.assertFalse(build_rips(square, max_dim=3).truncated)

    def test_rips_values_are_diameters(self):
        rng = np.random.default_rng(settings.PCS_DEFAULT_SEED + 12)
        cloud = PointCloud(rng.random((7, 2)))
        d = Metric().distance_matrix(cloud)
        for s in build_rips(cloud, max_dim=2):
            if s.dimension:
                self.assertEqual(s.value, d[np.ix_(s.vertices, s.vertices)].max())

    def test_negative_parameters(self):
        with self.assertRaises(ValidationError):
            build_rips(PointCloud([[0.0]]), max_dim=-1)

    def test_minimum_enclosing_ball(self):
        center, radius = minimum_enclosing_ball([[0.0, 0.0], [2.0, 0.0], [1.0, 0.1]])
        self.assertAlmostEqual(radius, 1.0)
        np.testing.assert_allclose(center, [1.0, 0.0], atol=1e-9)
        _, radius = minimum_enclosing_ball([[0.0, 0.0], [2.0, 0.0], [1.0, math.sqrt(3)]])
        self.assertAlmostEqual(radius, 2 / math.sqrt(3))

    def test_cech_of_equilateral_triangle(self):
        cloud = PointCloud([[0.0, 0.0], [2.0, 0.0], [1.0, math.sqrt(3)]])
        cx = build_cech(cloud, max_dim=2)
        self.assertEqual([s.value for s in cx.simplices_of_dimension(1)], [1.0, 1.0, 1.0])
        self.assertAlmostEqual(cx.simplices_of_dimension(2)[0].value, 2 / math.sqrt(3))

    def test_cech_is_below_rips(self):
        rng = np.random.default_rng(settings.PCS_DEFAULT_SEED + 13)
        cloud = PointCloud(rng.random((6, 2)))
        rips = build_rips(cloud, max_dim=2)
        for s in build_cech(cloud, max_dim=2):
            self.assertLessEqual(s.value, rips.get(s.vertices).value + 1e-12)
            self.assertGreaterEqual(s.value, rips.get(s.vertices).value / 2 - 1e-12)

    def test_cech_needs_euclidean_metric(self):
        with self.assertRaises(ValidationError) as ctx:
            build_cech(PointCloud([[0.0]]), metric=Metric(Metric.CHEBYSHEV))
        self.assertEqual(ctx.exception.code, 'non_euclidean')


class FiltrationFileTests(SimpleTestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def test_export_then_import(self):
        rng = np.random.default_rng(settings.PCS_DEFAULT_SEED + 14)
        cx = random_filtered_complex(rng)
        for name in ('cx.txt', 'cx.json'):
            self.assertEqual(import_filtration(export_filtration(cx, self.dir / name)), cx)

    def test_missing_face_reports_line(self):
        path = self.dir / 'bad.txt'
        path.write_text('0 ; 0\n\n0 1 ; 1\n')
        with self.assertRaises(ValidationError) as ctx:
            import_filtration(path)
        self.assertEqual(ctx.exception.code, 'missing_face')
        self.assertIn('line 3', ctx.exception.message)

    def test_parse_errors(self):
        path = self.dir / 'bad.txt'
        for text in ('0 1 2\n', '0 ; abc\n', ' ; 1\n'):
            path.write_text(text)
            with self.assertRaises(ValidationError) as ctx:
                read_filtration_records(path)
            self.assertEqual(ctx.exception.code, 'parse')

    def test_empty_file(self):
        path = self.dir / 'empty.txt'
        path.write_text('\n')
        with self.assertRaises(ValidationError) as ctx:
            import_filtration(path)
        self.assertEqual(ctx.exception.code, 'empty_input')

    def test_dimension_cap_header(self):
        path = self.dir / 'capped.txt'
        path.write_text('# dimension_cap 1\n0 ; 0\n1 ; 0\n0 1 ; 0.5\n')
        records, cap = read_filtration_records(path)
        self.assertEqual(cap, 1)
        self.assertEqual([r[2] for r in records], [2, 3, 4])
