import math
from functools import lru_cache

import numpy as np
from django.conf import settings
from django.core.exceptions import ValidationError
from django.test import SimpleTestCase, override_settings

from ainfty.algebras import heisenberg_model
from ainfty.persistent import persistent_ainfty
from ainfty.transfer import transfer_ainfty
from chains.cochains import betti_numbers, boundary_matrices
from chains.fields import Field
from complexes.clouds import Correspondence, PointCloud
from complexes.filtration import FilteredComplex
from complexes.samples import circle_cloud, jitter, random_filtered_complex, triangulation
from contraction.incremental import persistent_transfer_data

from .barcodes import Bar, barcode_svg, compute_barcode, parse_diagram
from .bottleneck import DIAGONAL, bottleneck, candidate_costs, d_grvect, diagonal_cost, matching_at, pair_cost
from .bounds import (
    A2AS, AINFTY, AS, GRVECT, P_DISTANCE, PINFTY_QINFTY, STRUCTURE_AINFTY, STRUCTURE_COMBINED,
    STRUCTURE_CUP, STRUCTURE_GRVECT, STRUCTURE_STEENROD, TWO_INFTY, DistanceBound,
    PersistenceModuleView, candidate_grid, combined_distances, d_grvect_bound,
    hierarchy_lower_bounds, structured_lower_bound, trivial_upper_bound,
)
from .ledger import build_ledger, ledger_from_complex, ledger_from_structure, op_arity, op_name, square_name
from .stability import stability_check
from .synthetic import borromean_vs_trivial, suspension_pair, synthetic_pair, torus_vs_wedge

F2 = Field(2)


def brute_force_bottleneck(xs, ys):
    """Minimum over all partial matchings of the worst matched or diagonal cost."""
    @lru_cache(maxsize=None)
    def search(i, free):
        if i == len(xs):
            return max((diagonal_cost(ys[j]) for j in free), default=0.0)
        best = max(diagonal_cost(xs[i]), search(i + 1, free))
        for j in free:
            cost = max(pair_cost(xs[i], ys[j]), search(i + 1, free - {j}))
            best = min(best, cost)
        return best

    return search(0, frozenset(range(len(ys))))


def random_diagram(rng, size):
    births = rng.integers(0, 8, size=size) / 4
    lengths = rng.integers(1, 8, size=size) / 4
    return [(float(b), float(b + l)) for b, l in zip(births, lengths)]


def upper_bound(lx, ly):
    return trivial_upper_bound(PersistenceModuleView.from_barcode(lx.barcode),
                               PersistenceModuleView.from_barcode(ly.barcode))


class BottleneckTests(SimpleTestCase):

    def test_single_bar_against_empty(self):
        self.assertEqual(bottleneck([(0.0, 2.0)], []), 1.0)
        self.assertEqual(matching_at([(0.0, 2.0)], [], 1.0), [(0, DIAGONAL)])
        self.assertIsNone(matching_at([(0.0, 2.0)], [], 0.5))

    def test_essential_bars(self):
        self.assertEqual(bottleneck([(0.0, 'inf')], [(0.25, math.inf)]), 0.25)
        self.assertEqual(bottleneck([(0.0, 'inf')], []), math.inf)
        self.assertEqual(pair_cost((0.0, math.inf), (0.0, 5.0)), math.inf)

    def test_against_brute_force(self):
        rng = np.random.default_rng(settings.PCS_DEFAULT_SEED + 50)
        for _ in range(500):
            xs = random_diagram(rng, int(rng.integers(0, 9)))
            ys = random_diagram(rng, int(rng.integers(0, 9)))
            self.assertAlmostEqual(bottleneck(xs, ys), brute_force_bottleneck(xs, ys))

    def test_candidate_costs(self):
        self.assertEqual(candidate_costs([(0.0, 1.0)], [(0.0, 2.0)]), [0.0, 0.5, 1.0])

    def test_graded_distance(self):
        bx = parse_diagram({'0': [[0, 'inf']], '1': [[0, 1]]})
        by = parse_diagram({'0': [[0, 'inf']], '1': [[0, 1.5]]})
        self.assertEqual(d_grvect(bx, by), 0.5)
        self.assertEqual(d_grvect_bound(bx, by).certificate['per_degree'], {'0': 0.0, '1': 0.5})


class BarcodeTests(SimpleTestCase):

    def test_single_vertex(self):
        barcode = compute_barcode(FilteredComplex.from_records([((0,), 0.0)]), F2)
        self.assertEqual(barcode.pairs(0), [(0.0, math.inf)])

    def test_two_points(self):
        cx = FilteredComplex.from_records([((0,), 0.0), ((1,), 0.0), ((0, 1), 1.0)])
        barcode = compute_barcode(cx, F2)
        self.assertEqual(barcode.pairs(0), [(0.0, 1.0), (0.0, math.inf)])
        self.assertEqual(barcode[0].death, math.inf)
        self.assertEqual(barcode[1].death, 1.0)

    def test_filled_circle(self):
        records = [((0,), 0.0), ((1,), 0.0), ((2,), 0.0), ((0, 1), 1.0), ((1, 2), 1.0),
                   ((0, 2), 2.0), ((0, 1, 2), 3.0)]
        barcode = compute_barcode(FilteredComplex.from_records(records), Field(3))
        self.assertEqual(barcode.pairs(1), [(2.0, 3.0)])
        self.assertEqual(barcode.betti(2.5), {0: 1, 1: 1})
        self.assertEqual(barcode.to_diagram(), {'0': [[0.0, 1.0], [0.0, 1.0], [0.0, 'inf']],
                                                '1': [[2.0, 3.0]], '2': []})

    def test_betti_numbers_agree(self):
        rng = np.random.default_rng(settings.PCS_DEFAULT_SEED + 51)
        for field in (F2, Field(3)):
            for _ in range(15):
                cx = random_filtered_complex(rng)
                barcode = compute_barcode(cx, field)
                for t in cx.critical_values:
                    expected = {k: v for k, v in betti_numbers(cx, t, field).items() if v}
                    self.assertEqual(barcode.betti(t), expected)

    def test_representatives_are_cycles(self):
        rng = np.random.default_rng(settings.PCS_DEFAULT_SEED + 52)
        for _ in range(10):
            cx = random_filtered_complex(rng)
            d = boundary_matrices(cx, field=Field(3))
            for bar in compute_barcode(cx, Field(3)):
                if bar.degree > 0:
                    self.assertEqual(d[bar.degree].apply(bar.representative), {})

    def test_projective_plane_depends_on_field(self):
        rp2 = triangulation('projective-plane')
        self.assertEqual(compute_barcode(rp2, F2).counts(), {0: 1, 1: 1, 2: 1})
        self.assertEqual(compute_barcode(rp2, Field(0)).counts(), {0: 1})

    def test_parse_diagram(self):
        barcode = parse_diagram('{"0": [[0, "inf"]], "1": [[0.5, 2]]}')
        self.assertEqual(barcode['1:0'].birth, 0.5)
        self.assertTrue(barcode['0:0'].is_essential)
        self.assertEqual(barcode.shifted(1.0).pairs(1), [(1.5, 3.0)])
        self.assertEqual(barcode.truncated(0).counts(), {0: 1})

    def test_bar_windows(self):
        bar = Bar('b', 1, 0.1, 0.9)
        self.assertTrue(bar.alive_on(0.1, 0.85))
        self.assertFalse(bar.alive_on(0.1, 0.9))
        self.assertFalse(bar.alive_at(0.9))

    def test_svg(self):
        barcode = parse_diagram({'0': [[0, 'inf']], '1': [[0.5, 2]]})
        svg = barcode_svg(barcode, title='example')
        self.assertTrue(svg.startswith('<svg'))
        self.assertIn('H1', svg)
        self.assertIn('<title>example</title>', svg)


class LedgerTests(SimpleTestCase):

    def test_names(self):
        self.assertEqual(op_name(2), 'cup')
        self.assertEqual(op_name(4), 'm4')
        self.assertEqual(square_name(1), 'sq1')
        self.assertEqual([op_arity(op) for op in ('cup', 'm3', 'sq2')], [2, 3, 1])

    def test_torus_cup_product(self):
        ledger = ledger_from_complex(triangulation('torus'), F2, max_arity=2)
        (top,) = ledger.barcode.in_degree(2)
        ones = [b.id for b in ledger.barcode.in_degree(1)]
        products = {inputs: values[0] for inputs, values in ledger.entries['cup'].items()}
        self.assertTrue(products)
        for inputs, value in products.items():
            self.assertTrue(set(inputs) <= set(ones))
            self.assertEqual(value, {top.id: 1})
        self.assertNotIn('sq1', ledger.ops())

    def test_projective_plane_square(self):
        ledger = ledger_from_complex(triangulation('projective-plane'), F2, max_arity=2)
        (x,) = ledger.barcode.in_degree(1)
        (top,) = ledger.barcode.in_degree(2)
        self.assertEqual(ledger.value('sq1', (x.id,), 0.0), {top.id: 1})
        self.assertEqual(ledger.value('cup', (x.id, x.id), 0.0), {top.id: 1})
        self.assertIn('"sq1"', ledger.to_json())

    def test_heisenberg_structure(self):
        structure = transfer_ainfty(heisenberg_model(F2).contract(), max_arity=3)
        ledger = ledger_from_structure(structure, (0.0, 1.0))
        self.assertEqual(ledger.times, [0.0, 1.0])
        self.assertEqual(ledger.value('m3', (('x',), ('x',), ('y',)), 0.5), {('x', 'z'): 1})
        self.assertEqual(ledger.value('m3', (('x',), ('x',), ('y',)), 1.0), {})
        # x times yz is the top class
        self.assertFalse(ledger.lower_products_vanish((('x',), ('x',), ('y',)), 0))
        self.assertTrue(ledger.lower_products_vanish((('x',), ('x',), ('y',)), 1))
        self.assertIsNone(ledger.snapshot_index(-1.0))

    def test_basis_mismatch(self):
        pa = persistent_ainfty(persistent_transfer_data(triangulation('torus'), F2), max_arity=2)
        two_points = compute_barcode(FilteredComplex.from_records([((0,), 0.0), ((1,), 0.0)]), F2)
        with self.assertRaises(ValidationError) as ctx:
            build_ledger(pa, two_points)
        self.assertEqual(ctx.exception.code, 'basis_mismatch')
        with self.assertRaises(ValidationError) as ctx:
            build_ledger(pa, compute_barcode(triangulation('torus'), Field(3)))
        self.assertEqual(ctx.exception.code, 'field_mismatch')


class SyntheticPairTests(SimpleTestCase):

    def test_torus_against_wedge(self):
        lx, ly = torus_vs_wedge(alpha=0.1, field=F2)
        self.assertAlmostEqual(structured_lower_bound(lx, ly, STRUCTURE_GRVECT).value, 0.05)
        cup = structured_lower_bound(lx, ly, STRUCTURE_CUP)
        self.assertAlmostEqual(cup.value, 0.4)
        self.assertFalse(cup.inconclusive)
        self.assertTrue(cup.certificate['rejected'])
        reasons = [r['constraint'] for r in cup.certificate['rejected']]
        self.assertEqual(reasons[0], 'no epsilon-matching of the barcodes')
        self.assertIn('cup', [r['op'] for r in reasons if isinstance(r, dict)])
        self.assertAlmostEqual(upper_bound(lx, ly).value, 0.4)

    def test_borromean_against_trivial_link(self):
        lx, ly = borromean_vs_trivial(ell=0.5, alpha=0.05, field=F2)
        cup = structured_lower_bound(lx, ly, STRUCTURE_CUP)
        self.assertLessEqual(cup.value, 0.1)
        self.assertAlmostEqual(structured_lower_bound(lx, ly, STRUCTURE_AINFTY, cup.value).value, 0.225)
        self.assertAlmostEqual(upper_bound(lx, ly).value, 0.225)

    def test_suspension_against_wedge(self):
        lx, ly = suspension_pair('wedge', F2)
        self.assertEqual(structured_lower_bound(lx, ly, STRUCTURE_CUP).value, 0.0)
        self.assertEqual(structured_lower_bound(lx, ly, STRUCTURE_STEENROD).value, 0.5)

    def test_suspension_against_a_point(self):
        lx, ly = suspension_pair('ball', F2)
        self.assertEqual(structured_lower_bound(lx, ly, STRUCTURE_GRVECT).value, 0.5)
        lx, ly = suspension_pair('ball', Field(0))
        self.assertEqual(structured_lower_bound(lx, ly, STRUCTURE_GRVECT).value, 0.0)

    def test_unknown_pair(self):
        with self.assertRaises(ValidationError) as ctx:
            synthetic_pair('klein-bottle', F2)
        self.assertEqual(ctx.exception.code, 'parse')


class BoundTests(SimpleTestCase):

    def test_candidate_grid(self):
        barcode = parse_diagram({'0': [[0, 'inf']], '1': [[0, 1]]})
        self.assertEqual(candidate_grid(barcode), [0.0, 0.5, 1.0])

    def test_hierarchy_is_monotone(self):
        for lx, ly in (torus_vs_wedge(field=F2), borromean_vs_trivial(field=F2)):
            bounds = hierarchy_lower_bounds(lx, ly)
            self.assertEqual(set(bounds), {GRVECT, AS, AINFTY, A2AS, TWO_INFTY})
            self.assertLessEqual(bounds[GRVECT].value, bounds[AS].value)
            self.assertLessEqual(bounds[AS].value, bounds[AINFTY].value)
            self.assertLessEqual(bounds[AS].value, bounds[A2AS].value)
            self.assertLessEqual(bounds[AINFTY].value, bounds[TWO_INFTY].value)
            self.assertLessEqual(bounds[TWO_INFTY].value, upper_bound(lx, ly).value + 1e-9)

    def test_unfloored_bounds_are_ordered(self):
        lx, ly = torus_vs_wedge(alpha=0.1, field=F2)
        grvect = structured_lower_bound(lx, ly, STRUCTURE_GRVECT).value
        cup = structured_lower_bound(lx, ly, STRUCTURE_CUP).value
        self.assertAlmostEqual(grvect, 0.05)
        self.assertLessEqual(grvect, cup)
        self.assertAlmostEqual(cup, 0.4)
        lx, ly = borromean_vs_trivial(ell=0.5, alpha=0.05, field=F2)
        grvect = structured_lower_bound(lx, ly, STRUCTURE_GRVECT).value
        cup = structured_lower_bound(lx, ly, STRUCTURE_CUP).value
        ainfty = structured_lower_bound(lx, ly, STRUCTURE_AINFTY).value
        self.assertLessEqual(grvect, cup)
        self.assertAlmostEqual(cup, 0.025)
        self.assertAlmostEqual(ainfty, 0.225)

    def test_odd_characteristic_hierarchy(self):
        lx, ly = torus_vs_wedge(field=Field(3))
        self.assertNotIn(A2AS, hierarchy_lower_bounds(lx, ly))
        with self.assertRaises(ValidationError) as ctx:
            structured_lower_bound(lx, ly, STRUCTURE_STEENROD)
        self.assertEqual(ctx.exception.messages, ['unsupported: odd-p Steenrod action'])

    def test_field_and_structure_checks(self):
        lx, _ = torus_vs_wedge(field=F2)
        _, ly = torus_vs_wedge(field=Field(3))
        with self.assertRaises(ValidationError) as ctx:
            structured_lower_bound(lx, ly)
        self.assertEqual(ctx.exception.code, 'field_mismatch')
        with self.assertRaises(ValidationError) as ctx:
            structured_lower_bound(lx, lx, 'octonionic')
        self.assertEqual(ctx.exception.code, 'unsupported')

    def test_identical_inputs(self):
        lx, _ = torus_vs_wedge(field=F2)
        self.assertEqual(structured_lower_bound(lx, lx, STRUCTURE_COMBINED).value, 0.0)

    @override_settings(PCS_SEARCH_NODE_BUDGET=1)
    def test_node_budget(self):
        lx, ly = torus_vs_wedge(field=F2)
        bound = structured_lower_bound(lx, ly, STRUCTURE_CUP)
        self.assertTrue(bound.inconclusive)
        self.assertEqual(bound.certificate['reason'], 'node budget exceeded')

    def test_combined_distances(self):
        bounds = {
            2: {TWO_INFTY: DistanceBound('lower', TWO_INFTY, 0.5)},
            3: {TWO_INFTY: DistanceBound('lower', TWO_INFTY, 0.25)},
            5: {TWO_INFTY: DistanceBound('lower', TWO_INFTY, 0.75)},
        }
        combined = combined_distances(bounds)
        self.assertEqual(combined[PINFTY_QINFTY].value, 0.5)
        self.assertEqual(combined[P_DISTANCE].value, 0.75)
        self.assertTrue(combined[P_DISTANCE].certificate['under_approximation'])
        with self.assertRaises(ValidationError) as ctx:
            combined_distances({})
        self.assertEqual(ctx.exception.code, 'empty_prime_set')

    def test_combined_upper_bounds(self):
        lower = {p: {TWO_INFTY: DistanceBound('lower', TWO_INFTY, v)} for p, v in ((2, 0.5), (3, 0.25))}
        upper = {2: DistanceBound('upper', TWO_INFTY, 0.5), 3: DistanceBound('upper', TWO_INFTY, math.inf)}
        combined = combined_distances(lower, upper)
        self.assertEqual(combined[f'{P_DISTANCE}_upper'].kind, 'upper')
        self.assertEqual(combined[f'{P_DISTANCE}_upper'].value, math.inf)
        self.assertEqual(combined[f'{PINFTY_QINFTY}_upper'].certificate['per_prime'], {'2': 0.5, '3': 'inf'})
        self.assertEqual(combined[PINFTY_QINFTY].kind, 'lower')
        with self.assertRaises(ValidationError):
            combined_distances(lower, {2: upper[2]})

    def test_suspension_against_a_point_across_primes(self):
        lower, upper = {}, {}
        for p in (0, 2):
            lx, ly = suspension_pair('ball', Field(p))
            lower[p] = {TWO_INFTY: structured_lower_bound(lx, ly, STRUCTURE_COMBINED)}
            upper[p] = upper_bound(lx, ly)
        combined = combined_distances(lower, upper)
        self.assertEqual(combined[P_DISTANCE].value, 0.5)
        self.assertEqual(combined[PINFTY_QINFTY].value, 0.5)
        self.assertEqual(combined[P_DISTANCE].certificate['per_prime'], {'0': 0.0, '2': 0.5})
        self.assertEqual(combined[f'{P_DISTANCE}_upper'].value, 0.5)

    def test_bound_serialization(self):
        bound = DistanceBound('lower', GRVECT, math.inf)
        self.assertEqual(bound.as_dict()['value'], 'inf')
        self.assertIn('"inconclusive": false', bound.to_json())


class ModuleViewTests(SimpleTestCase):

    def test_shift_is_functorial_for_barcodes(self):
        module = PersistenceModuleView.from_barcode(parse_diagram({'1': [[0, 1], [0.5, 2]], '0': [[0, 'inf']]}))
        for epsilon, delta, t in [(0.25, 0.25, 0.0), (0.5, 0.1, 0.4), (1.0, 1.0, 0.0)]:
            self.assertTrue(module.shift_is_functorial(epsilon, delta, t))
        self.assertTrue(module.span_is_zero(2.0))
        self.assertFalse(module.span_is_zero(0.5))

    def test_shift_is_functorial_for_cohomology(self):
        rng = np.random.default_rng(settings.PCS_DEFAULT_SEED + 53)
        cx = random_filtered_complex(rng, max_simplices=25)
        module = PersistenceModuleView.from_persistent(
            persistent_ainfty(persistent_transfer_data(cx, F2), max_arity=2))
        for t in cx.critical_values:
            self.assertTrue(module.shift_is_functorial(0.5, 0.5, t))

    def test_structure_maps_run_forward(self):
        module = PersistenceModuleView.from_barcode(parse_diagram({'0': [[0, 'inf']]}))
        with self.assertRaises(ValidationError):
            module.structure_map(1.0, 0.0)

    def test_upper_bound_needs_barcodes(self):
        pa = persistent_ainfty(persistent_transfer_data(triangulation('torus'), F2), max_arity=2)
        module = PersistenceModuleView.from_persistent(pa)
        with self.assertRaises(ValidationError):
            trivial_upper_bound(module, module)


class StabilityTests(SimpleTestCase):

    def test_jittered_circle(self):
        rng = np.random.default_rng(settings.PCS_DEFAULT_SEED + 54)
        for eta in (0.05, 0.2):
            x = circle_cloud(6)
            report = stability_check(x, jitter(x, eta, rng), max_dim=2, field=F2)
            self.assertTrue(report.passed, report.to_json())
            self.assertLessEqual(report.distortion, 2 * eta + 1e-12)

    def test_randomized_jitter_trials(self):
        rng = np.random.default_rng(settings.PCS_DEFAULT_SEED + 56)
        for trial in range(200):
            n = int(rng.integers(3, 7))
            x = jitter(circle_cloud(n), 0.1, rng) if trial % 2 else PointCloud(rng.random((n, 2)))
            eta = float(rng.uniform(0.0, 0.1)) or 0.1
            max_dim = int(rng.integers(1, 4))
            field = F2 if trial % 3 else Field(3)
            report = stability_check(x, jitter(x, eta, rng), max_dim=max_dim, field=field)
            self.assertTrue(report.passed, f'trial {trial}: {report.to_json()}')

    def test_reordered_correspondence(self):
        rng = np.random.default_rng(settings.PCS_DEFAULT_SEED + 55)
        x = PointCloud(rng.random((5, 2)))
        y = x.translated([1.0, 1.0])
        corr = Correspondence([(k, (k + 1) % 5) for k in range(5)])
        report = stability_check(x, y, corr, max_dim=1, field=F2)
        self.assertTrue(report.passed)
        self.assertGreater(report.distortion, 0.0)

    def test_correspondence_must_cover_both_clouds(self):
        x = circle_cloud(4)
        with self.assertRaises(ValidationError):
            stability_check(x, circle_cloud(5), max_dim=1, field=F2)
